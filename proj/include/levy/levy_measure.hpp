#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levy/types.hpp"

namespace levy {

/// Point mass of the jump measure.
struct Atom {
  Vec location;
  double mass = 0.0;
};

/// Node of an angular product rule on the unit sphere S^{d-1}.
struct Direction {
  Vec unit;
  double weight = 0.0;
};

/// Product rule on S^{d-1}: d=1 gives {+1,-1}; d=2 `order` equispaced angles;
/// d=3 Gauss-Legendre(order/2) in cos(theta) times `order` azimuths.
/// Weights sum to the surface area of the sphere.
std::vector<Direction> angular_rule(int dim, int order);

/// Surface area of S^{d-1} (2, 2 pi, 4 pi for d = 1, 2, 3).
double sphere_area(int dim);

/// Descriptor of the jump measure nu on R^d \ {0}. Three representations:
/// a density n(y) with known small-jump singularity order s (n ~ |y|^{-d-s}
/// near 0), a radial profile g(|y|) with the same metadata, or a finite list
/// of atoms. Construction checks that int min(1,|y|^2) nu(dy) is finite.
class LevyMeasure {
 public:
  enum class Kind { density, radial, atoms };
  using DensityFn = std::function<double(const Vec&)>;
  using RadialFn = std::function<double(double)>;

  static LevyMeasure zero(int dim);
  static LevyMeasure from_atoms(int dim, std::vector<Atom> atoms);
  static LevyMeasure from_density(int dim, DensityFn density,
                                  double singularity_order, bool symmetric,
                                  std::optional<double> support_radius = {});
  static LevyMeasure from_radial(int dim, RadialFn profile,
                                 double singularity_order,
                                 std::optional<double> support_radius = {});

  /// The measure c * nu.
  LevyMeasure scaled(double c) const;

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double singularity_order() const { return singularity_order_; }
  std::optional<double> support_radius() const { return support_radius_; }
  bool symmetric() const { return symmetric_; }
  bool is_zero() const { return kind_ == Kind::atoms && atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  /// n(y) for density measures, g(|y|) for radial ones, 0 for atoms.
  double density_at(const Vec& y) const;
  /// g(r) for radial measures.
  double profile_at(double r) const;
  /// r^{d-1} n(r u) along the unit direction u (density or radial kind).
  double ray_weight(const Vec& unit, double r) const;
  /// r^{d-1} g(r), the radial weight of a radial measure.
  double radial_weight(double r) const;

 private:
  LevyMeasure() = default;
  void validate() const;

  Kind kind_ = Kind::atoms;
  int dim_ = 1;
  double singularity_order_ = 0.0;
  std::optional<double> support_radius_;
  bool symmetric_ = true;
  double scale_ = 1.0;
  std::vector<Atom> atoms_;
  std::shared_ptr<const DensityFn> density_;
  std::shared_ptr<const RadialFn> profile_;
};

/// Tolerances for jump-measure quadrature.
struct JumpQuadrature {
  /// Bound on the estimated small-jump truncation remainder.
  double inner_tol = 1e-9;
  /// Convergence tolerance of the accelerated oscillatory tail.
  double tail_tol = 1e-11;
  int gauss_order = 16;
  int max_inner_shells = 4000;
  int max_tail_panels = 20000;
  /// Angular product-rule order for non-radial densities in d >= 2.
  int angular_order = 16;
};

/// int (1 - e^{i y.xi} + i y.xi 1_{(0,1)}(|y|)) nu(dy), the jump part of the
/// characteristic exponent. Exactly 0 at xi = 0.
/// Throws QuadratureDivergence when an integral fails its convergence test.
Complex jump_exponent(const LevyMeasure& nu, const Vec& xi,
                      const JumpQuadrature& q = {});

/// Moment report for int_{|y|>=1} |y|^beta nu(dy).
struct MomentReport {
  double beta = 0.0;
  double value = 0.0;
  bool finite = true;
  int shells = 0;
};

/// Dyadic-shell quadrature over {|y| >= 1}; +inf when 8 consecutive shells
/// fail the ratio-decay test (ratio < 0.95).
MomentReport levy_measure_moment(const LevyMeasure& nu, double beta);

/// int_{0<|y|<R} |y|^p nu(dy) for p > s (small-jump moment).
double small_jump_moment(const LevyMeasure& nu, double p, double radius = 1.0,
                         const JumpQuadrature& q = {});

/// nu({|y| >= R}) for R > 0. Throws QuadratureDivergence if infinite.
double mass_beyond(const LevyMeasure& nu, double radius);

/// Radial integral helper: int_a^b m(r) dr on dyadic shells toward 0,
/// with geometric extrapolation of the remainder below the last shell.
/// `ratio` is the predicted shell ratio 2^{-(p - s)}.
Complex sum_inner_shells(const std::function<Complex(double, double)>& shell,
                         double upper, double ratio, double tol,
                         int max_shells, double asymptotic_below = 1.0);

}  // namespace levy
