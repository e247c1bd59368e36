#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levy/grid.hpp"
#include "levy/levy_measure.hpp"
#include "levy/types.hpp"

namespace levy {

/// Lévy triplet (b, Q, nu) with the cutoff 1_{(0,1)}(|y|).
struct LevyTriplet {
  Vec b;
  Mat Q;
  LevyMeasure nu;

  /// Checks dimensions, symmetry of Q and eigenvalues >= -1e-12.
  LevyTriplet(Vec b, Mat Q, LevyMeasure nu);

  int dimension() const { return static_cast<int>(b.size()); }
};

/// Subordinator S_t with Laplace exponent phi, E e^{-lambda S_t} = e^{-t phi(lambda)}.
struct Subordinator {
  enum class Kind { deterministic, stable, inverse_gaussian, gamma };
  Kind kind = Kind::deterministic;
  /// deterministic: phi = c lambda.
  double c = 1.0;
  /// stable: phi = (2 lambda)^kappa, kappa in (0,1), so psi = |xi|^{2 kappa}.
  double kappa = 0.5;
  /// inverse Gaussian: phi = sqrt(2 lambda + m^2) - m.
  double m = 1.0;
  /// gamma: phi = a log(1 + lambda / b).
  double a = 1.0;
  double b = 1.0;

  static Subordinator deterministic(double c = 1.0);
  static Subordinator stable(double kappa);
  static Subordinator inverse_gaussian(double m);
  static Subordinator gamma(double a, double b);

  double laplace_exponent(double lambda) const;
  std::string name() const;
};

/// Jump law of a compound Poisson process: finite atoms or a centered
/// isotropic Gaussian with intensity `rate` and per-axis scale `sigma`.
struct JumpLaw {
  enum class Kind { atoms, gaussian };
  Kind kind = Kind::atoms;
  std::vector<Atom> atoms;
  double rate = 1.0;
  double sigma = 1.0;

  static JumpLaw from_atoms(std::vector<Atom> atoms);
  static JumpLaw gaussian(double rate, double sigma);
};

enum class Family {
  brownian,
  isotropic_stable,
  relativistic,
  tempered_stable,
  compound_poisson,
  subordinated_bm,
  custom
};

std::string to_string(Family f);

/// A continuous negative definite function psi, either a closed-form family
/// or a custom triplet. Convention:
///   psi(xi) = -i b.xi + xi.Q xi / 2 + int (1 - e^{i y.xi} + i y.xi 1_{(0,1)}(|y|)) nu(dy),
/// so that E e^{i xi.X_t} = e^{-t psi(xi)}, E X_t = t b for integrable
/// jumps and A = -psi(D) acts as b.grad + tr(Q grad^2)/2 + jumps.
/// Immutable; copies share the lazily built triplet.
class SymbolSpec {
 public:
  static SymbolSpec brownian(int dim);
  static SymbolSpec brownian(Mat Q, Vec b);
  static SymbolSpec isotropic_stable(int dim, double alpha);
  static SymbolSpec relativistic(int dim, double m);
  static SymbolSpec tempered_stable(int dim, double alpha, double lambda);
  static SymbolSpec compound_poisson(int dim, JumpLaw law);
  static SymbolSpec subordinated_bm(int dim, Subordinator s);
  static SymbolSpec custom(LevyTriplet triplet);

  Family family() const { return family_; }
  int dimension() const { return dim_; }
  std::string name() const;

  double alpha() const { return alpha_; }
  double mass() const { return mass_; }
  double lambda() const { return lambda_; }
  const Mat& diffusion() const { return Q_; }
  const Vec& drift() const { return b_; }
  const JumpLaw& jump_law() const { return law_; }
  const Subordinator& subordinator() const { return sub_; }

  /// psi is real (b = 0 and nu symmetric).
  bool symmetric() const;
  /// psi depends on |xi| only.
  bool radial() const;
  /// Radial profile psi(rho) for radial families.
  double radial_value(double rho) const;

  /// Lévy triplet. Closed-form families build theirs on first use; stable
  /// and tempered jump constants are calibrated numerically at |xi| = 1.
  const LevyTriplet& triplet() const;

  /// int_{|y|>=1} |y|^beta nu(dy) < inf, analytically for closed forms.
  bool moment_finite(double beta) const;

  Complex operator()(const Vec& xi) const;

 private:
  SymbolSpec() = default;
  Complex closed_form(const Vec& xi) const;

  Family family_ = Family::brownian;
  int dim_ = 1;
  double alpha_ = 2.0;
  double mass_ = 0.0;
  double lambda_ = 0.0;
  Mat Q_;
  Vec b_;
  JumpLaw law_;
  Subordinator sub_;
  struct Lazy;
  std::shared_ptr<Lazy> lazy_;
};

/// psi(xi); exactly 0 at xi = 0. Custom triplets go through jump quadrature
/// and may throw QuadratureDivergence.
Complex eval_symbol(const SymbolSpec& spec, const Vec& xi);
Complex eval_symbol(const LevyTriplet& triplet, const Vec& xi,
                    const JumpQuadrature& q = {});

/// psi on every lattice frequency of `grid`, in FFT order.
CVec symbol_on_lattice(const SymbolSpec& spec, const Grid& grid);

struct HartmanWintnerReport {
  std::vector<double> radii;
  /// min_{|xi| = R} Re psi(xi) / log R.
  std::vector<double> ratios;
  /// "diverges", "fails" or "inconclusive".
  std::string verdict;
  std::string note = "heuristic: finite probe table, not a proof of the limit";
};

/// Radii must be increasing and >= e.
HartmanWintnerReport hartman_wintner_diagnostic(const SymbolSpec& spec,
                                                const std::vector<double>& radii);

struct ZeroSetReport {
  std::vector<Vec> zeros;
  double tol_zero = 0.0;
  double max_abs = 0.0;
  /// A zero other than xi = 0 was found.
  bool non_liouville_warning = false;
};

/// Lattice frequencies of `grid` with |psi| <= 1e-10 (1 + max |psi|).
ZeroSetReport symbol_zero_set(const SymbolSpec& spec, const Grid& grid);

}  // namespace levy
