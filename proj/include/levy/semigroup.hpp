#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levy/functions.hpp"
#include "levy/grid.hpp"
#include "levy/symbols.hpp"

namespace levy {

struct DensityOptions {
  /// Upper bound for e^{-t Re psi} on the boundary of the frequency box.
  double resolution_tol = 1e-12;
  /// Negative samples are clipped; abort above this clipped mass.
  double max_clip_mass = 1e-6;
  /// Oversampling factor per axis (period P L, same spacing); 0 picks the
  /// largest power of two within the point budget (P = 1 for custom triplets).
  int oversampling = 0;
  std::size_t point_budget_1d = std::size_t{1} << 20;
  std::size_t point_budget_nd = std::size_t{1} << 21;
  std::vector<double> moment_orders{0.5, 1.0, 1.5, 2.0};
  /// When positive, tabulate the law of X_t + eps Z with Z ~ mollifier, so
  /// that correlating u against the table gives P_t(u * phi_eps).
  double mollifier_eps = 0.0;
};

/// Moment estimate E|X_t|^beta from a density table.
struct DensityMoment {
  double beta = 0.0;
  double value = 0.0;
  /// Lattice sum over the interior window.
  double lattice = 0.0;
  /// Extrapolated contribution beyond the window.
  double tail = 0.0;
  bool finite = true;
  /// Ratios of consecutive dyadic annulus sums (outermost last).
  std::vector<double> annulus_ratios;
};

/// Sampled transition density p_t on a lattice.
struct DensityTable {
  Grid grid{1, 8, 1.0};
  double t = 0.0;
  /// p_t(x_j) on the window (oversampled inversion, so periodization is
  /// pushed out to period P L).
  Eigen::VectorXd values;
  /// Periodized density sum_m p_t(x_j + m L), used for circular convolution.
  Eigen::VectorXd periodized;
  /// 1 - sum over the interior window of p h^d.
  double tail_mass = 0.0;
  /// Power-law extrapolation of the mass beyond the window.
  double tail_extrapolated = 0.0;
  /// |sum of the periodized table times h^d - 1|: every sample of the
  /// oversampled inversion, including the tail beyond the window, is folded in.
  double mass_defect = 0.0;
  /// |interior sum of p h^d + tail_extrapolated - 1|; a quality measure of
  /// the power-law tail fit, loose for heavy tails in d >= 2.
  double extrapolation_defect = 0.0;
  double clip_mass = 0.0;
  double resolution = 0.0;
  int oversampling = 1;
  double mollifier_eps = 0.0;
  std::map<double, DensityMoment> moments;
  std::shared_ptr<const SymbolSpec> spec;

  /// Indices at most N/2 - 1 from the center on every axis (drops the
  /// unpaired -L/2 row so the window is symmetric).
  bool interior(std::size_t flat) const;
};

/// Transition density by Fourier inversion of e^{-t psi}.
/// Throws ResolutionError when e^{-t Re psi} at the lattice's maximal
/// frequency exceeds the resolution tolerance.
DensityTable transition_density(const SymbolSpec& spec, double t, const Grid& grid,
                                const DensityOptions& opts = {});

struct RegularityReport {
  double sup_density = 0.0;
  double sup_gradient = 0.0;
  /// Same by central differences on the lattice.
  double sup_gradient_fd = 0.0;
  bool consistent = false;
  std::string verdict;
};

/// sup p_t and sup |grad p_t| (spectral, with the central-difference value
/// alongside). The verdict is a numerical proxy only.
RegularityReport density_regularity_report(const DensityTable& table);

/// E|X_t|^beta: lattice sum plus a dyadic-annulus power-law tail fit.
/// Divergent when the last two annulus ratios are >= 0.95.
DensityMoment density_moment(const DensityTable& table, double beta);

struct SemigroupResult {
  std::vector<Complex> values;
  /// Bound on the neglected tail contribution at each point.
  std::vector<double> truncation_bound;
};

/// P_t u on the lattice by circular convolution with the periodized density;
/// exact on lattice plane waves.
GridFunction apply_semigroup(const DensityTable& table, const GridFunction& u);

/// P_t u(x) for a callable u at arbitrary points: windowed lattice sum plus
/// the tail correction u(x) T, with the Hölder-split truncation bound.
/// Throws GrowthError if gamma >= beta or E|X_t|^beta is not finite.
SemigroupResult apply_semigroup(const DensityTable& table, const GrowthFunction& u,
                                const std::vector<Vec>& xs, double beta);

/// Reusable evaluator for the callable route; caches lattice-aligned points.
class SemigroupEvaluator {
 public:
  SemigroupEvaluator(const DensityTable& table, GrowthFunction u, double beta);
  Complex operator()(const Vec& x) const;
  double bound(const Vec& x) const;
  double moment() const { return m_beta_; }

 private:
  Complex sum(const Vec& x) const;

  const DensityTable& table_;
  GrowthFunction u_;
  double beta_;
  double m_beta_;
  std::vector<std::size_t> support_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct DimensionWalkReport {
  int k = 1;
  double t = 1.0;
  std::vector<double> radii;
  std::vector<double> p_k;
  std::vector<double> p_k2;
  std::vector<double> dp_k;
  /// |d/dr p^(k) + 2 pi r p^(k+2)| per radius.
  std::vector<double> residual;
  /// |d/dr p^(k) + 2 pi p^(k+2)|, the relation without the factor r.
  std::vector<double> residual_without_r;
  double max_residual = 0.0;
  double max_residual_without_r = 0.0;
};

/// Radial profile p^(k)(r) of B_{S_t} in R^k by Hankel-type inversion
/// (2 pi)^{-k/2} int e^{-t phi(rho^2/2)} rho^{k-1} Lambda_k(r rho) d rho.
double radial_density(const Subordinator& s, double t, int k, double r, int points = 16384);

/// Checks d/dr p^(k) = -2 pi r p^(k+2) on the given radii; the derivative
/// is a 5-point finite difference of the radial inversion.
DimensionWalkReport radial_dimension_walk(const Subordinator& s, double t, int k,
                                          const std::vector<double>& radii,
                                          int points = 16384);

}  // namespace levy
