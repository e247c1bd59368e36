#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "levy/functions.hpp"
#include "levy/grid.hpp"
#include "levy/semigroup.hpp"
#include "levy/symbols.hpp"

namespace levy {

/// Counter-based generator: output k of stream `key` is splitmix64(key + k * golden).
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t batch, std::uint64_t sub_batch);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// n draws of X_t, one per row.
struct SampleBatch {
  std::shared_ptr<const SymbolSpec> spec;
  double t = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t batch = 0;
  Eigen::MatrixXd increments;
};

inline constexpr std::size_t kSubBatchSize = 4096;

/// Exact draws for brownian, isotropic_stable (Chambers-Mallows-Stuck in
/// d = 1, Gaussian subordination otherwise), relativistic and
/// subordinated_bm (B_{S_t}) and compound_poisson. Sub-batches of 4096 draws
/// use independent streams keyed by (seed, batch, sub-batch), so the result
/// does not depend on the thread count.
/// Throws UnsupportedFamily for tempered_stable and custom.
SampleBatch sample_increments(const SymbolSpec& spec, double t, std::size_t n,
                              std::uint64_t seed, std::uint64_t batch = 0);

/// One draw of S_t.
double sample_subordinator(const Subordinator& s, double t, CounterRng& rng);

/// Positive stable variable with E e^{-lambda A} = e^{-lambda^a}, a in (0, 1]
/// (Kanter's representation).
double sample_positive_stable(double a, CounterRng& rng);

/// Symmetric stable variable with E e^{i xi S} = e^{-|xi|^alpha}.
double sample_symmetric_stable(double alpha, CounterRng& rng);

struct McEstimate {
  std::vector<Complex> mean;
  std::vector<double> standard_error;
  /// E|u(x + X_t)|^2 may be infinite (no finite moment of order 2 gamma):
  /// the standard errors are then not meaningful.
  bool nonstandard_error = false;
};

/// Sample mean of u(x + X_t) over the batch at each x, with standard errors.
McEstimate mc_semigroup(const SampleBatch& batch, const GrowthFunction& u,
                        const std::vector<Vec>& xs);

struct McComparison {
  std::vector<Complex> deterministic;
  std::vector<double> truncation_bound;
  /// |mc - det| / (se + truncation bound); 0 when both vanish and agree.
  std::vector<double> z;
  std::vector<bool> agree;
  std::size_t agreeing = 0;
};

/// Compares against the deterministic semigroup route at |z| <= 3.
McComparison compare_with_deterministic(const McEstimate& mc, const DensityTable& table,
                                        const GrowthFunction& u, const std::vector<Vec>& xs,
                                        double beta);

struct KsResult {
  double statistic = 0.0;
  /// 1.63 sqrt((n + m) / (n m)).
  double critical_1pct = 0.0;
  bool reject = false;
};

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct DynkinReport {
  double t = 0.0;
  int quad_points = 0;
  /// P_t phi(x) - phi(x).
  double lhs = 0.0;
  /// int_0^t P_s A phi(x) ds by Gauss-Legendre in s.
  double rhs = 0.0;
  double residual = 0.0;
  /// |P_t phi(x) - phi(x) - t A phi(x)|, the first-order Taylor remainder.
  double first_order_remainder = 0.0;
  std::string note;
};

/// Dynkin's formula at x, with P_s A phi from apply_semigroup on the lattice
/// and evaluated off-lattice by trigonometric interpolation. Small s may throw
/// ResolutionError; the open quadrature never evaluates s = 0.
DynkinReport dynkin_residual(const SymbolSpec& spec, const SmoothFunction& phi, const Vec& x,
                             double t, int quad_points, const Grid& grid,
                             const DensityOptions& opts = {});

/// Trigonometric interpolation of lattice samples at an arbitrary point.
Complex fourier_interpolate(const GridFunction& f, const Vec& x);

}  // namespace levy
