#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "levy/types.hpp"

namespace levy {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (Golub-Welsch, Newton-polished).
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with the given rule. Works for real or complex f.
template <typename F>
auto integrate_panel(F&& f, double a, double b, const GaussRule& rule) {
  using R = decltype(f(a));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  R acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

/// Pairwise (cascade) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> xs);
Complex pairwise_sum(std::span<const Complex> xs);

/// Wynn epsilon-algorithm accelerator for slowly converging (typically
/// alternating) sequences of partial sums.
class EpsilonExtrapolator {
 public:
  explicit EpsilonExtrapolator(std::size_t window = 40) : window_(window) {}

  void push(Complex partial_sum);
  Complex estimate() const { return estimate_; }
  /// Change of the estimate at the last push.
  double change() const { return change_; }
  std::size_t size() const { return sums_.size(); }

 private:
  std::size_t window_;
  std::vector<Complex> sums_;
  Complex estimate_{};
  double change_ = 0.0;
};

/// Outcome of a dyadic shell series sum_{j>=0} c_j with c_j >= 0.
struct ShellSeries {
  double value = 0.0;
  bool finite = true;
  int shells = 0;
  double last_ratio = 0.0;
  double remainder = 0.0;
};

struct ShellSeriesOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_shells = 400;
  /// Shells in a row with ratio >= decay_ratio that declare divergence.
  int divergence_run = 8;
  double decay_ratio = 0.95;
};

/// Sums non-negative shell contributions outward with a geometric tail
/// extrapolation. Declares +inf when `divergence_run` consecutive shells fail
/// the ratio-decay test.
ShellSeries sum_outer_shells(const std::function<double(int)>& shell,
                             const ShellSeriesOptions& opts = {});

}  // namespace levy
