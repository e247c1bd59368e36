#include "levy/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace levy {

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussRule build_rule(int n) {
  GaussRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = legendre(n, x);
      x -= p / dp;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

template <typename T>
T pairwise_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_impl(xs.subspan(0, half)) + pairwise_impl(xs.subspan(half));
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs); }
Complex pairwise_sum(std::span<const Complex> xs) { return pairwise_impl(xs); }

void EpsilonExtrapolator::push(Complex partial_sum) {
  sums_.push_back(partial_sum);
  const std::size_t n = std::min(sums_.size(), window_);
  const std::size_t offset = sums_.size() - n;

  std::vector<Complex> prev(n + 1, Complex{});
  std::vector<Complex> cur(sums_.begin() + static_cast<std::ptrdiff_t>(offset),
                           sums_.end());
  Complex best = cur.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Complex> next(n - k);
    bool broke = false;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const Complex diff = cur[i + 1] - cur[i];
      if (std::abs(diff) <= std::numeric_limits<double>::min()) {
        broke = true;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (broke) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0 && !cur.empty()) best = cur.back();
  }
  change_ = std::abs(best - estimate_);
  estimate_ = best;
}

ShellSeries sum_outer_shells(const std::function<double(int)>& shell,
                             const ShellSeriesOptions& opts) {
  ShellSeries out;
  double sum = 0.0;
  double prev = -1.0;
  double q_prev = -1.0;
  int run = 0;
  int zeros = 0;
  for (int j = 0; j < opts.max_shells; ++j) {
    const double c = shell(j);
    out.shells = j + 1;
    if (!std::isfinite(c)) {
      out.finite = false;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    sum += c;
    if (c == 0.0) {
      if (++zeros >= 3 && j >= 2) {
        out.value = sum;
        return out;
      }
      prev = c;
      continue;
    }
    zeros = 0;
    if (prev > 0.0) {
      const double q = c / prev;
      out.last_ratio = q;
      if (q >= opts.decay_ratio) {
        if (++run >= opts.divergence_run) {
          out.finite = false;
          out.value = std::numeric_limits<double>::infinity();
          return out;
        }
      } else {
        run = 0;
        const double rem = c * q / (1.0 - q);
        const bool stable = q_prev >= 0.0 && std::abs(q - q_prev) < 0.05;
        if (j >= 3 && stable &&
            (rem <= opts.rel_tol * sum || rem <= opts.abs_tol)) {
          out.remainder = rem;
          out.value = sum + rem;
          return out;
        }
      }
      q_prev = q;
    }
    prev = c;
  }
  if (run > 0) {
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double q = out.last_ratio;
  out.remainder = (q > 0.0 && q < 1.0) ? prev * q / (1.0 - q) : 0.0;
  out.value = sum + out.remainder;
  return out;
}

}  // namespace levy
