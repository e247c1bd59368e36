#include "levy/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "levy/errors.hpp"
#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

SpectralResult spectral(const SymbolSpec& spec, const GridFunction& f, bool adjoint) {
  const Grid& grid = f.grid();
  if (grid.dimension() != spec.dimension()) {
    throw std::invalid_argument("grid and symbol dimensions differ");
  }
  const CVec psi = symbol_on_lattice(spec, grid);
  CVec data = f.values();
  fft(data, grid.dimension(), grid.points_per_axis(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    data[i] *= -(adjoint ? std::conj(psi[i]) : psi[i]);
  }
  fft(data, grid.dimension(), grid.points_per_axis(), true);
  data /= static_cast<double>(grid.size());

  const double top = f.sup_norm();
  const double ratio = f.boundary_ratio();
  double residue = 0.0;
  if (top > 0.0 && f.is_real()) residue = data.imag().cwiseAbs().maxCoeff() / top;
  return SpectralResult{GridFunction(grid, std::move(data)), residue, ratio,
                        ratio >= 1e-10};
}

// Interval of r >= 0 on which x + r u lies in the ball B(c, R).
std::optional<std::pair<double, double>> ray_ball(const Vec& x, const Vec& u,
                                                  const Vec& c, double R) {
  const Vec z = x - c;
  const double p = u.dot(z);
  const double disc = p * p - (z.squaredNorm() - R * R);
  if (disc <= 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double lo = std::max(0.0, -p - s);
  const double hi = -p + s;
  if (hi <= lo) return std::nullopt;
  return std::make_pair(lo, hi);
}

class AngularCache {
 public:
  explicit AngularCache(int dim) : dim_(dim) {}
  const std::vector<Direction>& get(int order) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rules_.find(order);
    if (it == rules_.end()) it = rules_.emplace(order, angular_rule(dim_, order)).first;
    return it->second;
  }

 private:
  int dim_;
  std::mutex mu_;
  std::map<int, std::vector<Direction>> rules_;
};

class DirectEngine {
 public:
  DirectEngine(const LevyTriplet& t, const SmoothFunction& f, const DirectOptions& o)
      : t_(t), f_(f), o_(o), rule_(gauss_legendre(o.quadrature.gauss_order)),
        cache_(t.dimension()) {
    const LevyMeasure& nu = t_.nu;
    const int d = t_.dimension();
    if (nu.is_zero() || nu.kind() == LevyMeasure::Kind::atoms) return;
    mass_far_ = mass_beyond(nu, 1.0);
    if (nu.kind() == LevyMeasure::Kind::radial) {
      taylor_radial_ = small_jump_moment(nu, 2.0, o_.taylor_radius, o_.quadrature);
      if (d == 1) fixed_dirs_ = angular_rule(1, 2);
    } else {
      fixed_dirs_ = angular_rule(d, o_.quadrature.angular_order);
      const double s = nu.singularity_order();
      for (const auto& dir : fixed_dirs_) {
        const auto shell = [&](double a, double b) -> Complex {
          return integrate_panel(
              [&](double r) { return r * r * nu.ray_weight(dir.unit, r); }, a, b, rule_);
        };
        taylor_dirs_.push_back(sum_inner_shells(shell, o_.taylor_radius,
                                                std::pow(2.0, -(2.0 - s)), 1e-12,
                                                o_.quadrature.max_inner_shells)
                                   .real());
      }
    }
  }

  double operator()(const Vec& x) const {
    const Vec g = f_.grad(x);
    const Mat H = f_.hess(x);
    double out = t_.b.dot(g) + 0.5 * (t_.Q.cwiseProduct(H)).sum();
    const LevyMeasure& nu = t_.nu;
    if (nu.is_zero()) return out;
    const double fx = f_(x);
    if (nu.kind() == LevyMeasure::Kind::atoms) {
      for (const auto& a : nu.atoms()) {
        double term = f_(x + a.location) - fx;
        if (a.location.norm() < 1.0) term -= a.location.dot(g);
        out += a.mass * term;
      }
      return out;
    }
    out += taylor(H);
    out += small_jumps(x, fx, g);
    out += large_jumps(x, fx);
    return out;
  }

 private:
  bool radial_multi() const {
    return t_.nu.kind() == LevyMeasure::Kind::radial && t_.dimension() > 1;
  }

  const std::vector<Direction>& directions(double r) const {
    if (!radial_multi()) return fixed_dirs_;
    const double cap = t_.dimension() == 2 ? 4096.0 : 256.0;
    const double want = std::ceil(4.0 * kPi * r / f_.scale);
    const int order = static_cast<int>(std::clamp(want, 16.0, cap));
    // round up to a multiple of 8 so nearby radii share rules
    return cache_.get((order + 7) / 8 * 8);
  }

  double weight(const Direction& dir, double r) const {
    return radial_multi() || t_.nu.kind() == LevyMeasure::Kind::radial
               ? t_.nu.radial_weight(r)
               : t_.nu.ray_weight(dir.unit, r);
  }

  double taylor(const Mat& H) const {
    if (t_.nu.kind() == LevyMeasure::Kind::radial) {
      return 0.5 * H.trace() / t_.dimension() * taylor_radial_;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < fixed_dirs_.size(); ++i) {
      const Vec& u = fixed_dirs_[i].unit;
      acc += fixed_dirs_[i].weight * u.dot(H * u) * taylor_dirs_[i];
    }
    return 0.5 * acc;
  }

  double shell_integral(double a, double b, const std::function<double(const Direction&, double)>& k) const {
    const int panels = static_cast<int>(std::ceil((b - a) / (0.25 * f_.scale)));
    const double w = (b - a) / std::max(panels, 1);
    double acc = 0.0;
    for (int p = 0; p < std::max(panels, 1); ++p) {
      acc += integrate_panel(
          [&](double r) {
            double s = 0.0;
            for (const auto& dir : directions(r)) s += dir.weight * weight(dir, r) * k(dir, r);
            return s;
          },
          a + p * w, a + (p + 1) * w, rule_);
    }
    return acc;
  }

  double small_jumps(const Vec& x, double fx, const Vec& g) const {
    const double top = std::min(1.0, t_.nu.support_radius().value_or(1.0));
    const auto k = [&](const Direction& dir, double r) {
      return f_(x + r * dir.unit) - fx - r * dir.unit.dot(g);
    };
    double acc = 0.0;
    for (double b = top; b > o_.taylor_radius; b *= 0.5) {
      const double a = std::max(0.5 * b, o_.taylor_radius);
      acc += shell_integral(a, b, k);
    }
    return acc;
  }

  double large_jumps(const Vec& x, double fx) const {
    const double end = t_.nu.support_radius().value_or(std::numeric_limits<double>::infinity());
    if (end <= 1.0) return 0.0;
    const auto k = [&](const Direction& dir, double r) { return f_(x + r * dir.unit); };
    double acc = -fx * mass_far_;
    if (!f_.support_radius) return acc + unsupported_far(x, end);
    const double R = *f_.support_radius;
    if (radial_multi()) {
      const double dist = (x - f_.center).norm();
      const double lo = std::max(1.0, dist - R);
      const double hi = std::min(end, dist + R);
      if (hi > lo) acc += shell_integral(lo, hi, k);
      return acc;
    }
    for (const auto& dir : fixed_dirs_) {
      const auto hit = ray_ball(x, dir.unit, f_.center, R);
      if (!hit) continue;
      const double lo = std::max(1.0, hit->first);
      const double hi = std::min(end, hit->second);
      if (hi <= lo) continue;
      const int panels = static_cast<int>(std::ceil((hi - lo) / (0.25 * f_.scale)));
      const double w = (hi - lo) / panels;
      for (int p = 0; p < panels; ++p) {
        acc += dir.weight * integrate_panel(
                                [&](double r) { return weight(dir, r) * f_(x + r * dir.unit); },
                                lo + p * w, lo + (p + 1) * w, rule_);
      }
    }
    return acc;
  }

  // int_{|y|>=1} f(x+y) nu(dy) for f without a support radius, by outward
  // dyadic shells.
  double unsupported_far(const Vec& x, double end) const {
    const auto k = [&](const Direction& dir, double r) { return f_(x + r * dir.unit); };
    double acc = 0.0;
    int quiet = 0;
    for (int j = 0; j < 200; ++j) {
      const double a = std::ldexp(1.0, j);
      if (a >= end) return acc;
      const double b = std::min(2.0 * a, end);
      const double c = shell_integral(a, b, k);
      acc += c;
      quiet = std::abs(c) <= 1e-14 * std::max(1.0, std::abs(acc)) ? quiet + 1 : 0;
      if (quiet >= 3) return acc;
    }
    throw QuadratureDivergence("large-jump integral of the test function did not converge");
  }

  const LevyTriplet& t_;
  const SmoothFunction& f_;
  DirectOptions o_;
  const GaussRule& rule_;
  mutable AngularCache cache_;
  std::vector<Direction> fixed_dirs_;
  std::vector<double> taylor_dirs_;
  double taylor_radial_ = 0.0;
  double mass_far_ = 0.0;
};

struct Tally {
  DecayNormReport rep;
  // Roundoff level of each annulus sum: 1e-14 sup|Af| times the summed weights.
  std::vector<double> floors;
};

DecayNormReport finish_report(Tally tally, const LevyMeasure* nu) {
  DecayNormReport rep = std::move(tally.rep);
  const auto& floor = tally.floors;
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < rep.annulus_sums.size(); ++j) {
    if (rep.annulus_sums[j] > floor[j]) {
      lx.push_back(std::log(rep.annulus_radii[j]));
      ly.push_back(std::log(rep.annulus_sums[j]));
    }
  }
  // Outer annuli (index 0 is the outermost) at machine zero: local decay.
  const bool outer_zero = rep.annulus_sums.empty() || rep.annulus_sums[0] <= floor[0];
  if (outer_zero || lx.size() < 2) {
    rep.tail_slope = -std::numeric_limits<double>::infinity();
    rep.tail_estimate = 0.0;
  } else {
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i] / n;
      my += ly[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.tail_slope = sxy / sxx;
    const double q = std::pow(2.0, rep.tail_slope);
    rep.tail_estimate = q < 1.0 ? rep.annulus_sums[0] * q / (1.0 - q)
                                : std::numeric_limits<double>::infinity();
  }
  rep.verdict = rep.tail_slope < -0.05 ? "finite" : "diverges";
  rep.relative_change =
      rep.partial > 0.0 ? (rep.partial - rep.half_window_partial) / rep.partial : 0.0;
  if (nu) {
    rep.moment_finite = levy_measure_moment(*nu, rep.beta).finite;
    rep.consistent = (rep.verdict == "finite") == *rep.moment_finite;
  }
  return rep;
}

constexpr int kAnnuli = 4;

template <typename Visit>
Tally accumulate(double beta, double window, Visit&& visit) {
  Tally tally;
  DecayNormReport& rep = tally.rep;
  rep.beta = beta;
  rep.window = window;
  rep.annulus_sums.assign(kAnnuli, 0.0);
  for (int j = 0; j < kAnnuli; ++j) rep.annulus_radii.push_back(window * std::ldexp(1.0, -j));
  std::vector<double> weights(kAnnuli, 0.0);
  double sup = 0.0;
  // weight = (1 + r^beta) h^d, value = |Af(x)|
  visit([&](double r, double weight, double value) {
    if (r > window) return;
    sup = std::max(sup, value);
    const double weighted = weight * value;
    rep.partial += weighted;
    if (r <= 0.5 * window) rep.half_window_partial += weighted;
    for (int j = 0; j < kAnnuli; ++j) {
      if (r > 0.5 * rep.annulus_radii[j] && r <= rep.annulus_radii[j]) {
        rep.annulus_sums[j] += weighted;
        weights[j] += weight;
        break;
      }
    }
  });
  tally.floors.resize(kAnnuli);
  for (int j = 0; j < kAnnuli; ++j) tally.floors[j] = 1e-14 * sup * weights[j];
  return tally;
}

}  // namespace

SpectralResult apply_generator_spectral(const SymbolSpec& spec, const GridFunction& f) {
  return spectral(spec, f, false);
}

SpectralResult apply_adjoint(const SymbolSpec& spec, const GridFunction& f) {
  return spectral(spec, f, true);
}

std::vector<double> apply_generator_direct(const LevyTriplet& triplet,
                                           const SmoothFunction& f,
                                           const std::vector<Vec>& xs,
                                           const DirectOptions& opts) {
  for (const auto& x : xs) {
    if (x.size() != triplet.dimension()) {
      throw std::invalid_argument("evaluation point has the wrong dimension");
    }
  }
  const DirectEngine engine(triplet, f, opts);
  std::vector<double> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = engine(xs[i]);
  });
  return out;
}

DecayNormReport weighted_decay_norm(const GridFunction& Af, double beta, double window,
                                    const LevyMeasure* nu) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  const Grid& grid = Af.grid();
  const double dv = grid.cell_volume();
  auto tally = accumulate(beta, window, [&](auto&& add) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.point(i).norm();
      add(r, (1.0 + std::pow(r, beta)) * dv, std::abs(Af[i]));
    }
  });
  return finish_report(std::move(tally), nu);
}

DecayNormReport weighted_decay_norm(const std::function<double(const Vec&)>& Af, int dim,
                                    double beta, double window, double h,
                                    const LevyMeasure* nu) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (!(h > 0.0) || dim < 1 || dim > 3) throw std::invalid_argument("bad lattice");
  const int m = static_cast<int>(std::floor(window / h));
  const double dv = std::pow(h, dim);
  auto tally = accumulate(beta, window, [&](auto&& add) {
    Index3 idx{-m, dim > 1 ? -m : 0, dim > 2 ? -m : 0};
    Vec x(dim);
    for (idx[0] = -m; idx[0] <= m; ++idx[0]) {
      for (idx[1] = dim > 1 ? -m : 0; idx[1] <= (dim > 1 ? m : 0); ++idx[1]) {
        for (idx[2] = dim > 2 ? -m : 0; idx[2] <= (dim > 2 ? m : 0); ++idx[2]) {
          for (int a = 0; a < dim; ++a) x[a] = idx[a] * h;
          const double r = x.norm();
          if (r > window) continue;
          add(r, (1.0 + std::pow(r, beta)) * dv, std::abs(Af(x)));
        }
      }
    }
  });
  return finish_report(std::move(tally), nu);
}

}  // namespace levy
