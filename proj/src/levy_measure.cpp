#include "levy/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levy/errors.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x - sin(x) without cancellation for small x.
double x_minus_sin(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return x - std::sin(x);
}

// 1 - J0(x) and 1 - sin(x)/x without cancellation for small x.
double one_minus_j0(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 / 4.0 - x2 * x2 / 64.0;
  }
  return 1.0 - std::cyl_bessel_j(0.0, std::abs(x));
}

double one_minus_sinc(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 / 6.0 - x2 * x2 / 120.0;
  }
  return 1.0 - std::sin(x) / x;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Kernel of a one-dimensional ray integral int_0^inf m(r) k(r) dr. For r >= 1
// the kernel is outer_constant - osc(r), where osc oscillates at `frequency`.
struct RayKernel {
  std::function<Complex(double)> full;
  Complex outer_constant;
  std::function<Complex(double)> osc;
  double frequency = 0.0;
};

template <typename F>
auto panels(F&& f, double a, double b, int count, const GaussRule& rule) {
  using R = decltype(f(a));
  R acc{};
  const double w = (b - a) / count;
  for (int i = 0; i < count; ++i) {
    acc += integrate_panel(f, a + i * w, a + (i + 1) * w, rule);
  }
  return acc;
}

int oscillation_panels(double width, double frequency) {
  if (frequency <= 0.0) return 1;
  const double n = std::ceil(width * frequency / (0.5 * kPi));
  return static_cast<int>(std::clamp(n, 1.0, 1e6));
}

double outer_mass(const std::function<double(double)>& m, double from,
                  std::optional<double> support, const GaussRule& rule) {
  const double end = support.value_or(kInf);
  if (from >= end) return 0.0;
  const auto series = sum_outer_shells([&](int j) {
    const double a = from * std::ldexp(1.0, j);
    const double b = std::min(2.0 * a, end);
    if (a >= end) return 0.0;
    return panels([&](double r) { return m(r); }, a, b, 2, rule);
  });
  if (!series.finite) {
    throw QuadratureDivergence("jump measure has infinite mass outside a ball");
  }
  return series.value;
}

Complex ray_integral(const std::function<double(double)>& m, double s,
                     std::optional<double> support, const RayKernel& kernel,
                     const JumpQuadrature& q) {
  const GaussRule& rule = gauss_legendre(q.gauss_order);
  const double freq = kernel.frequency;
  const double end = support.value_or(kInf);
  const double inner_top = std::min(1.0, end);

  const auto inner_shell = [&](double a, double b) -> Complex {
    const int n = oscillation_panels(b - a, freq);
    return panels([&](double r) { return m(r) * kernel.full(r); }, a, b, n,
                  rule);
  };
  const double ratio = std::pow(2.0, -(2.0 - s));
  const double asymptotic = freq > 0.0 ? std::min(1.0, 0.1 / freq) : 1.0;
  Complex total = sum_inner_shells(inner_shell, inner_top, ratio, q.inner_tol,
                                   q.max_inner_shells, asymptotic);
  if (end <= 1.0) return total;

  if (freq == 0.0) {
    const Complex k = kernel.outer_constant - kernel.osc(1.0);
    if (k != Complex{}) total += k * outer_mass(m, 1.0, support, rule);
    return total;
  }
  // Full kernel up to a few periods, then mass minus the oscillatory tail.
  const double half_period = kPi / freq;
  const double lead = std::max(1.0, 4.0 * half_period);
  double r = 1.0;
  while (r < std::min(lead, end)) {
    const double next = std::min({2.0 * r, r + half_period, lead, end});
    total += integrate_panel([&](double x) { return m(x) * kernel.full(x); }, r,
                             next, rule);
    r = next;
  }
  if (r >= end) return total;
  total += kernel.outer_constant * outer_mass(m, r, support, rule);

  const auto f = [&](double x) { return m(x) * kernel.osc(x); };
  Complex osc{};
  if (r < end) {
    EpsilonExtrapolator eps;
    eps.push(osc);
    int stable = 0;
    int tiny = 0;
    bool done = false;
    for (int n = 0; n < q.max_tail_panels; ++n) {
      const double next = std::min(r + half_period, end);
      const Complex c = integrate_panel(f, r, next, rule);
      osc += c;
      r = next;
      if (r >= end) {
        done = true;
        break;
      }
      eps.push(osc);
      const double scale = std::max(1.0, std::abs(osc));
      if (std::abs(c) < 1e-17 * scale) {
        if (++tiny >= 5) {
          done = true;
          break;
        }
      } else {
        tiny = 0;
      }
      if (n >= 6 && eps.change() <= q.tail_tol * scale) {
        if (++stable >= 3) {
          osc = eps.estimate();
          done = true;
          break;
        }
      } else {
        stable = 0;
      }
    }
    if (!done) {
      throw QuadratureDivergence("oscillatory jump integral did not converge");
    }
  }
  return total - osc;
}

}  // namespace

double sphere_area(int dim) {
  switch (dim) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    case 3:
      return 4.0 * kPi;
    default:
      return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
  }
}

std::vector<Direction> angular_rule(int dim, int order) {
  std::vector<Direction> out;
  if (dim == 1) {
    out.push_back({Vec::Constant(1, 1.0), 1.0});
    out.push_back({Vec::Constant(1, -1.0), 1.0});
    return out;
  }
  if (dim == 2) {
    const int n = std::max(order, 4);
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / n;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      out.push_back({u, 2.0 * kPi / n});
    }
    return out;
  }
  if (dim == 3) {
    const int n_phi = std::max(order, 4);
    const GaussRule& rule = gauss_legendre(std::max(2, n_phi / 2));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double c = rule.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int k = 0; k < n_phi; ++k) {
        const double a = 2.0 * kPi * (k + 0.5) / n_phi;
        Vec u(3);
        u << s * std::cos(a), s * std::sin(a), c;
        out.push_back({u, rule.weights[i] * 2.0 * kPi / n_phi});
      }
    }
    return out;
  }
  throw std::invalid_argument("angular_rule: dimension must be 1, 2 or 3");
}

Complex sum_inner_shells(const std::function<Complex(double, double)>& shell,
                         double upper, double ratio, double tol,
                         int max_shells, double asymptotic_below) {
  Complex sum{};
  Complex last_estimate{};
  double prev = -1.0;
  int zeros = 0;
  int settled = 0;
  for (int j = 0; j < max_shells; ++j) {
    const double b = upper * std::ldexp(1.0, -j);
    const double a = 0.5 * b;
    const Complex c = shell(a, b);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) break;
    sum += c;
    const double mag = std::abs(c);
    if (b <= asymptotic_below && j >= 3) {
      if (mag == 0.0) {
        if (++zeros >= 3) return sum;
      } else {
        zeros = 0;
        const double q_emp = prev > 0.0 ? mag / prev : 1.0;
        const double qq = std::max(ratio, q_emp);
        if (qq < 1.0) {
          // Geometric remainder below the last shell.
          const Complex estimate = sum + c * (qq / (1.0 - qq));
          const double scale = std::max(std::abs(estimate), 1e-300);
          const bool small_tail = mag * qq / (1.0 - qq) < tol * scale;
          const bool stable = std::abs(estimate - last_estimate) < tol * scale;
          settled = stable ? settled + 1 : 0;
          last_estimate = estimate;
          if (small_tail || settled >= 2) return estimate;
        } else {
          settled = 0;
        }
      }
    }
    prev = mag;
  }
  throw QuadratureDivergence(
      "small-jump shells did not reach the truncation tolerance");
}

LevyMeasure LevyMeasure::zero(int dim) {
  LevyMeasure nu;
  nu.dim_ = dim;
  nu.kind_ = Kind::atoms;
  return nu;
}

LevyMeasure LevyMeasure::from_atoms(int dim, std::vector<Atom> atoms) {
  LevyMeasure nu;
  nu.dim_ = dim;
  nu.kind_ = Kind::atoms;
  nu.atoms_ = std::move(atoms);
  nu.singularity_order_ = 0.0;
  double far = 0.0;
  for (const auto& a : nu.atoms_) {
    if (a.location.size() != dim) {
      throw std::invalid_argument("atom location has the wrong dimension");
    }
    if (!(a.location.norm() > 0.0)) {
      throw std::invalid_argument("atom location must be nonzero");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw std::invalid_argument("atom mass must be positive");
    }
    far = std::max(far, a.location.norm());
  }
  nu.support_radius_ = far;
  nu.symmetric_ = std::all_of(
      nu.atoms_.begin(), nu.atoms_.end(), [&](const Atom& a) {
        return std::any_of(nu.atoms_.begin(), nu.atoms_.end(),
                           [&](const Atom& b) {
                             return (a.location + b.location).norm() <
                                        1e-14 * (1.0 + a.location.norm()) &&
                                    std::abs(a.mass - b.mass) <=
                                        1e-14 * a.mass;
                           });
      });
  return nu;
}

LevyMeasure LevyMeasure::from_density(int dim, DensityFn density,
                                      double singularity_order, bool symmetric,
                                      std::optional<double> support_radius) {
  LevyMeasure nu;
  nu.dim_ = dim;
  nu.kind_ = Kind::density;
  nu.density_ = std::make_shared<const DensityFn>(std::move(density));
  nu.singularity_order_ = singularity_order;
  nu.symmetric_ = symmetric;
  nu.support_radius_ = support_radius;
  nu.validate();
  return nu;
}

LevyMeasure LevyMeasure::from_radial(int dim, RadialFn profile,
                                     double singularity_order,
                                     std::optional<double> support_radius) {
  LevyMeasure nu;
  nu.dim_ = dim;
  nu.kind_ = Kind::radial;
  nu.profile_ = std::make_shared<const RadialFn>(std::move(profile));
  nu.singularity_order_ = singularity_order;
  nu.symmetric_ = true;
  nu.support_radius_ = support_radius;
  nu.validate();
  return nu;
}

void LevyMeasure::validate() const {
  if (dim_ < 1 || dim_ > 3) {
    throw std::invalid_argument("jump measure dimension must be 1, 2 or 3");
  }
  if (!(singularity_order_ >= 0.0 && singularity_order_ < 2.0)) {
    throw std::invalid_argument("singularity order must lie in [0, 2)");
  }
  try {
    const double near = small_jump_moment(*this, 2.0, 1.0);
    const double far = mass_beyond(*this, 1.0);
    if (!std::isfinite(near) || !std::isfinite(far)) throw QuadratureDivergence("");
  } catch (const QuadratureDivergence&) {
    throw std::invalid_argument(
        "jump measure violates int min(1,|y|^2) nu(dy) < inf");
  }
}

LevyMeasure LevyMeasure::scaled(double c) const {
  if (!(c >= 0.0)) throw std::invalid_argument("scale must be non-negative");
  LevyMeasure nu = *this;
  if (kind_ == Kind::atoms) {
    for (auto& a : nu.atoms_) a.mass *= c;
    if (c == 0.0) nu.atoms_.clear();
  } else {
    nu.scale_ *= c;
  }
  return nu;
}

double LevyMeasure::density_at(const Vec& y) const {
  switch (kind_) {
    case Kind::density:
      if (support_radius_ && y.norm() > *support_radius_) return 0.0;
      return scale_ * (*density_)(y);
    case Kind::radial:
      return profile_at(y.norm());
    case Kind::atoms:
      return 0.0;
  }
  return 0.0;
}

double LevyMeasure::profile_at(double r) const {
  if (kind_ != Kind::radial) return 0.0;
  if (support_radius_ && r > *support_radius_) return 0.0;
  return scale_ * (*profile_)(r);
}

double LevyMeasure::ray_weight(const Vec& unit, double r) const {
  if (kind_ == Kind::atoms) return 0.0;
  return std::pow(r, dim_ - 1) * density_at(r * unit);
}

double LevyMeasure::radial_weight(double r) const {
  return std::pow(r, dim_ - 1) * profile_at(r);
}

Complex jump_exponent(const LevyMeasure& nu, const Vec& xi,
                      const JumpQuadrature& q) {
  if (xi.size() != nu.dimension()) {
    throw std::invalid_argument("frequency has the wrong dimension");
  }
  if (nu.is_zero() || xi.isZero(0.0)) return Complex{};
  const double s = nu.singularity_order();

  switch (nu.kind()) {
    case LevyMeasure::Kind::atoms: {
      Complex acc{};
      for (const auto& a : nu.atoms()) {
        const double phase = a.location.dot(xi);
        const double half = std::sin(0.5 * phase);
        const bool compensate = a.location.norm() < 1.0;
        const double im = compensate ? x_minus_sin(phase) : -std::sin(phase);
        acc += a.mass * Complex(2.0 * half * half, im);
      }
      return acc;
    }
    case LevyMeasure::Kind::radial: {
      const double rho = xi.norm();
      const auto m = [&](double r) { return nu.radial_weight(r); };
      RayKernel k;
      k.frequency = rho;
      switch (nu.dimension()) {
        case 1:
          k.full = [rho](double r) {
            const double h = std::sin(0.5 * r * rho);
            return Complex(4.0 * h * h, 0.0);
          };
          k.outer_constant = 2.0;
          k.osc = [rho](double r) { return Complex(2.0 * std::cos(r * rho)); };
          break;
        case 2:
          k.full = [rho](double r) {
            return Complex(2.0 * kPi * one_minus_j0(r * rho));
          };
          k.outer_constant = 2.0 * kPi;
          k.osc = [rho](double r) {
            return Complex(2.0 * kPi * std::cyl_bessel_j(0.0, r * rho));
          };
          break;
        default:
          k.full = [rho](double r) {
            return Complex(4.0 * kPi * one_minus_sinc(r * rho));
          };
          k.outer_constant = 4.0 * kPi;
          k.osc = [rho](double r) { return Complex(4.0 * kPi * sinc(r * rho)); };
          break;
      }
      return ray_integral(m, s, nu.support_radius(), k, q);
    }
    case LevyMeasure::Kind::density: {
      Complex acc{};
      for (const auto& dir : angular_rule(nu.dimension(), q.angular_order)) {
        const double omega = dir.unit.dot(xi);
        if (omega == 0.0) continue;
        RayKernel k;
        k.frequency = std::abs(omega);
        k.full = [omega](double r) {
          const double x = r * omega;
          const double h = std::sin(0.5 * x);
          if (r < 1.0) return Complex(2.0 * h * h, x_minus_sin(x));
          return Complex(2.0 * h * h, -std::sin(x));
        };
        k.outer_constant = 1.0;
        k.osc = [omega](double r) {
          return Complex(std::cos(r * omega), std::sin(r * omega));
        };
        const Vec u = dir.unit;
        const auto m = [&nu, u](double r) { return nu.ray_weight(u, r); };
        acc += dir.weight * ray_integral(m, s, nu.support_radius(), k, q);
      }
      return acc;
    }
  }
  return Complex{};
}

MomentReport levy_measure_moment(const LevyMeasure& nu, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("moment order must be >= 0");
  MomentReport rep;
  rep.beta = beta;
  if (nu.kind() == LevyMeasure::Kind::atoms) {
    for (const auto& a : nu.atoms()) {
      const double r = a.location.norm();
      if (r >= 1.0) rep.value += a.mass * std::pow(r, beta);
    }
    return rep;
  }
  const GaussRule& rule = gauss_legendre(16);
  const auto end = nu.support_radius().value_or(kInf);
  std::vector<Direction> dirs;
  if (nu.kind() == LevyMeasure::Kind::density) dirs = angular_rule(nu.dimension(), 16);

  const auto shell = [&](int j) {
    const double a = std::ldexp(1.0, j);
    if (a >= end) return 0.0;
    const double b = std::min(2.0 * a, end);
    if (nu.kind() == LevyMeasure::Kind::radial) {
      return sphere_area(nu.dimension()) *
             panels([&](double r) { return std::pow(r, beta) * nu.radial_weight(r); },
                    a, b, 2, rule);
    }
    double acc = 0.0;
    for (const auto& d : dirs) {
      acc += d.weight *
             panels([&](double r) { return std::pow(r, beta) * nu.ray_weight(d.unit, r); },
                    a, b, 2, rule);
    }
    return acc;
  };
  ShellSeriesOptions opts;
  opts.max_shells = 1000;
  const ShellSeries series = sum_outer_shells(shell, opts);
  rep.value = series.value;
  rep.finite = series.finite;
  rep.shells = series.shells;
  return rep;
}

double small_jump_moment(const LevyMeasure& nu, double p, double radius,
                         const JumpQuadrature& q) {
  if (nu.kind() == LevyMeasure::Kind::atoms) {
    double acc = 0.0;
    for (const auto& a : nu.atoms()) {
      const double r = a.location.norm();
      if (r < radius) acc += a.mass * std::pow(r, p);
    }
    return acc;
  }
  const GaussRule& rule = gauss_legendre(q.gauss_order);
  const double s = nu.singularity_order();
  if (p <= s) throw QuadratureDivergence("small-jump moment order below singularity");
  std::vector<Direction> dirs;
  if (nu.kind() == LevyMeasure::Kind::density) dirs = angular_rule(nu.dimension(), q.angular_order);
  const auto shell = [&](double a, double b) -> Complex {
    if (nu.kind() == LevyMeasure::Kind::radial) {
      return sphere_area(nu.dimension()) *
             integrate_panel([&](double r) { return std::pow(r, p) * nu.radial_weight(r); },
                             a, b, rule);
    }
    double acc = 0.0;
    for (const auto& d : dirs) {
      acc += d.weight *
             integrate_panel([&](double r) { return std::pow(r, p) * nu.ray_weight(d.unit, r); },
                             a, b, rule);
    }
    return acc;
  };
  return sum_inner_shells(shell, radius, std::pow(2.0, -(p - s)), 1e-13,
                          q.max_inner_shells)
      .real();
}

double mass_beyond(const LevyMeasure& nu, double radius) {
  if (nu.kind() == LevyMeasure::Kind::atoms) {
    double acc = 0.0;
    for (const auto& a : nu.atoms()) {
      if (a.location.norm() >= radius) acc += a.mass;
    }
    return acc;
  }
  const GaussRule& rule = gauss_legendre(16);
  if (nu.kind() == LevyMeasure::Kind::radial) {
    return sphere_area(nu.dimension()) *
           outer_mass([&](double r) { return nu.radial_weight(r); }, radius,
                      nu.support_radius(), rule);
  }
  double acc = 0.0;
  for (const auto& d : angular_rule(nu.dimension(), 16)) {
    acc += d.weight * outer_mass([&](double r) { return nu.ray_weight(d.unit, r); },
                                 radius, nu.support_radius(), rule);
  }
  return acc;
}

}  // namespace levy
