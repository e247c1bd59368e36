#include "levy/functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levy {

namespace {

constexpr double kGradStep = 1e-5;
constexpr double kHessStep = 1e-4;

// Odd tent wave with values in [-1, 1] and slope 4 / period.
double triangle_wave(double x, double period) {
  const double s = x / period + 0.25;
  return 1.0 - 4.0 * std::abs(s - std::floor(s) - 0.5);
}

}  // namespace

Vec SmoothFunction::grad(const Vec& x) const {
  if (gradient) return gradient(x);
  Vec g(x.size());
  Vec y = x;
  for (int i = 0; i < x.size(); ++i) {
    y[i] = x[i] + kGradStep;
    const double up = value(y);
    y[i] = x[i] - kGradStep;
    const double down = value(y);
    y[i] = x[i];
    g[i] = (up - down) / (2.0 * kGradStep);
  }
  return g;
}

Mat SmoothFunction::hess(const Vec& x) const {
  if (hessian) return hessian(x);
  const int d = static_cast<int>(x.size());
  const double e = kHessStep;
  Mat H(d, d);
  const double f0 = value(x);
  Vec y = x;
  for (int i = 0; i < d; ++i) {
    y[i] = x[i] + e;
    const double up = value(y);
    y[i] = x[i] - e;
    const double down = value(y);
    y[i] = x[i];
    H(i, i) = (up - 2.0 * f0 + down) / (e * e);
    for (int j = 0; j < i; ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          y[i] = x[i] + si * e;
          y[j] = x[j] + sj * e;
          acc += si * sj * value(y);
          y[i] = x[i];
          y[j] = x[j];
        }
      }
      H(i, j) = H(j, i) = acc / (4.0 * e * e);
    }
  }
  return H;
}

SmoothFunction SmoothFunction::gaussian_bump(const Vec& center, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("bump width must be positive");
  SmoothFunction f;
  const double s2 = sigma * sigma;
  // e^{-R^2/(2 s^2)} = 1e-17
  const double radius = sigma * std::sqrt(2.0 * 17.0 * std::log(10.0));
  f.value = [=](const Vec& x) {
    const double r2 = (x - center).squaredNorm();
    return r2 > radius * radius ? 0.0 : std::exp(-0.5 * r2 / s2);
  };
  f.gradient = [=](const Vec& x) -> Vec {
    const Vec z = x - center;
    const double r2 = z.squaredNorm();
    if (r2 > radius * radius) return Vec::Zero(x.size());
    return -std::exp(-0.5 * r2 / s2) / s2 * z;
  };
  f.hessian = [=](const Vec& x) -> Mat {
    const Vec z = x - center;
    const double r2 = z.squaredNorm();
    const int d = static_cast<int>(x.size());
    if (r2 > radius * radius) return Mat::Zero(d, d);
    return std::exp(-0.5 * r2 / s2) / s2 * (z * z.transpose() / s2 - Mat::Identity(d, d));
  };
  f.support_radius = radius;
  f.center = center;
  f.scale = sigma;
  return f;
}

SmoothFunction SmoothFunction::linear(const Vec& a, double c) {
  SmoothFunction f;
  f.value = [=](const Vec& x) { return a.dot(x) + c; };
  f.gradient = [=](const Vec&) { return a; };
  f.hessian = [=](const Vec& x) -> Mat {
    return Mat::Zero(x.size(), x.size());
  };
  f.center = Vec::Zero(a.size());
  return f;
}

GrowthFunction GrowthFunction::constant(int dim, double c) {
  GrowthFunction u;
  u.eval = [c](const Vec&) { return Complex(c, 0.0); };
  u.envelope = Envelope{std::abs(c), 0.0};
  u.dimension = dim;
  std::ostringstream os;
  os << "constant(" << c << ")";
  u.name = os.str();
  return u;
}

GrowthFunction GrowthFunction::polynomial(int dim, std::vector<Monomial> terms) {
  int degree = 0;
  double coef_sum = 0.0;
  for (const auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != dim) {
      throw std::invalid_argument("monomial has the wrong number of powers");
    }
    int deg = 0;
    for (int p : t.powers) {
      if (p < 0) throw std::invalid_argument("monomial powers must be >= 0");
      deg += p;
    }
    degree = std::max(degree, deg);
    coef_sum += std::abs(t.coef);
  }
  GrowthFunction u;
  u.eval = [terms](const Vec& x) {
    double acc = 0.0;
    for (const auto& t : terms) {
      double v = t.coef;
      for (int i = 0; i < x.size(); ++i) v *= std::pow(x[i], t.powers[i]);
      acc += v;
    }
    return Complex(acc, 0.0);
  };
  // |x^p| <= |x|^deg <= 1 + |x|^degree
  u.envelope = Envelope{coef_sum, static_cast<double>(degree)};
  u.dimension = dim;
  u.name = "polynomial";
  return u;
}

GrowthFunction GrowthFunction::sine(const Vec& w) {
  GrowthFunction u;
  u.eval = [w](const Vec& x) { return Complex(std::sin(w.dot(x)), 0.0); };
  u.envelope = Envelope{1.0, 0.0};
  u.dimension = static_cast<int>(w.size());
  u.name = "sin";
  return u;
}

GrowthFunction GrowthFunction::plane_wave(const Vec& w) {
  GrowthFunction u;
  u.eval = [w](const Vec& x) { return std::polar(1.0, w.dot(x)); };
  u.envelope = Envelope{1.0, 0.0};
  u.dimension = static_cast<int>(w.size());
  u.name = "plane_wave";
  return u;
}

GrowthFunction GrowthFunction::triangle(int dim, double period) {
  return tilted_triangle(dim, 0.0, period);
}

GrowthFunction GrowthFunction::tilted_triangle(int dim, double gamma, double period) {
  if (!(period > 0.0) || !(gamma >= 0.0)) {
    throw std::invalid_argument("triangle wave needs period > 0 and gamma >= 0");
  }
  GrowthFunction u;
  u.eval = [=](const Vec& x) {
    const double w = triangle_wave(x[0], period);
    if (gamma == 0.0) return Complex(w, 0.0);
    return Complex(std::pow(1.0 + x.squaredNorm(), 0.5 * gamma) * w, 0.0);
  };
  // (1 + r^2)^{g/2} <= max(1, 2^{g/2-1}) (1 + r^g)
  u.envelope = Envelope{std::max(1.0, std::pow(2.0, 0.5 * gamma - 1.0)), gamma};
  u.dimension = dim;
  u.name = gamma == 0.0 ? "triangle" : "tilted_triangle";
  return u;
}

GrowthFunction GrowthFunction::gaussian(const Vec& center, double sigma) {
  const SmoothFunction f = SmoothFunction::gaussian_bump(center, sigma);
  GrowthFunction u;
  u.eval = [f](const Vec& x) { return Complex(f(x), 0.0); };
  u.envelope = Envelope{1.0, 0.0};
  u.dimension = static_cast<int>(center.size());
  u.name = "gaussian";
  return u;
}

}  // namespace levy
