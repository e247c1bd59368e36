#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levy/types.hpp"

namespace levy {

/// Real test function with optional analytic derivatives and support.
/// Missing derivatives fall back to central differences (gradient step 1e-5,
/// Hessian step 1e-4).
struct SmoothFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
  /// f vanishes outside the closed ball B(center, support_radius).
  std::optional<double> support_radius;
  Vec center;
  /// Length over which f varies appreciably; sets quadrature panel widths.
  double scale = 1.0;

  double operator()(const Vec& x) const { return value(x); }
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;

  /// e^{-|x-c|^2 / (2 sigma^2)}, treated as zero where it is below 1e-17.
  static SmoothFunction gaussian_bump(const Vec& center, double sigma);
  /// a.x + c.
  static SmoothFunction linear(const Vec& a, double c = 0.0);
};

/// One term coef * x_1^p_1 ... x_d^p_d.
struct Monomial {
  double coef = 1.0;
  std::vector<int> powers;
};

/// Callable of polynomial growth with its envelope |u(x)| <= M (1 + |x|^gamma).
struct GrowthFunction {
  std::function<Complex(const Vec&)> eval;
  Envelope envelope;
  int dimension = 1;
  std::string name;

  Complex operator()(const Vec& x) const { return eval(x); }

  static GrowthFunction constant(int dim, double c);
  static GrowthFunction polynomial(int dim, std::vector<Monomial> terms);
  /// sin(w.x).
  static GrowthFunction sine(const Vec& w);
  /// e^{i w.x}.
  static GrowthFunction plane_wave(const Vec& w);
  /// Triangle wave of x_1 with the given period, values in [-1, 1].
  static GrowthFunction triangle(int dim, double period = 4.0);
  /// (1 + |x|^2)^{gamma/2} times the triangle wave of x_1.
  static GrowthFunction tilted_triangle(int dim, double gamma, double period = 4.0);
  static GrowthFunction gaussian(const Vec& center, double sigma);
};

}  // namespace levy
