#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace levy {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

/// Growth certificate |u(x)| <= M (1 + |x|^gamma).
struct Envelope {
  double M = 1.0;
  double gamma = 0.0;

  double bound(double r) const { return M * (1.0 + std::pow(r, gamma)); }
};

}  // namespace levy
