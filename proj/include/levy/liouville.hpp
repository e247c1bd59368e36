#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levy/functions.hpp"
#include "levy/grid.hpp"
#include "levy/semigroup.hpp"
#include "levy/symbols.hpp"

namespace levy {

// ---------------------------------------------------------------------------
// Mollifier phi(x) = (1 - |x|^2)^4 / Z on the unit ball.

/// Z = int_{|x|<1} (1 - |x|^2)^4 dx = pi^{d/2} Gamma(5) / Gamma(d/2 + 5).
double mollifier_mass(int dim);
/// phi(x), normalized to mass 1.
double mollifier(const Vec& x);
/// Fourier transform int phi(x) e^{-i x.xi} dx of the normalized bump.
double mollifier_transform(int dim, double rho);
/// int |x|^gamma phi(x) dx.
double mollifier_moment(int dim, double gamma);

/// u_eps = u * phi_eps by product quadrature on the ball of radius eps;
/// envelope (C1 M, gamma) with C1 = 2^gamma (1 + eps^gamma m_gamma).
GrowthFunction mollify(const GrowthFunction& u, double eps);
/// Lattice version by spectral multiplication with the transform of phi_eps.
GridFunction mollify(const GridFunction& u, double eps);

// ---------------------------------------------------------------------------
// Weak formulation.

struct WeakResidualReport {
  /// max_i |int u A*phi_i| / ||phi_i||_{C_b^2}.
  double residual = 0.0;
  std::vector<double> integrals;
  std::vector<double> norms;
  std::vector<Vec> centers;
  std::vector<double> widths;
};

/// Gaussian test bumps (sigma in {0.5, 1}) centered on the sublattice
/// 2 Z^d within the box |c_a| <= 4.
std::vector<SmoothFunction> default_test_family(int dim);

/// ||phi||_{C_b^2} of e^{-|x-c|^2/(2 sigma^2)}: 1 + e^{-1/2}/sigma + 1/sigma^2.
double gaussian_cb2_norm(double sigma);

/// Lattice quadrature of int u A*phi_i with A*phi_i computed spectrally.
/// Throws GrowthError when gamma >= beta.
WeakResidualReport weak_residual(const GridFunction& u, const SymbolSpec& spec, double beta,
                                 const std::vector<SmoothFunction>& tests);

// ---------------------------------------------------------------------------
// Fixed point.

struct FixedPointReport {
  double residual = 0.0;
  double truncation_bound = 0.0;
  double sup_u = 0.0;
  double tol = 0.0;
  bool fixed_point = false;
  Vec argmax;
};

/// sup over xs of |P_t u(x) - u(x)|; fixed point when below
/// 1e-5 (1 + sup |u|).
FixedPointReport fixed_point_residual(const GrowthFunction& u, const DensityTable& table,
                                      const std::vector<Vec>& xs, double beta);

// ---------------------------------------------------------------------------
// Hölder modulus of P_t u.

struct HoelderProbe {
  double r = 1.0;
  Vec x;
  Vec h;
};

struct HoelderRow {
  double r = 1.0;
  double h_norm = 0.0;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct HoelderReport {
  double gamma = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double empirical_rho = 0.0;
  double constant_ratio = 0.0;
  double median_ratio = 0.0;
  bool pass = false;
  std::vector<HoelderRow> rows;
};

/// r in {1,2,4,8} x |h| in {2^-2..2^-7} x `pairs` random (x in the unit
/// ball, unit direction) pairs from the seed.
std::vector<HoelderProbe> default_probes(int dim, int pairs = 16, std::uint64_t seed = 0x5EED);

/// Evaluates |P_t u(rx+rh) - P_t u(rx)| against M r^gamma |h|^rho with
/// rho = (beta - gamma)/(d + beta). PASS when max/median ratio < ratio_limit.
HoelderReport hoelder_estimate(const DensityTable& table, const GrowthFunction& u, double beta,
                               const std::vector<HoelderProbe>& probes,
                               double ratio_limit = 50.0);

// ---------------------------------------------------------------------------
// Iterated differences.

/// Delta_h^k u(x) by nested differencing (2^k evaluations).
template <typename Scalar, typename F>
Scalar iterated_difference_nested(const F& u, const Vec& x, const Vec& h, int k) {
  if (k == 0) return static_cast<Scalar>(u(x));
  return iterated_difference_nested<Scalar>(u, x + h, h, k - 1) -
         iterated_difference_nested<Scalar>(u, x, h, k - 1);
}

/// Delta_h^k u(x) = sum_j (-1)^{k-j} C(k,j) u(x + j h).
template <typename Scalar, typename F>
Scalar iterated_difference_binomial(const F& u, const Vec& x, const Vec& h, int k) {
  Scalar acc = Scalar(0);
  double c = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    acc += static_cast<Scalar>(sign * c) * static_cast<Scalar>(u(x + j * h));
    c = c * (k - j) / (j + 1);
  }
  return acc;
}

/// Delta_h^k on lattice samples with an integer step; entries whose shifts
/// leave the window are flagged invalid.
struct DifferenceField {
  CVec values;
  std::vector<bool> valid;
};
DifferenceField iterated_difference(const GridFunction& u, const Index3& step, int k);
/// Single lattice point; throws WindowError when a shift leaves the grid.
Complex iterated_difference(const GridFunction& u, const Index3& step, int k, const Index3& at);

// ---------------------------------------------------------------------------
// Polynomial fit.

struct PolynomialFit {
  int degree = 0;
  /// Real parts of the coefficients, in the input coordinates.
  Eigen::VectorXd coefficients;
  std::vector<std::vector<int>> monomials;
  double relative_residual = 0.0;
};

/// Exponent vectors of all monomials of total degree <= degree in d variables.
std::vector<std::vector<int>> monomial_basis(int dim, int degree);

/// Least-squares fit of samples by a polynomial of the given degree
/// (column-pivoted QR).
template <typename Scalar = double>
PolynomialFit fit_polynomial(const std::vector<Vec>& xs,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& ys, int degree) {
  const int d = xs.empty() ? 1 : static_cast<int>(xs.front().size());
  PolynomialFit fit;
  fit.degree = degree;
  fit.monomials = monomial_basis(d, degree);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A(xs.size(), fit.monomials.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t m = 0; m < fit.monomials.size(); ++m) {
      Scalar v = Scalar(1);
      for (int a = 0; a < d; ++a) {
        for (int p = 0; p < fit.monomials[m][a]; ++p) v *= static_cast<Scalar>(xs[i][a]);
      }
      A(i, m) = v;
    }
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c = A.colPivHouseholderQr().solve(ys);
  const double norm = ys.norm();
  const double res = (A * c - ys).norm();
  fit.relative_residual = norm > 0.0 ? res / norm : res;
  fit.coefficients = c.real().template cast<double>();
  return fit;
}

// ---------------------------------------------------------------------------
// Classification.

/// Largest gamma + 2^-j (j = 0..8) with E|X|^beta finite; throws GrowthError
/// if none is.
double default_beta(const SymbolSpec& spec, double gamma);

enum class VerdictKind { POLYNOMIAL, CONSTANT, NOT_HARMONIC, INCONCLUSIVE };
std::string to_string(VerdictKind k);

struct ClassificationVerdict {
  VerdictKind kind = VerdictKind::INCONCLUSIVE;
  int degree = -1;
  std::map<std::string, double> residuals;
  std::vector<std::string> notes;
  /// sup_{r<|x|<=2r} |Delta_h^{k+1} u| per sweep radius.
  std::vector<double> sweep_radii;
  std::vector<double> sweep_values;
  std::vector<double> fit_residuals;
};

struct ClassifyOptions {
  double t = 1.0;
  /// 0: the largest gamma + 2^-j (j = 0..8) with a finite moment.
  double beta = 0.0;
  double eps = 0.1;
  int grid_points = 0;  // 0: 4096, 128, 64 per axis for d = 1, 2, 3
  double grid_spacing = 0.0;  // 0: 0.1, 0.15, 0.3 for d = 1, 2, 3
  double window = 0.0;  // 0: 8 in d <= 2, 4 in d=3
  double window_step = 0.0;  // 0: 0.5, 1, 2 for d = 1, 2, 3
  double fixed_point_tol = 1e-5;
  double constancy_tol = 1e-6;
  double fit_tol = 1e-5;
  double slope_band = 0.1;
};

/// mollify -> fixed point at t -> (gamma = 0: constancy) or
/// (Delta_h^{k+1} sweep -> least-squares polynomial fit).
ClassificationVerdict classify_harmonic(const GrowthFunction& u, const SymbolSpec& spec,
                                        const ClassifyOptions& opts = {});

}  // namespace levy
