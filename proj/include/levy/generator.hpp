#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levy/functions.hpp"
#include "levy/grid.hpp"
#include "levy/symbols.hpp"

namespace levy {

/// Output of a spectral application together with its diagnostics.
struct SpectralResult {
  GridFunction value;
  /// max |Im| of the output over max |f|; only meaningful for real f and
  /// symmetric psi, where it must stay below 1e-8.
  double imaginary_residue = 0.0;
  /// Boundary-band ratio of the input (see GridFunction::boundary_ratio).
  double boundary_ratio = 0.0;
  /// Input not negligible near the window edge: periodization error is
  /// not controlled.
  bool alias_warning = false;
};

/// Af = F^{-1}[-psi F f] on the periodic lattice.
SpectralResult apply_generator_spectral(const SymbolSpec& spec, const GridFunction& f);

/// A*f = F^{-1}[-conj(psi) F f].
SpectralResult apply_adjoint(const SymbolSpec& spec, const GridFunction& f);

struct DirectOptions {
  /// Below this radius the jump integrand is replaced by its Taylor term.
  double taylor_radius = 1e-5;
  JumpQuadrature quadrature;
};

/// Af(x) = b.grad f + tr(Q hess f)/2 + int (f(x+y) - f(x) - y.grad f 1_{|y|<1}) nu(dy)
/// at every point of xs, by compensated shell quadrature.
std::vector<double> apply_generator_direct(const LevyTriplet& triplet,
                                           const SmoothFunction& f,
                                           const std::vector<Vec>& xs,
                                           const DirectOptions& opts = {});

struct DecayNormReport {
  double beta = 0.0;
  double window = 0.0;
  /// int_{|x| <= R_w} (1 + |x|^beta) |Af| dx.
  double partial = 0.0;
  /// Same integral over |x| <= R_w / 2.
  double half_window_partial = 0.0;
  double relative_change = 0.0;
  /// Log-log slope of dyadic annulus sums against radius; -inf when the
  /// outer annuli are at machine zero.
  double tail_slope = 0.0;
  std::vector<double> annulus_radii;
  std::vector<double> annulus_sums;
  double tail_estimate = 0.0;
  /// "finite" or "diverges".
  std::string verdict;
  /// Moment finiteness of nu at beta, when a triplet was supplied.
  std::optional<bool> moment_finite;
  /// verdict agrees with the moment test.
  std::optional<bool> consistent;
};

/// Weighted L1 norm of Af on the lattice ball of radius R_w.
DecayNormReport weighted_decay_norm(const GridFunction& Af, double beta, double window,
                                    const LevyMeasure* nu = nullptr);

/// Same for a callable Af sampled on the lattice hZ^d inside the ball.
DecayNormReport weighted_decay_norm(const std::function<double(const Vec&)>& Af, int dim,
                                    double beta, double window, double h,
                                    const LevyMeasure* nu = nullptr);

}  // namespace levy
