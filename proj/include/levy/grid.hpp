#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levy/types.hpp"

namespace levy {

using CVec = Eigen::VectorXcd;
using Index3 = std::array<int, 3>;

/// Uniform periodic lattice x_j = (j - N/2) h, j in [0, N)^d, with period
/// L = N h and lattice frequencies 2 pi k / L, k in [-N/2, N/2). Flat indices
/// are row-major with axis 0 slowest.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double spacing);

  int dimension() const { return dim_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return h_; }
  double period() const { return n_ * h_; }
  /// h^d.
  double cell_volume() const;
  std::size_t size() const { return size_; }

  Index3 unravel(std::size_t flat) const;
  std::size_t ravel(const Index3& idx) const;

  double coordinate(int j) const { return (j - n_ / 2) * h_; }
  Vec point(std::size_t flat) const;
  /// Signed frequency index of FFT slot k: k for k < N/2, else k - N.
  int signed_index(int k) const { return k < n_ / 2 ? k : k - n_; }
  /// Lattice frequency at FFT-ordered flat index.
  Vec frequency(std::size_t flat) const;
  double max_frequency() const { return kPi / h_; }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && h_ == o.h_;
  }

 private:
  int dim_;
  int n_;
  double h_;
  std::size_t size_;
};

/// In-place unscaled d-dimensional DFT along every axis.
/// forward: sum_j f_j e^{-2 pi i jk/N}; inverse: sum_k F_k e^{+2 pi i jk/N}.
void fft(CVec& data, int dim, int n, bool inverse);

/// Lattice samples of a (complex) function with a growth envelope
/// |u(x)| <= M (1 + |x|^gamma) verified on every sample.
class GridFunction {
 public:
  GridFunction(Grid grid, CVec values, std::optional<Envelope> envelope = {});

  static GridFunction sample(const Grid& grid,
                             const std::function<Complex(const Vec&)>& f,
                             std::optional<Envelope> envelope = {});

  const Grid& grid() const { return grid_; }
  const CVec& values() const { return values_; }
  const Envelope& envelope() const { return envelope_; }
  Complex operator[](std::size_t flat) const { return values_[flat]; }
  double sup_norm() const;
  /// Euclidean norm of the samples times h^{d/2}.
  double l2_norm() const;
  bool is_real(double tol = 0.0) const;
  /// max |f| over the outer boundary band (outer L/16 of each axis)
  /// divided by max |f|; 0 for the zero function.
  double boundary_ratio() const;

 private:
  Grid grid_;
  CVec values_;
  Envelope envelope_;
};

/// Lattice inner product h^d sum conj(f) g.
Complex inner_product(const GridFunction& f, const GridFunction& g);

/// Multiplies the DFT of f by m(xi_k) and transforms back.
CVec apply_multiplier(const CVec& values, const Grid& grid,
                      const std::function<Complex(const Vec&)>& multiplier);

}  // namespace levy
