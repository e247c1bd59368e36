#include "levy/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "levy/errors.hpp"
#include "levy/parallel.hpp"

namespace levy {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, int points_per_axis, double spacing)
    : dim_(dim), n_(points_per_axis), h_(spacing) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
    throw std::invalid_argument("points per axis must be a power of two >= 8");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("grid spacing must be positive");
  }
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n_);
}

double Grid::cell_volume() const { return std::pow(h_, dim_); }

Index3 Grid::unravel(std::size_t flat) const {
  Index3 idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::ravel(const Index3& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + idx[a];
  return flat;
}

Vec Grid::point(std::size_t flat) const {
  const Index3 idx = unravel(flat);
  Vec x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

Vec Grid::frequency(std::size_t flat) const {
  const Index3 idx = unravel(flat);
  Vec xi(dim_);
  const double dk = 2.0 * kPi / period();
  for (int a = 0; a < dim_; ++a) xi[a] = dk * signed_index(idx[a]);
  return xi;
}

void fft(CVec& data, int dim, int n, bool inverse) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  if (static_cast<std::size_t>(data.size()) != total) {
    throw std::invalid_argument("fft: data size does not match the lattice");
  }
  for (int axis = 0; axis < dim; ++axis) {
    std::size_t stride = 1;
    for (int a = axis + 1; a < dim; ++a) stride *= static_cast<std::size_t>(n);
    const std::size_t lines = total / n;
    parallel_for(lines, [&](std::size_t begin, std::size_t end) {
      Eigen::FFT<double> engine;
      engine.SetFlag(Eigen::FFT<double>::Unscaled);
      std::vector<Complex> in(n), out(n);
      for (std::size_t line = begin; line < end; ++line) {
        const std::size_t outer = line / stride;
        const std::size_t inner = line % stride;
        const std::size_t base = outer * stride * n + inner;
        for (int k = 0; k < n; ++k) in[k] = data[base + k * stride];
        if (inverse) {
          engine.inv(out, in);
        } else {
          engine.fwd(out, in);
        }
        for (int k = 0; k < n; ++k) data[base + k * stride] = out[k];
      }
    });
  }
}

GridFunction::GridFunction(Grid grid, CVec values,
                           std::optional<Envelope> envelope)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
    throw std::invalid_argument("grid function has the wrong number of samples");
  }
  if (!values_.allFinite()) throw std::invalid_argument("grid function samples must be finite");
  if (envelope) {
    if (!(envelope->M >= 0.0) || !(envelope->gamma >= 0.0)) {
      throw EnvelopeError("envelope constants must be non-negative");
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const double r = grid_.point(i).norm();
      const double bound = envelope->bound(r);
      if (std::abs(values_[i]) > bound * (1.0 + 1e-12) + 1e-300) {
        throw EnvelopeError("sample exceeds the declared growth envelope");
      }
    }
    envelope_ = *envelope;
  } else {
    envelope_ = Envelope{values_.cwiseAbs().maxCoeff(), 0.0};
  }
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<Complex(const Vec&)>& f,
                                  std::optional<Envelope> envelope) {
  CVec v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.point(i));
  return GridFunction(grid, std::move(v), envelope);
}

double GridFunction::sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

double GridFunction::l2_norm() const {
  return values_.norm() * std::sqrt(grid_.cell_volume());
}

bool GridFunction::is_real(double tol) const {
  return values_.imag().cwiseAbs().maxCoeff() <= tol;
}

double GridFunction::boundary_ratio() const {
  const double top = sup_norm();
  if (top == 0.0) return 0.0;
  const int n = grid_.points_per_axis();
  const int band = std::max(1, n / 16);
  double edge = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const Index3 idx = grid_.unravel(i);
    bool in_band = false;
    for (int a = 0; a < grid_.dimension(); ++a) {
      if (idx[a] < band || idx[a] >= n - band) in_band = true;
    }
    if (in_band) edge = std::max(edge, std::abs(values_[i]));
  }
  return edge / top;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner_product: grids differ");
  return f.values().dot(g.values()) * f.grid().cell_volume();
}

CVec apply_multiplier(const CVec& values, const Grid& grid,
                      const std::function<Complex(const Vec&)>& multiplier) {
  CVec data = values;
  fft(data, grid.dimension(), grid.points_per_axis(), false);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) data[i] *= multiplier(grid.frequency(i));
  });
  fft(data, grid.dimension(), grid.points_per_axis(), true);
  data /= static_cast<double>(grid.size());
  return data;
}

}  // namespace levy
