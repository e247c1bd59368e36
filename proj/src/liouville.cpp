#include "levy/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "levy/errors.hpp"
#include "levy/generator.hpp"
#include "levy/levy_measure.hpp"
#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

struct Node {
  Vec z;
  double w;
};

// Product rule for int phi(z) f(z) dz on the unit ball, weights summing to 1.
const std::vector<Node>& mollifier_nodes(int d) {
  static std::once_flag flags[3];
  static std::vector<Node> rules[3];
  std::call_once(flags[d - 1], [d] {
    std::vector<Node>& out = rules[d - 1];
    const GaussRule& g = gauss_legendre(16);
    if (d == 1) {
      const int panels = 8;
      for (int p = 0; p < panels; ++p) {
        const double a = -1.0 + 2.0 * p / panels, b = a + 2.0 / panels;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          const double z = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i];
          const double w = 0.5 * (b - a) * g.weights[i] * std::pow(1.0 - z * z, 4);
          out.push_back({Vec::Constant(1, z), w});
        }
      }
    } else {
      const GaussRule& gr = gauss_legendre(24);
      const std::vector<Direction> dirs = angular_rule(d, d == 2 ? 32 : 16);
      for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double r = 0.5 + 0.5 * gr.nodes[i];
        const double wr = 0.5 * gr.weights[i] * std::pow(r, d - 1) * std::pow(1.0 - r * r, 4);
        for (const Direction& dir : dirs) out.push_back({r * dir.unit, wr * dir.weight});
      }
    }
    double total = 0.0;
    for (const Node& n : out) total += n.w;
    for (Node& n : out) n.w /= total;
  });
  return rules[d - 1];
}

std::vector<Vec> window_points(int d, double window, double step) {
  const int m = static_cast<int>(std::floor(window / step + 1e-9));
  const int side = 2 * m + 1;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= side;
  std::vector<Vec> xs;
  xs.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    Vec x(d);
    std::size_t rest = i;
    for (int a = d - 1; a >= 0; --a) {
      x[a] = (static_cast<int>(rest % side) - m) * step;
      rest /= side;
    }
    xs.push_back(x);
  }
  return xs;
}

}  // namespace

double default_beta(const SymbolSpec& spec, double gamma) {
  for (int j = 0; j <= 8; ++j) {
    const double b = gamma + std::ldexp(1.0, -j);
    if (spec.moment_finite(b)) return b;
  }
  std::ostringstream os;
  os << "no moment order above gamma = " << gamma << " is finite for " << to_string(spec.family());
  throw GrowthError(os.str());
}

double mollifier_mass(int dim) {
  return std::pow(kPi, 0.5 * dim) * 24.0 / std::tgamma(0.5 * dim + 5.0);
}

double mollifier(const Vec& x) {
  const double r2 = x.squaredNorm();
  if (r2 >= 1.0) return 0.0;
  return std::pow(1.0 - r2, 4) / mollifier_mass(static_cast<int>(x.size()));
}

double mollifier_transform(int dim, double rho) {
  const double nu = 0.5 * dim + 4.0;
  // Gamma(5) 2^4 (2 pi)^{d/2} J_nu(rho) / rho^nu, divided by the mass.
  if (rho < 1e-4) {
    return 1.0 - rho * rho / (4.0 * (nu + 1.0));
  }
  const double raw = 384.0 * std::pow(2.0 * kPi, 0.5 * dim) * std::cyl_bessel_j(nu, rho) /
                     std::pow(rho, nu);
  return raw / mollifier_mass(dim);
}

double mollifier_moment(int dim, double gamma) {
  return beta_fn(0.5 * (gamma + dim), 5.0) / beta_fn(0.5 * dim, 5.0);
}

GrowthFunction mollify(const GrowthFunction& u, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier radius must be positive");
  const int d = u.dimension;
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  const std::vector<Node>& nodes = mollifier_nodes(d);
  GrowthFunction out;
  out.dimension = d;
  out.name = u.name + "_mollified";
  const double g = u.envelope.gamma;
  out.envelope = Envelope{u.envelope.M * std::pow(2.0, g) *
                              (1.0 + std::pow(eps, g) * mollifier_moment(d, g)),
                          g};
  auto f = u.eval;
  out.eval = [f, eps, &nodes](const Vec& x) {
    Complex acc = 0.0;
    for (const Node& n : nodes) acc += n.w * f(x - eps * n.z);
    return acc;
  };
  return out;
}

GridFunction mollify(const GridFunction& u, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier radius must be positive");
  const Grid& grid = u.grid();
  const int d = grid.dimension();
  const CVec v = apply_multiplier(u.values(), grid, [&](const Vec& xi) {
    return Complex(mollifier_transform(d, eps * xi.norm()), 0.0);
  });
  const Envelope& e = u.envelope();
  const Envelope env{e.M * std::pow(2.0, e.gamma) *
                         (1.0 + std::pow(eps, e.gamma) * mollifier_moment(d, e.gamma)),
                     e.gamma};
  return GridFunction(grid, v, env);
}

double gaussian_cb2_norm(double sigma) {
  return 1.0 + std::exp(-0.5) / sigma + 1.0 / (sigma * sigma);
}

std::vector<SmoothFunction> default_test_family(int dim) {
  std::vector<SmoothFunction> tests;
  const std::vector<Vec> centers = window_points(dim, 4.0, 2.0);
  for (double sigma : {0.5, 1.0}) {
    for (const Vec& c : centers) tests.push_back(SmoothFunction::gaussian_bump(c, sigma));
  }
  return tests;
}

WeakResidualReport weak_residual(const GridFunction& u, const SymbolSpec& spec, double beta,
                                 const std::vector<SmoothFunction>& tests) {
  const double gamma = u.envelope().gamma;
  if (!(gamma < beta)) {
    std::ostringstream os;
    os << "growth exponent " << gamma << " is not below beta = " << beta;
    throw GrowthError(os.str());
  }
  const Grid& grid = u.grid();
  if (grid.dimension() != spec.dimension()) {
    throw std::invalid_argument("grid and symbol dimensions differ");
  }
  WeakResidualReport rep;
  const double dv = grid.cell_volume();
  for (const SmoothFunction& phi : tests) {
    const GridFunction sampled = GridFunction::sample(
        grid, [&](const Vec& x) { return Complex(phi(x), 0.0); });
    const SpectralResult adj = apply_adjoint(spec, sampled);
    std::vector<double> re(grid.size()), im(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Complex p = u[i] * adj.value[i];
      re[i] = p.real();
      im[i] = p.imag();
    }
    const double integral = std::abs(Complex(pairwise_sum(re), pairwise_sum(im))) * dv;

    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec x = grid.point(i);
      if (phi.support_radius && (x - phi.center).norm() > *phi.support_radius) continue;
      s0 = std::max(s0, std::abs(phi(x)));
      s1 = std::max(s1, phi.grad(x).norm());
      const Eigen::SelfAdjointEigenSolver<Mat> es(phi.hess(x), Eigen::EigenvaluesOnly);
      s2 = std::max(s2, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    const double norm = s0 + s1 + s2;
    rep.integrals.push_back(integral);
    rep.norms.push_back(norm);
    rep.centers.push_back(phi.center);
    rep.widths.push_back(phi.scale);
    if (norm > 0.0) rep.residual = std::max(rep.residual, integral / norm);
  }
  return rep;
}

FixedPointReport fixed_point_residual(const GrowthFunction& u, const DensityTable& table,
                                      const std::vector<Vec>& xs, double beta) {
  const SemigroupEvaluator P(table, u, beta);
  std::vector<double> diff(xs.size()), bound(xs.size()), mag(xs.size());
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Complex ux = u(xs[i]);
      diff[i] = std::abs(P(xs[i]) - ux);
      bound[i] = P.bound(xs[i]);
      mag[i] = std::abs(ux);
    }
  });
  FixedPointReport rep;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (diff[i] > rep.residual || rep.argmax.size() == 0) {
      rep.residual = diff[i];
      rep.argmax = xs[i];
    }
    rep.truncation_bound = std::max(rep.truncation_bound, bound[i]);
    rep.sup_u = std::max(rep.sup_u, mag[i]);
  }
  rep.tol = 1e-5 * (1.0 + rep.sup_u);
  rep.fixed_point = rep.residual < rep.tol;
  return rep;
}

std::vector<HoelderProbe> default_probes(int dim, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::pair<Vec, Vec>> xh;
  for (int p = 0; p < pairs; ++p) {
    Vec x(dim);
    do {
      for (int a = 0; a < dim; ++a) x[a] = unif(rng);
    } while (x.norm() > 1.0);
    Vec e(dim);
    do {
      for (int a = 0; a < dim; ++a) e[a] = normal(rng);
    } while (e.norm() < 1e-12);
    xh.emplace_back(x, e / e.norm());
  }
  std::vector<HoelderProbe> probes;
  for (const auto& [x, e] : xh) {
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
      for (int j = 2; j <= 7; ++j) probes.push_back({r, x, std::ldexp(1.0, -j) * e});
    }
  }
  return probes;
}

HoelderReport hoelder_estimate(const DensityTable& table, const GrowthFunction& u, double beta,
                               const std::vector<HoelderProbe>& probes, double ratio_limit) {
  const int d = table.grid.dimension();
  HoelderReport rep;
  rep.gamma = u.envelope.gamma;
  rep.beta = beta;
  rep.rho = (beta - rep.gamma) / (d + beta);
  const SemigroupEvaluator P(table, u, beta);
  const double M = u.envelope.M;

  rep.rows.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const HoelderProbe& p = probes[i];
      HoelderRow& row = rep.rows[i];
      row.r = p.r;
      row.h_norm = p.h.norm();
      row.lhs = std::abs(P(p.r * (p.x + p.h)) - P(p.r * p.x));
      row.bound = M * std::pow(p.r, rep.gamma) * std::pow(row.h_norm, rep.rho);
      row.ratio = row.lhs / row.bound;
    }
  });

  std::vector<double> ratios;
  for (const HoelderRow& row : rep.rows) {
    if (row.lhs > 0.0) ratios.push_back(row.ratio);
  }
  if (ratios.empty()) {
    rep.pass = true;
    rep.empirical_rho = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.constant_ratio = *std::max_element(ratios.begin(), ratios.end());
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  rep.median_ratio = ratios[ratios.size() / 2];
  rep.pass = rep.constant_ratio < ratio_limit * rep.median_ratio;

  // Slope of log lhs against log |h| with one intercept per (x, direction, r)
  // series: consecutive probes sharing x and r.
  double sxy = 0.0, sxx = 0.0;
  std::size_t i = 0;
  while (i < probes.size()) {
    std::size_t j = i;
    while (j < probes.size() && probes[j].r == probes[i].r && probes[j].x == probes[i].x &&
           (probes[j].h.normalized() - probes[i].h.normalized()).norm() < 1e-12) {
      ++j;
    }
    bool ok = j - i >= 2;
    for (std::size_t m = i; m < j && ok; ++m) ok = rep.rows[m].lhs > 0.0;
    if (ok) {
      double mx = 0.0, my = 0.0;
      for (std::size_t m = i; m < j; ++m) {
        mx += std::log(rep.rows[m].h_norm);
        my += std::log(rep.rows[m].lhs);
      }
      mx /= (j - i);
      my /= (j - i);
      for (std::size_t m = i; m < j; ++m) {
        const double lx = std::log(rep.rows[m].h_norm) - mx;
        sxy += lx * (std::log(rep.rows[m].lhs) - my);
        sxx += lx * lx;
      }
    }
    i = j;
  }
  rep.empirical_rho = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

DifferenceField iterated_difference(const GridFunction& u, const Index3& step, int k) {
  if (k < 0) throw std::invalid_argument("difference order must be non-negative");
  const Grid& g = u.grid();
  const int n = g.points_per_axis();
  DifferenceField out;
  out.values = CVec::Zero(g.size());
  out.valid.assign(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 idx = g.unravel(i);
    bool ok = true;
    for (int a = 0; a < g.dimension(); ++a) {
      const int last = idx[a] + k * step[a];
      ok = ok && last >= 0 && last < n;
    }
    if (!ok) continue;
    out.valid[i] = true;
    out.values[i] = iterated_difference(u, step, k, idx);
  }
  return out;
}

Complex iterated_difference(const GridFunction& u, const Index3& step, int k, const Index3& at) {
  const Grid& g = u.grid();
  const int n = g.points_per_axis();
  Complex acc = 0.0;
  double c = 1.0;
  for (int j = 0; j <= k; ++j) {
    Index3 idx{0, 0, 0};
    for (int a = 0; a < g.dimension(); ++a) {
      idx[a] = at[a] + j * step[a];
      if (idx[a] < 0 || idx[a] >= n) {
        std::ostringstream os;
        os << "shift " << j << " of the order-" << k << " difference leaves the lattice window";
        throw WindowError(os.str());
      }
    }
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * c * u[g.ravel(idx)];
    c = c * (k - j) / (j + 1);
  }
  return acc;
}

std::vector<std::vector<int>> monomial_basis(int dim, int degree) {
  std::vector<std::vector<int>> out;
  for (int total = 0; total <= degree; ++total) {
    std::vector<int> p(dim, 0);
    // Compositions of `total` into dim parts, lexicographically descending.
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == dim - 1) {
        p[axis] = left;
        out.push_back(p);
        return;
      }
      for (int v = left; v >= 0; --v) {
        p[axis] = v;
        rec(axis + 1, left - v);
      }
    };
    rec(0, total);
  }
  return out;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::POLYNOMIAL: return "POLYNOMIAL";
    case VerdictKind::CONSTANT: return "CONSTANT";
    case VerdictKind::NOT_HARMONIC: return "NOT_HARMONIC";
    case VerdictKind::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

ClassificationVerdict classify_harmonic(const GrowthFunction& u, const SymbolSpec& spec,
                                        const ClassifyOptions& opts) {
  const int d = u.dimension;
  if (d != spec.dimension()) throw std::invalid_argument("function and symbol dimensions differ");
  const double gamma = u.envelope.gamma;
  const double beta = opts.beta > 0.0 ? opts.beta : default_beta(spec, gamma);
  if (!(gamma < beta)) {
    std::ostringstream os;
    os << "growth exponent " << gamma << " is not below beta = " << beta;
    throw GrowthError(os.str());
  }
  if (!spec.moment_finite(beta)) {
    std::ostringstream os;
    os << "E|X_t|^" << beta << " is infinite for " << to_string(spec.family());
    throw GrowthError(os.str());
  }

  ClassificationVerdict v;
  v.residuals["beta"] = beta;
  v.notes.push_back("a.e. identities are tested pointwise on window points");
  const int n = opts.grid_points > 0 ? opts.grid_points : (d == 1 ? 4096 : d == 2 ? 128 : 64);
  const double h = opts.grid_spacing > 0.0 ? opts.grid_spacing
                                           : (d == 1 ? 0.1 : d == 2 ? 0.15 : 0.3);
  const double window = opts.window > 0.0 ? opts.window : (d == 3 ? 4.0 : 8.0);
  const double step = opts.window_step > 0.0 ? opts.window_step
                                             : (d == 1 ? 0.5 : d == 2 ? 1.0 : 2.0);
  DensityOptions dopts;
  dopts.mollifier_eps = opts.eps;
  dopts.moment_orders = {beta};
  const DensityTable table = transition_density(spec, opts.t, Grid(d, n, h), dopts);

  const GrowthFunction ue = mollify(u, opts.eps);
  const std::vector<Vec> xs = window_points(d, window, step);

  // P_t u_eps is the table (law of X_t + eps Z) correlated against u itself.
  const SemigroupEvaluator P(table, u, beta);
  std::vector<Complex> pu(xs.size()), uex(xs.size());
  std::vector<double> bounds(xs.size());
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      pu[i] = P(xs[i]);
      uex[i] = ue(xs[i]);
      bounds[i] = P.bound(xs[i]);
    }
  });
  double fp = 0.0, sup_u = 0.0, tb = 0.0;
  Vec arg = xs.front();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::abs(pu[i] - uex[i]);
    if (r > fp) {
      fp = r;
      arg = xs[i];
    }
    sup_u = std::max(sup_u, std::abs(uex[i]));
    tb = std::max(tb, bounds[i]);
  }
  // Zoom twice around the worst window point.
  const int sub = d == 3 ? 4 : 8;
  double cell = step;
  for (int level = 0; level < 2 && fp > 0.0; ++level) {
    cell /= sub;
    std::vector<Vec> local = window_points(d, sub * cell, cell);
    for (Vec& x : local) x += arg;
    std::vector<double> res(local.size());
    parallel_for(local.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) res[i] = std::abs(P(local[i]) - ue(local[i]));
    });
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (res[i] > fp) {
        fp = res[i];
        arg = local[i];
      }
    }
  }
  const double tol_fp = opts.fixed_point_tol * (1.0 + sup_u);
  v.residuals["fixed_point"] = fp;
  v.residuals["fixed_point_tol"] = tol_fp;
  v.residuals["truncation_bound"] = tb;
  if (!(fp < tol_fp)) {
    v.kind = VerdictKind::NOT_HARMONIC;
    v.notes.push_back("P_t u_eps differs from u_eps on the window");
    return v;
  }

  if (gamma == 0.0) {
    double variation = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      variation = std::max(variation, std::abs(pu[i] - pu[0]));
    }
    const double tol = opts.constancy_tol * (1.0 + sup_u);
    v.residuals["variation"] = variation;
    v.residuals["variation_tol"] = tol;
    if (variation < tol) {
      v.kind = VerdictKind::CONSTANT;
      v.degree = 0;
    } else {
      v.kind = VerdictKind::INCONCLUSIVE;
      v.notes.push_back("bounded fixed point is not constant; the symbol may vanish off 0");
    }
    return v;
  }

  const double rho = (beta - gamma) / (d + beta);
  int k = 0;
  while (gamma - (k + 1) * rho >= -1e-12) ++k;
  k = std::max(k, 1);
  v.residuals["rho"] = rho;
  v.residuals["k"] = k;

  const std::vector<Direction> dirs = angular_rule(d, 8);
  bool vanish = true;
  double scale = 0.0;
  for (double r : {1.0, 2.0, 4.0, 8.0}) {
    std::vector<Vec> pts;
    for (int i = 0; i < 4; ++i) {
      const double rad = r * (1.0 + (i + 0.5) / 4.0);
      if (d == 1) {
        pts.push_back(Vec::Constant(1, rad));
        pts.push_back(Vec::Constant(1, -rad));
      } else {
        for (const Direction& dir : dirs) pts.push_back(rad * dir.unit);
      }
    }
    std::vector<double> diffs(pts.size() * d), mags(pts.size() * d);
    parallel_for(pts.size() * d, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Vec hv = 0.5 * Vec::Unit(d, static_cast<int>(i % d));
        const Vec& x = pts[i / d];
        diffs[i] = std::abs(iterated_difference_binomial<Complex>(ue, x, hv, k + 1));
        double m = 0.0;
        for (int j = 0; j <= k + 1; ++j) m = std::max(m, std::abs(ue(x + j * hv)));
        mags[i] = m;
      }
    });
    double s = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      s = std::max(s, diffs[i]);
      scale = std::max(scale, mags[i]);
    }
    v.sweep_radii.push_back(r);
    v.sweep_values.push_back(s);
  }
  const double tol_diff = 1e-9 * std::ldexp(1.0, k + 1) * std::max(scale, 1.0);
  v.residuals["difference_tol"] = tol_diff;
  double sup_diff = 0.0;
  for (double s : v.sweep_values) sup_diff = std::max(sup_diff, s);
  v.residuals["difference"] = sup_diff;
  for (double s : v.sweep_values) vanish = vanish && s <= tol_diff;

  if (!vanish) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t i = 0; i < v.sweep_values.size(); ++i) {
      if (!(v.sweep_values[i] > 0.0)) continue;
      const double lx = std::log(v.sweep_radii[i]), ly = std::log(v.sweep_values[i]);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; m += 1;
    }
    const double slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    const double predicted = gamma - (k + 1) * rho;
    v.residuals["difference_slope"] = slope;
    v.residuals["difference_slope_predicted"] = predicted;
    if (slope > predicted + opts.slope_band) {
      v.kind = VerdictKind::NOT_HARMONIC;
      v.notes.push_back("iterated differences grow faster than the harmonic bound allows");
    } else {
      v.kind = VerdictKind::INCONCLUSIVE;
      v.notes.push_back("iterated differences decay but do not vanish on the sweep");
    }
    return v;
  }

  // Least-squares fit on coordinates scaled to the unit box.
  const int D = static_cast<int>(std::floor(gamma + 1e-12));
  std::vector<Vec> scaled;
  Eigen::VectorXcd ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    scaled.push_back(xs[i] / window);
    ys[i] = uex[i];
  }
  for (int deg = 0; deg <= D; ++deg) {
    v.fit_residuals.push_back(fit_polynomial<Complex>(scaled, ys, deg).relative_residual);
  }
  const double res_D = v.fit_residuals.back();
  v.residuals["fit"] = res_D;
  if (!(res_D < opts.fit_tol)) {
    v.kind = VerdictKind::INCONCLUSIVE;
    v.notes.push_back("differences vanish but no polynomial of degree <= gamma fits");
    return v;
  }
  const double accept = std::max(2.0 * res_D, 1e-10);
  int deg = 0;
  while (v.fit_residuals[deg] > accept) ++deg;
  v.degree = deg;
  v.kind = deg == 0 ? VerdictKind::CONSTANT : VerdictKind::POLYNOMIAL;
  return v;
}

}  // namespace levy
