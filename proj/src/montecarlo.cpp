#include "levy/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "levy/errors.hpp"
#include "levy/generator.hpp"
#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

Mat matrix_sqrt(const Mat& Q) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(Q);
  const Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

void gaussian_vector(CounterRng& rng, double scale, Eigen::Ref<Eigen::RowVectorXd> out) {
  for (Eigen::Index a = 0; a < out.size(); ++a) out[a] = scale * rng.normal();
}

// Inverse Gaussian with mean mu and shape lambda (Michael-Schucany-Haas).
double sample_inverse_gaussian(double mu, double lambda, CounterRng& rng) {
  const double nu = rng.normal();
  const double y = nu * nu;
  const double x = mu + mu * mu * y / (2.0 * lambda) -
                   mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  return rng.uniform() <= mu / (mu + x) ? x : mu * mu / x;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t batch, std::uint64_t sub_batch)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ batch) ^ sub_batch)) {}

CounterRng::result_type CounterRng::operator()() {
  return splitmix64(key_ + (counter_++) * kGolden);
}

double CounterRng::uniform() {
  // 53 random bits, shifted off zero.
  return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double CounterRng::normal() {
  // Box-Muller without caching the second value, so each call is stateless
  // apart from the counter.
  const double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double CounterRng::exponential() { return -std::log(uniform()); }

double sample_positive_stable(double a, CounterRng& rng) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("stability index must be in (0, 1]");
  if (a == 1.0) return 1.0;
  const double u = kPi * rng.uniform();
  const double e = rng.exponential();
  const double k = std::pow(std::sin(a * u), a / (1.0 - a)) * std::sin((1.0 - a) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - a));
  return std::pow(k / e, (1.0 - a) / a);
}

double sample_symmetric_stable(double alpha, CounterRng& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must be in (0, 2]");
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_subordinator(const Subordinator& s, double t, CounterRng& rng) {
  switch (s.kind) {
    case Subordinator::Kind::deterministic:
      return s.c * t;
    case Subordinator::Kind::stable:
      // E e^{-lambda S_t} = e^{-t (2 lambda)^kappa}.
      return 2.0 * std::pow(t, 1.0 / s.kappa) * sample_positive_stable(s.kappa, rng);
    case Subordinator::Kind::inverse_gaussian: {
      if (s.m == 0.0) {
        const double z = rng.normal();
        return t * t / (z * z);
      }
      return sample_inverse_gaussian(t / s.m, t * t, rng);
    }
    case Subordinator::Kind::gamma: {
      std::gamma_distribution<double> g(s.a * t, 1.0 / s.b);
      return g(rng);
    }
  }
  return 0.0;
}

SampleBatch sample_increments(const SymbolSpec& spec, double t, std::size_t n,
                              std::uint64_t seed, std::uint64_t batch) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const Family fam = spec.family();
  if (fam == Family::custom || fam == Family::tempered_stable) {
    throw UnsupportedFamily("no exact sampler for " + to_string(fam));
  }
  const int d = spec.dimension();
  SampleBatch out;
  out.spec = std::make_shared<const SymbolSpec>(spec);
  out.t = t;
  out.n = n;
  out.seed = seed;
  out.batch = batch;
  out.increments = Eigen::MatrixXd::Zero(n, d);
  if (n == 0 || t == 0.0) return out;

  Mat L;
  if (fam == Family::brownian) L = matrix_sqrt(spec.diffusion());
  const Subordinator sub = fam == Family::relativistic
                               ? Subordinator::inverse_gaussian(spec.mass())
                               : spec.subordinator();

  const std::size_t blocks = (n + kSubBatchSize - 1) / kSubBatchSize;
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    Eigen::RowVectorXd z(d);
    for (std::size_t blk = begin; blk < end; ++blk) {
      CounterRng rng(seed, batch, blk);
      const std::size_t lo = blk * kSubBatchSize;
      const std::size_t hi = std::min(n, lo + kSubBatchSize);
      for (std::size_t i = lo; i < hi; ++i) {
        auto row = out.increments.row(static_cast<Eigen::Index>(i));
        switch (fam) {
          case Family::brownian: {
            gaussian_vector(rng, std::sqrt(t), z);
            row = z * L.transpose() + t * spec.drift().transpose();
            break;
          }
          case Family::isotropic_stable: {
            const double alpha = spec.alpha();
            if (d == 1) {
              row[0] = std::pow(t, 1.0 / alpha) * sample_symmetric_stable(alpha, rng);
            } else {
              // X = sqrt(2 A) G with E e^{-lambda A} = e^{-t lambda^{alpha/2}}.
              const double A = std::pow(t, 2.0 / alpha) * sample_positive_stable(0.5 * alpha, rng);
              gaussian_vector(rng, std::sqrt(2.0 * A), z);
              row = z;
            }
            break;
          }
          case Family::relativistic:
          case Family::subordinated_bm: {
            const double S = sample_subordinator(sub, t, rng);
            gaussian_vector(rng, std::sqrt(S), z);
            row = z;
            break;
          }
          case Family::compound_poisson: {
            const JumpLaw& law = spec.jump_law();
            double rate = law.rate;
            std::vector<double> cumulative;
            if (law.kind == JumpLaw::Kind::atoms) {
              rate = 0.0;
              for (const Atom& a : law.atoms) {
                rate += a.mass;
                cumulative.push_back(rate);
              }
            }
            std::poisson_distribution<long> pois(rate * t);
            const long jumps = rate > 0.0 ? pois(rng) : 0;
            row.setZero();
            for (long j = 0; j < jumps; ++j) {
              if (law.kind == JumpLaw::Kind::gaussian) {
                gaussian_vector(rng, law.sigma, z);
                row += z;
              } else {
                const double u = rng.uniform() * rate;
                const std::size_t k = std::min<std::size_t>(
                    std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                        cumulative.begin(),
                    law.atoms.size() - 1);
                row += law.atoms[k].location.transpose();
              }
            }
            break;
          }
          default:
            break;
        }
      }
    }
  });
  return out;
}

McEstimate mc_semigroup(const SampleBatch& batch, const GrowthFunction& u,
                        const std::vector<Vec>& xs) {
  McEstimate est;
  est.mean.resize(xs.size());
  est.standard_error.assign(xs.size(), 0.0);
  if (batch.spec) {
    const double g = u.envelope.gamma;
    est.nonstandard_error = g > 0.0 && !batch.spec->moment_finite(2.0 * g);
  }
  const std::size_t n = batch.n;
  if (n == 0) return est;
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> re(n), im(n);
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vec y = xs[k] + batch.increments.row(static_cast<Eigen::Index>(i)).transpose();
        const Complex v = u(y);
        re[i] = v.real();
        im[i] = v.imag();
      }
      const Complex mean(pairwise_sum(re) / n, pairwise_sum(im) / n);
      for (std::size_t i = 0; i < n; ++i) {
        const double dr = re[i] - mean.real(), di = im[i] - mean.imag();
        re[i] = dr * dr + di * di;
      }
      est.mean[k] = mean;
      if (n > 1) est.standard_error[k] = std::sqrt(pairwise_sum(re) / (n - 1) / n);
    }
  });
  return est;
}

McComparison compare_with_deterministic(const McEstimate& mc, const DensityTable& table,
                                        const GrowthFunction& u, const std::vector<Vec>& xs,
                                        double beta) {
  if (mc.mean.size() != xs.size()) throw std::invalid_argument("estimate and point counts differ");
  const SemigroupResult det = apply_semigroup(table, u, xs, beta);
  McComparison cmp;
  cmp.deterministic = det.values;
  cmp.truncation_bound = det.truncation_bound;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double diff = std::abs(mc.mean[k] - det.values[k]);
    const double scale = mc.standard_error[k] + det.truncation_bound[k];
    const double z = scale > 0.0 ? diff / scale : (diff == 0.0 ? 0.0 : HUGE_VAL);
    cmp.z.push_back(z);
    cmp.agree.push_back(z <= 3.0);
    if (z <= 3.0) ++cmp.agreeing;
  }
  return cmp;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    D = std::max(D, std::abs(i / n - j / m));
  }
  KsResult r;
  r.statistic = D;
  r.critical_1pct = 1.63 * std::sqrt((n + m) / (n * m));
  r.reject = D > r.critical_1pct;
  return r;
}

Complex fourier_interpolate(const GridFunction& f, const Vec& x) {
  const Grid& g = f.grid();
  const int d = g.dimension();
  const int n = g.points_per_axis();
  CVec F = f.values();
  fft(F, d, n, false);
  const double L = g.period();
  std::vector<Complex> re(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Index3 idx = g.unravel(k);
    double phase = 0.0;
    double weight = 1.0;
    for (int a = 0; a < d; ++a) {
      const int s = g.signed_index(idx[a]);
      // Split the Nyquist mode symmetrically so real data stays real.
      if (s == -n / 2) {
        weight *= std::cos(kPi * (x[a] + 0.5 * L) * n / L);
        continue;
      }
      phase += 2.0 * kPi * s * (x[a] + 0.5 * L) / L;
    }
    re[k] = weight * F[k] * std::polar(1.0, phase);
  }
  std::vector<double> rr(g.size()), ii(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    rr[k] = re[k].real();
    ii[k] = re[k].imag();
  }
  return Complex(pairwise_sum(rr), pairwise_sum(ii)) / static_cast<double>(g.size());
}

DynkinReport dynkin_residual(const SymbolSpec& spec, const SmoothFunction& phi, const Vec& x,
                             double t, int quad_points, const Grid& grid,
                             const DensityOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  if (quad_points < 1) throw std::invalid_argument("need at least one quadrature point");
  DynkinReport rep;
  rep.t = t;
  rep.quad_points = quad_points;
  rep.note = "Gaussian bump truncated below 1e-17 stands in for a compactly supported test function";

  const GridFunction f = GridFunction::sample(grid, [&](const Vec& y) { return Complex(phi(y), 0.0); });
  const GridFunction Af = apply_generator_spectral(spec, f).value;
  DensityOptions dopts = opts;
  dopts.moment_orders = {};

  const DensityTable pt = transition_density(spec, t, grid, dopts);
  const double phix = phi(x);
  rep.lhs = fourier_interpolate(apply_semigroup(pt, f), x).real() - phix;

  const GaussRule& rule = gauss_legendre(quad_points);
  double rhs = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * t * (1.0 + rule.nodes[i]);
    const DensityTable ps = transition_density(spec, s, grid, dopts);
    rhs += 0.5 * t * rule.weights[i] * fourier_interpolate(apply_semigroup(ps, Af), x).real();
  }
  rep.rhs = rhs;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.first_order_remainder = std::abs(rep.lhs - t * fourier_interpolate(Af, x).real());
  return rep;
}

}  // namespace levy
