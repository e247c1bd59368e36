#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "levy/errors.hpp"
#include "levy/montecarlo.hpp"

using namespace levy;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

// Empirical E cos(xi.X) against Re e^{-t psi(xi)}, within 4 standard errors.
void expect_characteristic(const SymbolSpec& spec, double t, const std::vector<Vec>& xis,
                           std::uint64_t seed) {
  const std::size_t n = 200000;
  const SampleBatch b = sample_increments(spec, t, n, seed);
  for (const Vec& xi : xis) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::cos(b.increments.row(static_cast<Eigen::Index>(i)).dot(xi));
      s += c;
      s2 += c * c;
    }
    const double mean = s / n;
    const double se = std::sqrt(std::max(s2 / n - mean * mean, 1e-12) / n);
    const double expect = std::exp(-t * eval_symbol(spec, xi)).real();
    EXPECT_NEAR(mean, expect, 4.0 * se) << spec.name() << " xi=" << xi.transpose();
  }
}

std::vector<double> column(const SampleBatch& b) {
  return {b.increments.col(0).data(), b.increments.col(0).data() + b.increments.rows()};
}

}  // namespace

TEST(CounterRng, StreamsAreIndependentAndReproducible) {
  CounterRng a(1, 0, 0), b(1, 0, 0), c(1, 0, 1), d(2, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
  CounterRng u(7, 3, 2);
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    acc += v;
  }
  EXPECT_NEAR(acc / 100000, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000));
}

TEST(SampleIncrements, SeedReproducibility) {
  const SymbolSpec spec = SymbolSpec::isotropic_stable(2, 1.3);
  const SampleBatch a = sample_increments(spec, 1.0, 10000, 99);
  const SampleBatch b = sample_increments(spec, 1.0, 10000, 99);
  EXPECT_TRUE((a.increments.array() == b.increments.array()).all());
  const SampleBatch c = sample_increments(spec, 1.0, 10000, 100);
  EXPECT_FALSE((a.increments.array() == c.increments.array()).all());
  const SampleBatch d = sample_increments(spec, 1.0, 10000, 99, 1);
  EXPECT_FALSE((a.increments.array() == d.increments.array()).all());
}

TEST(SampleIncrements, BrownianMeanAndVariance) {
  const std::size_t n = 100000;
  const SampleBatch b = sample_increments(SymbolSpec::brownian(1), 4.0, n, 1);
  const Eigen::VectorXd x = b.increments.col(0);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (n - 1);
  EXPECT_NEAR(mean, 0.0, 3.0 * 2.0 / std::sqrt(n));
  EXPECT_NEAR(var, 4.0, 3.0 * 4.0 * std::sqrt(2.0 / n));
}

TEST(SampleIncrements, DriftGivesMean) {
  Mat Q(1, 1);
  Q << 0.25;
  const std::size_t n = 100000;
  const SampleBatch b = sample_increments(SymbolSpec::brownian(Q, v1(2.0)), 3.0, n, 5);
  const double se = std::sqrt(0.25 * 3.0 / n);
  EXPECT_NEAR(b.increments.col(0).mean(), 6.0, 4.0 * se);
}

TEST(SampleIncrements, StableIsSymmetric) {
  const std::size_t n = 100000;
  const SampleBatch b = sample_increments(SymbolSpec::isotropic_stable(1, 1.5), 1.0, n, 2);
  const double below = (b.increments.col(0).array() <= 0.0).cast<double>().mean();
  EXPECT_NEAR(below, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(SampleIncrements, CharacteristicFunctions) {
  const std::vector<Vec> xi1{v1(0.3), v1(1.0), v1(2.2)};
  expect_characteristic(SymbolSpec::isotropic_stable(1, 1.5), 1.0, xi1, 11);
  expect_characteristic(SymbolSpec::isotropic_stable(1, 0.6), 0.5, xi1, 12);
  expect_characteristic(SymbolSpec::relativistic(1, 1.0), 2.0, xi1, 13);
  expect_characteristic(SymbolSpec::subordinated_bm(1, Subordinator::gamma(1.5, 0.8)), 1.0, xi1,
                        14);
  expect_characteristic(SymbolSpec::subordinated_bm(1, Subordinator::inverse_gaussian(0.5)), 1.0,
                        xi1, 15);
  expect_characteristic(SymbolSpec::compound_poisson(1, JumpLaw::gaussian(2.0, 0.5)), 1.0, xi1,
                        16);
  expect_characteristic(
      SymbolSpec::compound_poisson(1, JumpLaw::from_atoms({Atom{v1(1.0), 0.7},
                                                           Atom{v1(-0.4), 1.5}})),
      1.0, xi1, 17);
  Vec a(2), b(2);
  a << 0.5, -0.2;
  b << 1.1, 0.9;
  expect_characteristic(SymbolSpec::isotropic_stable(2, 1.2), 1.0, {a, b}, 18);
  expect_characteristic(SymbolSpec::subordinated_bm(2, Subordinator::stable(0.4)), 1.0, {a, b},
                        19);
}

TEST(SampleIncrements, UnsupportedFamilies) {
  EXPECT_THROW(sample_increments(SymbolSpec::tempered_stable(1, 1.2, 0.7), 1.0, 10, 1),
               UnsupportedFamily);
  const LevyTriplet t(v1(0.0), Mat::Identity(1, 1), LevyMeasure::zero(1));
  EXPECT_THROW(sample_increments(SymbolSpec::custom(t), 1.0, 10, 1), UnsupportedFamily);
}

TEST(KolmogorovSmirnov, AcceptsEqualAndRejectsShifted) {
  const SampleBatch a = sample_increments(SymbolSpec::brownian(1), 1.0, 20000, 1);
  const SampleBatch b = sample_increments(SymbolSpec::brownian(1), 1.0, 20000, 2);
  const KsResult same = ks_two_sample(column(a), column(b));
  EXPECT_FALSE(same.reject);
  EXPECT_NEAR(same.critical_1pct, 1.63 * std::sqrt(2.0 / 20000), 1e-15);
  std::vector<double> shifted = column(b);
  for (double& x : shifted) x += 0.1;
  EXPECT_TRUE(ks_two_sample(column(a), shifted).reject);
  EXPECT_EQ(ks_two_sample({0.0, 1.0}, {0.0, 1.0}).statistic, 0.0);
}

TEST(KolmogorovSmirnov, IncrementAdditivity) {
  const std::size_t n = 100000;
  for (const auto& spec : {SymbolSpec::brownian(1), SymbolSpec::isotropic_stable(1, 1.5)}) {
    const SampleBatch whole = sample_increments(spec, 1.5, n, 4);
    const SampleBatch first = sample_increments(spec, 1.0, n, 5);
    const SampleBatch second = sample_increments(spec, 0.5, n, 6);
    std::vector<double> sum(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      sum[i] = first.increments(r, 0) + second.increments(r, 0);
    }
    const KsResult ks = ks_two_sample(column(whole), sum);
    EXPECT_FALSE(ks.reject) << spec.name() << " D=" << ks.statistic;
  }
}

TEST(McSemigroup, ConstantIsExact) {
  const SampleBatch b = sample_increments(SymbolSpec::isotropic_stable(1, 0.8), 1.0, 1000, 3);
  const McEstimate e = mc_semigroup(b, GrowthFunction::constant(1, 1.0), {v1(0.0), v1(4.0)});
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(e.mean[i], Complex(1.0, 0.0));
    EXPECT_EQ(e.standard_error[i], 0.0);
  }
}

TEST(McSemigroup, BrownianSecondMoment) {
  const SampleBatch b = sample_increments(SymbolSpec::brownian(1), 1.0, 1000000, 8);
  const McEstimate e =
      mc_semigroup(b, GrowthFunction::polynomial(1, {Monomial{1.0, {2}}}), {v1(0.0)});
  EXPECT_NEAR(e.mean[0].real(), 1.0, 0.005);
  EXPECT_NEAR(e.standard_error[0], std::sqrt(2.0 / 1e6), 1e-4);
  EXPECT_FALSE(e.nonstandard_error);
}

TEST(McSemigroup, HeavyTailFlagsErrorBars) {
  const SampleBatch b = sample_increments(SymbolSpec::isotropic_stable(1, 1.5), 1.0, 1000, 3);
  const GrowthFunction x = GrowthFunction::polynomial(1, {Monomial{1.0, {1}}});
  EXPECT_TRUE(mc_semigroup(b, x, {v1(0.0)}).nonstandard_error);
  EXPECT_FALSE(mc_semigroup(b, GrowthFunction::sine(v1(1.0)), {v1(0.0)}).nonstandard_error);
}

TEST(McSemigroup, MatchesDeterministicRoute) {
  const SymbolSpec spec = SymbolSpec::isotropic_stable(1, 1.5);
  const GrowthFunction u = GrowthFunction::gaussian(v1(0.0), 1.0);
  const SampleBatch b = sample_increments(spec, 1.0, 100000, 12345);
  std::vector<Vec> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(v1(-3.0 + 0.6 * i));
  const McEstimate mc = mc_semigroup(b, u, xs);
  const DensityTable table = transition_density(spec, 1.0, Grid(1, 4096, 0.1));
  const McComparison cmp = compare_with_deterministic(mc, table, u, xs, 0.5);
  EXPECT_GE(cmp.agreeing, 9u);
}

TEST(Dynkin, ZeroFunction) {
  SmoothFunction zero;
  zero.value = [](const Vec&) { return 0.0; };
  zero.center = v1(0.0);
  zero.support_radius = 0.0;
  DensityOptions o;
  o.oversampling = 1;
  const DynkinReport r =
      dynkin_residual(SymbolSpec::brownian(1), zero, v1(0.0), 1.0, 8, Grid(1, 1024, 0.02), o);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Dynkin, BrownianBump) {
  DensityOptions o;
  o.oversampling = 1;
  const Grid g(1, 4096, 0.0061);
  const SmoothFunction phi = SmoothFunction::gaussian_bump(v1(0.0), 1.0);
  const DynkinReport r = dynkin_residual(SymbolSpec::brownian(1), phi, v1(0.3), 1.0, 16, g, o);
  // P_1 phi(x) = e^{-x^2/4} / sqrt(2)
  EXPECT_NEAR(r.lhs, std::exp(-0.3 * 0.3 / 4.0) / std::sqrt(2.0) - std::exp(-0.045), 1e-10);
  EXPECT_LT(r.residual, 1e-5);
}

TEST(Dynkin, SecondOrderInTime) {
  DensityOptions o;
  o.oversampling = 1;
  const Grid g(1, 4096, 0.0061);
  const SmoothFunction phi = SmoothFunction::gaussian_bump(v1(0.0), 1.0);
  for (double t : {0.25, 0.125, 0.0625}) {
    const DynkinReport r = dynkin_residual(SymbolSpec::brownian(1), phi, v1(0.0), t, 16, g, o);
    EXPECT_LT(r.residual, 1e-8) << "t=" << t;
    // d^2/dt^2 P_t phi(0) = A^2 phi(0) = 3/4, so the first-order remainder is ~ 3 t^2 / 8.
    EXPECT_NEAR(r.first_order_remainder / (t * t), 0.375, 0.15) << "t=" << t;
  }
}

TEST(FourierInterpolate, ExactOnTrigonometricPolynomials) {
  const Grid g(1, 64, 0.25);
  const double w = 2.0 * kPi * 3.0 / g.period();
  const GridFunction f = GridFunction::sample(g, [w](const Vec& x) {
    return Complex(std::cos(w * x[0]) + 0.5 * std::sin(2.0 * w * x[0]), 0.0);
  });
  for (double x : {0.1, -3.33, 7.77}) {
    EXPECT_NEAR(fourier_interpolate(f, v1(x)).real(),
                std::cos(w * x) + 0.5 * std::sin(2.0 * w * x), 1e-12);
  }
}
