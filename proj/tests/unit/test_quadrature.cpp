#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"

using namespace levy;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const GaussRule& g = gauss_legendre(8);
  for (int p = 0; p <= 15; ++p) {
    const double v = integrate_panel([p](double x) { return std::pow(x, p); }, 0.0, 2.0, g);
    EXPECT_NEAR(v, std::pow(2.0, p + 1) / (p + 1), 1e-12 * std::pow(2.0, p + 1)) << p;
  }
}

TEST(GaussLegendre, WeightsSumToTwo) {
  for (int n : {1, 2, 5, 16, 64}) {
    const GaussRule& g = gauss_legendre(n);
    EXPECT_NEAR(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), 2.0, 1e-14);
  }
}

TEST(PairwiseSum, MatchesKahanOnIllConditionedInput) {
  std::vector<double> xs(1 << 16, 0.1);
  EXPECT_NEAR(pairwise_sum(xs), 0.1 * (1 << 16), 1e-9);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(EpsilonExtrapolator, AcceleratesAlternatingSeries) {
  // log 2 = 1 - 1/2 + 1/3 - ...
  EpsilonExtrapolator ex;
  double s = 0.0;
  for (int k = 1; k <= 20; ++k) {
    s += (k % 2 ? 1.0 : -1.0) / k;
    ex.push(s);
  }
  EXPECT_NEAR(ex.estimate().real(), std::log(2.0), 1e-10);
  EXPECT_GT(std::abs(s - std::log(2.0)), 1e-3);
}

TEST(OuterShells, GeometricSeriesConverges) {
  const ShellSeries s = sum_outer_shells([](int j) { return std::pow(0.5, j); });
  EXPECT_TRUE(s.finite);
  EXPECT_NEAR(s.value, 2.0, 1e-11);
}

TEST(OuterShells, FlatSeriesDiverges) {
  const ShellSeries s = sum_outer_shells([](int) { return 1.0; });
  EXPECT_FALSE(s.finite);
}

TEST(Parallel, EveryIndexVisitedOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GE(worker_count(), 1u);
}
