#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "levy/errors.hpp"
#include "levy/levy_measure.hpp"
#include "levy/symbols.hpp"

using namespace levy;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

std::vector<SymbolSpec> families(int d) {
  return {SymbolSpec::brownian(d),
          SymbolSpec::isotropic_stable(d, 0.5),
          SymbolSpec::isotropic_stable(d, 1.5),
          SymbolSpec::relativistic(d, 1.0),
          SymbolSpec::tempered_stable(d, 1.2, 0.7),
          SymbolSpec::compound_poisson(d, JumpLaw::gaussian(2.0, 0.5)),
          SymbolSpec::subordinated_bm(d, Subordinator::gamma(1.5, 0.8)),
          SymbolSpec::subordinated_bm(d, Subordinator::inverse_gaussian(0.5))};
}

LevyMeasure stable_density(double alpha) {
  return LevyMeasure::from_density(
      1, [alpha](const Vec& y) { return std::pow(std::abs(y[0]), -1.0 - alpha); }, alpha, true);
}

}  // namespace

TEST(EvalSymbol, BrownianExample) {
  const Complex v = eval_symbol(SymbolSpec::brownian(2), v2(2.0, 0.0));
  EXPECT_NEAR(v.real(), 2.0, 1e-15);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(EvalSymbol, StableIsPowerOfModulus) {
  for (double alpha : {0.3, 1.0, 1.7}) {
    const SymbolSpec s = SymbolSpec::isotropic_stable(2, alpha);
    const Vec xi = v2(0.6, -1.1);
    EXPECT_NEAR(eval_symbol(s, xi).real(), std::pow(xi.norm(), alpha), 1e-14);
  }
}

TEST(EvalSymbol, RelativisticVanishesAtZero) {
  EXPECT_EQ(eval_symbol(SymbolSpec::relativistic(1, 1.0), v1(0.0)), Complex(0.0, 0.0));
  EXPECT_NEAR(eval_symbol(SymbolSpec::relativistic(1, 1.0), v1(1.0)).real(), std::sqrt(2.0) - 1.0,
              1e-15);
}

TEST(EvalSymbol, UncompensatedUnitAtom) {
  const LevyTriplet tr(Vec::Zero(1), Mat::Zero(1, 1),
                       LevyMeasure::from_atoms(1, {{v1(1.0), 1.0}}));
  const Complex v = eval_symbol(tr, v1(std::numbers::pi));
  EXPECT_NEAR(v.real(), 2.0, 1e-14);
  EXPECT_NEAR(v.imag(), 0.0, 1e-14);
}

TEST(EvalSymbol, DriftSignConvention) {
  // psi = -i b xi, so E X_t = t b.
  const SymbolSpec s = SymbolSpec::brownian(Mat::Zero(1, 1), v1(2.0));
  EXPECT_NEAR(eval_symbol(s, v1(0.5)).imag(), -1.0, 1e-15);
}

TEST(Invariants, ZeroConjugateSymmetryAndNonNegativeRealPart) {
  for (int d = 1; d <= 3; ++d) {
    for (const SymbolSpec& s : families(d)) {
      EXPECT_EQ(eval_symbol(s, Vec::Zero(d)), Complex(0.0, 0.0)) << s.name();
      for (double r : {0.05, 0.7, 3.0, 20.0}) {
        Vec xi = Vec::Zero(d);
        for (int a = 0; a < d; ++a) xi[a] = r * (a + 1.0) / d;
        const Complex p = eval_symbol(s, xi), m = eval_symbol(s, -xi);
        EXPECT_LT(std::abs(m - std::conj(p)), 1e-12 * (1.0 + std::abs(p))) << s.name();
        EXPECT_GE(p.real(), 0.0) << s.name();
      }
    }
  }
}

TEST(Triplet, CustomEvaluationMatchesClosedForms) {
  for (int d = 1; d <= 2; ++d) {
    for (const SymbolSpec& s :
         {SymbolSpec::brownian(d), SymbolSpec::isotropic_stable(d, 0.8),
          SymbolSpec::isotropic_stable(d, 1.5), SymbolSpec::relativistic(d, 1.0)}) {
      const LevyTriplet& tr = s.triplet();
      for (double r : {0.2, 1.0, 3.5}) {
        Vec xi = Vec::Zero(d);
        xi[0] = r;
        const Complex a = eval_symbol(s, xi), b = eval_symbol(tr, xi);
        EXPECT_LT(std::abs(a - b), 1e-6 * std::abs(a)) << s.name() << " r=" << r;
      }
    }
  }
}

TEST(Triplet, RejectsIndefiniteDiffusion) {
  Mat Q(2, 2);
  Q << 1.0, 0.0, 0.0, -0.5;
  EXPECT_THROW(LevyTriplet(Vec::Zero(2), Q, LevyMeasure::zero(2)), std::invalid_argument);
  Mat A(2, 2);
  A << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(LevyTriplet(Vec::Zero(2), A, LevyMeasure::zero(2)), std::invalid_argument);
}

TEST(LevyMeasure, RejectsNonLevyDensity) {
  EXPECT_THROW(LevyMeasure::from_density(
                   1, [](const Vec& y) { return std::pow(std::abs(y[0]), -3.5); }, 2.5, true),
               std::invalid_argument);
  EXPECT_THROW(LevyMeasure::from_atoms(1, {{v1(0.0), 1.0}}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure::from_atoms(1, {{v1(1.0), -1.0}}), std::invalid_argument);
}

TEST(Moments, StableDensityExamples) {
  const LevyMeasure nu = stable_density(1.5);
  const MomentReport r = levy_measure_moment(nu, 0.5);
  EXPECT_TRUE(r.finite);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  EXPECT_FALSE(levy_measure_moment(nu, 1.5).finite);
}

TEST(Moments, AtomExample) {
  const LevyMeasure nu = LevyMeasure::from_atoms(1, {{v1(2.0), 3.0}});
  const MomentReport r = levy_measure_moment(nu, 2.0);
  EXPECT_TRUE(r.finite);
  EXPECT_DOUBLE_EQ(r.value, 12.0);
}

TEST(Moments, BoundarySweepAroundAlpha) {
  for (double alpha : {0.7, 1.2, 1.5}) {
    const LevyMeasure nu = stable_density(alpha);
    EXPECT_TRUE(levy_measure_moment(nu, alpha - 0.1).finite) << alpha;
    EXPECT_FALSE(levy_measure_moment(nu, alpha + 0.1).finite) << alpha;
    EXPECT_NEAR(levy_measure_moment(nu, alpha - 0.1).value, 2.0 / 0.1, 1e-4) << alpha;
  }
}

TEST(Moments, SpecMomentFiniteness) {
  EXPECT_TRUE(SymbolSpec::isotropic_stable(1, 1.5).moment_finite(1.4));
  EXPECT_FALSE(SymbolSpec::isotropic_stable(1, 1.5).moment_finite(1.6));
  EXPECT_TRUE(SymbolSpec::brownian(2).moment_finite(10.0));
  EXPECT_TRUE(SymbolSpec::relativistic(1, 1.0).moment_finite(5.0));
}

TEST(HartmanWintner, StableAlphaOne) {
  const double e = std::numbers::e;
  const HartmanWintnerReport r =
      hartman_wintner_diagnostic(SymbolSpec::isotropic_stable(1, 1.0), {e, e * e, std::pow(e, 4)});
  ASSERT_EQ(r.ratios.size(), 3u);
  EXPECT_NEAR(r.ratios[0], e, 1e-12);
  EXPECT_NEAR(r.ratios[1], e * e / 2.0, 1e-12);
  EXPECT_NEAR(r.ratios[2], std::pow(e, 4) / 4.0, 1e-10);
  EXPECT_EQ(r.verdict, "diverges");
}

TEST(HartmanWintner, BoundedSymbolFails) {
  const HartmanWintnerReport r = hartman_wintner_diagnostic(
      SymbolSpec::compound_poisson(1, JumpLaw::gaussian(1.0, 1.0)), {10.0, 1e3, 1e6});
  EXPECT_EQ(r.verdict, "fails");
  EXPECT_LT(r.ratios.back(), r.ratios.front());
}

TEST(HartmanWintner, Brownian) {
  const double e = std::numbers::e;
  const HartmanWintnerReport r = hartman_wintner_diagnostic(SymbolSpec::brownian(1), {e, e * e});
  EXPECT_NEAR(r.ratios[0], e * e / 2.0, 1e-10);
  EXPECT_NEAR(r.ratios[1], std::pow(e, 4) / 4.0, 1e-10);
  EXPECT_EQ(r.verdict, "diverges");
}

TEST(ZeroSet, OnlyOriginForStableAndBrownian) {
  const Grid g(2, 16, 0.3);
  for (const SymbolSpec& s : {SymbolSpec::isotropic_stable(2, 0.5), SymbolSpec::brownian(2)}) {
    const ZeroSetReport r = symbol_zero_set(s, g);
    ASSERT_EQ(r.zeros.size(), 1u) << s.name();
    EXPECT_EQ(r.zeros[0].norm(), 0.0);
    EXPECT_FALSE(r.non_liouville_warning);
  }
}

TEST(ZeroSet, LatticePeriodicCompoundPoisson) {
  // Jumps at +-2 pi: psi(xi) = 2 (1 - cos(2 pi xi)) vanishes at integer xi.
  const double tp = 2.0 * std::numbers::pi;
  const SymbolSpec s = SymbolSpec::compound_poisson(
      1, JumpLaw::from_atoms({{v1(tp), 1.0}, {v1(-tp), 1.0}}));
  const Grid g(1, 64, tp / 8.0);  // frequencies k / 8
  const ZeroSetReport r = symbol_zero_set(s, g);
  EXPECT_TRUE(r.non_liouville_warning);
  for (const Vec& z : r.zeros) EXPECT_NEAR(z[0], std::round(z[0]), 1e-12);
  // integer frequencies inside [-pi/h, pi/h) = [-4, 4)
  EXPECT_EQ(r.zeros.size(), 8u);
}
