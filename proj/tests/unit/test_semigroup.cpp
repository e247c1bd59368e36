#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "levy/errors.hpp"
#include "levy/functions.hpp"
#include "levy/levy_measure.hpp"
#include "levy/semigroup.hpp"

using namespace levy;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

const Grid& line() {
  static const Grid g(1, 4096, 0.1);
  return g;
}

double at_zero(const DensityTable& t) { return t.values[t.grid.points_per_axis() / 2]; }

double sum_mass(const DensityTable& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    if (t.interior(i)) m += t.values[i];
  }
  return m * t.grid.cell_volume();
}

// Symmetric stable density by direct Fourier inversion, (1/pi) int_0^inf cos(kx) e^{-k^a} dk.
double stable_density_oracle(double alpha, double x) {
  double acc = 0.0;
  const int n = 200000;
  const double top = std::pow(40.0, 1.0 / alpha);
  const double dk = top / n;
  for (int i = 0; i <= n; ++i) {
    const double k = i * dk;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std::cos(k * x) * std::exp(-std::pow(k, alpha));
  }
  return acc * dk / kPi;
}

}  // namespace

TEST(TransitionDensity, GaussianAtOrigin) {
  const DensityTable t = transition_density(SymbolSpec::brownian(1), 1.0, line());
  EXPECT_NEAR(at_zero(t) / (1.0 / std::sqrt(2.0 * kPi)), 1.0, 1e-8);
}

TEST(TransitionDensity, CauchyClosedForm) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.0), 1.0, line());
  const int c = line().points_per_axis() / 2;
  EXPECT_NEAR(t.values[c], 1.0 / kPi, 1e-6);
  EXPECT_NEAR(t.values[c + 10], 1.0 / (2.0 * kPi), 1e-6);
  EXPECT_NEAR(t.values[c + 37], 1.0 / (kPi * (1.0 + 3.7 * 3.7)), 1e-6);
}

TEST(TransitionDensity, StableMatchesQuadrature) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.5), 1.0, line());
  const int c = line().points_per_axis() / 2;
  for (int j : {0, 5, 20}) {
    EXPECT_NEAR(t.values[c + j], stable_density_oracle(1.5, j * 0.1), 1e-7);
  }
}

TEST(TransitionDensity, DriftShiftsTheMean) {
  Mat Q(1, 1);
  Q << 0.5;
  const DensityTable t = transition_density(SymbolSpec::brownian(Q, v1(1.5)), 2.0, line());
  double mean = 0.0;
  for (std::size_t i = 0; i < line().size(); ++i) mean += line().point(i)[0] * t.values[i];
  EXPECT_NEAR(mean * line().spacing(), 3.0, 1e-8);
}

TEST(TransitionDensity, MassAndPositivity) {
  const std::vector<SymbolSpec> specs{
      SymbolSpec::brownian(1), SymbolSpec::isotropic_stable(1, 1.0),
      SymbolSpec::isotropic_stable(1, 1.5), SymbolSpec::relativistic(1, 1.0),
      SymbolSpec::tempered_stable(1, 1.2, 0.7),
      SymbolSpec::subordinated_bm(1, Subordinator::inverse_gaussian(0.5))};
  for (const auto& spec : specs) {
    const DensityTable t = transition_density(spec, 1.0, line());
    EXPECT_LT(t.mass_defect, 1e-6) << spec.name();
    EXPECT_GE(t.values.minCoeff(), 0.0) << spec.name();
    EXPECT_LE(t.clip_mass, 1e-6) << spec.name();
    EXPECT_NEAR(sum_mass(t) + t.tail_mass, 1.0, 1e-12) << spec.name();
  }
}

TEST(TransitionDensity, HeavyTailOnFinerGrid) {
  const DensityTable t =
      transition_density(SymbolSpec::isotropic_stable(1, 0.8), 1.0, Grid(1, 8192, 0.04));
  EXPECT_LT(t.mass_defect, 1e-6);
  EXPECT_GT(t.tail_mass, 1e-3);
}

TEST(TransitionDensity, TailExtrapolationIn1D) {
  EXPECT_LT(transition_density(SymbolSpec::brownian(1), 1.0, line()).extrapolation_defect, 1e-10);
  EXPECT_LT(
      transition_density(SymbolSpec::isotropic_stable(1, 1.0), 1.0, line()).extrapolation_defect,
      1e-6);
}

TEST(TransitionDensity, MassInTwoDimensions) {
  const Grid g(2, 128, 0.15);
  for (const auto& spec : {SymbolSpec::brownian(2), SymbolSpec::isotropic_stable(2, 1.5)}) {
    const DensityTable t = transition_density(spec, 1.0, g);
    EXPECT_LT(t.mass_defect, 1e-6) << spec.name();
  }
  const DensityTable t = transition_density(SymbolSpec::brownian(2), 1.0, g);
  EXPECT_NEAR(t.values[g.ravel({64, 64, 0})], 1.0 / (2.0 * kPi), 1e-8);
}

TEST(TransitionDensity, ResolutionErrors) {
  const Grid g(1, 256, 0.1);
  EXPECT_THROW(transition_density(
                   SymbolSpec::compound_poisson(1, JumpLaw::from_atoms({Atom{v1(1.0), 1.0}})),
                   1.0, g),
               ResolutionError);
  EXPECT_THROW(transition_density(SymbolSpec::subordinated_bm(1, Subordinator::gamma(1.5, 0.8)),
                                  1.0, g),
               ResolutionError);
  EXPECT_THROW(transition_density(SymbolSpec::isotropic_stable(1, 1.0), 1.0, Grid(1, 256, 1.0)),
               ResolutionError);
}

TEST(Regularity, GaussianSups) {
  const RegularityReport r =
      density_regularity_report(transition_density(SymbolSpec::brownian(1), 1.0, line()));
  EXPECT_NEAR(r.sup_density, 1.0 / std::sqrt(2.0 * kPi), 1e-6);
  EXPECT_NEAR(r.sup_gradient, 1.0 / std::sqrt(2.0 * kPi * std::numbers::e), 1e-6);
  EXPECT_TRUE(r.consistent);
}

TEST(Regularity, CauchySups) {
  const RegularityReport r = density_regularity_report(
      transition_density(SymbolSpec::isotropic_stable(1, 1.0), 1.0, line()));
  EXPECT_NEAR(r.sup_density, 1.0 / kPi, 1e-6);
  EXPECT_NEAR(r.sup_gradient, 3.0 * std::sqrt(3.0) / (8.0 * kPi), 1e-5);
  // central differences at h = 0.1 carry an O(h^2) error
  EXPECT_NEAR(r.sup_gradient_fd, r.sup_gradient, 5e-3);
}

TEST(DensityMoment, GaussianVarianceAndMass) {
  const DensityTable t = transition_density(SymbolSpec::brownian(1), 1.0, line());
  EXPECT_NEAR(density_moment(t, 2.0).value, 1.0, 1e-6);
  EXPECT_NEAR(density_moment(t, 0.0).value, 1.0, 1e-6);
  EXPECT_NEAR(density_moment(t, 1.0).value, std::sqrt(2.0 / kPi), 1e-6);
}

TEST(DensityMoment, CauchyHalfMomentAndDivergence) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.0), 1.0, line());
  // int |x|^b / (pi (1 + x^2)) dx = 1 / cos(pi b / 2)
  const DensityMoment half = density_moment(t, 0.5);
  EXPECT_TRUE(half.finite);
  EXPECT_NEAR(half.value, std::sqrt(2.0), 1e-3);
  EXPECT_FALSE(density_moment(t, 1.0).finite);
  EXPECT_NEAR(density_moment(t, 0.0).value, 1.0, 1e-6);
}

TEST(DensityMoment, AgreesWithLevyMeasureAcrossStableBoundary) {
  const SymbolSpec spec = SymbolSpec::isotropic_stable(1, 1.5);
  DensityOptions o;
  o.moment_orders = {};
  const DensityTable t = transition_density(spec, 1.0, line(), o);
  for (double beta : {0.5, 1.0, 1.3, 1.7, 2.0, 2.5}) {
    EXPECT_EQ(density_moment(t, beta).finite, levy_measure_moment(spec.triplet().nu, beta).finite)
        << "beta=" << beta;
  }
}

TEST(ApplySemigroup, ConstantsArePreserved) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.5), 1.0, line());
  const GridFunction one = GridFunction::sample(line(), [](const Vec&) { return Complex(1.0); });
  EXPECT_LT((apply_semigroup(t, one).values().array() - 1.0).abs().maxCoeff(), 1e-12);
  const SemigroupResult r =
      apply_semigroup(t, GrowthFunction::constant(1, 1.0), {v1(0.0), v1(7.3)}, 1.0);
  for (const auto& v : r.values) EXPECT_NEAR(v.real(), 1.0, 1e-10);
}

TEST(ApplySemigroup, PlaneWaveEigenfunction) {
  const double tt = 1.3;
  for (const auto& spec : {SymbolSpec::brownian(1), SymbolSpec::isotropic_stable(1, 1.5),
                           SymbolSpec::relativistic(1, 2.0)}) {
    const DensityTable t = transition_density(spec, tt, line());
    for (int k : {1, 17, -40}) {
      const Vec w = v1(2.0 * kPi * k / line().period());
      const GridFunction u =
          GridFunction::sample(line(), [&](const Vec& x) { return std::polar(1.0, w.dot(x)); });
      const Complex lam = std::exp(-tt * eval_symbol(spec, w));
      const GridFunction p = apply_semigroup(t, u);
      double err = 0.0;
      for (std::size_t i = 0; i < line().size(); ++i) {
        err = std::max(err, std::abs(p[i] - lam * u[i]));
      }
      EXPECT_LT(err, 1e-8) << spec.name() << " k=" << k;
    }
  }
}

TEST(ApplySemigroup, BrownianSecondMoment) {
  DensityOptions o;
  o.moment_orders = {3.0};
  const DensityTable t = transition_density(SymbolSpec::brownian(1), 1.0, line(), o);
  const GrowthFunction u = GrowthFunction::polynomial(1, {Monomial{1.0, {2}}});
  const SemigroupResult r = apply_semigroup(t, u, {v1(0.0), v1(1.5)}, 3.0);
  EXPECT_NEAR(r.values[0].real(), 1.0, 1e-6);
  EXPECT_NEAR(r.values[1].real(), 1.0 + 2.25, 1e-6);
  EXPECT_LT(r.truncation_bound[0], 1e-6);
}

TEST(ApplySemigroup, GrowthErrors) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.5), 1.0, line());
  const GrowthFunction u = GrowthFunction::polynomial(1, {Monomial{1.0, {2}}});
  EXPECT_THROW(apply_semigroup(t, u, {v1(0.0)}, 1.4), GrowthError);
  EXPECT_THROW(apply_semigroup(t, GrowthFunction::constant(1, 1.0), {v1(0.0)}, 1.6),
               GrowthError);
}

TEST(ApplySemigroup, SemigroupLawOnBumps) {
  const SymbolSpec spec = SymbolSpec::isotropic_stable(1, 1.5);
  const DensityTable ts = transition_density(spec, 0.4, line());
  const DensityTable tt = transition_density(spec, 0.6, line());
  const DensityTable sum = transition_density(spec, 1.0, line());
  const GridFunction u = GridFunction::sample(line(), [](const Vec& x) {
    return Complex(std::exp(-0.5 * x.squaredNorm()), 0.0);
  });
  const CVec twice = apply_semigroup(tt, apply_semigroup(ts, u)).values();
  const CVec once = apply_semigroup(sum, u).values();
  EXPECT_LT((twice - once).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ApplySemigroup, Contraction) {
  for (const auto& spec : {SymbolSpec::brownian(1), SymbolSpec::isotropic_stable(1, 1.2),
                           SymbolSpec::relativistic(1, 1.0)}) {
    const DensityTable t = transition_density(spec, 1.0, line());
    for (const auto& u : {GrowthFunction::triangle(1, 3.0), GrowthFunction::sine(v1(2.0))}) {
      const GridFunction g = GridFunction::sample(line(), u.eval);
      EXPECT_LE(apply_semigroup(t, g).sup_norm(), g.sup_norm() + 1e-10) << spec.name();
    }
  }
}

TEST(ApplySemigroup, CallableMatchesLatticeRoute) {
  const DensityTable t = transition_density(SymbolSpec::isotropic_stable(1, 1.5), 1.0, line());
  const GrowthFunction u = GrowthFunction::gaussian(v1(0.5), 0.8);
  const GridFunction g = GridFunction::sample(line(), u.eval);
  const GridFunction lattice = apply_semigroup(t, g);
  const int c = line().points_per_axis() / 2;
  const SemigroupResult r = apply_semigroup(t, u, {v1(0.0), v1(1.2)}, 1.0);
  // The callable route models the far tail as u(x); the gap must sit inside its bound.
  EXPECT_LE(std::abs(r.values[0] - lattice[c]), r.truncation_bound[0]);
  EXPECT_LE(std::abs(r.values[1] - lattice[c + 12]), r.truncation_bound[1]);
}

TEST(DimensionWalk, CauchyClosedForms) {
  const Subordinator s = Subordinator::stable(0.5);
  for (double r : {0.0, 0.5, 2.0}) {
    EXPECT_NEAR(radial_density(s, 1.0, 1, r), 1.0 / (kPi * (1.0 + r * r)), 1e-8);
    EXPECT_NEAR(radial_density(s, 1.0, 3, r), 1.0 / (kPi * kPi * std::pow(1.0 + r * r, 2)),
                1e-8);
  }
  std::vector<double> radii;
  for (int i = 0; i <= 16; ++i) radii.push_back(0.25 * i);
  const DimensionWalkReport rep = radial_dimension_walk(s, 1.0, 1, radii);
  EXPECT_LT(rep.max_residual, 1e-6);
  EXPECT_GT(rep.max_residual_without_r, 1e-2);
  EXPECT_NEAR(rep.dp_k[0], 0.0, 1e-8);
  EXPECT_EQ(rep.residual[0], std::abs(rep.dp_k[0]));
}

TEST(DimensionWalk, BrownianSubordinate) {
  const Subordinator s = Subordinator::deterministic(1.0);
  std::vector<double> radii;
  for (int i = 0; i <= 16; ++i) radii.push_back(0.25 * i);
  for (int k : {1, 2}) {
    const DimensionWalkReport rep = radial_dimension_walk(s, 1.0, k, radii);
    EXPECT_LT(rep.max_residual, 1e-8) << "k=" << k;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      EXPECT_NEAR(rep.p_k[i], std::pow(2.0 * kPi, -0.5 * k) * std::exp(-0.5 * r * r), 1e-10);
    }
  }
}
