#include "levy/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "levy/errors.hpp"
#include "levy/parallel.hpp"

namespace levy {

struct SymbolSpec::Lazy {
  std::once_flag once;
  std::optional<LevyTriplet> triplet;
};

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Vec unit_vector(int dim) {
  Vec e = Vec::Zero(dim);
  e[0] = 1.0;
  return e;
}

LevyMeasure calibrated_radial(int dim, LevyMeasure::RadialFn shape, double s,
                              double target) {
  const LevyMeasure unit = LevyMeasure::from_radial(dim, std::move(shape), s);
  const double raw = jump_exponent(unit, unit_vector(dim)).real();
  return unit.scaled(target / raw);
}

LevyMeasure stable_measure(int dim, double alpha) {
  return calibrated_radial(
      dim, [dim, alpha](double r) { return std::pow(r, -dim - alpha); }, alpha,
      1.0);
}

LevyMeasure relativistic_measure(int dim, double m) {
  const double nu = 0.5 * (dim + 1);
  const double c = 2.0 * std::pow(m / (2.0 * kPi), nu);
  return LevyMeasure::from_radial(
      dim,
      [=](double r) {
        const double x = m * r;
        if (x > 700.0) return 0.0;
        return c * std::pow(r, -nu) * std::cyl_bessel_k(nu, x);
      },
      1.0);
}

LevyMeasure gamma_subordinated_measure(int dim, double a, double b) {
  const double nu = 0.5 * dim;
  const double k = std::sqrt(2.0 * b);
  const double c =
      2.0 * a * std::pow(2.0 * kPi, -0.5 * dim) * std::pow(2.0 * b, 0.25 * dim);
  return LevyMeasure::from_radial(
      dim,
      [=](double r) {
        const double x = k * r;
        if (x > 700.0) return 0.0;
        return c * std::pow(r, -nu) * std::cyl_bessel_k(nu, x);
      },
      0.0);
}

}  // namespace

LevyTriplet::LevyTriplet(Vec b_, Mat Q_, LevyMeasure nu_)
    : b(std::move(b_)), Q(std::move(Q_)), nu(std::move(nu_)) {
  const int d = static_cast<int>(b.size());
  require(d >= 1, "triplet drift must be non-empty");
  require(Q.rows() == d && Q.cols() == d, "diffusion matrix has the wrong shape");
  require(nu.dimension() == d, "jump measure has the wrong dimension");
  require(b.allFinite() && Q.allFinite(), "triplet entries must be finite");
  require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff()),
          "diffusion matrix must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-12,
          "diffusion matrix must be positive semi-definite");
}

Subordinator Subordinator::deterministic(double c) {
  require(c > 0.0, "deterministic subordinator rate must be positive");
  Subordinator s;
  s.kind = Kind::deterministic;
  s.c = c;
  return s;
}

Subordinator Subordinator::stable(double kappa) {
  require(kappa > 0.0 && kappa < 1.0, "stable subordinator index must lie in (0,1)");
  Subordinator s;
  s.kind = Kind::stable;
  s.kappa = kappa;
  return s;
}

Subordinator Subordinator::inverse_gaussian(double m) {
  require(m > 0.0, "inverse Gaussian parameter must be positive");
  Subordinator s;
  s.kind = Kind::inverse_gaussian;
  s.m = m;
  return s;
}

Subordinator Subordinator::gamma(double a, double b) {
  require(a > 0.0 && b > 0.0, "gamma subordinator parameters must be positive");
  Subordinator s;
  s.kind = Kind::gamma;
  s.a = a;
  s.b = b;
  return s;
}

double Subordinator::laplace_exponent(double lambda) const {
  switch (kind) {
    case Kind::deterministic:
      return c * lambda;
    case Kind::stable:
      return std::pow(2.0 * lambda, kappa);
    case Kind::inverse_gaussian: {
      const double x = 2.0 * lambda;
      return x / (std::sqrt(x + m * m) + m);
    }
    case Kind::gamma:
      return a * std::log1p(lambda / b);
  }
  return 0.0;
}

std::string Subordinator::name() const {
  switch (kind) {
    case Kind::deterministic:
      return "deterministic";
    case Kind::stable:
      return "stable";
    case Kind::inverse_gaussian:
      return "inverse_gaussian";
    case Kind::gamma:
      return "gamma";
  }
  return "";
}

JumpLaw JumpLaw::from_atoms(std::vector<Atom> atoms) {
  require(!atoms.empty(), "jump law needs at least one atom");
  JumpLaw law;
  law.kind = Kind::atoms;
  law.atoms = std::move(atoms);
  return law;
}

JumpLaw JumpLaw::gaussian(double rate, double sigma) {
  require(rate > 0.0 && sigma > 0.0, "Gaussian jump law needs rate, sigma > 0");
  JumpLaw law;
  law.kind = Kind::gaussian;
  law.rate = rate;
  law.sigma = sigma;
  return law;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::brownian:
      return "brownian";
    case Family::isotropic_stable:
      return "isotropic_stable";
    case Family::relativistic:
      return "relativistic";
    case Family::tempered_stable:
      return "tempered_stable";
    case Family::compound_poisson:
      return "compound_poisson";
    case Family::subordinated_bm:
      return "subordinated_bm";
    case Family::custom:
      return "custom";
  }
  return "";
}

SymbolSpec SymbolSpec::brownian(int dim) {
  return brownian(Mat::Identity(dim, dim), Vec::Zero(dim));
}

SymbolSpec SymbolSpec::brownian(Mat Q, Vec b) {
  SymbolSpec s;
  s.family_ = Family::brownian;
  s.dim_ = static_cast<int>(b.size());
  require(s.dim_ >= 1 && s.dim_ <= 3, "dimension must be 1, 2 or 3");
  s.lazy_ = std::make_shared<Lazy>();
  // validates Q
  s.lazy_->triplet.emplace(b, Q, LevyMeasure::zero(s.dim_));
  s.Q_ = std::move(Q);
  s.b_ = std::move(b);
  return s;
}

SymbolSpec SymbolSpec::isotropic_stable(int dim, double alpha) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  require(alpha > 0.0 && alpha < 2.0, "stable index must lie in (0,2)");
  SymbolSpec s;
  s.family_ = Family::isotropic_stable;
  s.dim_ = dim;
  s.alpha_ = alpha;
  s.lazy_ = std::make_shared<Lazy>();
  return s;
}

SymbolSpec SymbolSpec::relativistic(int dim, double m) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  require(m > 0.0, "relativistic mass must be positive");
  SymbolSpec s;
  s.family_ = Family::relativistic;
  s.dim_ = dim;
  s.mass_ = m;
  s.lazy_ = std::make_shared<Lazy>();
  return s;
}

SymbolSpec SymbolSpec::tempered_stable(int dim, double alpha, double lambda) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  require(alpha > 0.0 && alpha < 2.0, "stable index must lie in (0,2)");
  require(lambda > 0.0, "tempering parameter must be positive");
  SymbolSpec s;
  s.family_ = Family::tempered_stable;
  s.dim_ = dim;
  s.alpha_ = alpha;
  s.lambda_ = lambda;
  s.lazy_ = std::make_shared<Lazy>();
  return s;
}

SymbolSpec SymbolSpec::compound_poisson(int dim, JumpLaw law) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  SymbolSpec s;
  s.family_ = Family::compound_poisson;
  s.dim_ = dim;
  s.lazy_ = std::make_shared<Lazy>();
  if (law.kind == JumpLaw::Kind::atoms) {
    LevyMeasure nu = LevyMeasure::from_atoms(dim, law.atoms);
    Vec b = Vec::Zero(dim);
    for (const auto& a : law.atoms) {
      if (a.location.norm() < 1.0) b += a.mass * a.location;
    }
    s.lazy_->triplet.emplace(b, Mat::Zero(dim, dim), std::move(nu));
  }
  s.law_ = std::move(law);
  return s;
}

SymbolSpec SymbolSpec::subordinated_bm(int dim, Subordinator sub) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  SymbolSpec s;
  s.family_ = Family::subordinated_bm;
  s.dim_ = dim;
  s.sub_ = sub;
  s.lazy_ = std::make_shared<Lazy>();
  return s;
}

SymbolSpec SymbolSpec::custom(LevyTriplet triplet) {
  SymbolSpec s;
  s.family_ = Family::custom;
  s.dim_ = triplet.dimension();
  require(s.dim_ >= 1 && s.dim_ <= 3, "dimension must be 1, 2 or 3");
  s.b_ = triplet.b;
  s.Q_ = triplet.Q;
  s.lazy_ = std::make_shared<Lazy>();
  s.lazy_->triplet.emplace(std::move(triplet));
  for (double rho : {0.5, 2.0}) {
    const Complex v = s(rho * unit_vector(s.dim_));
    require(v.real() >= -1e-8 * (1.0 + std::abs(v)),
            "custom triplet gives Re psi < 0 on a probe");
  }
  return s;
}

std::string SymbolSpec::name() const {
  std::ostringstream os;
  os << to_string(family_) << "(d=" << dim_;
  switch (family_) {
    case Family::isotropic_stable:
      os << ", alpha=" << alpha_;
      break;
    case Family::relativistic:
      os << ", m=" << mass_;
      break;
    case Family::tempered_stable:
      os << ", alpha=" << alpha_ << ", lambda=" << lambda_;
      break;
    case Family::subordinated_bm:
      os << ", " << sub_.name();
      break;
    default:
      break;
  }
  os << ")";
  return os.str();
}

bool SymbolSpec::symmetric() const {
  switch (family_) {
    case Family::brownian:
      return b_.isZero(0.0);
    case Family::compound_poisson:
      return law_.kind == JumpLaw::Kind::gaussian || triplet().nu.symmetric();
    case Family::custom:
      return b_.isZero(0.0) && triplet().nu.symmetric();
    default:
      return true;
  }
}

bool SymbolSpec::radial() const {
  switch (family_) {
    case Family::brownian:
      return b_.isZero(0.0) && Q_.isApprox(Q_(0, 0) * Mat::Identity(dim_, dim_), 0.0);
    case Family::compound_poisson:
      return law_.kind == JumpLaw::Kind::gaussian;
    case Family::custom:
      return false;
    default:
      return true;
  }
}

double SymbolSpec::radial_value(double rho) const {
  const double r2 = rho * rho;
  switch (family_) {
    case Family::brownian:
      return 0.5 * Q_(0, 0) * r2;
    case Family::isotropic_stable:
      return std::pow(rho, alpha_);
    case Family::relativistic:
      return r2 / (std::sqrt(r2 + mass_ * mass_) + mass_);
    case Family::tempered_stable:
      return std::pow(lambda_, alpha_) *
             std::expm1(0.5 * alpha_ * std::log1p(r2 / (lambda_ * lambda_)));
    case Family::compound_poisson:
      return -law_.rate * std::expm1(-0.5 * law_.sigma * law_.sigma * r2);
    case Family::subordinated_bm:
      return sub_.laplace_exponent(0.5 * r2);
    case Family::custom:
      break;
  }
  throw std::logic_error("radial_value called on a non-radial symbol");
}

Complex SymbolSpec::closed_form(const Vec& xi) const {
  switch (family_) {
    case Family::brownian:
      return Complex(0.5 * xi.dot(Q_ * xi), -b_.dot(xi));
    case Family::compound_poisson:
      if (law_.kind == JumpLaw::Kind::atoms) {
        Complex acc{};
        for (const auto& a : law_.atoms) {
          const double phase = a.location.dot(xi);
          const double half = std::sin(0.5 * phase);
          acc += a.mass * Complex(2.0 * half * half, -std::sin(phase));
        }
        return acc;
      }
      [[fallthrough]];
    default:
      return radial_value(xi.norm());
  }
}

Complex SymbolSpec::operator()(const Vec& xi) const {
  if (xi.size() != dim_) throw std::invalid_argument("frequency has the wrong dimension");
  if (!xi.allFinite()) throw std::invalid_argument("frequency must be finite");
  if (xi.isZero(0.0)) return Complex{};
  if (family_ == Family::custom) return eval_symbol(triplet(), xi);
  return closed_form(xi);
}

const LevyTriplet& SymbolSpec::triplet() const {
  std::call_once(lazy_->once, [this] {
    if (lazy_->triplet) return;
    const Vec zero = Vec::Zero(dim_);
    const Mat none = Mat::Zero(dim_, dim_);
    switch (family_) {
      case Family::isotropic_stable:
        lazy_->triplet.emplace(zero, none, stable_measure(dim_, alpha_));
        break;
      case Family::relativistic:
        lazy_->triplet.emplace(zero, none, relativistic_measure(dim_, mass_));
        break;
      case Family::tempered_stable: {
        const double a = alpha_;
        const double lam = lambda_;
        const double nu = 0.5 * (dim_ + a);
        const auto shape = [=](double r) {
          const double x = lam * r;
          if (x > 700.0) return 0.0;
          return std::pow(r, -nu) * std::cyl_bessel_k(nu, x);
        };
        lazy_->triplet.emplace(zero, none,
                               calibrated_radial(dim_, shape, a, radial_value(1.0)));
        break;
      }
      case Family::compound_poisson: {
        const double rate = law_.rate;
        const double sig = law_.sigma;
        const double c = rate * std::pow(2.0 * kPi * sig * sig, -0.5 * dim_);
        const auto profile = [=](double r) {
          return c * std::exp(-0.5 * r * r / (sig * sig));
        };
        lazy_->triplet.emplace(zero, none, LevyMeasure::from_radial(dim_, profile, 0.0));
        break;
      }
      case Family::subordinated_bm:
        switch (sub_.kind) {
          case Subordinator::Kind::deterministic:
            lazy_->triplet.emplace(zero, sub_.c * Mat::Identity(dim_, dim_),
                                   LevyMeasure::zero(dim_));
            break;
          case Subordinator::Kind::stable:
            lazy_->triplet.emplace(zero, none, stable_measure(dim_, 2.0 * sub_.kappa));
            break;
          case Subordinator::Kind::inverse_gaussian:
            lazy_->triplet.emplace(zero, none, relativistic_measure(dim_, sub_.m));
            break;
          case Subordinator::Kind::gamma:
            lazy_->triplet.emplace(zero, none,
                                   gamma_subordinated_measure(dim_, sub_.a, sub_.b));
            break;
        }
        break;
      default:
        throw std::logic_error("triplet missing for family");
    }
  });
  return *lazy_->triplet;
}

bool SymbolSpec::moment_finite(double beta) const {
  require(beta >= 0.0, "moment order must be non-negative");
  switch (family_) {
    case Family::isotropic_stable:
      return beta < alpha_;
    case Family::subordinated_bm:
      return sub_.kind != Subordinator::Kind::stable || beta < 2.0 * sub_.kappa;
    case Family::custom:
      return levy_measure_moment(triplet().nu, beta).finite;
    default:
      return true;
  }
}

Complex eval_symbol(const SymbolSpec& spec, const Vec& xi) { return spec(xi); }

Complex eval_symbol(const LevyTriplet& triplet, const Vec& xi,
                    const JumpQuadrature& q) {
  if (xi.size() != triplet.dimension()) {
    throw std::invalid_argument("frequency has the wrong dimension");
  }
  if (xi.isZero(0.0)) return Complex{};
  return Complex(0.5 * xi.dot(triplet.Q * xi), -triplet.b.dot(xi)) +
         jump_exponent(triplet.nu, xi, q);
}

CVec symbol_on_lattice(const SymbolSpec& spec, const Grid& grid) {
  if (grid.dimension() != spec.dimension()) {
    throw std::invalid_argument("grid and symbol dimensions differ");
  }
  if (spec.family() == Family::custom) spec.triplet();
  CVec out(grid.size());
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = spec(grid.frequency(i));
  });
  return out;
}

HartmanWintnerReport hartman_wintner_diagnostic(const SymbolSpec& spec,
                                                const std::vector<double>& radii) {
  HartmanWintnerReport rep;
  rep.radii = radii;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] >= std::exp(1.0) * (1.0 - 1e-12), "probe radii must be >= e");
    require(i == 0 || radii[i] > radii[i - 1], "probe radii must increase");
  }
  std::vector<Direction> dirs = angular_rule(spec.dimension(), 32);
  for (double R : radii) {
    double low;
    if (spec.radial()) {
      low = spec.radial_value(R);
    } else {
      low = std::numeric_limits<double>::infinity();
      for (const auto& d : dirs) low = std::min(low, spec(R * d.unit).real());
    }
    rep.ratios.push_back(low / std::log(R));
  }
  const auto& q = rep.ratios;
  if (q.size() < 2) {
    rep.verdict = "inconclusive";
    return rep;
  }
  const bool increasing = std::is_sorted(q.begin(), q.end(), std::less<>()) &&
                          std::adjacent_find(q.begin(), q.end()) == q.end();
  if (increasing && q.back() >= 2.0 * q.front()) {
    rep.verdict = "diverges";
  } else if (q.back() <= q.front()) {
    rep.verdict = "fails";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

ZeroSetReport symbol_zero_set(const SymbolSpec& spec, const Grid& grid) {
  const CVec psi = symbol_on_lattice(spec, grid);
  ZeroSetReport rep;
  rep.max_abs = psi.cwiseAbs().maxCoeff();
  rep.tol_zero = 1e-10 * (1.0 + rep.max_abs);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(psi[i]) <= rep.tol_zero) {
      Vec xi = grid.frequency(i);
      if (!xi.isZero(0.0)) rep.non_liouville_warning = true;
      rep.zeros.push_back(std::move(xi));
    }
  }
  return rep;
}

}  // namespace levy
