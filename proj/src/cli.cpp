#include "levy/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "levy/errors.hpp"
#include "levy/generator.hpp"
#include "levy/levy_measure.hpp"
#include "levy/liouville.hpp"
#include "levy/montecarlo.hpp"
#include "levy/semigroup.hpp"

namespace levy {

namespace {

const std::set<std::string> kConfigKeys{
    "command", "symbol", "grid", "t", "function", "envelope", "beta", "betas",
    "points", "xi", "radii", "k", "probes", "seed", "samples", "eps",
    "window", "quad_points", "tolerances", "outputs"};

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
T get(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("'" + key + "' has the wrong type");
  }
}

std::vector<Vec> vec_list(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be an array");
  std::vector<Vec> out;
  for (const Json& e : j) out.push_back(json_to_vec(e));
  return out;
}

Json vec_list_json(const std::vector<Vec>& v) {
  Json j = Json::array();
  for (const Vec& x : v) j.push_back(vec_to_json(x));
  return j;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::uppercase << v;
  return os.str();
}

std::uint64_t parse_seed(const Json& j, const std::string& key) {
  if (j.is_number_unsigned() || j.is_number_integer()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    try {
      return std::stoull(j.get<std::string>(), nullptr, 0);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("'" + key + "' must be an unsigned integer or a numeric string");
}

GrowthFunction parse_growth(const Json& j, int d) {
  if (j.is_null()) throw ConfigError("this command needs a 'function'");
  if (!j.contains("kind")) throw ConfigError("function needs a 'kind'");
  const std::string kind = get<std::string>(j, "kind");
  auto dim_vec = [&](const std::string& key) {
    const Vec v = json_to_vec(j.at(key));
    if (v.size() != d) throw ConfigError("'" + key + "' has the wrong dimension");
    return v;
  };
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, "function");
    return GrowthFunction::constant(d, get<double>(j, "value"));
  }
  if (kind == "polynomial") {
    require_keys(j, {"kind", "terms"}, "function");
    std::vector<Monomial> terms;
    for (const Json& t : j.at("terms")) {
      require_keys(t, {"coef", "powers"}, "polynomial term");
      Monomial m{get<double>(t, "coef"), get<std::vector<int>>(t, "powers")};
      if (static_cast<int>(m.powers.size()) != d) throw ConfigError("powers have the wrong length");
      terms.push_back(m);
    }
    return GrowthFunction::polynomial(d, terms);
  }
  if (kind == "sine") {
    require_keys(j, {"kind", "w"}, "function");
    return GrowthFunction::sine(dim_vec("w"));
  }
  if (kind == "plane_wave") {
    require_keys(j, {"kind", "w"}, "function");
    return GrowthFunction::plane_wave(dim_vec("w"));
  }
  if (kind == "triangle") {
    require_keys(j, {"kind", "period"}, "function");
    return GrowthFunction::triangle(d, j.contains("period") ? get<double>(j, "period") : 4.0);
  }
  if (kind == "tilted_triangle") {
    require_keys(j, {"kind", "gamma", "period"}, "function");
    return GrowthFunction::tilted_triangle(d, get<double>(j, "gamma"),
                                           j.contains("period") ? get<double>(j, "period") : 4.0);
  }
  if (kind == "gaussian") {
    require_keys(j, {"kind", "center", "sigma"}, "function");
    const Vec c = j.contains("center") ? dim_vec("center") : Vec::Zero(d);
    return GrowthFunction::gaussian(c, j.contains("sigma") ? get<double>(j, "sigma") : 1.0);
  }
  throw ConfigError("unknown function kind '" + kind + "'");
}

SmoothFunction parse_bump(const Json& j, int d) {
  if (j.is_null()) return SmoothFunction::gaussian_bump(Vec::Zero(d), 1.0);
  if (!j.contains("kind") || get<std::string>(j, "kind") != "gaussian") {
    throw ConfigError("this command needs a gaussian test function");
  }
  require_keys(j, {"kind", "center", "sigma"}, "function");
  const Vec c = j.contains("center") ? json_to_vec(j.at("center")) : Vec::Zero(d);
  if (c.size() != d) throw ConfigError("'center' has the wrong dimension");
  return SmoothFunction::gaussian_bump(c, j.contains("sigma") ? get<double>(j, "sigma") : 1.0);
}

Grid grid_for(const RunConfig& cfg, int d) {
  if (cfg.grid) {
    if (cfg.grid->d != d) throw ConfigError("grid and symbol dimensions differ");
    return Grid(cfg.grid->d, cfg.grid->N, cfg.grid->h);
  }
  if (d == 1) return Grid(1, 4096, 0.1);
  if (d == 2) return Grid(2, 128, 0.15);
  return Grid(3, 64, 0.3);
}

std::vector<Vec> default_points(int d, double lo, double hi, int count) {
  std::vector<Vec> xs;
  for (int i = 0; i < count; ++i) {
    Vec x = Vec::Zero(d);
    x[0] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    xs.push_back(x);
  }
  return xs;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

DensityOptions density_options(const RunConfig& cfg) {
  DensityOptions o;
  o.resolution_tol = cfg.tolerances.at("resolution");
  o.max_clip_mass = cfg.tolerances.at("clip_mass");
  return o;
}

Subordinator subordinator_of(const SymbolSpec& spec) {
  switch (spec.family()) {
    case Family::subordinated_bm:
      return spec.subordinator();
    case Family::relativistic:
      return Subordinator::inverse_gaussian(spec.mass());
    case Family::isotropic_stable:
      if (spec.alpha() < 2.0) return Subordinator::stable(0.5 * spec.alpha());
      return Subordinator::deterministic(1.0);
    case Family::brownian:
      if (spec.symmetric() && spec.radial()) return Subordinator::deterministic(spec.diffusion()(0, 0));
      break;
    default:
      break;
  }
  throw UnsupportedFamily("dimension-walk needs a subordinated Brownian motion, got " +
                          to_string(spec.family()));
}

struct Context {
  const RunConfig& cfg;
  std::filesystem::path out;
  Json results = Json::object();
  Json residuals = Json::object();
  Json verdicts = Json::object();
  int exit_code = 0;

  void csv(const std::string& name, const std::string& body) const {
    if (!cfg.csv) return;
    std::ofstream os(out / name);
    if (!os) throw std::runtime_error("cannot write " + (out / name).string());
    os << body;
  }
};

void cmd_symbol_eval(Context& c, const SymbolSpec& spec) {
  std::vector<Vec> xi = c.cfg.xi;
  if (xi.empty()) xi = default_points(spec.dimension(), 0.0, 4.0, 9);
  Json rows = Json::array();
  std::ostringstream csv;
  for (int a = 0; a < spec.dimension(); ++a) csv << "xi" << (a + 1) << ",";
  csv << "re,im\n" << std::setprecision(17);
  for (const Vec& x : xi) {
    if (x.size() != spec.dimension()) throw ConfigError("xi has the wrong dimension");
    const Complex v = eval_symbol(spec, x);
    rows.push_back({{"xi", vec_to_json(x)}, {"psi", complex_json(v)}});
    for (int a = 0; a < x.size(); ++a) csv << x[a] << ",";
    csv << v.real() << "," << v.imag() << "\n";
  }
  c.results["values"] = rows;
  c.csv("symbol-eval.csv", csv.str());
}

void cmd_moments(Context& c, const SymbolSpec& spec) {
  std::vector<double> betas = c.cfg.betas;
  if (betas.empty()) betas = {0.5, 1.0, 1.5, 2.0};
  Json rows = Json::array();
  bool any_divergent = false;
  for (double b : betas) {
    const MomentReport r = levy_measure_moment(spec.triplet().nu, b);
    rows.push_back({{"beta", b}, {"value", finite_or_null(r.value)}, {"finite", r.finite},
                    {"shells", r.shells}});
    std::ostringstream key;
    key << "beta=" << b;
    c.verdicts[key.str()] = r.finite ? "finite" : "diverges";
    any_divergent = any_divergent || !r.finite;
  }
  c.results["moments"] = rows;
  if (any_divergent) c.exit_code = 2;
}

void cmd_hw_check(Context& c, const SymbolSpec& spec) {
  std::vector<double> radii = c.cfg.radii;
  if (radii.empty()) radii = {std::numbers::e, 10.0, 100.0, 1e3, 1e4};
  const HartmanWintnerReport r = hartman_wintner_diagnostic(spec, radii);
  c.results["radii"] = r.radii;
  c.results["ratios"] = r.ratios;
  c.results["note"] = r.note;
  c.verdicts["hartman_wintner"] = r.verdict;
  if (r.verdict == "fails") c.exit_code = 2;
}

void cmd_zero_set(Context& c, const SymbolSpec& spec) {
  const ZeroSetReport r = symbol_zero_set(spec, grid_for(c.cfg, spec.dimension()));
  c.results["zeros"] = vec_list_json(r.zeros);
  c.results["max_abs"] = r.max_abs;
  c.residuals["tol_zero"] = r.tol_zero;
  c.verdicts["non_liouville_warning"] = r.non_liouville_warning;
  if (r.non_liouville_warning) c.exit_code = 2;
}

void cmd_generator_apply(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const Grid grid = grid_for(c.cfg, d);
  const SmoothFunction phi = parse_bump(c.cfg.function, d);
  const GridFunction f = GridFunction::sample(grid, [&](const Vec& x) { return Complex(phi(x), 0.0); });
  const SpectralResult s = apply_generator_spectral(spec, f);
  c.residuals["imaginary_residue"] = s.imaginary_residue;
  c.residuals["boundary_ratio"] = s.boundary_ratio;
  c.verdicts["alias_warning"] = s.alias_warning;
  std::vector<Vec> xs = c.cfg.points;
  if (xs.empty()) xs = default_points(d, -2.0, 2.0, 9);
  Json rows = Json::array();
  std::vector<double> direct;
  if (spec.family() != Family::custom || d == 1) direct = apply_generator_direct(spec.triplet(), phi, xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double sv = fourier_interpolate(s.value, xs[i]).real();
    Json row{{"x", vec_to_json(xs[i])}, {"spectral", sv}};
    if (!direct.empty()) {
      row["direct"] = direct[i];
      worst = std::max(worst, std::abs(sv - direct[i]) / std::max(std::abs(direct[i]), 1e-300));
    }
    rows.push_back(row);
  }
  c.results["points"] = rows;
  if (!direct.empty()) c.residuals["max_relative_route_difference"] = worst;
  if (c.cfg.csv) {
    std::ostringstream os;
    write_csv(s.value, os);
    c.csv("generator-apply.csv", os.str());
  }
  if (c.cfg.binary) write_binary(s.value, (c.out / "generator-apply.bin").string());
}

void cmd_decay_norm(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const Grid grid = grid_for(c.cfg, d);
  const SmoothFunction phi = parse_bump(c.cfg.function, d);
  const GridFunction f = GridFunction::sample(grid, [&](const Vec& x) { return Complex(phi(x), 0.0); });
  const SpectralResult s = apply_generator_spectral(spec, f);
  if (!c.cfg.beta) throw ConfigError("decay-norm needs 'beta'");
  const double window = c.cfg.window > 0.0 ? c.cfg.window : grid.period() / 4.0;
  const DecayNormReport r = weighted_decay_norm(s.value, *c.cfg.beta, window, &spec.triplet().nu);
  c.results["partial"] = r.partial;
  c.results["half_window_partial"] = r.half_window_partial;
  c.results["annulus_radii"] = r.annulus_radii;
  c.results["annulus_sums"] = r.annulus_sums;
  c.residuals["relative_change"] = r.relative_change;
  c.residuals["tail_slope"] = finite_or_null(r.tail_slope);
  c.residuals["tail_estimate"] = finite_or_null(r.tail_estimate);
  c.verdicts["decay"] = r.verdict;
  if (r.moment_finite) c.verdicts["moment_finite"] = *r.moment_finite;
  if (r.consistent) c.verdicts["consistent"] = *r.consistent;
  if (r.verdict == "diverges") c.exit_code = 2;
}

void cmd_density(Context& c, const SymbolSpec& spec) {
  const Grid grid = grid_for(c.cfg, spec.dimension());
  DensityOptions o = density_options(c.cfg);
  if (!c.cfg.betas.empty()) o.moment_orders = c.cfg.betas;
  const DensityTable table = transition_density(spec, c.cfg.t, grid, o);
  Index3 center{0, 0, 0};
  for (int a = 0; a < grid.dimension(); ++a) center[a] = grid.points_per_axis() / 2;
  c.results["p_at_origin"] = table.values[grid.ravel(center)];
  c.results["sidecar"] = density_sidecar(table);
  c.residuals["mass_defect"] = table.mass_defect;
  c.residuals["extrapolation_defect"] = table.extrapolation_defect;
  c.residuals["clip_mass"] = table.clip_mass;
  c.residuals["resolution"] = table.resolution;
  const RegularityReport reg = density_regularity_report(table);
  c.results["sup_density"] = reg.sup_density;
  c.results["sup_gradient"] = reg.sup_gradient;
  c.results["sup_gradient_fd"] = reg.sup_gradient_fd;
  c.verdicts["regularity"] = reg.verdict;
  c.verdicts["mass"] = table.mass_defect < c.cfg.tolerances.at("mass") ? "ok" : "defect";
  if (c.cfg.csv) {
    std::ostringstream os;
    write_csv(GridFunction(grid, table.values.cast<Complex>()), os);
    c.csv("density.csv", os.str());
  }
  if (c.cfg.binary) write_density(table, (c.out / "density.bin").string());
}

double beta_for(const RunConfig& cfg, const SymbolSpec& spec, double gamma) {
  return cfg.beta ? *cfg.beta : default_beta(spec, gamma);
}

GrowthFunction growth_for(const RunConfig& cfg, int d) {
  GrowthFunction u = parse_growth(cfg.function, d);
  if (cfg.envelope) u.envelope = *cfg.envelope;
  return u;
}

void cmd_semigroup_apply(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const GrowthFunction u = growth_for(c.cfg, d);
  const double beta = beta_for(c.cfg, spec, u.envelope.gamma);
  const DensityTable table = transition_density(spec, c.cfg.t, grid_for(c.cfg, d), density_options(c.cfg));
  std::vector<Vec> xs = c.cfg.points;
  if (xs.empty()) xs = default_points(d, -4.0, 4.0, 9);
  const SemigroupResult r = apply_semigroup(table, u, xs, beta);
  Json rows = Json::array();
  std::ostringstream csv;
  for (int a = 0; a < d; ++a) csv << "x" << (a + 1) << ",";
  csv << "re,im,bound\n" << std::setprecision(17);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rows.push_back({{"x", vec_to_json(xs[i])}, {"value", complex_json(r.values[i])},
                    {"truncation_bound", r.truncation_bound[i]}});
    for (int a = 0; a < d; ++a) csv << xs[i][a] << ",";
    csv << r.values[i].real() << "," << r.values[i].imag() << "," << r.truncation_bound[i] << "\n";
    worst = std::max(worst, r.truncation_bound[i]);
  }
  c.results["beta"] = beta;
  c.results["points"] = rows;
  c.residuals["max_truncation_bound"] = worst;
  c.csv("semigroup-apply.csv", csv.str());
}

void cmd_dimension_walk(Context& c, const SymbolSpec& spec) {
  const Subordinator s = subordinator_of(spec);
  std::vector<double> radii = c.cfg.radii;
  if (radii.empty()) {
    for (int i = 0; i <= 16; ++i) radii.push_back(0.25 * i);
  }
  const DimensionWalkReport r = radial_dimension_walk(s, c.cfg.t, c.cfg.k, radii);
  c.results["k"] = r.k;
  c.results["radii"] = r.radii;
  c.results["p_k"] = r.p_k;
  c.results["p_k_plus_2"] = r.p_k2;
  c.results["dp_k"] = r.dp_k;
  c.results["residual"] = r.residual;
  c.results["residual_without_r"] = r.residual_without_r;
  c.residuals["max_residual"] = r.max_residual;
  c.residuals["max_residual_without_r"] = r.max_residual_without_r;
  const bool ok = r.max_residual < c.cfg.tolerances.at("dimension_walk");
  c.verdicts["relation_with_r"] = ok ? "holds" : "fails";
  c.verdicts["relation_without_r"] =
      r.max_residual_without_r < c.cfg.tolerances.at("dimension_walk") ? "holds" : "fails";
  std::ostringstream csv;
  csv << "r,p_k,p_k2,dp_k,residual,residual_without_r\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    csv << r.radii[i] << "," << r.p_k[i] << "," << r.p_k2[i] << "," << r.dp_k[i] << ","
        << r.residual[i] << "," << r.residual_without_r[i] << "\n";
  }
  c.csv("dimension-walk.csv", csv.str());
}

void cmd_weak_residual(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const GrowthFunction u = growth_for(c.cfg, d);
  const double beta = beta_for(c.cfg, spec, u.envelope.gamma);
  const GridFunction g = GridFunction::sample(grid_for(c.cfg, d), u.eval, u.envelope);
  const WeakResidualReport r = weak_residual(g, spec, beta, default_test_family(d));
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.integrals.size(); ++i) {
    rows.push_back({{"center", vec_to_json(r.centers[i])}, {"sigma", r.widths[i]},
                    {"integral", r.integrals[i]}, {"norm", r.norms[i]}});
  }
  c.results["tests"] = rows;
  c.results["beta"] = beta;
  c.residuals["weak_residual"] = r.residual;
  const bool ok = r.residual < c.cfg.tolerances.at("weak_residual");
  c.verdicts["weakly_harmonic"] = ok;
  if (!ok) c.exit_code = 2;
}

void cmd_fixed_point(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const GrowthFunction u = growth_for(c.cfg, d);
  const double beta = beta_for(c.cfg, spec, u.envelope.gamma);
  DensityOptions o = density_options(c.cfg);
  o.moment_orders = {beta};
  const DensityTable table = transition_density(spec, c.cfg.t, grid_for(c.cfg, d), o);
  std::vector<Vec> xs = c.cfg.points;
  if (xs.empty()) xs = default_points(d, -8.0, 8.0, 33);
  const FixedPointReport r = fixed_point_residual(u, table, xs, beta);
  c.results["beta"] = beta;
  c.results["argmax"] = vec_to_json(r.argmax);
  c.results["sup_u"] = r.sup_u;
  c.residuals["fixed_point"] = r.residual;
  c.residuals["truncation_bound"] = r.truncation_bound;
  c.residuals["fixed_point_tol"] = r.tol;
  c.verdicts["fixed_point"] = r.fixed_point;
  if (!r.fixed_point) c.exit_code = 2;
}

void cmd_hoelder(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const GrowthFunction u = growth_for(c.cfg, d);
  const double beta = beta_for(c.cfg, spec, u.envelope.gamma);
  DensityOptions o = density_options(c.cfg);
  o.moment_orders = {beta};
  const DensityTable table = transition_density(spec, c.cfg.t, grid_for(c.cfg, d), o);
  const std::vector<HoelderProbe> probes =
      c.cfg.probe_pairs > 0 ? default_probes(d, c.cfg.probe_pairs, c.cfg.probe_seed)
                            : std::vector<HoelderProbe>{};
  const HoelderReport r =
      hoelder_estimate(table, u, beta, probes, c.cfg.tolerances.at("hoelder_ratio"));
  c.results["hoelder"] = to_json(r);
  c.residuals["constant_ratio"] = r.constant_ratio;
  c.residuals["median_ratio"] = r.median_ratio;
  c.residuals["empirical_rho"] = finite_or_null(r.empirical_rho);
  c.verdicts["pass"] = r.pass;
  if (!r.pass) c.exit_code = 2;
  std::ostringstream csv;
  write_probe_csv(r, csv);
  c.csv("hoelder.csv", csv.str());
}

void cmd_classify(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const GrowthFunction u = growth_for(c.cfg, d);
  ClassifyOptions o;
  o.t = c.cfg.t;
  o.beta = c.cfg.beta.value_or(0.0);
  o.eps = c.cfg.eps;
  if (c.cfg.grid) {
    if (c.cfg.grid->d != d) throw ConfigError("grid and symbol dimensions differ");
    o.grid_points = c.cfg.grid->N;
    o.grid_spacing = c.cfg.grid->h;
  }
  o.window = c.cfg.window;
  o.fixed_point_tol = c.cfg.tolerances.at("fixed_point");
  o.constancy_tol = c.cfg.tolerances.at("constancy");
  o.fit_tol = c.cfg.tolerances.at("fit");
  o.slope_band = c.cfg.tolerances.at("slope_band");
  const ClassificationVerdict v = classify_harmonic(u, spec, o);
  const Json j = to_json(v);
  c.results = j;
  for (const auto& [k, x] : v.residuals) c.residuals[k] = x;
  c.verdicts["verdict"] = to_string(v.kind);
  c.verdicts["degree"] = v.degree;
  if (v.kind == VerdictKind::NOT_HARMONIC) c.exit_code = 2;
}

void cmd_simulate(Context& c, const SymbolSpec& spec) {
  const SampleBatch b = sample_increments(spec, c.cfg.t, c.cfg.samples, c.cfg.seed);
  const Eigen::RowVectorXd mean = b.increments.colwise().mean();
  Json m = Json::array();
  for (Eigen::Index a = 0; a < mean.size(); ++a) m.push_back(mean[a]);
  c.results["n"] = b.n;
  c.results["sample_mean"] = m;
  if (!c.cfg.function.is_null()) {
    const GrowthFunction u = growth_for(c.cfg, spec.dimension());
    std::vector<Vec> xs = c.cfg.points;
    if (xs.empty()) xs = default_points(spec.dimension(), -3.0, 3.0, 20);
    const McEstimate est = mc_semigroup(b, u, xs);
    Json rows = Json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      rows.push_back({{"x", vec_to_json(xs[i])}, {"mean", complex_json(est.mean[i])},
                      {"se", est.standard_error[i]}});
    }
    c.results["estimates"] = rows;
    c.results["nonstandard_error"] = est.nonstandard_error;
    if (c.cfg.beta || u.envelope.gamma == 0.0) {
      const double beta = beta_for(c.cfg, spec, u.envelope.gamma);
      DensityOptions o = density_options(c.cfg);
      o.moment_orders = {beta};
      const DensityTable table =
          transition_density(spec, c.cfg.t, grid_for(c.cfg, spec.dimension()), o);
      const McComparison cmp = compare_with_deterministic(est, table, u, xs, beta);
      c.results["z"] = cmp.z;
      c.residuals["max_z"] = cmp.z.empty() ? 0.0 : *std::max_element(cmp.z.begin(), cmp.z.end());
      std::size_t agree = 0;
      for (double z : cmp.z) agree += z <= c.cfg.tolerances.at("mc_z");
      c.verdicts["agreeing_points"] = agree;
      c.verdicts["agreement"] = agree * 20 >= 19 * xs.size();
    }
  }
  if (c.cfg.binary) write_batch(b, (c.out / "simulate.bin").string());
}

void cmd_dynkin(Context& c, const SymbolSpec& spec) {
  const int d = spec.dimension();
  const SmoothFunction phi = parse_bump(c.cfg.function, d);
  const Vec x = c.cfg.points.empty() ? Vec::Zero(d) : c.cfg.points.front();
  if (x.size() != d) throw ConfigError("point has the wrong dimension");
  const DynkinReport r = dynkin_residual(spec, phi, x, c.cfg.t, c.cfg.quad_points,
                                         grid_for(c.cfg, d), density_options(c.cfg));
  c.results["lhs"] = r.lhs;
  c.results["rhs"] = r.rhs;
  c.results["note"] = r.note;
  c.residuals["dynkin"] = r.residual;
  c.residuals["first_order_remainder"] = r.first_order_remainder;
  c.verdicts["dynkin"] = r.residual < c.cfg.tolerances.at("dynkin") ? "holds" : "fails";
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const QuadratureDivergence*>(&e)) return "QuadratureDivergence";
  if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
  if (dynamic_cast<const GrowthError*>(&e)) return "GrowthError";
  if (dynamic_cast<const WindowError*>(&e)) return "WindowError";
  if (dynamic_cast<const UnsupportedFamily*>(&e)) return "UnsupportedFamily";
  if (dynamic_cast<const EnvelopeError*>(&e)) return "EnvelopeError";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
  return "Error";
}

}  // namespace

std::string tool_version() { return "0.1.0"; }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "symbol-eval", "moments",         "hw-check",      "zero-set",     "generator-apply",
      "decay-norm",  "density",         "semigroup-apply", "dimension-walk", "weak-residual",
      "fixed-point", "hoelder",         "classify",      "simulate",     "dynkin"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table{
      {"resolution", 1e-12},     // e^{-t Re psi} at the frequency-box boundary
      {"clip_mass", 1e-6},       // negative density mass clipped
      {"mass", 1e-6},            // density mass defect
      {"fixed_point", 1e-5},     // relative to 1 + sup |u|
      {"constancy", 1e-6},       // relative to 1 + sup |u|
      {"fit", 1e-5},             // relative least-squares residual
      {"slope_band", 0.1},       // iterated-difference growth slope band
      {"hoelder_ratio", 50.0},   // max / median constant ratio
      {"weak_residual", 1e-3},
      {"dimension_walk", 1e-5},
      {"dynkin", 1e-5},
      {"mc_z", 3.0},
  };
  return table;
}

RunConfig parse_config(const Json& j) {
  require_keys(j, kConfigKeys, "config");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = get<std::string>(j, "command");
    if (!j.contains("symbol")) throw ConfigError("config needs a 'symbol'");
    c.symbol = j.at("symbol");
    if (j.contains("grid")) {
      const Json& g = j.at("grid");
      require_keys(g, {"d", "N", "h"}, "grid");
      GridConfig gc;
      gc.d = g.contains("d") ? get<int>(g, "d") : c.symbol.value("dimension", 1);
      gc.N = get<int>(g, "N");
      gc.h = get<double>(g, "h");
      c.grid = gc;
    }
    if (j.contains("t")) c.t = get<double>(j, "t");
    if (j.contains("function")) c.function = j.at("function");
    if (j.contains("envelope")) {
      const Json& e = j.at("envelope");
      require_keys(e, {"M", "gamma"}, "envelope");
      c.envelope = Envelope{get<double>(e, "M"), get<double>(e, "gamma")};
    }
    if (j.contains("beta")) c.beta = get<double>(j, "beta");
    if (j.contains("betas")) c.betas = get<std::vector<double>>(j, "betas");
    if (j.contains("points")) c.points = vec_list(j.at("points"), "points");
    if (j.contains("xi")) c.xi = vec_list(j.at("xi"), "xi");
    if (j.contains("radii")) c.radii = get<std::vector<double>>(j, "radii");
    if (j.contains("k")) c.k = get<int>(j, "k");
    if (j.contains("probes")) {
      const Json& p = j.at("probes");
      require_keys(p, {"pairs", "seed"}, "probes");
      if (p.contains("pairs")) c.probe_pairs = get<int>(p, "pairs");
      if (p.contains("seed")) c.probe_seed = parse_seed(p.at("seed"), "probes.seed");
    }
    if (j.contains("seed")) c.seed = parse_seed(j.at("seed"), "seed");
    if (j.contains("samples")) c.samples = get<std::size_t>(j, "samples");
    if (j.contains("eps")) c.eps = get<double>(j, "eps");
    if (j.contains("window")) c.window = get<double>(j, "window");
    if (j.contains("quad_points")) c.quad_points = get<int>(j, "quad_points");
    c.tolerances = default_tolerances();
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      if (!t.is_object()) throw ConfigError("tolerances must be an object");
      for (const auto& [k, v] : t.items()) {
        if (!c.tolerances.count(k)) throw ConfigError("unknown key '" + k + "' in tolerances");
        if (!v.is_number()) throw ConfigError("tolerance '" + k + "' must be a number");
        c.tolerances[k] = v.get<double>();
      }
    }
    if (j.contains("outputs")) {
      const Json& o = j.at("outputs");
      require_keys(o, {"csv", "binary"}, "outputs");
      if (o.contains("csv")) c.csv = get<bool>(o, "csv");
      if (o.contains("binary")) c.binary = get<bool>(o, "binary");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!c.command.empty() &&
      std::find(subcommands().begin(), subcommands().end(), c.command) == subcommands().end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  if (!(c.t > 0.0)) throw ConfigError("t must be positive");
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  if (!c.command.empty()) j["command"] = c.command;
  j["symbol"] = c.symbol;
  if (c.grid) j["grid"] = {{"d", c.grid->d}, {"N", c.grid->N}, {"h", c.grid->h}};
  j["t"] = c.t;
  if (!c.function.is_null()) j["function"] = c.function;
  if (c.envelope) j["envelope"] = {{"M", c.envelope->M}, {"gamma", c.envelope->gamma}};
  if (c.beta) j["beta"] = *c.beta;
  if (!c.betas.empty()) j["betas"] = c.betas;
  if (!c.points.empty()) j["points"] = vec_list_json(c.points);
  if (!c.xi.empty()) j["xi"] = vec_list_json(c.xi);
  if (!c.radii.empty()) j["radii"] = c.radii;
  j["k"] = c.k;
  j["probes"] = {{"pairs", c.probe_pairs}, {"seed", hex(c.probe_seed)}};
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["eps"] = c.eps;
  j["window"] = c.window;
  j["quad_points"] = c.quad_points;
  j["tolerances"] = c.tolerances;
  j["outputs"] = {{"csv", c.csv}, {"binary", c.binary}};
  return j;
}

RunResult run(const std::string& command, const RunConfig& cfg, const std::string& out_dir) {
  if (std::find(subcommands().begin(), subcommands().end(), command) == subcommands().end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (!cfg.command.empty() && cfg.command != command) {
    throw ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
  }
  std::filesystem::create_directories(out_dir);
  const SymbolSpec spec = parse_symbol_spec(cfg.symbol);
  Context c{cfg, std::filesystem::path(out_dir)};

  if (command == "symbol-eval") cmd_symbol_eval(c, spec);
  else if (command == "moments") cmd_moments(c, spec);
  else if (command == "hw-check") cmd_hw_check(c, spec);
  else if (command == "zero-set") cmd_zero_set(c, spec);
  else if (command == "generator-apply") cmd_generator_apply(c, spec);
  else if (command == "decay-norm") cmd_decay_norm(c, spec);
  else if (command == "density") cmd_density(c, spec);
  else if (command == "semigroup-apply") cmd_semigroup_apply(c, spec);
  else if (command == "dimension-walk") cmd_dimension_walk(c, spec);
  else if (command == "weak-residual") cmd_weak_residual(c, spec);
  else if (command == "fixed-point") cmd_fixed_point(c, spec);
  else if (command == "hoelder") cmd_hoelder(c, spec);
  else if (command == "classify") cmd_classify(c, spec);
  else if (command == "simulate") cmd_simulate(c, spec);
  else cmd_dynkin(c, spec);

  RunResult out;
  Json& r = out.report;
  r["command"] = command;
  r["config_echo"] = to_json(cfg);
  r["results"] = c.results;
  r["residuals"] = c.residuals;
  r["verdicts"] = c.verdicts;
  r["tolerances"] = cfg.tolerances;
  r["provenance"] = {{"tool_version", tool_version()}, {"seed", cfg.seed}, {"timestamp", timestamp()}};
  out.exit_code = c.exit_code;

  const std::filesystem::path path = c.out / (command + ".json");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << r.dump(2) << "\n";
  return out;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Lévy generator Liouville toolkit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  static const std::map<std::string, std::string> about{
      {"symbol-eval", "psi at the given frequencies"},
      {"moments", "moment finiteness of the Levy measure"},
      {"hw-check", "Hartman-Wintner growth probe"},
      {"zero-set", "lattice zeros of psi"},
      {"generator-apply", "A f by the spectral and direct routes"},
      {"decay-norm", "weighted L1 norm of A phi"},
      {"density", "transition density table"},
      {"semigroup-apply", "P_t u with truncation bounds"},
      {"dimension-walk", "radial recursion for subordinated Brownian motion"},
      {"weak-residual", "weak harmonicity residual against test bumps"},
      {"fixed-point", "sup |P_t u - u| on a window"},
      {"hoelder", "Hoelder modulus of P_t u"},
      {"classify", "Liouville classification of u"},
      {"simulate", "Monte Carlo estimate of P_t u"},
      {"dynkin", "Dynkin formula residual"}};
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::ifstream is(config_path);
    if (!is) throw ConfigError("cannot open config " + config_path);
    Json j;
    try {
      j = Json::parse(is);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const RunConfig cfg = parse_config(j);
    const RunResult res = run(command, cfg, out_dir);
    std::cout << command << ": " << res.report["verdicts"].dump() << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    const Json diag{{"error", error_kind(e)}, {"message", e.what()}, {"command", command}};
    std::cerr << diag.dump() << "\n";
    return 1;
  }
}

}  // namespace levy
