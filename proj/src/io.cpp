#include "levy/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "levy/errors.hpp"

namespace levy {

namespace {

static_assert(std::endian::native == std::endian::little, "binary dumps assume little-endian");

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

double number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  if (!j.at(key).is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback,
                 const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

Mat json_to_mat(const Json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ConfigError("Q must be a d x d array");
  }
  Mat Q(d, d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d) {
      throw ConfigError("Q must be a d x d array");
    }
    for (int c = 0; c < d; ++c) Q(r, c) = j[r][c].get<double>();
  }
  return Q;
}

std::vector<Atom> parse_atoms(const Json& j, int d) {
  if (!j.is_array()) throw ConfigError("atoms must be an array");
  std::vector<Atom> atoms;
  for (const Json& a : j) {
    check_keys(a, {"location", "mass"}, "atom");
    Atom atom{json_to_vec(a.at("location")), number(a, "mass", "atom")};
    if (atom.location.size() != d) throw ConfigError("atom location has the wrong dimension");
    atoms.push_back(atom);
  }
  return atoms;
}

// Radial shapes c r^{-p} e^{-lambda r} ("power", lambda = 0 allowed) and
// c e^{-r^2/(2 sigma^2)} ("gaussian").
LevyMeasure parse_measure(const Json& j, int d) {
  if (!j.contains("kind")) throw ConfigError("nu needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "atoms") {
    check_keys(j, {"kind", "atoms"}, "nu");
    return LevyMeasure::from_atoms(d, parse_atoms(j.at("atoms"), d));
  }
  if (kind != "radial" && kind != "density") {
    throw ConfigError("nu kind must be density, radial or atoms");
  }
  check_keys(j, {"kind", "form", "c", "c_plus", "c_minus", "exponent", "rate", "sigma",
                 "support", "singularity_order"},
             "nu");
  const std::string form = j.value("form", std::string("power"));
  std::optional<double> support;
  if (j.contains("support")) support = number(j, "support", "nu");
  std::function<double(double)> shape;
  double s = 0.0;
  if (form == "power") {
    const double p = number(j, "exponent", "nu");
    const double lambda = number_or(j, "rate", 0.0, "nu");
    shape = [p, lambda](double r) { return std::pow(r, -p) * std::exp(-lambda * r); };
    s = p - d;
  } else if (form == "gaussian") {
    const double sigma = number(j, "sigma", "nu");
    shape = [sigma](double r) { return std::exp(-0.5 * r * r / (sigma * sigma)); };
  } else {
    throw ConfigError("nu form must be power or gaussian");
  }
  s = number_or(j, "singularity_order", s, "nu");
  if (kind == "radial") {
    const double c = number_or(j, "c", 1.0, "nu");
    try {
      return LevyMeasure::from_radial(d, [c, shape](double r) { return c * shape(r); }, s,
                                      support);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("invalid jump measure: ") + e.what());
    }
  }
  const double cp = number_or(j, "c_plus", number_or(j, "c", 1.0, "nu"), "nu");
  const double cm = number_or(j, "c_minus", number_or(j, "c", 1.0, "nu"), "nu");
  if (d > 1 && cp != cm) throw ConfigError("c_plus/c_minus are only meaningful in d = 1");
  auto density = [cp, cm, shape](const Vec& y) {
    return (y[0] >= 0.0 ? cp : cm) * shape(y.norm());
  };
  try {
    return LevyMeasure::from_density(d, density, s, cp == cm, support);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid jump measure: ") + e.what());
  }
}

Subordinator parse_subordinator(const Json& p) {
  const std::string kind = p.value("subordinator", std::string("deterministic"));
  const std::string where = "subordinated_bm params";
  if (kind == "deterministic") return Subordinator::deterministic(number_or(p, "c", 1.0, where));
  if (kind == "stable") return Subordinator::stable(number(p, "kappa", where));
  if (kind == "inverse_gaussian") return Subordinator::inverse_gaussian(number(p, "m", where));
  if (kind == "gamma") return Subordinator::gamma(number(p, "a", where), number(p, "b", where));
  throw ConfigError("unknown subordinator '" + kind + "'");
}

void write_header(std::ostream& os, std::int64_t d, std::int64_t n, double h) {
  os.write(reinterpret_cast<const char*>(&d), sizeof d);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  return os;
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vec json_to_vec(const Json& j) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) throw ConfigError("expected a number array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("expected a number array");
    v[i] = j[i].get<double>();
  }
  return v;
}

SymbolSpec parse_symbol_spec(const Json& j) {
  check_keys(j, {"family", "dimension", "params", "b", "Q", "nu"}, "symbol");
  if (!j.contains("family")) throw ConfigError("symbol needs a 'family'");
  const std::string fam = j.at("family").get<std::string>();
  const int d = j.value("dimension", 1);
  if (d < 1 || d > 3) throw ConfigError("dimension must be 1, 2 or 3");
  const Json p = j.value("params", Json::object());
  const std::string where = fam + " params";
  try {
    if (fam == "custom") {
      if (j.contains("params")) throw ConfigError("custom triplets take b, Q and nu, not params");
      const Vec b = j.contains("b") ? json_to_vec(j.at("b")) : Vec::Zero(d);
      const Mat Q = j.contains("Q") ? json_to_mat(j.at("Q"), d) : Mat::Zero(d, d);
      const LevyMeasure nu =
          j.contains("nu") ? parse_measure(j.at("nu"), d) : LevyMeasure::zero(d);
      return SymbolSpec::custom(LevyTriplet(b, Q, nu));
    }
    if (j.contains("b") || j.contains("Q") || j.contains("nu")) {
      throw ConfigError("b, Q and nu are only accepted for custom triplets");
    }
    if (fam == "brownian") {
      check_keys(p, {"Q", "b"}, where);
      if (!p.contains("Q") && !p.contains("b")) return SymbolSpec::brownian(d);
      const Mat Q = p.contains("Q") ? json_to_mat(p.at("Q"), d) : Mat::Identity(d, d);
      const Vec b = p.contains("b") ? json_to_vec(p.at("b")) : Vec::Zero(d);
      if (b.size() != d) throw ConfigError("drift has the wrong dimension");
      return SymbolSpec::brownian(Q, b);
    }
    if (fam == "isotropic_stable") {
      check_keys(p, {"alpha"}, where);
      return SymbolSpec::isotropic_stable(d, number(p, "alpha", where));
    }
    if (fam == "relativistic") {
      check_keys(p, {"m"}, where);
      return SymbolSpec::relativistic(d, number(p, "m", where));
    }
    if (fam == "tempered_stable") {
      check_keys(p, {"alpha", "lambda"}, where);
      return SymbolSpec::tempered_stable(d, number(p, "alpha", where), number(p, "lambda", where));
    }
    if (fam == "compound_poisson") {
      check_keys(p, {"atoms", "rate", "sigma"}, where);
      if (p.contains("atoms")) {
        if (p.contains("rate") || p.contains("sigma")) {
          throw ConfigError("compound_poisson takes either atoms or rate/sigma");
        }
        return SymbolSpec::compound_poisson(d, JumpLaw::from_atoms(parse_atoms(p.at("atoms"), d)));
      }
      return SymbolSpec::compound_poisson(
          d, JumpLaw::gaussian(number(p, "rate", where), number(p, "sigma", where)));
    }
    if (fam == "subordinated_bm") {
      check_keys(p, {"subordinator", "c", "kappa", "m", "a", "b"}, where);
      return SymbolSpec::subordinated_bm(d, parse_subordinator(p));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed symbol: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid symbol: ") + e.what());
  }
  throw ConfigError("unknown family '" + fam + "'");
}

void write_csv(const GridFunction& f, std::ostream& os) {
  const Grid& g = f.grid();
  const int d = g.dimension();
  for (int a = 0; a < d; ++a) os << "x" << (a + 1) << ",";
  os << "re,im\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.point(i);
    for (int a = 0; a < d; ++a) os << x[a] << ",";
    os << f[i].real() << "," << f[i].imag() << "\n";
  }
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream os = open_out(path, false);
  write_csv(f, os);
}

void write_binary(const GridFunction& f, std::ostream& os) {
  const Grid& g = f.grid();
  write_header(os, g.dimension(), g.points_per_axis(), g.spacing());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double re = f[i].real(), im = f[i].imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

void write_binary(const GridFunction& f, const std::string& path) {
  std::ofstream os = open_out(path, true);
  write_binary(f, os);
}

GridFunction read_binary(std::istream& is) {
  std::int64_t d = 0, n = 0;
  double h = 0.0;
  is.read(reinterpret_cast<char*>(&d), sizeof d);
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!is) throw std::runtime_error("truncated grid dump header");
  const Grid grid(static_cast<int>(d), static_cast<int>(n), h);
  CVec values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double re = 0.0, im = 0.0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    is.read(reinterpret_cast<char*>(&im), sizeof im);
    values[i] = Complex(re, im);
  }
  if (!is) throw std::runtime_error("truncated grid dump");
  return GridFunction(grid, values);
}

GridFunction read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  return read_binary(is);
}

Json density_sidecar(const DensityTable& table) {
  Json j;
  j["t"] = table.t;
  j["tail_mass"] = table.tail_mass;
  j["tail_extrapolated"] = table.tail_extrapolated;
  j["mass_defect"] = table.mass_defect;
  j["extrapolation_defect"] = table.extrapolation_defect;
  j["clip_mass"] = table.clip_mass;
  j["resolution"] = table.resolution;
  j["oversampling"] = table.oversampling;
  Json m = Json::object();
  for (const auto& [beta, mom] : table.moments) {
    std::ostringstream key;
    key << beta;
    m[key.str()] = {{"value", mom.finite ? Json(mom.value) : Json(nullptr)},
                    {"finite", mom.finite},
                    {"lattice", mom.lattice},
                    {"tail", mom.tail}};
  }
  j["moments"] = m;
  return j;
}

void write_density(const DensityTable& table, const std::string& path) {
  CVec v = table.values.cast<Complex>();
  write_binary(GridFunction(table.grid, v), path);
  std::ofstream os = open_out(path + ".json", false);
  os << density_sidecar(table).dump(2) << "\n";
}

void write_batch(const SampleBatch& batch, const std::string& path) {
  std::ofstream os = open_out(path, true);
  os.write(reinterpret_cast<const char*>(&batch.seed), sizeof batch.seed);
  os.write(reinterpret_cast<const char*>(&batch.batch), sizeof batch.batch);
  os.write(reinterpret_cast<const char*>(&batch.t), sizeof batch.t);
  write_header(os, batch.increments.cols(), static_cast<std::int64_t>(batch.n), 0.0);
  const double zero = 0.0;
  for (Eigen::Index i = 0; i < batch.increments.rows(); ++i) {
    for (Eigen::Index a = 0; a < batch.increments.cols(); ++a) {
      const double v = batch.increments(i, a);
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
      os.write(reinterpret_cast<const char*>(&zero), sizeof zero);
    }
  }
}

Json to_json(const ClassificationVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.kind);
  j["degree"] = v.degree;
  j["residuals"] = v.residuals;
  j["notes"] = v.notes;
  j["sweep_radii"] = v.sweep_radii;
  j["sweep_values"] = v.sweep_values;
  j["fit_residuals"] = v.fit_residuals;
  return j;
}

Json to_json(const HoelderReport& r) {
  Json j;
  j["gamma"] = r.gamma;
  j["beta"] = r.beta;
  j["rho"] = r.rho;
  j["empirical_rho"] = std::isfinite(r.empirical_rho) ? Json(r.empirical_rho) : Json(nullptr);
  j["constant_ratio"] = r.constant_ratio;
  j["median_ratio"] = r.median_ratio;
  j["pass"] = r.pass;
  Json rows = Json::array();
  for (const HoelderRow& row : r.rows) {
    rows.push_back({{"r", row.r}, {"h", row.h_norm}, {"lhs", row.lhs}, {"bound", row.bound},
                    {"ratio", row.ratio}});
  }
  j["probes"] = rows;
  return j;
}

void write_probe_csv(const HoelderReport& r, std::ostream& os) {
  os << "r,h,lhs,bound,ratio\n" << std::setprecision(17);
  for (const HoelderRow& row : r.rows) {
    os << row.r << "," << row.h_norm << "," << row.lhs << "," << row.bound << "," << row.ratio
       << "\n";
  }
}

}  // namespace levy
