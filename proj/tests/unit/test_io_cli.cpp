#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "levy/cli.hpp"
#include "levy/errors.hpp"
#include "levy/io.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levy_io_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json stable(double alpha, int d = 1) {
  return {{"family", "isotropic_stable"}, {"dimension", d}, {"params", {{"alpha", alpha}}}};
}

Json brownian(int d = 1) { return {{"family", "brownian"}, {"dimension", d}}; }

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

Json strip_timestamp(Json j) {
  j["provenance"].erase("timestamp");
  return j;
}

// Runs the executable with a config file; returns the exit status.
int run_cli(const std::string& command, const Json& config, const fs::path& dir,
            std::string* err = nullptr) {
  const fs::path cfg = dir / (command + ".config.json");
  std::ofstream(cfg) << config.dump();
  const fs::path err_path = dir / "stderr.txt";
  const std::string cmd = std::string(LEVY_CLI_PATH) + " " + command + " --config " +
                          cfg.string() + " --out " + dir.string() + " > /dev/null 2> " +
                          err_path.string();
  const int status = std::system(cmd.c_str());
  if (err) *err = slurp(err_path);
  return WEXITSTATUS(status);
}

}  // namespace

TEST(ParseSymbol, AllFamilies) {
  EXPECT_EQ(parse_symbol_spec(brownian(2)).family(), Family::brownian);
  EXPECT_EQ(parse_symbol_spec(stable(1.5)).alpha(), 1.5);
  const Json rel{{"family", "relativistic"}, {"params", {{"m", 2.0}}}};
  EXPECT_EQ(parse_symbol_spec(rel).mass(), 2.0);
  const Json temp{{"family", "tempered_stable"}, {"params", {{"alpha", 1.2}, {"lambda", 0.5}}}};
  EXPECT_EQ(parse_symbol_spec(temp).family(), Family::tempered_stable);
  const Json cp{{"family", "compound_poisson"},
                {"params", {{"atoms", {{{"location", {1.0}}, {"mass", 0.5}}}}}}};
  EXPECT_NEAR(eval_symbol(parse_symbol_spec(cp), Vec::Constant(1, kPi)).real(), 1.0, 1e-14);
  const Json sub{{"family", "subordinated_bm"},
                 {"params", {{"subordinator", "gamma"}, {"a", 1.0}, {"b", 2.0}}}};
  EXPECT_EQ(parse_symbol_spec(sub).subordinator().kind, Subordinator::Kind::gamma);
  const Json drift{{"family", "brownian"}, {"params", {{"Q", {{2.0}}}, {"b", {0.5}}}}};
  const Complex v = eval_symbol(parse_symbol_spec(drift), Vec::Constant(1, 1.0));
  EXPECT_NEAR(v.real(), 1.0, 1e-15);
  EXPECT_NEAR(v.imag(), -0.5, 1e-15);
}

TEST(ParseSymbol, CustomTriplet) {
  const Json j{{"family", "custom"},
               {"b", {0.0}},
               {"Q", {{1.0}}},
               {"nu", {{"kind", "atoms"}, {"atoms", {{{"location", {2.0}}, {"mass", 1.0}}}}}}};
  const SymbolSpec s = parse_symbol_spec(j);
  EXPECT_EQ(s.family(), Family::custom);
  const Complex v = eval_symbol(s, Vec::Constant(1, 0.5));
  EXPECT_NEAR(v.real(), 0.125 + 1.0 - std::cos(1.0), 1e-12);
  EXPECT_NEAR(v.imag(), -std::sin(1.0), 1e-12);
}

TEST(ParseSymbol, RejectsBadInput) {
  EXPECT_THROW(parse_symbol_spec({{"family", "brownian"}, {"colour", 1}}), ConfigError);
  EXPECT_THROW(parse_symbol_spec({{"family", "isotropic_stable"}, {"params", {{"beta", 1}}}}),
               ConfigError);
  EXPECT_THROW(parse_symbol_spec({{"family", "isotropic_stable"}}), ConfigError);
  EXPECT_THROW(parse_symbol_spec({{"family", "nonsense"}}), ConfigError);
  EXPECT_THROW(parse_symbol_spec(stable(2.5)), ConfigError);
  EXPECT_THROW(parse_symbol_spec({{"family", "brownian"}, {"dimension", 4}}), ConfigError);
}

TEST(Serialization, CsvColumns) {
  const Grid g(2, 8, 0.5);
  const GridFunction f = GridFunction::sample(g, [](const Vec& x) { return Complex(x[0], x[1]); });
  std::ostringstream os;
  write_csv(f, os);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x1,x2,re,im");
  EXPECT_EQ(count_lines(s), 65u);
}

TEST(Serialization, BinaryRoundTrip) {
  const Grid g(1, 16, 0.3);
  const GridFunction f =
      GridFunction::sample(g, [](const Vec& x) { return Complex(std::sin(x[0]), x[0] * x[0]); });
  std::stringstream ss;
  write_binary(f, ss);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 24u + 16u * 16u);
  std::int64_t d = 0, n = 0;
  double h = 0.0;
  std::memcpy(&d, bytes.data(), 8);
  std::memcpy(&n, bytes.data() + 8, 8);
  std::memcpy(&h, bytes.data() + 16, 8);
  EXPECT_EQ(d, 1);
  EXPECT_EQ(n, 16);
  EXPECT_EQ(h, 0.3);
  const GridFunction back = read_binary(ss);
  EXPECT_TRUE(back.grid() == g);
  EXPECT_TRUE((back.values().array() == f.values().array()).all());
}

TEST(Serialization, DensitySidecarAndBatch) {
  const fs::path dir = scratch("density");
  const DensityTable t = transition_density(SymbolSpec::brownian(1), 1.0, Grid(1, 256, 0.1));
  write_density(t, (dir / "p.bin").string());
  const Json side = Json::parse(slurp(dir / "p.bin.json"));
  for (const char* key : {"t", "tail_mass", "clip_mass", "moments"}) {
    EXPECT_TRUE(side.contains(key)) << key;
  }
  EXPECT_EQ(side["t"].get<double>(), 1.0);
  EXPECT_EQ(fs::file_size(dir / "p.bin"), 24u + 256u * 16u);

  const SampleBatch b = sample_increments(SymbolSpec::brownian(2), 1.0, 10, 42);
  write_batch(b, (dir / "b.bin").string());
  EXPECT_EQ(fs::file_size(dir / "b.bin"), 24u + 24u + 10u * 2u * 16u);
  std::ifstream is(dir / "b.bin", std::ios::binary);
  std::uint64_t seed = 0;
  is.read(reinterpret_cast<char*>(&seed), 8);
  EXPECT_EQ(seed, 42u);
}

TEST(Serialization, VerdictAndHoelderJson) {
  ClassificationVerdict v;
  v.kind = VerdictKind::POLYNOMIAL;
  v.degree = 1;
  v.residuals["fixed_point"] = 1e-7;
  const Json j = to_json(v);
  const std::string kind = j.at("verdict").get<std::string>();
  EXPECT_TRUE(kind == "POLYNOMIAL" || kind == "CONSTANT" || kind == "NOT_HARMONIC" ||
              kind == "INCONCLUSIVE");
  EXPECT_EQ(j.at("degree").get<int>(), 1);

  const HoelderReport empty;
  const Json h = to_json(empty);
  EXPECT_TRUE(h.at("probes").is_array());
  EXPECT_TRUE(h.at("probes").empty());
  std::ostringstream os;
  write_probe_csv(empty, os);
  EXPECT_EQ(count_lines(os.str()), 1u);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config({{"symbol", brownian()}, {"colour", "red"}}), ConfigError);
  EXPECT_THROW(parse_config({{"symbol", brownian()}, {"grid", {{"N", 64}, {"h", 0.1}, {"x", 1}}}}),
               ConfigError);
  EXPECT_THROW(parse_config({{"symbol", brownian()}, {"tolerances", {{"nope", 1.0}}}}),
               ConfigError);
  EXPECT_THROW(parse_config({{"symbol", brownian()}, {"command", "explode"}}), ConfigError);
  EXPECT_THROW(parse_config({{"symbol", brownian()}, {"t", "soon"}}), ConfigError);
  EXPECT_THROW(parse_config(Json::object()), ConfigError);
}

TEST(Config, RoundTrip) {
  const Json j{{"command", "hoelder"},
               {"symbol", stable(1.9)},
               {"grid", {{"d", 1}, {"N", 1024}, {"h", 0.1}}},
               {"t", 0.5},
               {"function", {{"kind", "triangle"}, {"period", 32.0}}},
               {"beta", 1.5},
               {"points", {{0.0}, {1.5}}},
               {"probes", {{"pairs", 3}, {"seed", "0x1234"}}},
               {"seed", 77},
               {"tolerances", {{"fit", 1e-6}}},
               {"outputs", {{"csv", false}}}};
  const RunConfig c = parse_config(j);
  EXPECT_EQ(c.probe_seed, 0x1234u);
  EXPECT_EQ(c.tolerances.at("fit"), 1e-6);
  EXPECT_EQ(c.tolerances.at("mc_z"), 3.0);
  const Json echo = to_json(c);
  EXPECT_EQ(to_json(parse_config(echo)), echo);
}

TEST(Config, DefaultTolerancesAreDocumented) {
  const auto& t = default_tolerances();
  EXPECT_EQ(t.at("fixed_point"), 1e-5);
  EXPECT_EQ(t.at("constancy"), 1e-6);
  EXPECT_EQ(t.at("fit"), 1e-5);
  EXPECT_EQ(t.at("hoelder_ratio"), 50.0);
  EXPECT_EQ(subcommands().size(), 15u);
}

TEST(Run, DensityReport) {
  const fs::path dir = scratch("run_density");
  const RunConfig c = parse_config({{"symbol", brownian()}});
  const RunResult r = run("density", c, dir.string());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NEAR(r.report["results"]["p_at_origin"].get<double>(), 0.398942, 1e-6);
  for (const char* key : {"command", "config_echo", "results", "residuals", "verdicts",
                          "tolerances", "provenance"}) {
    EXPECT_TRUE(r.report.contains(key)) << key;
  }
  EXPECT_EQ(r.report["provenance"]["tool_version"], tool_version());
  EXPECT_TRUE(fs::exists(dir / "density.json"));
  EXPECT_TRUE(fs::exists(dir / "density.csv"));
  EXPECT_EQ(parse_config(r.report["config_echo"]).t, 1.0);
}

TEST(Run, DeterministicModuloTimestamp) {
  const fs::path dir = scratch("run_det");
  const RunConfig c = parse_config({{"symbol", stable(1.5)},
                                    {"samples", 5000},
                                    {"seed", 9},
                                    {"function", {{"kind", "gaussian"}, {"sigma", 1.0}}}});
  const RunResult a = run("simulate", c, dir.string());
  const std::string first = slurp(dir / "simulate.json");
  const RunResult b = run("simulate", c, dir.string());
  EXPECT_EQ(strip_timestamp(a.report).dump(), strip_timestamp(b.report).dump());
  EXPECT_EQ(strip_timestamp(Json::parse(first)), strip_timestamp(Json::parse(slurp(dir / "simulate.json"))));
}

TEST(Run, HoelderCsvRowsMatchProbes) {
  const fs::path dir = scratch("run_hoelder");
  const RunConfig c = parse_config({{"symbol", stable(1.9)},
                                    {"function", {{"kind", "triangle"}, {"period", 32.0}}},
                                    {"beta", 1.0},
                                    {"probes", {{"pairs", 2}}}});
  const RunResult r = run("hoelder", c, dir.string());
  EXPECT_EQ(r.report["results"]["hoelder"]["probes"].size(), 2u * 4u * 6u);
  EXPECT_EQ(count_lines(slurp(dir / "hoelder.csv")), 1u + 2u * 4u * 6u);
}

TEST(Run, EmptyProbeListGivesEmptyArrays) {
  const fs::path dir = scratch("run_empty");
  const RunConfig c = parse_config({{"symbol", stable(1.9)},
                                    {"function", {{"kind", "triangle"}, {"period", 32.0}}},
                                    {"beta", 1.0},
                                    {"probes", {{"pairs", 0}}}});
  const RunResult r = run("hoelder", c, dir.string());
  const Json j = Json::parse(slurp(dir / "hoelder.json"));
  EXPECT_TRUE(j["results"]["hoelder"]["probes"].is_array());
  EXPECT_TRUE(j["results"]["hoelder"]["probes"].empty());
  EXPECT_EQ(count_lines(slurp(dir / "hoelder.csv")), 1u);
  (void)r;
}

TEST(Run, EverySubcommandRuns) {
  const fs::path dir = scratch("run_all");
  const Json gauss{{"kind", "gaussian"}, {"sigma", 1.0}};
  const std::map<std::string, Json> configs{
      {"symbol-eval", {{"symbol", stable(1.5)}}},
      {"moments", {{"symbol", stable(1.5)}, {"betas", {1.4}}}},
      {"hw-check", {{"symbol", stable(1.5)}}},
      {"zero-set", {{"symbol", stable(1.5)}, {"grid", {{"N", 64}, {"h", 0.25}}}}},
      {"generator-apply",
       {{"symbol", stable(1.5)}, {"grid", {{"N", 8192}, {"h", 0.25}}}, {"function", gauss}}},
      {"decay-norm",
       {{"symbol", stable(1.5)}, {"grid", {{"N", 4096}, {"h", 0.25}}}, {"function", gauss},
        {"beta", 0.0}, {"window", 64.0}}},
      {"density", {{"symbol", stable(1.5)}}},
      {"semigroup-apply", {{"symbol", stable(1.5)}, {"function", gauss}}},
      {"dimension-walk", {{"symbol", stable(1.0)}}},
      {"weak-residual", {{"symbol", stable(1.5)}, {"function", {{"kind", "constant"}, {"value", 1.0}}}}},
      {"fixed-point", {{"symbol", stable(1.5)}, {"function", {{"kind", "constant"}, {"value", 1.0}}}}},
      {"hoelder",
       {{"symbol", stable(1.9)}, {"function", {{"kind", "triangle"}, {"period", 32.0}}},
        {"beta", 1.0}, {"probes", {{"pairs", 2}}}}},
      {"classify", {{"symbol", stable(1.0)}, {"function", {{"kind", "constant"}, {"value", 5.0}}}}},
      {"simulate", {{"symbol", stable(1.5)}, {"samples", 1000}}},
      {"dynkin", {{"symbol", brownian()}, {"grid", {{"N", 1024}, {"h", 0.02}}}, {"quad_points", 8}}},
  };
  ASSERT_EQ(configs.size(), subcommands().size());
  for (const auto& name : subcommands()) {
    const RunResult r = run(name, parse_config(configs.at(name)), dir.string());
    EXPECT_EQ(r.exit_code, 0) << name << ": " << r.report["verdicts"].dump();
    EXPECT_TRUE(fs::exists(dir / (name + ".json"))) << name;
  }
}

TEST(Executable, ClassifyExitCodes) {
  const fs::path dir = scratch("exe");
  const Json poly{{"symbol", stable(1.9)},
                  {"function", {{"kind", "polynomial"},
                                {"terms", {{{"coef", 1.0}, {"powers", {1}}}}}}},
                  {"beta", 1.5}};
  EXPECT_EQ(run_cli("classify", poly, dir), 0);
  const Json verdict = Json::parse(slurp(dir / "classify.json"));
  EXPECT_EQ(verdict["verdicts"]["verdict"], "POLYNOMIAL");
  EXPECT_EQ(verdict["verdicts"]["degree"], 1);

  const Json sine{{"symbol", brownian()}, {"function", {{"kind", "sine"}, {"w", {1.0}}}}};
  EXPECT_EQ(run_cli("classify", sine, dir), 2);
  EXPECT_EQ(Json::parse(slurp(dir / "classify.json"))["verdicts"]["verdict"], "NOT_HARMONIC");
}

TEST(Executable, ConfigErrorsExitOne) {
  const fs::path dir = scratch("exe_err");
  std::string err;
  EXPECT_EQ(run_cli("density", {{"symbol", brownian()}, {"bogus", true}}, dir, &err), 1);
  const Json diag = Json::parse(err);
  EXPECT_EQ(diag["error"], "ConfigError");
  EXPECT_NE(diag["message"].get<std::string>().find("bogus"), std::string::npos);

  EXPECT_EQ(run_cli("classify",
                    {{"symbol", stable(1.5)},
                     {"function", {{"kind", "polynomial"},
                                   {"terms", {{{"coef", 1.0}, {"powers", {2}}}}}}},
                     {"beta", 1.0}},
                    dir, &err),
            1);
  EXPECT_EQ(Json::parse(err)["error"], "GrowthError");
}
