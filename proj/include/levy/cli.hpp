#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levy/io.hpp"

namespace levy {

std::string tool_version();

/// The 15 subcommand names.
const std::vector<std::string>& subcommands();

/// Tolerance table; every entry can be overridden under "tolerances".
const std::map<std::string, double>& default_tolerances();

struct GridConfig {
  int d = 1;
  int N = 4096;
  double h = 0.1;
};

/// Parsed run configuration. Absent optional fields take per-command
/// defaults at run time.
struct RunConfig {
  std::string command;
  Json symbol;
  std::optional<GridConfig> grid;
  double t = 1.0;
  Json function;
  std::optional<Envelope> envelope;
  std::optional<double> beta;
  std::vector<double> betas;
  std::vector<Vec> points;
  std::vector<Vec> xi;
  std::vector<double> radii;
  int k = 1;
  int probe_pairs = 16;
  std::uint64_t probe_seed = 0x5EED;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  double eps = 0.1;
  double window = 0.0;
  int quad_points = 16;
  std::map<std::string, double> tolerances;
  bool csv = true;
  bool binary = false;
};

/// Rejects unknown keys and ill-typed values with ConfigError.
RunConfig parse_config(const Json& j);
/// Normalized form; parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& c);

struct RunResult {
  Json report;
  int exit_code = 0;
};

/// Runs one subcommand and writes <command>.json (plus CSV or binary dumps
/// when enabled) into out_dir. The report has the keys command,
/// config_echo, results, residuals, verdicts, tolerances and provenance.
RunResult run(const std::string& command, const RunConfig& cfg, const std::string& out_dir);

/// Entry point of the levy-liouville executable. Exit 0 = complete,
/// 2 = negative verdict, 1 = error (diagnostic JSON on stderr).
int cli_main(int argc, char** argv);

}  // namespace levy
