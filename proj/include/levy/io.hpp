#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "levy/grid.hpp"
#include "levy/liouville.hpp"
#include "levy/montecarlo.hpp"
#include "levy/semigroup.hpp"
#include "levy/symbols.hpp"

namespace levy {

using Json = nlohmann::json;

/// {"family": ..., "dimension": d, "params": {...}}; custom triplets carry
/// "b", "Q" and "nu" at the top level. Throws ConfigError on unknown keys or
/// missing parameters.
SymbolSpec parse_symbol_spec(const Json& j);

/// Columns x_1..x_d, re, im.
void write_csv(const GridFunction& f, std::ostream& os);
void write_csv(const GridFunction& f, const std::string& path);

/// Header int64 d, int64 N, float64 h, then (re, im) float64 pairs in
/// row-major order, little-endian.
void write_binary(const GridFunction& f, std::ostream& os);
void write_binary(const GridFunction& f, const std::string& path);
GridFunction read_binary(std::istream& is);
GridFunction read_binary(const std::string& path);

/// Binary dump of the window values plus a JSON sidecar at path + ".json".
void write_density(const DensityTable& table, const std::string& path);
Json density_sidecar(const DensityTable& table);

/// Seed header (uint64 seed, uint64 batch, float64 t), then the GridFunction
/// header with N = n and h = 0 and the d components of each draw as real
/// parts.
void write_batch(const SampleBatch& batch, const std::string& path);

Json to_json(const ClassificationVerdict& v);
Json to_json(const HoelderReport& r);
/// Rows r, |h|, lhs, bound, ratio.
void write_probe_csv(const HoelderReport& r, std::ostream& os);

Json vec_to_json(const Vec& v);
Vec json_to_vec(const Json& j);

}  // namespace levy
