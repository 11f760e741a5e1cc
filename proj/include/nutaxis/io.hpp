#ifndef NUTAXIS_IO_HPP
#define NUTAXIS_IO_HPP

#include "nutaxis/diagnostics.hpp"
#include "nutaxis/experiments.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

// File formats
//
// Config (UTF-8 JSON, unknown keys rejected):
//   { "name": str,
//     "geometry": { "kind": "interval", "x_lo": num, "x_hi": num, "n_cells": int }
//               | { "kind": "radial", "dim": 1|2|3, "radius": num, "n_cells": int },
//     "params":   { "D_u", "D_w", "chi", "alpha", "beta", "gamma", "delta", "eps_reg" },
//     "initial":  { "u": profile, "v": profile, "w": profile },
//     "t_end": num,
//     "output":   { "first": num, "factor": num },
//     "stepper":  { "dt", "dt_min", "cfl_safety", "reaction_safety", "positivity_floor",
//                   "max_retries", "min_steps_per_segment",
//                   "scheme": "sbdf2"|"sbdf1", "flux": "upwind"|"central" } }
//   profile = { "kind": "constant", "value": num }
//           | { "kind": "gaussian", "base", "amp", "rate", "center", "mirrored": bool }
// Every section except "name" is required; inside "stepper" every key is optional.
//
// A preset reference is accepted wherever a config is read:
//   { "preset": "fig1_left", "variant": "sigma=60",
//     optional "n_cells", "t_end", "dt", "name" }
//
// records.csv: header of the 14 DiagnosticsRecord field names, one row per output
// time, values with 17 significant digits.
//
// manifest.json: { "version", "config", "constants", "grid", "steps", "audits",
//                  "wall_seconds", "initial_index" }
//
// Sweep spec (JSON): { "base": config-or-preset-reference,
//                      "mode": "cartesian"|"zip" (default cartesian),
//                      "overrides": [ { "path": json-pointer, "values": [...] } ] }

namespace nutaxis {

inline constexpr const char* kVersion = "1.0.0";

nlohmann::json to_json(const ScenarioConfig& cfg);
/// Strict: unknown or missing keys throw ConfigError naming the key path.
ScenarioConfig config_from_json(const nlohmann::json& doc);
/// Full config or preset reference.
ScenarioConfig config_from_document(const nlohmann::json& doc);

nlohmann::json to_json(const DerivedConstants& c);

ScenarioConfig read_config(const std::filesystem::path& path);
void write_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

void write_records(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);
/// Throws ConfigError with the line number on malformed rows.
std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path);

nlohmann::json make_manifest(const ScenarioResult& result);
void write_manifest(const ScenarioResult& result, const std::filesystem::path& path);

SweepSpec sweep_from_json(const nlohmann::json& doc);
void write_sweep_table(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// 17-significant-digit formatting used by every writer.
std::string format_double(double x);

}  // namespace nutaxis

#endif  // NUTAXIS_IO_HPP
