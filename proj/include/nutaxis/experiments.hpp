#ifndef NUTAXIS_EXPERIMENTS_HPP
#define NUTAXIS_EXPERIMENTS_HPP

#include "nutaxis/diagnostics.hpp"
#include "nutaxis/grid.hpp"
#include "nutaxis/integrator.hpp"
#include "nutaxis/model.hpp"
#include "nutaxis/state.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace nutaxis {

struct OutputSchedule {
    double first = 1e-3;
    double factor = 1.25;

    friend bool operator==(const OutputSchedule&, const OutputSchedule&) = default;
};

/// Everything needed to reproduce one run.
struct ScenarioConfig {
    std::string name = "custom";
    Geometry geometry;
    ModelParams params;
    InitialProfiles initial;
    double t_end = 1e3;
    OutputSchedule output;
    StepperConfig stepper;

    void validate() const;
    /// Output times after t = 0, ending exactly at t_end.
    std::vector<double> output_times() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Shipped scenarios:
///   fig1_left   variant sigma ∈ {60, 120, 240}  (w0 ≡ sigma)
///   fig1_right  variant l ∈ {1.4, 14, 20}       (w0 = l + (20 - l) exp(-15 (x - 1/2)²))
///   fig3        variant d ∈ {1, 3}              (unit ball, χ = 10³)
/// Variants are written "sigma=60", "l=14", "d=3" (a bare number is accepted).
/// Other numeric values of the variant parameter are allowed; malformed variants
/// and unknown names throw UnknownVariant.
ScenarioConfig preset(const std::string& name, const std::string& variant);

std::vector<std::string> preset_names();

struct ScenarioResult {
    ScenarioConfig config;
    Grid grid;
    DerivedConstants constants;
    std::vector<DiagnosticsRecord> records;
    State final_state;
    AuditReport audits;
    StepStats stats;
    double wall_seconds = 0.0;
    double initial_index = 0.0;
};

/// Builds grid and state, integrates with a diagnostics observer on the output
/// schedule, then audits the series. Integrator failures are rethrown with the
/// scenario name prepended.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Constants of the initial data, without integrating.
DerivedConstants scenario_constants(const ScenarioConfig& cfg);

enum class SweepMode { cartesian, zip };

struct SweepOverride {
    std::string path;  ///< JSON pointer into the base document, e.g. "/params/chi" or "/variant"
    std::vector<nlohmann::json> values;
};

/// A base document (full config or a preset reference) plus overrides.
struct SweepSpec {
    nlohmann::json base;
    std::vector<SweepOverride> overrides;
    SweepMode mode = SweepMode::cartesian;
};

struct SweepRow {
    std::string label;
    ScenarioConfig config;
    bool ok = false;
    std::string error;
    double M_star = 0.0;
    double sigma_star = 0.0;
    double final_I = 0.0;
    int final_sign = 0;
    bool audits_passed = false;
    ScenarioResult result;
};

/// Expands the spec into concrete configurations (labels "path=value,...").
std::vector<std::pair<std::string, ScenarioConfig>> expand_sweep(const SweepSpec& spec);

/// Runs every combination on up to `threads` workers. A failing run is recorded in
/// its row and does not stop the sweep. Rows keep expansion order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1);

}  // namespace nutaxis

#endif  // NUTAXIS_EXPERIMENTS_HPP
