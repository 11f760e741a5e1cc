#include "nutaxis/experiments.hpp"

#include "nutaxis/errors.hpp"
#include "nutaxis/io.hpp"
#include "nutaxis/reduced_models.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace nutaxis {

void ScenarioConfig::validate() const {
    geometry.validate();
    params.validate_strict();
    stepper.validate();
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    if (!(output.first > 0.0)) throw InvalidArgument("output.first must be positive");
    if (!(output.factor > 1.0)) throw InvalidArgument("output.factor must exceed 1");
}

std::vector<double> ScenarioConfig::output_times() const {
    return geometric_schedule(std::min(output.first, t_end), output.factor, t_end);
}

namespace {

ModelParams shipped_params(double D_u, double chi) {
    ModelParams p;
    p.D_u = D_u;
    p.chi = chi;
    p.D_w = 1.0;
    p.delta = 1.0;
    p.alpha = 2.0;
    p.beta = 200.0;
    p.gamma = 200.0;
    return p;
}

double variant_value(const std::string& variant, const std::string& key) {
    std::string text = variant;
    if (const auto eq = variant.find('='); eq != std::string::npos) {
        if (variant.substr(0, eq) != key)
            throw UnknownVariant("expected variant '" + key + "=<value>', got '" + variant + "'");
        text = variant.substr(eq + 1);
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UnknownVariant("cannot parse variant '" + variant + "'");
    }
}

// "60" and "sigma=60" name the same run.
std::string canonical_variant(const std::string& variant, const std::string& key) {
    return variant.find('=') == std::string::npos ? key + "=" + variant : variant;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig1_left", "fig1_right", "fig3"}; }

ScenarioConfig preset(const std::string& name, const std::string& variant) {
    ScenarioConfig c;
    c.t_end = 1e3;
    c.output = {1e-3, 1.25};
    c.stepper.dt = 0.5;
    c.stepper.flux = FluxScheme::upwind;

    const auto gauss = [](double base, double amp, double center) {
        return InitialProfile::gaussian(base, amp, 15.0, center);
    };

    std::string key;
    if (name == "fig1_left") {
        key = "sigma";
        const double sigma = variant_value(variant, "sigma");
        if (!(sigma > 0.0)) throw UnknownVariant("sigma must be positive");
        c.geometry = Geometry::interval(0.0, 1.0, 400);
        c.params = shipped_params(20.0, 0.5);
        c.initial.u = gauss(0.0, 1.0, 0.5);
        c.initial.v = c.initial.u;
        c.initial.w = InitialProfile::constant(sigma);
    } else if (name == "fig1_right") {
        key = "l";
        const double l = variant_value(variant, "l");
        if (!(l > 0.0) || l > 20.0) throw UnknownVariant("l must lie in (0, 20]");
        c.geometry = Geometry::interval(0.0, 1.0, 400);
        c.params = shipped_params(1.0, 0.5);
        c.initial.u = gauss(1.0, 1.0, 0.0);
        c.initial.v = c.initial.u.mirror();
        c.initial.w = gauss(l, 20.0 - l, 0.5);
    } else if (name == "fig3") {
        key = "d";
        const double d = variant_value(variant, "d");
        if (d != 1.0 && d != 2.0 && d != 3.0) throw UnknownVariant("d must be 1, 2 or 3");
        c.geometry = Geometry::ball(static_cast<int>(d), 1.0, 400);
        c.params = shipped_params(20.0, 1e3);
        c.initial.u = gauss(0.0, 0.1, 0.0);
        c.initial.v = c.initial.u;
        c.initial.w = gauss(0.0, 2.0, 0.0);
        c.output.first = 1e-5;
        c.stepper.cfl_safety = 0.25;
    } else {
        throw UnknownVariant("unknown preset '" + name + "'");
    }
    c.name = name + ":" + canonical_variant(variant, key);
    return c;
}

DerivedConstants scenario_constants(const ScenarioConfig& cfg) {
    cfg.validate();
    const Grid grid = build_grid(cfg.geometry);
    const InitResult init = init_state(cfg.initial, grid);
    return derived_constants(init.state, cfg.params, grid, &cfg.initial);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();

    ScenarioResult res;
    res.config = cfg;
    res.grid = build_grid(cfg.geometry);
    const InitResult init = init_state(cfg.initial, res.grid);
    res.initial_index = init.competition_index;
    res.constants = derived_constants(init.state, cfg.params, res.grid, &cfg.initial);

    VBoundsAudit v_audit(res.constants, cfg.params);
    v_audit.observe(init.state);
    res.records.push_back(make_record(init.state, cfg.params, res.constants, res.grid, nullptr));

    Integrator integ(res.grid, cfg.params, cfg.stepper, init.state);
    const std::vector<double> times = cfg.output_times();
    try {
        integ.advance(times, [&](const State& s) {
            v_audit.observe(s);
            res.records.push_back(make_record(s, cfg.params, res.constants, res.grid, &res.records.back()));
        });
    } catch (const PositivityViolation& e) {
        throw PositivityViolation(cfg.name + ": " + e.field(), e.cell(), e.time());
    } catch (const Error& e) {
        throw Error(cfg.name + ": " + e.what());
    }

    res.final_state = integ.state();
    res.stats = integ.stats();
    res.audits = audit_records(res.records, res.constants, cfg.params);
    res.audits.checks.push_back(v_audit.lower());
    res.audits.checks.push_back(v_audit.upper());
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
}

namespace {

std::string label_value(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::vector<std::pair<std::string, ScenarioConfig>> expand_sweep(const SweepSpec& spec) {
    for (const auto& o : spec.overrides)
        if (!spec.base.contains(nlohmann::json::json_pointer(o.path)))
            throw ConfigError("override path '" + o.path + "' does not exist in the base document");

    std::vector<std::pair<std::string, nlohmann::json>> docs;
    if (spec.overrides.empty()) {
        docs.emplace_back("base", spec.base);
    } else if (spec.mode == SweepMode::zip) {
        const std::size_t n = spec.overrides.front().values.size();
        for (const auto& o : spec.overrides)
            if (o.values.size() != n) throw ConfigError("zipped overrides must have equal lengths");
        for (std::size_t k = 0; k < n; ++k) {
            nlohmann::json doc = spec.base;
            std::string label;
            for (const auto& o : spec.overrides) {
                doc[nlohmann::json::json_pointer(o.path)] = o.values[k];
                label += (label.empty() ? "" : ",") + o.path + "=" + label_value(o.values[k]);
            }
            docs.emplace_back(label, std::move(doc));
        }
    } else {
        std::vector<std::size_t> idx(spec.overrides.size(), 0);
        for (const auto& o : spec.overrides)
            if (o.values.empty()) throw ConfigError("override '" + o.path + "' has no values");
        // Odometer over the override value lists, last override varying fastest.
        auto next_combination = [&]() {
            for (std::size_t j = idx.size(); j-- > 0;) {
                if (++idx[j] < spec.overrides[j].values.size()) return true;
                idx[j] = 0;
            }
            return false;
        };
        do {
            nlohmann::json doc = spec.base;
            std::string label;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const auto& o = spec.overrides[j];
                doc[nlohmann::json::json_pointer(o.path)] = o.values[idx[j]];
                label += (label.empty() ? "" : ",") + o.path + "=" + label_value(o.values[idx[j]]);
            }
            docs.emplace_back(label, std::move(doc));
        } while (next_combination());
    }

    std::vector<std::pair<std::string, ScenarioConfig>> out;
    for (auto& [label, doc] : docs) out.emplace_back(label, config_from_document(doc));
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
    const auto configs = expand_sweep(spec);
    std::vector<SweepRow> rows(configs.size());
    for (std::size_t k = 0; k < configs.size(); ++k) {
        rows[k].label = configs[k].first;
        rows[k].config = configs[k].second;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            SweepRow& row = rows[k];
            try {
                row.result = run_scenario(row.config);
                row.ok = true;
                row.M_star = row.result.constants.M_star;
                row.sigma_star = row.result.constants.sigma_star;
                row.final_I = row.result.records.back().I;
                row.final_sign = (row.final_I > 0.0) - (row.final_I < 0.0);
                row.audits_passed = row.result.audits.passed();
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(rows.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace nutaxis
