#include "nutaxis/cli.hpp"

#include "nutaxis/errors.hpp"
#include "nutaxis/experiments.hpp"
#include "nutaxis/io.hpp"
#include "nutaxis/oracles.hpp"
#include "nutaxis/reduced_models.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

namespace nutaxis {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
    std::string out_dir = ".";
    std::optional<int> n_cells;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::uint64_t seed = 1;
    std::optional<int> threads;
};

struct ScenarioSource {
    std::string config_path;
    std::string preset;
    std::string variant;
};

// Distinguishes bad input (exit 1) from failures while simulating (exit 2).
struct UsageError : Error {
    using Error::Error;
};

int resolve_threads(const Globals& g) {
    if (g.threads) {
        if (*g.threads < 1) throw UsageError("--threads must be at least 1");
        return *g.threads;
    }
    if (const char* env = std::getenv("NUTAXIS_THREADS"); env && *env) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (*end != '\0' || n < 1) throw UsageError(std::string("NUTAXIS_THREADS must be a positive integer, got '") + env + "'");
        return static_cast<int>(n);
    }
    return 1;
}

void apply_globals(ScenarioConfig& cfg, const Globals& g) {
    if (g.n_cells) cfg.geometry.n_cells = *g.n_cells;
    if (g.dt) {
        cfg.stepper.dt = *g.dt;
        cfg.stepper.dt_min = std::min(cfg.stepper.dt_min, *g.dt);
    }
    if (g.t_end) cfg.t_end = *g.t_end;
}

// Same overrides on a sweep base document, preset reference or full config.
void apply_globals(json& doc, const Globals& g) {
    if (doc.contains("preset")) {
        if (g.n_cells) doc["n_cells"] = *g.n_cells;
        if (g.dt) doc["dt"] = *g.dt;
        if (g.t_end) doc["t_end"] = *g.t_end;
        return;
    }
    if (g.n_cells) doc["geometry"]["n_cells"] = *g.n_cells;
    if (g.dt) doc["stepper"]["dt"] = *g.dt;
    if (g.t_end) doc["t_end"] = *g.t_end;
}

std::optional<ScenarioConfig> load_scenario(const ScenarioSource& src, const Globals& g, bool required) {
    const bool has_file = !src.config_path.empty();
    const bool has_preset = !src.preset.empty();
    if (has_file && has_preset) throw UsageError("give either a config file or --preset, not both");
    if (!has_preset && !src.variant.empty()) throw UsageError("--variant requires --preset");
    if (!has_file && !has_preset) {
        if (required) throw UsageError("a config file or --preset is required");
        return std::nullopt;
    }
    ScenarioConfig cfg;
    try {
        cfg = has_file ? read_config(src.config_path) : preset(src.preset, src.variant);
        apply_globals(cfg, g);
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void print_audits(const AuditReport& rep, std::ostream& out) {
    for (const auto& c : rep.checks)
        out << "  " << std::left << std::setw(18) << c.name << (c.passed ? "pass" : "FAIL")
            << "  worst slack " << format_double(c.worst_slack) << " at t = " << c.worst_time << '\n';
}

int cmd_run(const ScenarioSource& src, const Globals& g, std::ostream& out) {
    const ScenarioConfig cfg = *load_scenario(src, g, true);
    const fs::path dir = prepare_dir(g.out_dir);
    ScenarioResult res = run_scenario(cfg);
    write_records(res.records, dir / "records.csv");
    json manifest = make_manifest(res);
    manifest["threads"] = 1;
    write_json_file(manifest, dir / "manifest.json");

    out << cfg.name << ": " << res.records.size() << " records, " << res.stats.accepted << " steps, "
        << res.wall_seconds << " s\n";
    out << "final I = " << format_double(res.records.back().I) << '\n';
    out << "audits " << (res.audits.passed() ? "passed" : "FAILED") << '\n';
    print_audits(res.audits, out);
    out << "wrote " << (dir / "records.csv").string() << " and " << (dir / "manifest.json").string() << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const Globals& g, std::ostream& out) {
    SweepSpec spec;
    try {
        json doc = read_json_file(spec_path);
        spec = sweep_from_json(doc);
        apply_globals(spec.base, g);
        (void)expand_sweep(spec);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const int threads = resolve_threads(g);
    const fs::path dir = prepare_dir(g.out_dir);
    const auto rows = run_sweep(spec, threads);

    bool all_ok = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        all_ok = all_ok && r.ok;
        std::ostringstream name;
        name << "run_" << std::setw(3) << std::setfill('0') << k;
        if (r.ok) {
            const fs::path sub = prepare_dir(dir / name.str());
            write_records(r.result.records, sub / "records.csv");
            json manifest = make_manifest(r.result);
            manifest["threads"] = threads;
            manifest["label"] = r.label;
            write_json_file(manifest, sub / "manifest.json");
        }
        out << name.str() << "  " << r.label << "  "
            << (r.ok ? "I = " + format_double(r.final_I) + (r.audits_passed ? "" : "  (audits failed)")
                     : "failed: " + r.error)
            << '\n';
    }
    write_sweep_table(rows, dir / "sweep_table.csv");
    out << "wrote " << (dir / "sweep_table.csv").string() << '\n';
    return all_ok ? kExitOk : kExitSimulation;
}

struct OdeArgs {
    double delta = 1.0, alpha = 2.0, beta = 1.0, gamma = 1.0;
    double u0 = 1.0, v0 = 1.0, w0 = 1.0;
};

int cmd_ode(const OdeArgs& a, const Globals& g, std::ostream& out) {
    ModelParams p;
    p.delta = a.delta;
    p.alpha = a.alpha;
    p.beta = a.beta;
    p.gamma = a.gamma;
    const double t_end = g.t_end.value_or(50.0);
    const double dt = g.dt.value_or(1e-3);
    try {
        p.validate_strict();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!(a.u0 > 0.0) || !(a.v0 > 0.0) || !(a.w0 >= 0.0)) throw UsageError("need u0 > 0, v0 > 0, w0 >= 0");
    if (!(t_end > 0.0) || !(dt > 0.0)) throw UsageError("--t-end and --dt must be positive");

    const OdeState s0{0.0, a.u0, a.v0, a.w0};
    const auto traj = ode_solve(s0, p, t_end, dt);
    const double q0 = conserved_quantity(s0, p);
    double drift = 0.0;
    for (const auto& s : traj) drift = std::max(drift, std::abs(conserved_quantity(s, p) - q0));
    const double rel_drift = q0 > 0.0 ? drift / q0 : drift;
    const OdeState& e = traj.back();

    out << std::setprecision(17);
    out << "t_end      " << e.t << '\n'
        << "u          " << e.u << '\n'
        << "v          " << e.v << '\n'
        << "w          " << e.w << '\n'
        << "Q(0)       " << q0 << '\n'
        << "Q drift    " << rel_drift << " (relative)\n";
    const char* rel = e.u < e.v ? "u_inf < v_inf" : (e.u > e.v ? "u_inf > v_inf" : "u_inf = v_inf");
    out << rel << "; sgn(delta - alpha) = " << (a.delta > a.alpha) - (a.delta < a.alpha) << '\n';
    if (a.w0 > 0.0 && !(e.w < 1e-10 * a.w0)) out << "note: w has not decayed below 1e-10 w0; u, v are not yet limits\n";
    return kExitOk;
}

struct HeatArgs {
    double diffusivity = 1.0;
    double rate = 15.0;
    double center = 0.5;
    double x_lo = 0.0;
    double x_hi = 1.0;
};

int cmd_heat(const HeatArgs& a, const Globals& g, std::ostream& out) {
    Grid grid;
    Field u0;
    try {
        grid = build_grid(Geometry::interval(a.x_lo, a.x_hi, g.n_cells.value_or(400)));
        u0 = InitialProfile::gaussian(0.0, 1.0, a.rate, a.center).sample(grid);
        if (!(a.diffusivity > 0.0)) throw InvalidArgument("--diffusivity must be positive");
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    StepperConfig cfg;
    if (g.dt) cfg.dt = *g.dt;
    const HeatConstants hc = lemma15_constants(u0, a.diffusivity, grid, cfg);
    const double gap = hc.samples.back().log_integral - hc.samples.front().log_integral;
    out << std::setprecision(17);
    out << "c1         " << hc.c1 << '\n'
        << "limit      " << hc.limit << "  (c1 |Omega|)\n"
        << "L          " << hc.L << '\n'
        << "t0         " << hc.t0 << '\n'
        << "final gap  " << gap << " at t = " << hc.samples.back().t << '\n';
    return kExitOk;
}

int cmd_verify(const ScenarioSource& src, const Globals& g, std::ostream& out) {
    VerifyOptions opts;
    opts.seed = g.seed;
    opts.threads = resolve_threads(g);
    opts.scenario = load_scenario(src, g, false);
    const VerificationReport rep = run_verification(opts);
    for (const auto& c : rep.cases)
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(34) << c.name << " value "
            << format_double(c.value) << "  threshold " << format_double(c.threshold)
            << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
    const auto failed = std::count_if(rep.cases.begin(), rep.cases.end(), [](const auto& c) { return !c.passed; });
    out << rep.cases.size() - failed << "/" << rep.cases.size() << " cases passed\n";
    return rep.passed() ? kExitOk : kExitAudit;
}

int cmd_constants(const ScenarioSource& src, const Globals& g, std::ostream& out) {
    const ScenarioConfig cfg = *load_scenario(src, g, true);
    const DerivedConstants c = scenario_constants(cfg);
    out << std::setprecision(17);
    out << "kappa      " << c.kappa << '\n'
        << "a          " << c.a << '\n'
        << "b          " << c.b << '\n'
        << "M*         " << c.M_star << '\n'
        << "sigma*     " << c.sigma_star << '\n'
        << "kappa_hat  " << c.kappa_cells << "  (cell minimum)\n"
        << "max w0     " << c.w0_max_cells << "  (cell maximum)\n";
    return kExitOk;
}

void add_source_options(CLI::App* cmd, ScenarioSource& src) {
    cmd->add_option("config", src.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--preset", src.preset, "Shipped scenario: fig1_left, fig1_right, fig3");
    cmd->add_option("--variant", src.variant, "Preset variant, e.g. sigma=60, l=14, d=3");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-species nutrient-taxis simulator and diagnostics", "nutaxis"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--n-cells", g.n_cells, "Override the number of cells")->check(CLI::PositiveNumber);
    app.add_option("--dt", g.dt, "Override the base time step")->check(CLI::PositiveNumber);
    app.add_option("--t-end", g.t_end, "Override the final time")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for randomized property checks")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (default: $NUTAXIS_THREADS or 1)");

    ScenarioSource run_src, verify_src, const_src;
    auto* run = app.add_subcommand("run", "Integrate one scenario; writes records.csv and manifest.json");
    add_source_options(run, run_src);

    std::string sweep_path;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep; writes sweep_table.csv and run_NNN/");
    sweep->add_option("spec", sweep_path, "Sweep spec (JSON)")->required()->check(CLI::ExistingFile);

    OdeArgs ode_args;
    auto* ode = app.add_subcommand("ode", "Migration-free ODE: limits, conserved quantity, sign law");
    ode->add_option("--delta", ode_args.delta)->capture_default_str();
    ode->add_option("--alpha", ode_args.alpha)->capture_default_str();
    ode->add_option("--beta", ode_args.beta)->capture_default_str();
    ode->add_option("--gamma", ode_args.gamma)->capture_default_str();
    ode->add_option("--u0", ode_args.u0)->capture_default_str();
    ode->add_option("--v0", ode_args.v0)->capture_default_str();
    ode->add_option("--w0", ode_args.w0)->capture_default_str();

    HeatArgs heat_args;
    auto* heat = app.add_subcommand("heat", "Heat comparison problem for u0 = exp(-rate (x - center)^2)");
    heat->add_option("--diffusivity", heat_args.diffusivity)->capture_default_str();
    heat->add_option("--rate", heat_args.rate)->capture_default_str();
    heat->add_option("--center", heat_args.center)->capture_default_str();
    heat->add_option("--x-lo", heat_args.x_lo)->capture_default_str();
    heat->add_option("--x-hi", heat_args.x_hi)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the oracle and invariant suite, optionally auditing a scenario");
    add_source_options(verify, verify_src);

    auto* constants = app.add_subcommand("constants", "Print constants of the initial data without simulating");
    add_source_options(constants, const_src);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_src, g, out);
        if (sweep->parsed()) return cmd_sweep(sweep_path, g, out);
        if (ode->parsed()) return cmd_ode(ode_args, g, out);
        if (heat->parsed()) return cmd_heat(heat_args, g, out);
        if (verify->parsed()) return cmd_verify(verify_src, g, out);
        if (constants->parsed()) return cmd_constants(const_src, g, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "simulation failed: " << e.what() << '\n';
        return kExitSimulation;
    }
    return kExitUsage;
}

}  // namespace nutaxis
