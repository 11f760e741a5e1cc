#include "nutaxis/oracles.hpp"

#include "nutaxis/diagnostics.hpp"
#include "nutaxis/errors.hpp"
#include "nutaxis/spatial_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace nutaxis {

double fitted_order(std::span<const double> steps, std::span<const double> errors) {
    if (steps.size() != errors.size()) throw InvalidArgument("steps and errors differ in length");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (!(errors[k] > 0.0) || !(steps[k] > 0.0)) continue;
        x.push_back(std::log(steps[k]));
        y.push_back(std::log(errors[k]));
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams heat_params(double diffusivity) {
    ModelParams p;
    p.D_u = diffusivity;
    p.chi = 0.0;
    p.alpha = p.beta = p.gamma = p.delta = 0.0;
    return p;
}

State heat_state(const Grid& grid, double amplitude) {
    State s;
    s.u = (1.0 + amplitude * (kPi * grid.centers.array()).cos()).matrix();
    s.v = Field::Ones(grid.size());
    s.w = Field::Zero(grid.size());
    return s;
}

double max_abs(const Field& f) { return f.size() ? f.cwiseAbs().maxCoeff() : 0.0; }

double heat_spatial_error(int n, double amplitude) {
    constexpr double t_end = 0.1;
    const Grid grid = build_grid(Geometry::interval(0.0, 1.0, n));
    StepperConfig cfg;
    cfg.dt = 1e-5;
    cfg.dt_min = 1e-12;
    cfg.min_steps_per_segment = 1;
    Integrator integ(grid, heat_params(1.0), cfg, heat_state(grid, amplitude));
    integ.advance_to(t_end);
    const Field exact =
        (1.0 + amplitude * std::exp(-kPi * kPi * t_end) * (kPi * grid.centers.array()).cos()).matrix();
    return max_abs(integ.state().u - exact);
}

double advection_diffusion_error(int n, double amplitude) {
    constexpr double D = 1.0;
    constexpr double chi = 0.5;
    const Grid grid = build_grid(Geometry::interval(0.0, 1.0, n));
    const auto x = grid.centers.array();
    const Field u = (1.0 + amplitude * (kPi * x).cos()).matrix();
    const Field w = (kPi * x).cos().matrix();
    const Field discrete =
        D * laplacian_neumann(u, grid) + chemotaxis_divergence(u, w, grid, chi, 0.0, FluxScheme::central);
    // u_x w_x + u w_xx with u_x = -Aπ sin, w_x = -π sin, w_xx = -π² cos.
    const auto s = (kPi * x).sin();
    const auto c = (kPi * x).cos();
    const Field div = (amplitude * kPi * kPi * s * s - kPi * kPi * c * (1.0 + amplitude * c)).matrix();
    const Field exact = (D * (-amplitude * kPi * kPi * c)).matrix() - chi * div;
    return max_abs(discrete - exact);
}

}  // namespace

ConvergenceStudy manufactured_convergence(ManufacturedProblem problem, std::span<const int> resolutions,
                                          double amplitude) {
    if (resolutions.size() < 3) throw InvalidArgument("at least three resolutions are required");
    ConvergenceStudy out;
    for (int n : resolutions) {
        if (n < 2) throw InvalidArgument("resolutions must be at least 2 cells");
        out.steps.push_back(1.0 / n);
        out.errors.push_back(problem == ManufacturedProblem::heat ? heat_spatial_error(n, amplitude)
                                                                   : advection_diffusion_error(n, amplitude));
    }
    out.order = fitted_order(out.steps, out.errors);
    return out;
}

ConvergenceStudy temporal_convergence(TimeScheme scheme, std::span<const double> dts, int n_cells,
                                      double t_end, double amplitude) {
    if (dts.size() < 2) throw InvalidArgument("at least two step sizes are required");
    const Grid grid = build_grid(Geometry::interval(0.0, 1.0, n_cells));
    const double lambda = (2.0 - 2.0 * std::cos(kPi * grid.h)) / (grid.h * grid.h);
    const Field exact =
        (1.0 + amplitude * std::exp(-lambda * t_end) * (kPi * grid.centers.array()).cos()).matrix();

    ConvergenceStudy out;
    for (double dt : dts) {
        StepperConfig cfg;
        cfg.dt = dt;
        cfg.dt_min = std::min(cfg.dt_min, dt);
        cfg.min_steps_per_segment = 1;
        cfg.scheme = scheme;
        Integrator integ(grid, heat_params(1.0), cfg, heat_state(grid, amplitude));
        integ.advance_to(t_end);
        out.steps.push_back(dt);
        out.errors.push_back(max_abs(integ.state().u - exact));
    }
    out.order = fitted_order(out.steps, out.errors);
    return out;
}

double coupled_temporal_order(const ScenarioConfig& cfg, double t_end, double dt) {
    const Grid grid = build_grid(cfg.geometry);
    const State s0 = init_state(cfg.initial, grid).state;
    std::vector<State> finals;
    for (double h : {dt, dt / 2, dt / 4}) {
        StepperConfig sc = cfg.stepper;
        sc.dt = h;
        sc.dt_min = std::min(sc.dt_min, h);
        sc.min_steps_per_segment = 1;
        Integrator integ(grid, cfg.params, sc, s0);
        integ.advance_to(t_end);
        if (integ.stats().max_dt < h * (1.0 - 1e-12) || integ.stats().min_dt < h * (1.0 - 1e-9))
            throw InvalidArgument("step controller limits bind; choose a smaller dt");
        finals.push_back(integ.state());
    }
    const auto diff = [](const State& a, const State& b) {
        return std::max({max_abs(a.u - b.u), max_abs(a.v - b.v), max_abs(a.w - b.w)});
    };
    return std::log2(diff(finals[0], finals[1]) / diff(finals[1], finals[2]));
}

RegularizationReport regularization_study(const ScenarioConfig& cfg, std::span<const double> eps_list,
                                          double t_sample) {
    if (eps_list.empty()) throw InvalidArgument("eps_list is empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] >= 0.0)) throw InvalidArgument("eps values must be nonnegative");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw InvalidArgument("eps_list must be strictly decreasing");
    }
    const Grid grid = build_grid(cfg.geometry);
    const State s0 = init_state(cfg.initial, grid).state;
    const auto run = [&](double eps) {
        ModelParams p = cfg.params;
        p.eps_reg = eps;
        Integrator integ(grid, p, cfg.stepper, s0);
        integ.advance_to(t_sample);
        return integ.state();
    };
    const State ref = run(0.0);

    RegularizationReport rep;
    rep.eps.assign(eps_list.begin(), eps_list.end());
    for (double eps : eps_list) {
        const State s = run(eps);
        const double du = integrate((s.u - ref.u).cwiseAbs2(), grid);
        const double dw = integrate((s.w - ref.w).cwiseAbs2(), grid);
        rep.distances.push_back(std::sqrt(du + dw));
    }
    rep.decreasing = true;
    for (std::size_t k = 1; k < rep.distances.size(); ++k)
        rep.decreasing = rep.decreasing && rep.distances[k] < rep.distances[k - 1];
    return rep;
}

OdeState ode_reference(const ModelParams& params, const OdeState& s0, double t_end) {
    return ode_integrate(s0, params, t_end, 1e-5);
}

bool VerificationReport::passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const OracleCase& c) { return c.passed; });
}

namespace {

using CaseFn = std::function<std::vector<OracleCase>()>;

OracleCase at_least(std::string name, double value, double threshold, std::string detail = {}) {
    return {std::move(name), value >= threshold, value, threshold, std::move(detail)};
}

OracleCase at_most(std::string name, double value, double threshold, std::string detail = {}) {
    return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

std::string join(const std::vector<double>& xs) {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t k = 0; k < xs.size(); ++k) os << (k ? " " : "") << xs[k];
    return os.str();
}

std::vector<OracleCase> spatial_cases() {
    const int ns[] = {100, 200, 400};
    const auto heat = manufactured_convergence(ManufacturedProblem::heat, ns);
    const auto adv = manufactured_convergence(ManufacturedProblem::advection_diffusion, ns);
    const auto flat = manufactured_convergence(ManufacturedProblem::heat, ns, 0.0);
    double flat_err = 0.0;
    for (double e : flat.errors) flat_err = std::max(flat_err, e);
    return {at_least("heat_spatial_order", heat.order, 1.9, "errors " + join(heat.errors)),
            at_least("advection_diffusion_spatial_order", adv.order, 1.9, "errors " + join(adv.errors)),
            at_most("flat_data_exact", flat_err, 0.0)};
}

std::vector<OracleCase> temporal_cases() {
    const double dts[] = {0.02, 0.01, 0.005, 0.0025};
    const auto o2 = temporal_convergence(TimeScheme::sbdf2, dts);
    const auto o1 = temporal_convergence(TimeScheme::sbdf1, dts);
    OracleCase first = {"sbdf1_temporal_order", std::abs(o1.order - 1.0) <= 0.1, o1.order, 1.0,
                        "errors " + join(o1.errors) + "; accepted within 0.1"};
    return {at_least("sbdf2_temporal_order", o2.order, 1.9, "errors " + join(o2.errors)), first};
}

std::vector<OracleCase> regularization_cases() {
    ScenarioConfig cfg = preset("fig1_left", "sigma=60");
    const double eps[] = {1e-1, 1e-2, 1e-3};
    const auto rep = regularization_study(cfg, eps, 1.0);
    const double ratio = rep.distances.back() / rep.distances.front();
    return {{"regularization_decreasing", rep.decreasing, rep.decreasing ? 1.0 : 0.0, 1.0,
             "distances " + join(rep.distances)},
            at_most("regularization_ratio", ratio, 0.1, "d(1e-3)/d(1e-1)")};
}

ModelParams ode_params(double delta, double alpha) {
    ModelParams p;
    p.delta = delta;
    p.alpha = alpha;
    p.beta = p.gamma = 1.0;
    return p;
}

std::vector<OracleCase> ode_cases() {
    const ModelParams p = ode_params(1.0, 2.0);
    const OdeState s0{0.0, 1.0, 1.0, 1.0};
    const OdeState ref = ode_reference(p, s0, 50.0);
    const OdeState coarse = ode_integrate(s0, p, 50.0, 1e-3);
    const double rel = std::max(std::abs(coarse.u - ref.u) / ref.u, std::abs(coarse.v - ref.v) / ref.v);

    // e^{∫w} = y solves y + y²/2 = Q with Q = 5/2.
    const double y = std::sqrt(6.0) - 1.0;
    const double closed = std::max(std::abs(ref.u - y), std::abs(ref.v - y * y));

    double drift = 0.0;
    const double q0 = conserved_quantity(s0, p);
    for (const auto& s : ode_solve(s0, p, 50.0, 1e-3))
        drift = std::max(drift, std::abs(conserved_quantity(s, p) - q0) / q0);

    int mismatches = 0;
    const double grid_vals[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    for (double d : grid_vals)
        for (double a : grid_vals)
            for (double w0 : {0.1, 1.0, 10.0}) {
                const int expected = (d > a) - (d < a);
                if (sign_law_check(1.0, 1.0, w0, ode_params(d, a), 50.0) != expected) ++mismatches;
            }

    return {at_most("ode_richardson", rel, 1e-8, "dt=1e-3 against dt=1e-5 at t=50"),
            at_most("ode_closed_form", closed, 1e-8, "u, v against sqrt(6)-1 and its square"),
            at_most("ode_conserved_drift", drift, 1e-8),
            at_most("ode_sign_law", mismatches, 0.0, "75 parameter combinations")};
}

std::vector<OracleCase> heat_cases() {
    const Grid grid = build_grid(Geometry::interval(0.0, 1.0, 400));
    Field phi(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) phi[i] = std::exp(-15.0 * std::pow(grid.centers[i] - 0.5, 2));

    // Mean of exp(-15(x-1/2)²) by the error function; mean of its log is -15/12.
    const double mean_phi = std::sqrt(kPi / 15.0) * std::erf(std::sqrt(15.0) / 2.0);
    const double c1_exact = std::log(mean_phi) + 1.25;
    const JensenReport jr = jensen_gap(phi, grid);

    const HeatConstants hc = lemma15_constants(phi, 1.0, grid);
    const double final_gap = hc.samples.back().log_integral - hc.samples.front().log_integral;
    double worst_after_t0 = std::numeric_limits<double>::infinity();
    for (const auto& s : hc.samples)
        if (s.t >= hc.t0) worst_after_t0 = std::min(worst_after_t0, s.log_integral - hc.samples.front().log_integral - hc.L);

    // Sup-distance decay rate of the first eigenmode.
    const Field mode = (1.0 + 0.5 * (kPi * grid.centers.array()).cos()).matrix();
    StepperConfig cfg;
    cfg.dt = 1e-4;
    const double times[] = {0.05, 0.1, 0.15, 0.2};
    const auto samples = heat_solve(mode, 1.0, grid, times, cfg);
    std::vector<double> t, lg;
    for (const auto& s : samples) {
        t.push_back(s.t);
        lg.push_back(std::log(s.sup_deviation));
    }
    double rate = 0.0;
    {
        const double n = static_cast<double>(t.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            sx += t[k];
            sy += lg[k];
            sxx += t[k] * t[k];
            sxy += t[k] * lg[k];
        }
        rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    return {at_most("jensen_c1", std::abs(jr.c1 - c1_exact), 1e-3, "c1 = " + std::to_string(jr.c1)),
            at_most("heat_log_limit", std::abs(final_gap - jr.c1 * grid.total_measure()), 1e-3),
            at_least("heat_lower_bound_after_t0", worst_after_t0, 0.0, "t0 = " + std::to_string(hc.t0)),
            at_most("heat_decay_rate", std::abs(rate / (kPi * kPi) - 1.0), 0.02,
                    "rate = " + std::to_string(rate))};
}

Field random_field(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(n);
    for (Eigen::Index i = 0; i < n; ++i) f[i] = dist(rng);
    return f;
}

std::vector<OracleCase> property_cases(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Geometry geoms[] = {Geometry::interval(0.0, 1.0, 37), Geometry::interval(-2.0, 3.0, 16),
                              Geometry::ball(1, 1.0, 23), Geometry::ball(2, 1.5, 29), Geometry::ball(3, 1.0, 31)};
    double conservation = 0.0, symmetry = 0.0, definiteness = 0.0, taxis = 0.0, antisym = 0.0, scale = 0.0,
           solve = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        for (const auto& g : geoms) {
            const Grid grid = build_grid(g);
            const Field f = random_field(rng, grid.size(), 0.5, 2.0);
            const Field h = random_field(rng, grid.size(), 0.5, 2.0);
            const Field lf = laplacian_neumann(f, grid);
            const Field lh = laplacian_neumann(h, grid);
            const Field& m = grid.measure;
            const double ref = (m.array() * lf.array().abs()).sum();

            conservation = std::max(conservation, std::abs(m.dot(lf)) / ref);
            symmetry = std::max(symmetry, std::abs((m.array() * lf.array() * h.array()).sum() -
                                                   (m.array() * f.array() * lh.array()).sum()) / ref);
            definiteness = std::max(definiteness, (m.array() * lf.array() * f.array()).sum() / ref);

            for (FluxScheme scheme : {FluxScheme::upwind, FluxScheme::central}) {
                const Field div = chemotaxis_divergence(f, h, grid, 0.7, 0.1, scheme);
                const double scale_div = (m.array() * div.array().abs()).sum();
                if (scale_div > 0.0) taxis = std::max(taxis, std::abs(m.dot(div)) / scale_div);
            }

            State a{0.0, f, h, Field::Zero(grid.size())};
            State b{0.0, h, f, Field::Zero(grid.size())};
            const double i_ab = competition_index(a, grid);
            const double mag = integrate(f.array().log().abs().matrix() + h.array().log().abs().matrix(), grid);
            antisym = std::max(antisym, std::abs(i_ab + competition_index(b, grid)) / mag);
            State c{0.0, 3.7 * f, 3.7 * h, Field::Zero(grid.size())};
            scale = std::max(scale, std::abs(competition_index(c, grid) - i_ab) / mag);

            TridiagonalBand band = laplacian_band(grid);
            band.lower *= -0.3;
            band.upper *= -0.3;
            band.diag = (1.0 - 0.3 * band.diag.array()).matrix();
            const Field x = solve_tridiagonal(band, f);
            solve = std::max(solve, max_abs(band.apply(x) - f) / max_abs(f));
        }
    }
    return {at_most("laplacian_conservation", conservation, 1e-12),
            at_most("laplacian_symmetry", symmetry, 1e-12),
            at_most("laplacian_nonpositive", definiteness, 1e-12),
            at_most("chemotaxis_conservation", taxis, 1e-12),
            at_most("index_antisymmetry", antisym, 1e-12),
            at_most("index_scale_invariance", scale, 1e-12),
            at_most("tridiagonal_residual", solve, 1e-12)};
}

std::vector<OracleCase> determinism_cases() {
    // Mild nutrient level so that the base dt, not a controller limit, sets every step.
    ScenarioConfig cfg = preset("fig1_left", "sigma=0.5");
    cfg.geometry.n_cells = 100;
    cfg.stepper.dt = 0.01;
    const Grid grid = build_grid(cfg.geometry);
    const State s0 = init_state(cfg.initial, grid).state;
    Integrator whole(grid, cfg.params, cfg.stepper, s0);
    whole.advance_to(0.4);
    Integrator split(grid, cfg.params, cfg.stepper, s0);
    split.advance_to(0.2);
    split.advance_to(0.4);
    const State& a = whole.state();
    const State& b = split.state();
    const double diff = std::max({max_abs(a.u - b.u), max_abs(a.v - b.v), max_abs(a.w - b.w)});
    return {at_most("split_advance_bitwise", diff, 0.0)};
}

std::vector<OracleCase> scenario_cases(const ScenarioConfig& cfg) {
    std::vector<OracleCase> out;
    try {
        const ScenarioResult res = run_scenario(cfg);
        for (const auto& c : res.audits.checks)
            out.push_back({"scenario_" + c.name, c.passed, c.worst_slack, 0.0,
                           "worst at t = " + std::to_string(c.worst_time)});
    } catch (const std::exception& e) {
        out.push_back({"scenario_run", false, 0.0, 0.0, e.what()});
    }
    return out;
}

}  // namespace

VerificationReport run_verification(const VerifyOptions& opts) {
    std::vector<CaseFn> jobs = {spatial_cases,         temporal_cases, regularization_cases, ode_cases,
                                heat_cases,            [seed = opts.seed] { return property_cases(seed); },
                                determinism_cases};
    if (opts.scenario) jobs.push_back([cfg = *opts.scenario] { return scenario_cases(cfg); });

    std::vector<std::vector<OracleCase>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                results[k] = jobs[k]();
            } catch (const std::exception& e) {
                results[k] = {{"job_" + std::to_string(k), false, 0.0, 0.0, e.what()}};
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(opts.threads, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    VerificationReport rep;
    for (auto& r : results)
        for (auto& c : r) rep.cases.push_back(std::move(c));
    return rep;
}

}  // namespace nutaxis
