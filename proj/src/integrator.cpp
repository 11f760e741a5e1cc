#include "nutaxis/integrator.hpp"

#include "nutaxis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nutaxis {

void StepperConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(dt_min > 0.0) || dt_min > dt) throw InvalidArgument("dt_min must satisfy 0 < dt_min <= dt");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0) throw InvalidArgument("cfl_safety must lie in (0, 1]");
    if (!(reaction_safety > 0.0)) throw InvalidArgument("reaction_safety must be positive");
    if (!(positivity_floor >= 0.0)) throw InvalidArgument("positivity_floor must be nonnegative");
    if (max_retries < 0) throw InvalidArgument("max_retries must be nonnegative");
    if (min_steps_per_segment < 1) throw InvalidArgument("min_steps_per_segment must be positive");
}

Field explicit_u_term(const State& s, const ModelParams& params, const Grid& grid, FluxScheme flux) {
    Field n = (params.delta * f_eps(s.u, params.eps_reg).array() * s.w.array()).matrix();
    if (params.chi != 0.0) n += chemotaxis_divergence(s.u, s.w, grid, params.chi, params.eps_reg, flux);
    return n;
}

namespace {

struct Failure {
    const char* field;
    long cell;
};

// (scale·I - dt·coef·L + dt·diag(sink))
TridiagonalBand implicit_band(const TridiagonalBand& lap, double scale, double dt_coef,
                              const Field* sink, double dt_sink) {
    TridiagonalBand b;
    b.lower = -dt_coef * lap.lower;
    b.upper = -dt_coef * lap.upper;
    b.diag = (scale - dt_coef * lap.diag.array()).matrix();
    if (sink) b.diag += dt_sink * *sink;
    return b;
}

std::optional<Failure> first_violation(const Field& f, const char* name, double floor, bool strict) {
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const bool ok = strict ? f[i] > floor : f[i] >= floor;
        if (!ok || !std::isfinite(f[i])) return Failure{name, static_cast<long>(i)};
    }
    return std::nullopt;
}

struct Attempt {
    std::optional<Failure> failure;
    StepResult result;
};

Attempt attempt_step(const State& s, const History& hist, const ModelParams& p, const Grid& grid,
                     const TridiagonalBand& lap, const StepperConfig& cfg, double dt) {
    Attempt a;
    const bool bdf2 = cfg.scheme == TimeScheme::sbdf2 && hist.valid && hist.dt == dt;
    const Field n_now = explicit_u_term(s, p, grid, cfg.flux);

    // Solved for the increment so that round-off in the mass scales with the change
    // of u, not with u itself; the implicit matrix is badly conditioned at large dt.
    const Field lap_u = p.D_u * lap.apply(s.u);
    Field u_new;
    if (bdf2) {
        const Field rhs = (s.u - hist.u) + 2.0 * dt * (lap_u + 2.0 * n_now - hist.explicit_u);
        u_new = s.u + solve_tridiagonal(implicit_band(lap, 3.0, 2.0 * dt * p.D_u, nullptr, 0.0), rhs);
    } else {
        const Field rhs = dt * (lap_u + n_now);
        u_new = s.u + solve_tridiagonal(implicit_band(lap, 1.0, dt * p.D_u, nullptr, 0.0), rhs);
    }
    if (auto f = first_violation(u_new, "u", cfg.positivity_floor, true)) {
        a.failure = f;
        return a;
    }

    // Every accepted w satisfies max w^{n+1} <= exp(-γ min v^n dt) max w^n.
    const double contraction = std::exp(-p.gamma * s.v.minCoeff() * dt) * s.w.maxCoeff();

    Field w_new;
    bool fallback = false;
    if (bdf2) {
        const Field v_star = 2.0 * s.v - hist.v;
        const Field sink = (p.beta * f_eps(u_new, p.eps_reg).array() + p.gamma * v_star.array()).matrix();
        w_new = solve_tridiagonal(implicit_band(lap, 3.0, 2.0 * dt * p.D_w, &sink, 2.0 * dt),
                                  Field(4.0 * s.w - hist.w));
        fallback = (w_new.array() < 0.0).any() || w_new.maxCoeff() > contraction;
    }
    if (!bdf2 || fallback) {
        // Exact decay through the frozen sink, then backward-Euler diffusion. The
        // Neumann resolvent is nonnegative with unit row sums, so the contraction holds.
        const Field rate = (p.beta * f_eps(u_new, p.eps_reg).array() + p.gamma * s.v.array()).matrix();
        const Field decayed = (s.w.array() * (-dt * rate.array()).exp()).matrix();
        w_new = solve_tridiagonal(implicit_band(lap, 1.0, dt * p.D_w, nullptr, 0.0), decayed);
    }
    if (auto f = first_violation(w_new, "w", 0.0, false)) {
        a.failure = f;
        return a;
    }

    const Field v_new = (s.v.array() * (0.5 * p.alpha * dt * (s.w + w_new).array()).exp()).matrix();
    if (auto f = first_violation(v_new, "v", 0.0, true)) {
        a.failure = f;
        return a;
    }

    StepResult& r = a.result;
    r.state.t = s.t + dt;
    r.state.u = std::move(u_new);
    r.state.v = v_new;
    r.state.w = std::move(w_new);
    r.history.valid = true;
    r.history.dt = dt;
    r.history.u = s.u;
    r.history.v = s.v;
    r.history.w = s.w;
    r.history.explicit_u = n_now;
    r.dt = dt;
    r.first_order = !bdf2;
    r.w_fallback = fallback;
    return a;
}

StepResult step_with_band(const State& state, const History& history, const ModelParams& params,
                          const Grid& grid, const TridiagonalBand& lap, const StepperConfig& cfg,
                          double dt) {
    int retries = 0;
    for (;;) {
        Attempt a = attempt_step(state, history, params, grid, lap, cfg, dt);
        if (!a.failure) {
            a.result.retries = retries;
            return std::move(a.result);
        }
        ++retries;
        dt *= 0.5;
        if (retries > cfg.max_retries || dt < cfg.dt_min)
            throw PositivityViolation(a.failure->field, a.failure->cell, state.t);
    }
}

}  // namespace

StepResult step(const State& state, const History& history, const ModelParams& params,
                const Grid& grid, const StepperConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("step size must be positive");
    return step_with_band(state, history, params, grid, laplacian_band(grid), cfg, dt);
}

double cfl_dt(const State& state, const ModelParams& params, const Grid& grid, const StepperConfig& cfg) {
    if (params.chi == 0.0) return cfg.dt;
    double limit = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 1; k < grid.size(); ++k) {
        const double speed = params.chi * std::abs(state.w[k] - state.w[k - 1]) / grid.h;
        if (speed == 0.0) continue;
        const double h_eff = std::min(grid.measure[k - 1], grid.measure[k]) / grid.area[k];
        limit = std::min(limit, h_eff / speed);
    }
    if (!std::isfinite(limit)) return cfg.dt;
    return cfg.cfl_safety * limit;
}

double reaction_dt(const State& state, const ModelParams& params, const StepperConfig& cfg) {
    const double rate = std::max(params.delta, params.alpha) * state.w.maxCoeff();
    if (!(rate > 0.0)) return cfg.dt;
    return cfg.reaction_safety / rate;
}

Integrator::Integrator(Grid grid, ModelParams params, StepperConfig cfg, State initial)
    : grid_(std::move(grid)), params_(params), cfg_(cfg), state_(std::move(initial)) {
    params_.validate();
    cfg_.validate();
    if (state_.u.size() != grid_.size() || state_.v.size() != grid_.size() || state_.w.size() != grid_.size())
        throw InvalidArgument("state size does not match grid");
}

double Integrator::step_limit() const {
    return std::min({cfg_.dt, cfl_dt(state_, params_, grid_, cfg_), reaction_dt(state_, params_, cfg_)});
}

void Integrator::advance_to(double t_end) {
    if (t_end == state_.t) return;
    if (!(t_end > state_.t)) throw InvalidArgument("advance target lies before the current time");

    const TridiagonalBand lap = laplacian_band(grid_);
    const double length = t_end - state_.t;
    double cap = std::min(cfg_.dt, length / cfg_.min_steps_per_segment);

    while (state_.t < t_end) {
        const double rem = t_end - state_.t;
        const double target = std::min(cap, step_limit());
        const double steps = std::max(1.0, std::ceil(rem / target * (1.0 - 1e-12)));
        const double dt = rem / steps;
        const double t_start = state_.t;
        const long n = static_cast<long>(steps);

        for (long j = 0; j < n; ++j) {
            if (j > 0 && step_limit() < dt) {
                cap = 0.9 * step_limit();
                break;
            }
            StepResult r;
            try {
                r = step_with_band(state_, history_, params_, grid_, lap, cfg_, dt);
            } catch (const PositivityViolation& e) {
                throw PositivityViolation(e.field(), e.cell(), state_.t);
            }
            stats_.accepted += 1;
            stats_.rejected += r.retries;
            stats_.restarts += r.first_order ? 1 : 0;
            stats_.w_fallbacks += r.w_fallback ? 1 : 0;
            stats_.min_dt = std::min(stats_.min_dt, r.dt);
            stats_.max_dt = std::max(stats_.max_dt, r.dt);
            const bool halved = r.dt < dt;
            state_ = std::move(r.state);
            history_ = std::move(r.history);
            if (halved) {
                cap = r.dt;
                break;
            }
            state_.t = j + 1 == n ? t_end : t_start + static_cast<double>(j + 1) * dt;
        }
    }
    state_.t = t_end;
}

void Integrator::advance(std::span<const double> schedule, const Observer& observer) {
    for (double t : schedule) {
        advance_to(t);
        if (observer) observer(state_);
    }
}

State advance(const State& state, const Grid& grid, const ModelParams& params, const StepperConfig& cfg,
              double t_end, const Observer& observer) {
    Integrator integ(grid, params, cfg, state);
    integ.advance_to(t_end);
    if (observer) observer(integ.state());
    return integ.state();
}

std::string to_string(TimeScheme s) { return s == TimeScheme::sbdf2 ? "sbdf2" : "sbdf1"; }

TimeScheme time_scheme_from_string(const std::string& s) {
    if (s == "sbdf2") return TimeScheme::sbdf2;
    if (s == "sbdf1") return TimeScheme::sbdf1;
    throw InvalidArgument("unknown time scheme '" + s + "'");
}

std::string to_string(FluxScheme s) { return s == FluxScheme::upwind ? "upwind" : "central"; }

FluxScheme flux_scheme_from_string(const std::string& s) {
    if (s == "upwind") return FluxScheme::upwind;
    if (s == "central") return FluxScheme::central;
    throw InvalidArgument("unknown flux scheme '" + s + "'");
}

}  // namespace nutaxis
