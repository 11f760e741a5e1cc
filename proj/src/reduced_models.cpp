#include "nutaxis/reduced_models.hpp"

#include "nutaxis/errors.hpp"
#include "nutaxis/spatial_ops.hpp"

#include <cmath>
#include <numbers>

namespace nutaxis {

namespace {

struct Rates {
    double du, dv, dw;
};

Rates ode_rhs(double u, double v, double w, const ModelParams& p) {
    return {p.delta * u * w, p.alpha * v * w, -p.beta * u * w - p.gamma * v * w};
}

}  // namespace

OdeState ode_step_rk4(const OdeState& s, const ModelParams& p, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("ode step must be positive");
    const Rates k1 = ode_rhs(s.u, s.v, s.w, p);
    const double h2 = 0.5 * dt;
    const Rates k2 = ode_rhs(s.u + h2 * k1.du, s.v + h2 * k1.dv, s.w + h2 * k1.dw, p);
    const Rates k3 = ode_rhs(s.u + h2 * k2.du, s.v + h2 * k2.dv, s.w + h2 * k2.dw, p);
    const Rates k4 = ode_rhs(s.u + dt * k3.du, s.v + dt * k3.dv, s.w + dt * k3.dw, p);
    const double c = dt / 6.0;
    return {s.t + dt, s.u + c * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
            s.v + c * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
            s.w + c * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw)};
}

namespace {

template <typename Visit>
OdeState integrate_ode(const OdeState& s0, const ModelParams& p, double t_end, double dt, Visit&& visit) {
    if (!(dt > 0.0)) throw InvalidArgument("ode step must be positive");
    if (t_end < s0.t) throw InvalidArgument("ode horizon lies before the initial time");
    if (!(s0.u > 0.0) || !(s0.v > 0.0) || !(s0.w >= 0.0))
        throw InvalidArgument("ode initial data must satisfy u, v > 0 and w >= 0");
    OdeState s = s0;
    visit(s);
    const long n = static_cast<long>(std::ceil((t_end - s0.t) / dt * (1.0 - 1e-12)));
    for (long k = 0; k < n; ++k) {
        const double h = k + 1 == n ? t_end - s.t : dt;
        if (h <= 0.0) break;
        s = ode_step_rk4(s, p, h);
        if (k + 1 == n) s.t = t_end;
        visit(s);
    }
    return s;
}

}  // namespace

std::vector<OdeState> ode_solve(const OdeState& s0, const ModelParams& params, double t_end, double dt) {
    std::vector<OdeState> traj;
    integrate_ode(s0, params, t_end, dt, [&](const OdeState& s) { traj.push_back(s); });
    return traj;
}

OdeState ode_integrate(const OdeState& s0, const ModelParams& params, double t_end, double dt) {
    return integrate_ode(s0, params, t_end, dt, [](const OdeState&) {});
}

double conserved_quantity(const OdeState& s, const ModelParams& p) {
    return p.beta / p.delta * s.u + p.gamma / p.alpha * s.v + s.w;
}

int sign_law_check(double u0, double v0, double w0, const ModelParams& params, double t_end, double dt) {
    if (u0 != v0) throw InvalidArgument("the sign law is stated for u0 == v0");
    const OdeState end = ode_integrate({0.0, u0, v0, w0}, params, t_end, dt);
    if (!(end.w < 1e-10 * w0) && w0 > 0.0)
        throw HorizonTooShort("w has not decayed below 1e-10 w0 by t = " + std::to_string(t_end));
    return (end.u > end.v) - (end.u < end.v);
}

JensenReport jensen_gap(const Field& phi, const Grid& grid) {
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (!(phi[i] > 0.0)) throw NonpositiveField("phi", static_cast<long>(i));
    const double vol = grid.total_measure();
    const double mean = integrate(phi, grid) / vol;
    const double mean_log = integrate(phi.array().log().matrix(), grid) / vol;
    JensenReport r;
    r.c1 = std::log(mean) - mean_log;
    r.strict = r.c1 > 1e-12;
    return r;
}

std::vector<double> geometric_schedule(double t_first, double factor, double t_end) {
    if (!(t_first > 0.0) || !(factor > 1.0) || !(t_end > 0.0))
        throw InvalidArgument("geometric schedule requires t_first > 0, factor > 1, t_end > 0");
    std::vector<double> out;
    for (double t = t_first; t < t_end * (1.0 - 1e-12); t *= factor) out.push_back(t);
    out.push_back(t_end);
    return out;
}

std::vector<HeatSample> heat_solve(const Field& u0, double diffusivity, const Grid& grid,
                                   std::span<const double> schedule, const StepperConfig& cfg) {
    for (Eigen::Index i = 0; i < u0.size(); ++i)
        if (!(u0[i] > 0.0)) throw NonpositiveField("u0", static_cast<long>(i));

    ModelParams p;
    p.D_u = diffusivity;
    p.D_w = 1.0;
    p.chi = 0.0;
    p.alpha = p.beta = p.gamma = p.delta = 0.0;

    State s;
    s.u = u0;
    s.v = Field::Ones(u0.size());
    s.w = Field::Zero(u0.size());

    auto sample = [&grid](const State& st) {
        const double mean = integrate(st.u, grid) / grid.total_measure();
        return HeatSample{st.t, integrate(st.u.array().log().matrix(), grid),
                          (st.u.array() - mean).abs().maxCoeff()};
    };

    std::vector<HeatSample> out;
    out.push_back(sample(s));
    Integrator integ(grid, p, cfg, s);
    integ.advance(schedule, [&](const State& st) { out.push_back(sample(st)); });
    return out;
}

HeatConstants lemma15_constants(const Field& u0, double diffusivity, const Grid& grid, const StepperConfig& cfg) {
    HeatConstants hc;
    hc.c1 = jensen_gap(u0, grid).c1;
    hc.limit = hc.c1 * grid.total_measure();
    hc.L = 0.5 * hc.limit;
    if (hc.c1 <= 0.0) throw InvalidArgument("u0 is constant; the Jensen gap vanishes");

    const double extent = grid.faces[grid.size()] - grid.faces[0];
    const double t_scale = extent * extent / (diffusivity * std::numbers::pi * std::numbers::pi);
    const auto schedule = geometric_schedule(1e-4 * t_scale, 1.25, 10.0 * t_scale);
    StepperConfig c = cfg;
    c.dt = std::min(c.dt, 1e-2 * t_scale);
    c.dt_min = std::min(c.dt_min, c.dt);
    hc.samples = heat_solve(u0, diffusivity, grid, schedule, c);

    const double base = hc.samples.front().log_integral;
    bool found = false;
    for (const auto& s : hc.samples) {
        if (s.log_integral - base >= hc.L) {
            hc.t0 = s.t;
            found = true;
            break;
        }
    }
    if (!found) throw HorizonTooShort("heat flow did not reach L within the sampled horizon");
    return hc;
}

}  // namespace nutaxis
