#include "nutaxis/errors.hpp"
#include "nutaxis/experiments.hpp"
#include "nutaxis/integrator.hpp"
#include "nutaxis/oracles.hpp"
#include "nutaxis/reduced_models.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nutaxis;
using std::numbers::pi;

namespace {

ModelParams heat_only(double D) {
    ModelParams p;
    p.D_u = D;
    p.chi = 0.0;
    p.alpha = p.beta = p.gamma = p.delta = 0.0;
    return p;
}

State constant_state(Eigen::Index n, double u, double v, double w) {
    return State{0.0, Field::Constant(n, u), Field::Constant(n, v), Field::Constant(n, w)};
}

}  // namespace

TEST_CASE("heat eigenmode decays at rate D pi^2") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 400));
    const double D = 0.7;
    State s0{0.0, (2.0 + 0.5 * (pi * g.centers.array()).cos()).matrix(), Field::Ones(400), Field::Zero(400)};
    StepperConfig cfg;
    cfg.dt = 1e-4;
    Integrator integ(g, heat_only(D), cfg, s0);
    std::vector<double> ts, logs;
    for (double t : {0.05, 0.1, 0.15, 0.2, 0.25}) {
        integ.advance_to(t);
        ts.push_back(t);
        logs.push_back(std::log((integ.state().u.array() - 2.0).abs().maxCoeff()));
    }
    const double rate = -(logs.back() - logs.front()) / (ts.back() - ts.front());
    CHECK(std::abs(rate / (D * pi * pi) - 1.0) < 0.02);
}

TEST_CASE("spatially constant data follows the migration-free ODE") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 40));
    ModelParams p;
    p.D_u = 1.0;
    p.chi = 0.5;
    p.delta = 1.0;
    p.alpha = 2.0;
    p.beta = 1.0;
    p.gamma = 1.0;
    StepperConfig cfg;
    cfg.dt = 1e-4;
    Integrator integ(g, p, cfg, constant_state(40, 1.0, 1.0, 1.0));
    integ.advance_to(1.0);
    const OdeState ref = ode_reference(p, {0.0, 1.0, 1.0, 1.0}, 1.0);
    const State& s = integ.state();
    CHECK(std::abs(s.u[17] - ref.u) <= 1e-6 * ref.u);
    CHECK(std::abs(s.v[17] - ref.v) <= 1e-6 * ref.v);
    CHECK(std::abs(s.w[17] - ref.w) <= 1e-6 * ref.w);
    CHECK(s.u.maxCoeff() - s.u.minCoeff() <= 1e-13);
}

TEST_CASE("zero nutrient reduces to pure diffusion of u") {
    const Grid g = build_grid(Geometry::ball(3, 1.0, 100));
    ModelParams p;
    p.D_u = 3.0;
    p.chi = 10.0;
    p.alpha = p.beta = p.gamma = 200.0;
    State s0{0.0, (1.0 + (-15.0 * g.centers.array().square()).exp()).matrix(), Field::Constant(100, 0.5),
             Field::Zero(100)};
    const double mass0 = integrate(s0.u, g);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    Integrator integ(g, p, cfg, s0);
    integ.advance_to(0.5);
    CHECK(std::abs(integrate(integ.state().u, g) - mass0) <= 1e-12 * mass0);
    CHECK((integ.state().v.array() == 0.5).all());
    CHECK((integ.state().w.array() == 0.0).all());
}

TEST_CASE("step limits") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 400));
    ModelParams p;
    p.chi = 1e3;
    StepperConfig cfg;
    cfg.dt = 0.5;
    cfg.cfl_safety = 0.5;

    State s{0.0, Field::Ones(400), Field::Ones(400), g.centers};
    CHECK(cfl_dt(s, p, g, cfg) == doctest::Approx(1.25e-6));

    s.w = Field::Constant(400, 3.0);
    CHECK(cfl_dt(s, p, g, cfg) == cfg.dt);

    const Grid fine = build_grid(Geometry::interval(0.0, 1.0, 800));
    State s2{0.0, Field::Ones(800), Field::Ones(800), fine.centers};
    CHECK(cfl_dt(s2, p, fine, cfg) == doctest::Approx(1.25e-6 / 2.0));

    p.alpha = 2.0;
    p.delta = 1.0;
    s.w = Field::Constant(400, 60.0);
    CHECK(reaction_dt(s, p, cfg) == doctest::Approx(cfg.reaction_safety / 120.0));
    s.w.setZero();
    CHECK(reaction_dt(s, p, cfg) == cfg.dt);
}

TEST_CASE("single steps: scheme selection and history") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 50));
    ScenarioConfig sc = preset("fig1_right", "l=14");
    sc.geometry.n_cells = 50;
    const State s0 = init_state(sc.initial, g).state;
    StepperConfig cfg;
    const StepResult first = step(s0, History{}, sc.params, g, cfg, 1e-4);
    CHECK(first.first_order);
    CHECK(first.history.valid);
    CHECK(first.history.dt == 1e-4);
    CHECK(first.state.t == doctest::Approx(1e-4));
    const StepResult second = step(first.state, first.history, sc.params, g, cfg, 1e-4);
    CHECK_FALSE(second.first_order);
    const StepResult changed = step(first.state, first.history, sc.params, g, cfg, 2e-4);
    CHECK(changed.first_order);

    CHECK(first.state.v.minCoeff() >= s0.v.minCoeff());
    CHECK(first.state.w.minCoeff() >= 0.0);
    CHECK_THROWS_AS(step(s0, History{}, sc.params, g, cfg, 0.0), InvalidArgument);
}

TEST_CASE("every accepted step contracts the nutrient sup norm") {
    const ScenarioConfig sc = preset("fig1_right", "l=1.4");
    const Grid g = build_grid(sc.geometry);
    State s = init_state(sc.initial, g).state;
    History h;
    for (int k = 0; k < 200; ++k) {
        const double dt = 2e-4 * (1 + k / 50);
        const StepResult r = step(s, h, sc.params, g, sc.stepper, dt);
        const double bound = std::exp(-sc.params.gamma * s.v.minCoeff() * r.dt) * s.w.maxCoeff();
        CHECK(r.state.w.maxCoeff() <= bound * (1.0 + 1e-14));
        s = r.state;
        h = r.history;
    }
}

TEST_CASE("positivity failures are reported with field and time") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 20));
    ModelParams p;
    p.chi = 1e6;
    State s{0.0, Field::Ones(20), Field::Ones(20), g.centers.array().square().matrix()};
    s.u[19] = 1e-3;
    StepperConfig cfg;
    cfg.dt = 1.0;
    cfg.max_retries = 0;
    try {
        step(s, History{}, p, g, cfg, 1.0);
        FAIL("expected PositivityViolation");
    } catch (const PositivityViolation& e) {
        CHECK(e.field() == "u");
        CHECK(e.time() == 0.0);
        CHECK(e.cell() >= 0);
    }
    cfg.max_retries = 60;
    cfg.dt_min = 1e-300;
    CHECK_NOTHROW(step(s, History{}, p, g, cfg, 1.0));
}

TEST_CASE("advance: trivial horizon, landing time, determinism") {
    ScenarioConfig sc = preset("fig1_left", "sigma=0.5");
    sc.geometry.n_cells = 100;
    sc.stepper.dt = 0.01;
    const Grid g = build_grid(sc.geometry);
    const State s0 = init_state(sc.initial, g).state;

    Integrator idle(g, sc.params, sc.stepper, s0);
    idle.advance_to(0.0);
    CHECK(idle.stats().accepted == 0);
    CHECK(idle.state().u == s0.u);
    CHECK_THROWS_AS(idle.advance_to(-1.0), InvalidArgument);

    Integrator whole(g, sc.params, sc.stepper, s0);
    whole.advance_to(0.4);
    Integrator split(g, sc.params, sc.stepper, s0);
    split.advance_to(0.2);
    split.advance_to(0.4);
    CHECK(whole.state().t == 0.4);
    CHECK(split.state().t == 0.4);
    CHECK(whole.state().u == split.state().u);
    CHECK(whole.state().v == split.state().v);
    CHECK(whole.state().w == split.state().w);

    Integrator again(g, sc.params, sc.stepper, s0);
    again.advance_to(0.4);
    CHECK(again.state().u == whole.state().u);

    int calls = 0;
    const double sched[] = {0.05, 0.13, 0.4};
    Integrator obs(g, sc.params, sc.stepper, s0);
    obs.advance(sched, [&](const State& s) { CHECK(s.t == sched[calls++]); });
    CHECK(calls == 3);
    CHECK(advance(s0, g, sc.params, sc.stepper, 0.4).u == whole.state().u);
}

TEST_CASE("long horizon step budget") {
    ScenarioConfig sc = preset("fig1_left", "sigma=60");
    sc.geometry.n_cells = 200;
    const Grid g = build_grid(sc.geometry);
    Integrator integ(g, sc.params, sc.stepper, init_state(sc.initial, g).state);
    integ.advance(sc.output_times(), nullptr);
    CHECK(integ.state().t == 1e3);
    CHECK(integ.stats().accepted <= 10'000'000);
    CHECK(integ.stats().min_dt > 0.0);
}

TEST_CASE("stepper configuration validation") {
    StepperConfig c;
    CHECK_NOTHROW(c.validate());
    c.cfl_safety = 1.5;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = StepperConfig{};
    c.dt_min = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK(time_scheme_from_string("sbdf1") == TimeScheme::sbdf1);
    CHECK(flux_scheme_from_string(to_string(FluxScheme::central)) == FluxScheme::central);
    CHECK_THROWS_AS(time_scheme_from_string("rk4"), InvalidArgument);
}
