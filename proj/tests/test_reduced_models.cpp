#include "nutaxis/errors.hpp"
#include "nutaxis/oracles.hpp"
#include "nutaxis/reduced_models.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nutaxis;
using std::numbers::pi;

namespace {

ModelParams rates(double delta, double alpha, double beta = 1.0, double gamma = 1.0) {
    ModelParams p;
    p.delta = delta;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    return p;
}

}  // namespace

TEST_CASE("ode limits against the closed form") {
    // With u0 = v0 = 1: u = e^W, v = e^{2W}, and Q = u + v/2 + w = 5/2 at every time.
    const ModelParams p = rates(1.0, 2.0);
    const OdeState end = ode_integrate({0.0, 1.0, 1.0, 1.0}, p, 50.0, 1e-3);
    const double y = std::sqrt(6.0) - 1.0;
    CHECK(end.w < 1e-10);
    CHECK(end.u < end.v);
    CHECK(end.u == doctest::Approx(y).epsilon(1e-10));
    CHECK(end.v == doctest::Approx(y * y).epsilon(1e-10));
    CHECK(end.u == doctest::Approx(1.449490).epsilon(1e-6));
    CHECK(end.v == doctest::Approx(2.101021).epsilon(1e-6));
    CHECK(end.t == 50.0);
}

TEST_CASE("conserved quantity") {
    CHECK(conserved_quantity({0.0, 1.0, 2.0, 3.0}, rates(1.0, 1.0)) == 6.0);
    CHECK(conserved_quantity({0.0, 0.0, 0.0, 0.0}, rates(1.0, 2.0)) == 0.0);

    const ModelParams p = rates(1.0, 2.0);
    const OdeState s0{0.0, 1.0, 1.0, 1.0};
    const double q0 = conserved_quantity(s0, p);
    const auto traj = ode_solve(s0, p, 50.0, 1e-3);
    CHECK(traj.front() == s0);
    CHECK(traj.back().t == 50.0);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        CHECK(std::abs(conserved_quantity(traj[k], p) - q0) <= 1e-8 * q0);
        CHECK(traj[k].u >= traj[k - 1].u);
        CHECK(traj[k].v >= traj[k - 1].v);
        CHECK(traj[k].w <= traj[k - 1].w);
    }
}

TEST_CASE("ode trivial cases") {
    const OdeState s0{0.0, 1.3, 1.3, 2.0};
    const auto sym = ode_solve(s0, rates(1.5, 1.5, 2.0, 3.0), 10.0, 1e-3);
    for (const auto& s : sym) CHECK(s.u == s.v);

    const OdeState still{0.0, 0.4, 0.9, 0.0};
    const OdeState out = ode_integrate(still, rates(1.0, 2.0), 5.0, 1e-2);
    CHECK(out.u == still.u);
    CHECK(out.v == still.v);
    CHECK(out.w == 0.0);

    CHECK_THROWS_AS(ode_step_rk4(s0, rates(1.0, 1.0), 0.0), InvalidArgument);
    CHECK_THROWS_AS(ode_step_rk4(s0, rates(1.0, 1.0), -1e-3), InvalidArgument);
}

TEST_CASE("fine-step reference agrees with the working step") {
    const ModelParams p = rates(1.0, 2.0);
    const OdeState ref = ode_reference(p, {0.0, 1.0, 1.0, 1.0}, 50.0);
    const OdeState coarse = ode_integrate({0.0, 1.0, 1.0, 1.0}, p, 50.0, 1e-3);
    CHECK(std::abs(coarse.u - ref.u) <= 1e-8 * ref.u);
    CHECK(std::abs(coarse.v - ref.v) <= 1e-8 * ref.v);
}

TEST_CASE("sign law") {
    CHECK(sign_law_check(1.0, 1.0, 1.0, rates(1.0, 2.0), 50.0) == -1);
    CHECK(sign_law_check(1.0, 1.0, 1.0, rates(3.0, 2.0), 50.0) == 1);
    CHECK(sign_law_check(1.0, 1.0, 1.0, rates(2.0, 2.0), 50.0) == 0);

    const double vals[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    for (double d : vals)
        for (double a : vals)
            for (double w0 : {0.1, 1.0, 10.0}) {
                const int expected = (d > a) - (d < a);
                CHECK(sign_law_check(1.0, 1.0, w0, rates(d, a), 50.0) == expected);
            }

    CHECK_THROWS_AS(sign_law_check(1.0, 1.0, 1.0, rates(1.0, 2.0), 0.5), HorizonTooShort);
    CHECK_THROWS_AS(sign_law_check(1.0, 2.0, 1.0, rates(1.0, 2.0), 50.0), InvalidArgument);
}

TEST_CASE("jensen gap") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 400));

    const JensenReport flat = jensen_gap(Field::Constant(400, 3.0), g);
    CHECK(flat.c1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(flat.strict);

    Field two(400);
    for (int i = 0; i < 400; ++i) two[i] = i < 200 ? 1.0 : std::exp(1.0);
    const JensenReport jt = jensen_gap(two, g);
    CHECK(jt.c1 == doctest::Approx(std::log((1.0 + std::exp(1.0)) / 2.0) - 0.5).epsilon(1e-12));
    CHECK(jt.c1 == doctest::Approx(0.1201).epsilon(1e-3));
    CHECK(jt.strict);

    Field gauss(400);
    for (int i = 0; i < 400; ++i) gauss[i] = std::exp(-15.0 * std::pow(g.centers[i] - 0.5, 2));
    const double mean_phi = std::sqrt(pi / 15.0) * std::erf(std::sqrt(15.0) / 2.0);
    const double oracle = std::log(mean_phi) + 1.25;
    const JensenReport jg = jensen_gap(gauss, g);
    CHECK(std::abs(jg.c1 - oracle) < 1e-3);
    CHECK(std::abs(jg.c1 - 0.462) < 1e-3);
    CHECK(jg.c1 > 1e-10);

    Field bad = gauss;
    bad[7] = 0.0;
    CHECK_THROWS_AS(jensen_gap(bad, g), NonpositiveField);
}

TEST_CASE("heat flow") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 400));

    SUBCASE("constant data is stationary") {
        const double sched[] = {0.1, 0.5, 1.0};
        const auto samples = heat_solve(Field::Constant(400, 2.0), 1.0, g, sched);
        REQUIRE(samples.size() == 4);
        for (const auto& s : samples) {
            CHECK(s.log_integral == doctest::Approx(std::log(2.0)));
            CHECK(s.sup_deviation < 1e-13);
        }
    }

    SUBCASE("log integral gains c1 |Omega| and stays above L after t0") {
        Field u0(400);
        for (int i = 0; i < 400; ++i) u0[i] = std::exp(-15.0 * std::pow(g.centers[i] - 0.5, 2));
        const double D = 2.0;
        const HeatConstants hc = lemma15_constants(u0, D, g);
        CHECK(hc.L == doctest::Approx(0.5 * hc.c1));
        CHECK(hc.L == doctest::Approx(0.231).epsilon(1e-2));
        CHECK(hc.t0 > 0.0);
        const double base = hc.samples.front().log_integral;
        for (const auto& s : hc.samples)
            if (s.t >= hc.t0) CHECK(s.log_integral - base >= hc.L);

        const double t_check = 5.0 / (D * pi * pi);
        const double sched[] = {t_check};
        const auto at = heat_solve(u0, D, g, sched);
        CHECK(std::abs(at.back().log_integral - base - hc.limit) < 1e-3);
    }

    SUBCASE("rejects nonpositive and constant data") {
        const double sched[] = {1.0};
        CHECK_THROWS_AS(heat_solve(Field::Zero(400), 1.0, g, sched), NonpositiveField);
        CHECK_THROWS_AS(lemma15_constants(Field::Ones(400), 1.0, g), InvalidArgument);
    }
}

TEST_CASE("geometric schedule") {
    const auto s = geometric_schedule(1e-3, 1.25, 1e3);
    CHECK(s.front() == 1e-3);
    CHECK(s.back() == 1e3);
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] > s[k - 1]);
    CHECK_THROWS_AS(geometric_schedule(1e-3, 1.0, 1.0), InvalidArgument);
    CHECK(geometric_schedule(2.0, 1.5, 1.0) == std::vector<double>{1.0});
}
