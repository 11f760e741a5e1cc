#include "nutaxis/errors.hpp"
#include "nutaxis/grid.hpp"
#include "nutaxis/model.hpp"
#include "nutaxis/state.hpp"

#include <doctest.h>

#include <cmath>

using namespace nutaxis;

TEST_CASE("f_eps reduces to the identity without regularization") {
    for (double s : {0.0, 0.3, 1.0, 17.5, 1e6}) {
        CHECK(f_eps(s, 0.0) == s);
        CHECK(f_eps_prime(s, 0.0) == 1.0);
    }
    CHECK(f_eps(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(f_eps(0.0, 0.7) == 0.0);
}

TEST_CASE("f_eps_prime spot values") {
    CHECK(f_eps_prime(0.0, 0.1) == doctest::Approx(1.0));
    CHECK(f_eps_prime(1.0, 0.1) == doctest::Approx(1.0 / 1.21));
    CHECK(f_eps_prime(10.0, 0.1) == doctest::Approx(0.25));
}

TEST_CASE("f_eps bounds and monotonicity") {
    for (double eps : {1e-3, 0.1, 1.0, 10.0}) {
        double prev = 2.0;
        for (double s = 0.0; s < 100.0; s += 0.37) {
            CHECK(f_eps(s, eps) <= s);
            CHECK(f_eps(s, eps) <= 1.0 / eps);
            const double d = f_eps_prime(s, eps);
            CHECK(d > 0.0);
            CHECK(d <= 1.0);
            CHECK(d <= prev);
            prev = d;
        }
    }
    // Pointwise increase to 1 as eps decreases.
    for (double s : {0.5, 3.0, 40.0}) {
        double prev = 0.0;
        for (double eps : {1.0, 0.1, 1e-2, 1e-3, 1e-6}) {
            const double d = f_eps_prime(s, eps);
            CHECK(d > prev);
            prev = d;
        }
        CHECK(prev == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("vectorized f_eps matches the scalar form") {
    Field s(4);
    s << 0.0, 1.0, 2.5, 10.0;
    const Field f = f_eps(s, 0.2);
    const Field d = f_eps_prime(s, 0.2);
    for (int i = 0; i < 4; ++i) {
        CHECK(f[i] == f_eps(s[i], 0.2));
        CHECK(d[i] == doctest::Approx(f_eps_prime(s[i], 0.2)));
    }
}

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    CHECK_NOTHROW(p.validate_strict());
    p.alpha = 0.0;
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS_AS(p.validate_strict(), InvalidArgument);
    p = ModelParams{};
    p.D_u = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = ModelParams{};
    p.eps_reg = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = ModelParams{};
    p.chi = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("profiles: evaluation, mirroring and extrema") {
    const auto g = InitialProfile::gaussian(1.0, 1.0, 15.0, 0.0);
    CHECK(g(0.0, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(g(1.0, 0.0, 1.0) == doctest::Approx(1.0 + std::exp(-15.0)));
    const auto m = g.mirror();
    CHECK(m(1.0, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(m(0.3, 0.0, 1.0) == doctest::Approx(g(0.7, 0.0, 1.0)));
    CHECK(m.mirror() == g);

    CHECK(g.supremum(0.0, 1.0) == doctest::Approx(2.0));
    CHECK(g.infimum(0.0, 1.0) == doctest::Approx(1.0 + std::exp(-15.0)));
    const auto c = InitialProfile::gaussian(0.0, 1.0, 15.0, 0.5);
    CHECK(c.infimum(0.0, 1.0) == doctest::Approx(std::exp(-3.75)));
    CHECK(c.supremum(0.0, 1.0) == 1.0);
    const auto dip = InitialProfile::gaussian(3.0, -1.0, 2.0, 0.25);
    CHECK(dip.infimum(0.0, 1.0) == doctest::Approx(2.0));
    CHECK(dip.supremum(0.0, 1.0) == doctest::Approx(3.0 - std::exp(-2.0 * 0.75 * 0.75)));
    CHECK(InitialProfile::constant(4.0).supremum(0.0, 1.0) == 4.0);
}

TEST_CASE("init_state samples at centers and reports I(0)") {
    const Grid grid = build_grid(Geometry::interval(0.0, 1.0, 400));

    SUBCASE("equal descriptors give I(0) = 0 exactly") {
        const auto p = InitialProfile::gaussian(0.0, 1.0, 15.0, 0.5);
        const InitResult r = init_state({p, p, InitialProfile::constant(60.0)}, grid);
        CHECK(r.competition_index == 0.0);
        CHECK(r.state.t == 0.0);
    }
    SUBCASE("peaks at opposite ends cancel") {
        const auto u = InitialProfile::gaussian(1.0, 1.0, 15.0, 0.0);
        const InitResult r = init_state({u, u.mirror(), InitialProfile::constant(1.0)}, grid);
        CHECK(std::abs(r.competition_index) < 1e-12);
    }
    SUBCASE("constant profiles") {
        const auto one = InitialProfile::constant(1.0);
        const InitResult r = init_state({one, one, one}, grid);
        CHECK((r.state.u.array() == 1.0).all());
        CHECK((r.state.v.array() == 1.0).all());
        CHECK((r.state.w.array() == 1.0).all());
    }
    SUBCASE("nonpositive data is rejected") {
        const auto one = InitialProfile::constant(1.0);
        CHECK_THROWS_AS(init_state({InitialProfile::constant(0.0), one, one}, grid), NonpositiveField);
        CHECK_THROWS_AS(init_state({one, InitialProfile::constant(-1.0), one}, grid), NonpositiveField);
        CHECK_THROWS_AS(init_state({one, one, InitialProfile::constant(-1.0)}, grid), NonpositiveField);
        CHECK_NOTHROW(init_state({one, one, InitialProfile::constant(0.0)}, grid));
    }
}
