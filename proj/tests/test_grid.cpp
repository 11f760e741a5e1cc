#include "nutaxis/errors.hpp"
#include "nutaxis/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nutaxis;
using std::numbers::pi;

TEST_CASE("uniform interval partition") {
    const Grid g = build_grid(Geometry::interval(0.0, 1.0, 4));
    CHECK(g.size() == 4);
    CHECK(g.h == 0.25);
    for (int i = 0; i < 4; ++i) {
        CHECK(g.measure[i] == doctest::Approx(0.25));
        CHECK(g.centers[i] == doctest::Approx(0.125 + 0.25 * i));
    }
    CHECK(g.total_measure() == doctest::Approx(1.0));
    CHECK(g.faces[0] == 0.0);
    CHECK(g.faces[4] == 1.0);
    CHECK((g.area.array() == 1.0).all());
}

TEST_CASE("measures partition the domain in every geometry") {
    struct Case {
        Geometry geo;
        double volume;
    };
    const Case cases[] = {
        {Geometry::interval(-2.0, 3.0, 77), 5.0},
        {Geometry::ball(1, 1.0, 50), 2.0},
        {Geometry::ball(2, 1.0, 100), pi},
        {Geometry::ball(3, 1.0, 100), 4.0 * pi / 3.0},
        {Geometry::ball(3, 2.5, 33), 4.0 * pi / 3.0 * 2.5 * 2.5 * 2.5},
    };
    for (const auto& c : cases) {
        const Grid g = build_grid(c.geo);
        CHECK(std::abs(g.total_measure() - c.volume) <= 1e-12 * c.volume);
        CHECK(c.geo.measure() == doctest::Approx(c.volume));
        CHECK((g.measure.array() > 0.0).all());
    }
}

TEST_CASE("radial face areas") {
    CHECK(sphere_area(1) == 2.0);
    CHECK(sphere_area(2) == doctest::Approx(2.0 * pi));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * pi));
    const Grid g = build_grid(Geometry::ball(3, 1.0, 10));
    CHECK(g.area[0] == 0.0);
    CHECK(g.area[10] == doctest::Approx(4.0 * pi));
    CHECK(g.area[5] == doctest::Approx(4.0 * pi * 0.25));
    CHECK(g.radial());
}

TEST_CASE("invalid geometries are rejected") {
    CHECK_THROWS_AS(build_grid(Geometry::interval(0.0, 1.0, 3)), InvalidArgument);
    CHECK_THROWS_AS(build_grid(Geometry::interval(1.0, 1.0, 10)), InvalidArgument);
    CHECK_THROWS_AS(build_grid(Geometry::ball(4, 1.0, 10)), InvalidArgument);
    CHECK_THROWS_AS(build_grid(Geometry::ball(2, 0.0, 10)), InvalidArgument);
    CHECK_THROWS_AS(geometry_kind_from_string("torus"), InvalidArgument);
    CHECK(geometry_kind_from_string(to_string(GeometryKind::radial)) == GeometryKind::radial);
}
