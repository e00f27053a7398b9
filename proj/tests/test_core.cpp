#include <cmath>

#include "doctest.h"
#include "rinv/types.hpp"

using namespace rinv;

TEST_CASE("grid spacing and endpoints")
{
    auto g = make_grid({Interval{0, 0}, {-5, 5}, {0, 0}, {0, 0}}, {1, 11, 1, 1});
    CHECK(g.axes[1].h == 1.0);
    CHECK(g.size() == 11);
    CHECK(g.point(0).x.x == -5.0);
    CHECK(g.point(10).x.x == 5.0);

    auto two = make_grid({Interval{0, 0}, {0, 1}, {0, 0}, {0, 0}}, {1, 2, 1, 1});
    CHECK(two.point(0).x.x == 0.0);
    CHECK(two.point(1).x.x == 1.0);
}

TEST_CASE("figure-one region grid is valid")
{
    auto g = make_grid({Interval{0, 0}, {-5, 5}, {0, 0}, {0, 0.5}}, {1, 101, 1, 51});
    CHECK(g.size() == 101 * 51);
    CHECK(g.axes[3].h == doctest::Approx(0.01));
    // z is the fastest index
    CHECK(g.point(1).x.z == doctest::Approx(0.01));
    CHECK(g.point(51).x.x == doctest::Approx(-4.9));
}

TEST_CASE("grid points stay within one rounding unit of lo + i h")
{
    auto g = make_grid({Interval{-1.3, 2.7}, {0.1, 0.7}, {-3, 3}, {1e-3, 2e-3}}, {7, 13, 29, 5});
    for (int a = 0; a < 4; ++a) {
        const auto& ax = g.axes[a];
        CHECK(ax.h == (ax.hi - ax.lo) / static_cast<double>(ax.count - 1));
        for (std::size_t i = 0; i < ax.count; ++i) {
            double exact = ax.lo + static_cast<double>(i) * ax.h;
            double got = ax.at(i);
            CHECK(std::abs(got - exact) <= std::nextafter(std::abs(exact), INFINITY) - std::abs(exact));
        }
    }
    // last point lands on hi up to rounding
    CHECK(g.axes[2].at(28) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("grid rejects bad input")
{
    CHECK_THROWS_AS(make_grid({Interval{0, 0}, {0, NAN}, {0, 0}, {0, 0}}, {1, 3, 1, 1}), PreconditionError);
    CHECK_THROWS_AS(make_grid({Interval{0, 0}, {0, 1}, {0, 0}, {0, 0}}, {1, 0, 1, 1}), PreconditionError);
    CHECK_THROWS_AS(make_grid({Interval{0, 0}, {0, 1}, {0, 0}, {0, 0}}, {1, 1, 1, 1}), PreconditionError);
    CHECK_THROWS_AS(make_grid({Interval{0, 0}, {1, 0}, {0, 0}, {0, 0}}, {1, 3, 1, 1}), PreconditionError);
}

TEST_CASE("fluid state admissibility")
{
    CHECK_NOTHROW(FluidState(1, 1, {0, 0, 0}));
    CHECK_THROWS_AS(FluidState(0, 1, {}), PreconditionError);
    CHECK_THROWS_AS(FluidState(-1, 1, {}), PreconditionError);
    CHECK_THROWS_AS(FluidState(1, 0, {}), PreconditionError);
    CHECK_THROWS_AS(FluidState(1, -2, {}), PreconditionError);
    CHECK_THROWS_AS(FluidState(NAN, 1, {}), PreconditionError);
    FluidState u(2, 3, {4, 5, 6});
    auto a = u.as_array();
    CHECK(a[0] == 2);
    CHECK(a[4] == 6);
}

TEST_CASE("phys params validation")
{
    CHECK_THROWS_AS(PhysParams::make(0, {}, {}), PreconditionError);
    CHECK_THROWS_AS(PhysParams::make(1.4, {0, 0, INFINITY}, {}), PreconditionError);
    auto p = PhysParams::make(1.4, {0, 0, -standard_gravity}, {0, 0, 1});
    CHECK(p.g.z == -9.81);
    CHECK(parse_sign(-1) == Sign::minus);
    CHECK_THROWS_AS(parse_sign(0.5), PreconditionError);
}

TEST_CASE("vector algebra")
{
    Vec3 a{1, 2, 3}, b{-2, 0.5, 4};
    Vec3 c = cross(a, b);
    CHECK(dot(c, a) == doctest::Approx(0).epsilon(1e-15));
    CHECK(dot(c, b) == doctest::Approx(0).epsilon(1e-15));
    CHECK(c.x == 2 * 4 - 3 * 0.5);
    WaveCovector l{2, {3, 0, 0}};
    SpacetimePoint p{1, {1, 5, 5}};
    CHECK(pair(l, p) == 5.0);
}
