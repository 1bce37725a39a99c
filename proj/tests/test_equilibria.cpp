#include "sectorflow/equilibria.hpp"
#include "sectorflow/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

TEST_CASE("rotating family solves the stationarity system")
{
    for (int i = 0; i < 100; ++i) {
        const auto s = rotating_family((pi / 8.0) * i / 99.0 * (1.0 - 1e-16));
        const auto r = stationarity_residual(s);
        CHECK(std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]) <= 1e-14);
    }
    CHECK_THROWS_AS(rotating_family(-0.01), InvalidInput);
    CHECK_THROWS_AS(rotating_family(pi / 8.0 + 0.01), InvalidInput);
}

TEST_CASE("family endpoints")
{
    const auto s = rotating_family(0.0);
    CHECK(s.zeta1 == doctest::Approx(pi / 8.0));
    CHECK(s.zeta2 == doctest::Approx(pi / 8.0));
    CHECK(s.a1 == doctest::Approx(s.a2));
}

TEST_CASE("a single interval rotates rigidly, two separated ones do not")
{
    const AngularProfile one(4, {{-0.2, 0.3, 1.0}});
    CHECK(rigid_rotation_residual(one) <= 1e-14);
    const AngularProfile two(4, {{-0.35, -0.1, 1.0}, {0.05, 0.3, 1.0}});
    CHECK(rigid_rotation_residual(two) > 1e-6);
}

TEST_CASE("pair straddling the domain ends is rigid")
{
    const double e = 0.05;
    const AngularProfile p(4, {{-pi / 8.0 - e, -pi / 8.0 + e, 1.0}, {pi / 8.0 - e, pi / 8.0 + e, 1.0}});
    CHECK(rigid_rotation_residual(p) <= 1e-12);
}

TEST_CASE("coarse two-interval sweep")
{
    const auto s = sweep_two_interval(pi / 64.0);
    CHECK(s.genuine_configs > 0);
    CHECK(s.min_residual > 0.0);
    CHECK(s.max_touching_residual <= 1e-12);
    CHECK_THROWS_AS(sweep_two_interval(0.3), InvalidInput);
}

TEST_CASE("profile mean")
{
    const AngularProfile p(4, {{0.0, 0.2, 1.0}, {0.3, 0.4, -2.0}});
    CHECK(profile_mean(p) == doctest::Approx(4.0 * (0.2 - 0.2)));
}
