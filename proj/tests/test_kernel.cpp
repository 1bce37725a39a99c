#include "sectorflow/kernel.hpp"
#include "sectorflow/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

TEST_CASE("green function solves the periodic problem for m = 4")
{
    // |sin 2phi| / 4 on one period
    for (double phi : {-0.7, -0.3, 0.0, 0.2, 0.6}) {
        CHECK(kernel_green(4, phi) == doctest::Approx(std::abs(std::sin(2.0 * phi)) / 4.0).epsilon(1e-14));
    }
}

TEST_CASE("constant profile gives the disk speed")
{
    const auto h = AngularProfile::constant(4, 1.0);
    for (double theta : {-0.5, 0.0, 0.3, 1.2}) {
        CHECK(std::abs(2.0 * kernel_h(h, theta) - 0.5) <= 1e-15);
    }
}

TEST_CASE("sector profile speed at its edge")
{
    for (double t0 : {0.1, pi / 8.0, 0.3}) {
        const AngularProfile sector(4, {{-t0, t0, 1.0}});
        CHECK(std::abs(corner_angular_speed(sector, t0) - 0.25 * (1.0 - std::cos(4.0 * t0))) <= 1e-12);
    }
}

TEST_CASE("kernel agrees with the Fourier series on random profiles")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto p = random_profile(seed, 4);
        for (int q = 0; q < 12; ++q) {
            const double theta = -pi / 4.0 + (pi / 2.0) * (q + 0.31) / 12.0;
            CHECK(std::abs(kernel_h(p, theta) - fourier_kernel_h(p, theta, 20000)) <= 1e-8);
        }
    }
}

TEST_CASE("kernel is linear and rotation equivariant")
{
    const auto a = random_profile(7, 4);
    auto doubled = a.pieces();
    std::vector<AngularProfile::Piece> split;
    for (auto& p : doubled) {
        p.amplitude *= 2.0;
    }
    for (const auto& p : a.pieces()) {
        const double mid = 0.5 * (p.lo + p.hi);
        split.push_back({p.lo, mid, p.amplitude});
        split.push_back({mid, p.hi, p.amplitude});
    }
    auto shifted = a.pieces();
    for (auto& p : shifted) {
        p.lo += 0.2;
        p.hi += 0.2;
    }
    const AngularProfile twice(4, doubled), halves(4, split), rot(4, shifted);
    for (double theta : {-0.6, -0.1, 0.4}) {
        CHECK(kernel_h(twice, theta) == doctest::Approx(2.0 * kernel_h(a, theta)).epsilon(1e-14));
        CHECK(kernel_h(halves, theta) == doctest::Approx(kernel_h(a, theta)).epsilon(1e-13));
        CHECK(kernel_h(rot, theta + 0.2) == doctest::Approx(kernel_h(a, theta)).epsilon(1e-12));
        CHECK(kernel_h(a, theta + pi / 2.0) == doctest::Approx(kernel_h(a, theta)).epsilon(1e-12));
    }
}

TEST_CASE("bad profiles are rejected")
{
    CHECK_THROWS(AngularProfile(4, {{0.3, 0.1, 1.0}}));
    CHECK_THROWS(AngularProfile(4, {{0.0, 0.3, 1.0}, {0.2, 0.5, 1.0}}));
    CHECK_THROWS(AngularProfile(2, {{0.0, 0.1, 1.0}}));
}
