#include "sectorflow/angle_dynamics.hpp"
#include "sectorflow/angle_ode.hpp"
#include "sectorflow/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

namespace {

SectorConfiguration two_sectors(double z1, double z2, double gap)
{
    return SectorConfiguration::from_angles(4, 0.0, {z1, z2}, {gap});
}

} // namespace

TEST_CASE("width rates sum to zero for unit strengths")
{
    const auto c = two_sectors(0.3, 0.2, 0.1);
    const auto r = rhs_m4_weighted(c);
    CHECK(std::abs(r.zeta[0] + r.zeta[1]) <= 1e-15);
}

TEST_CASE("general and m = 4 right-hand sides agree")
{
    const auto c = SectorConfiguration::from_angles(4, 0.1, {0.3, 0.2, 0.1}, {0.2, 0.3});
    const auto a = rhs_general(c);
    const auto b = rhs_m4_weighted(c);
    REQUIRE(a.zeta.size() == b.zeta.size());
    for (std::size_t i = 0; i < a.zeta.size(); ++i) {
        CHECK(a.zeta[i] == doctest::Approx(b.zeta[i]).epsilon(1e-12));
    }
}

TEST_CASE("symmetric equal sectors are stationary")
{
    // two equal sectors with equal gaps: 8-fold arrangement
    const auto c = two_sectors(pi / 8.0, pi / 8.0, pi / 8.0);
    const auto r = rhs_m4_weighted(c);
    for (double z : r.zeta) {
        CHECK(std::abs(z) <= 1e-14);
    }
}

TEST_CASE("pack and unpack round trip")
{
    const auto c = SectorConfiguration::from_angles(4, 0.05, {0.3, 0.2}, {0.4});
    const auto x = pack_state(c);
    const auto back = unpack_state(x, c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back[i].beta == doctest::Approx(c[i].beta));
        CHECK(back[i].zeta == doctest::Approx(c[i].zeta));
    }
}

TEST_CASE("integration conserves the width sum and closes the period")
{
    const auto c = two_sectors(pi / 8.0 + 0.1, pi / 8.0 - 0.1, pi / 8.0);
    StepControl ctl;
    ctl.dt = 1e-3;
    ctl.output_interval = 0.5;
    const auto traj = integrate_angles(c, {}, 100.0, ctl);
    REQUIRE(traj.status == IntegrationStatus::completed);
    const double s0 = c[0].zeta + c[1].zeta;
    for (const auto& x : traj.states) {
        const auto cc = unpack_state(x, c);
        CHECK(std::abs(cc[0].zeta + cc[1].zeta - s0) <= 1e-9);
        double total = 0.0;
        for (double w : cc.widths()) {
            total += w;
        }
        for (double g : cc.gaps()) {
            total += g;
            CHECK(g >= -angle_negative_tolerance);
        }
        CHECK(std::abs(total - pi / 2.0) <= 1e-12);
    }
}

TEST_CASE("json round trip and validation")
{
    const auto c = two_sectors(0.3, 0.2, 0.5);
    const NormalizationConstants k{};
    const auto j = to_json(c, k);
    const auto back = configuration_from_json(j);
    CHECK(back.size() == 2);
    CHECK(back[1].beta == doctest::Approx(c[1].beta));

    nlohmann::json bad = j;
    bad["m"] = 2;
    CHECK_THROWS_AS(configuration_from_json(bad), InvalidInput);
    bad = j;
    bad["sectors"][0]["zeta"] = -0.1;
    CHECK_THROWS_AS(configuration_from_json(bad), InvalidInput);
    bad = j;
    bad["sectors"][0]["zeta"] = "wide";
    CHECK_THROWS(configuration_from_json(bad));
}

TEST_CASE("angle csv is written at 17 digits")
{
    const auto c = two_sectors(0.3, 0.2, 0.5);
    StepControl ctl;
    ctl.dt = 1e-2;
    ctl.output_interval = 0.5;
    const auto traj = integrate_angles(c, {}, 1.0, ctl);
    std::ostringstream out;
    write_angle_csv(out, traj, c);
    const auto text = out.str();
    CHECK(text.find("0.29999999999999999") != std::string::npos);
}
