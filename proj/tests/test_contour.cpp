#include "sectorflow/contour.hpp"
#include "sectorflow/experiments.hpp"
#include "sectorflow/oracles.hpp"
#include "sectorflow/patches.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

namespace {

SimulationState single(PatchContour c)
{
    SimulationState s;
    s.contours.push_back(std::move(c));
    return s;
}

std::vector<Vec2> sample_points(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> r(0.05, 1.6), a(-pi, pi);
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(from_polar(r(rng), a(rng)));
    }
    return pts;
}

double oracle_error(const SimulationState& s)
{
    const auto polys = full_patch(s);
    double err = 0.0;
    for (const auto& x : sample_points(99, 20)) {
        err = std::max(err, norm(velocity_at(s, x) - area_quadrature_velocity(polys, x)));
    }
    return err;
}

} // namespace

TEST_CASE("disk rotates rigidly at one half")
{
    CHECK(disk_boundary_check(512).max_relative_error < 1e-3);
    const auto s = single(disk_contour(256));
    for (Vec2 x : {Vec2{0.3, 0.1}, Vec2{-0.5, 0.2}}) {
        const Vec2 u = velocity_at(s, x);
        CHECK(norm(u - 0.5 * perp(x)) < 1e-3);
    }
    // outside: point vortex of strength pi
    const Vec2 x{2.0, 0.5};
    CHECK(norm(velocity_at(s, x) - (0.5 / norm2(x)) * perp(x)) < 1e-4);
}

TEST_CASE("velocity matches area quadrature for disk, ellipse and sector")
{
    CHECK(oracle_error(single(disk_contour(400))) <= 1e-4);
    CHECK(oracle_error(single(ellipse_contour(1.5, 1.0, 400))) <= 1e-4);
    CHECK(oracle_error(build_sector_patch(pi / 8.0, 0.01)) <= 1e-4);
}

TEST_CASE("four-fold velocity is rotation equivariant")
{
    const auto s = build_spiral_patch({});
    for (const auto& x : sample_points(3, 5)) {
        const Vec2 a = velocity_at(s, rotate(x, pi / 2.0));
        const Vec2 b = rotate(velocity_at(s, x), pi / 2.0);
        CHECK(norm(a - b) <= 1e-12);
    }
}

TEST_CASE("multipole tree agrees with direct summation")
{
    const auto s = build_spiral_patch({});
    VelocityOptions direct;
    direct.tree_theta = 0.0;
    for (const auto& x : sample_points(5, 20)) {
        CHECK(norm(velocity_at(s, x) - velocity_at(s, x, direct)) <= 1e-10);
    }
}

TEST_CASE("node velocities are thread-count independent in value")
{
    const auto s = build_sector_patch(pi / 8.0, 0.01);
    const auto a = node_velocities(s);
    const auto b = node_velocities(s);
    REQUIRE(a.size() == b.size());
    CHECK(a[0] == b[0]);
}

TEST_CASE("remesh keeps area, pinned nodes and spacing, and is idempotent")
{
    auto c = ellipse_contour(1.5, 1.0, 97);
    RemeshOptions o;
    o.spacing = SpacingProfile::uniform(0.02);
    const auto r = remesh(c, o);
    CHECK(std::abs(r.area() - c.area()) / c.area() <= 1e-9);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double d = norm(r.nodes[(i + 1) % r.nodes.size()] - r.nodes[i]);
        CHECK(d <= 0.02 * 1.6);
        CHECK(d >= 0.02 * 0.3);
    }
    const auto rr = remesh(r, o);
    REQUIRE(rr.nodes.size() == r.nodes.size());
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        CHECK(rr.nodes[i] == r.nodes[i]);
    }

    const auto sector = build_sector_patch(pi / 8.0, 0.01);
    const auto& sc = sector.contours.front();
    const auto rs = remesh(sc, default_patch_mesh(), 4);
    REQUIRE(rs.pinned.size() == sc.pinned.size());
    CHECK(rs.nodes[rs.pinned[0]] == sc.nodes[sc.pinned[0]]);
    CHECK(std::abs(rs.area() - sc.area()) / sc.area() <= 1e-9);
}

TEST_CASE("bad remesh options are rejected")
{
    RemeshOptions o;
    o.spacing = SpacingProfile::uniform(-1.0);
    CHECK_THROWS(remesh(disk_contour(64), o));
}

TEST_CASE("disk diagnostics")
{
    const auto d = diagnostics(single(disk_contour(1024)), 0.3, false);
    CHECK(std::abs(d.area - pi) <= 1e-5 * 10);
    CHECK(std::abs(d.perimeter - 2.0 * pi) <= 1e-4);
    CHECK(d.l1_disk <= 1e-4);
    CHECK(d.reliable);
}

TEST_CASE("spiral patch initial state")
{
    const auto s = build_spiral_patch({});
    CHECK(s.symmetry == 4);
    CHECK_FALSE(self_intersects(s));
    const auto d = diagnostics(s, 0.3, false);
    CHECK(d.l1_disk > 0.0);
    CHECK(d.l1_disk <= std::abs(pi - d.area) + 4.0 * 0.05 * 2.0 * pi);
}

TEST_CASE("kirchhoff ellipse rate")
{
    const auto k = run_kirchhoff(1.5, 1.0, 256, 5.0, 0.02);
    CHECK(std::abs(k.rate - k.expected) / k.expected < 0.01);
    CHECK(k.area_drift < 1e-4);
}

TEST_CASE("sector corner keeps its opening over a short run")
{
    CornerRunParams p;
    p.t_end = 1.0;
    const auto rec = run_corner_patch(build_sector_patch(pi / 8.0, 0.01), p);
    REQUIRE(rec.status == RunStatus::completed);
    const auto c = summarize_corner(rec);
    CHECK(c.max_opening_dev <= 0.02);
    CHECK(std::abs(c.bisector.slope - 0.25) / 0.25 <= 0.02);
}

TEST_CASE("remesh of a thin hairpin stays simple")
{
    // two arcs 2e-3 apart joined at the ends, wiggled so the cubic has something to bend
    PatchContour c;
    const int k = 60;
    for (int i = 0; i <= k; ++i) {
        const double s = 0.5 * i / k;
        c.nodes.push_back({0.2 + s, 0.3 + 0.01 * std::sin(40.0 * s)});
    }
    for (int i = k; i >= 0; --i) {
        const double s = 0.5 * i / k;
        c.nodes.push_back({0.2 + s, 0.302 + 0.01 * std::sin(40.0 * s)});
    }
    RemeshOptions o;
    o.spacing = SpacingProfile::uniform(0.01);
    o.curvature_weight = 0.05;
    o.proximity_weight = 1.0;
    o.proximity_min_spacing = 5e-4;
    const double area = c.area();
    for (int round = 0; round < 4; ++round) {
        c = remesh(c, o);
        CHECK_FALSE(self_intersects(single(c)));
        CHECK(std::abs(c.area() - area) / std::abs(area) <= 1e-9);
    }
    const auto rho = segment_density(c, o);
    // across a 2e-3 gap the spacing is bounded by the gap
    CHECK(*std::max_element(rho.begin(), rho.end()) >= 1.0 / 2.5e-3);
}
