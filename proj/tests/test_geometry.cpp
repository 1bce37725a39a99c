#include "sectorflow/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<Vec2> archimedean(double turns, std::size_t nodes)
{
    std::vector<Vec2> c;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double s = turns * 2.0 * pi * static_cast<double>(i) / static_cast<double>(nodes - 1);
        c.push_back(from_polar(0.1 * s, s));
    }
    return c;
}

std::vector<Vec2> random_polyline(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> len(3, 40);
    std::vector<Vec2> c{{0.0, 0.0}};
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        Vec2 p{u(rng), u(rng)};
        if (norm(p) < 1e-3) {
            p.x += 0.1;
        }
        c.push_back(p);
    }
    return c;
}

} // namespace

TEST_CASE("polygon area, perimeter and moments of a square")
{
    const std::vector<Vec2> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    CHECK(polygon_area(sq) == doctest::Approx(4.0));
    CHECK(polygon_perimeter(sq) == doctest::Approx(8.0));
    CHECK(polygon_perimeter(sq, false) == doctest::Approx(6.0));
    const auto m = polygon_moments(sq);
    CHECK(m.xx == doctest::Approx(16.0 / 3.0));
    CHECK(m.xy == doctest::Approx(4.0));
}

TEST_CASE("clipped area against the unit disk")
{
    const std::vector<Vec2> big{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
    CHECK(polygon_disk_intersection_area(big) == doctest::Approx(pi).epsilon(1e-12));
    const std::vector<Vec2> half{{0, -2}, {2, -2}, {2, 2}, {0, 2}};
    CHECK(polygon_disk_intersection_area(half) == doctest::Approx(pi / 2.0).epsilon(1e-12));
    const std::vector<Vec2> small{{0.1, 0.1}, {0.3, 0.1}, {0.3, 0.3}};
    CHECK(polygon_disk_intersection_area(small) == doctest::Approx(0.02));
}

TEST_CASE("segment intersection")
{
    CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    const std::vector<Vec2> bow{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(has_self_intersection(std::vector<PolygonEdges>{{bow, {}}}));
    CHECK_FALSE(has_self_intersection(std::vector<PolygonEdges>{{sq, {}}}));
}

TEST_CASE("winding of a radial segment and an archimedean spiral")
{
    const std::vector<Vec2> ray{{0, 0}, {0.5, 0.5}, {1, 1}};
    CHECK(std::abs(winding_number(ray)) <= 1e-15);
    CHECK(line_intersections(ray, pi / 4.0 + pi / 2.0) == 0);

    const auto s = archimedean(3.0, 1000);
    // tangent at the origin comes from the first chord
    CHECK(winding_number(s) == doctest::Approx(3.0).epsilon(1e-3));
    for (int k = 0; k < 8; ++k) {
        CHECK(line_intersections(s, k * pi / 8.0 + 0.01) >= 3);
    }
}

TEST_CASE("winding is additive and angle sweep negates under reversal")
{
    const auto s = archimedean(2.3, 600);
    const std::vector<Vec2> head(s.begin(), s.begin() + 251);
    const std::vector<Vec2> tail(s.begin() + 250, s.end());
    CHECK(winding_number(s) == doctest::Approx(winding_number(head) + angle_sweep(tail)).epsilon(1e-12));
    const std::vector<Vec2> back(tail.rbegin(), tail.rend());
    CHECK(angle_sweep(back) == doctest::Approx(-angle_sweep(tail)).epsilon(1e-12));
}

TEST_CASE("line crossings bound the winding on random polylines")
{
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ang(0.0, pi);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_polyline(rng);
        const double w = winding_number(c);
        const double line = ang(rng);
        CHECK(static_cast<double>(line_intersections(c, line)) >= std::floor(w));
    }
}

TEST_CASE("winding rejects a return to the origin")
{
    const std::vector<Vec2> loop{{0, 0}, {1, 0}, {0, 0}, {0, 1}};
    CHECK_THROWS(winding_number(loop));
}
