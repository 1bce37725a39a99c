#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sectorflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o)
    {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(Vec2 o)
    {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    Vec2& operator*=(double s)
    {
        x *= s;
        y *= s;
        return *this;
    }
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
/// Counterclockwise quarter turn, x^⊥ = (−x₂, x₁).
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double polar_angle(Vec2 a) { return std::atan2(a.y, a.x); }
inline Vec2 from_polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }
inline Vec2 rotate(Vec2 a, double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Signed shoelace area of a closed polygon (positive when counterclockwise).
double polygon_area(std::span<const Vec2> nodes);
double polygon_perimeter(std::span<const Vec2> nodes, bool closed = true);

/// Second moments ∫x², ∫y², ∫xy over a counterclockwise polygon.
struct SecondMoments {
    double xx = 0.0, yy = 0.0, xy = 0.0;
};
SecondMoments polygon_moments(std::span<const Vec2> nodes);

/// Area of (polygon ∩ disk of the given radius centred at the origin), exact
/// for straight edges; signed like polygon_area.
double polygon_disk_intersection_area(std::span<const Vec2> nodes, double radius = 1.0);

/// Closed-segment intersection test (touching and collinear overlap count).
bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

/// Finds a pair of non-adjacent intersecting edges among a set of closed polygons.
/// Edges that meet only at the origin through pinned endpoints are ignored, so
/// petals sharing a pinned corner are not reported.
struct PolygonEdges {
    std::span<const Vec2> nodes;
    std::vector<std::size_t> pinned;
};
bool has_self_intersection(std::span<const PolygonEdges> polygons);

/// Net change of the continuous polar angle along a polyline that avoids the
/// origin, in turns. Each straight edge sweeps its subtended angle in (−π, π).
double angle_sweep(std::span<const Vec2> polyline);

/// Winding number of a polyline that starts at the origin: (lifted angle at the
/// end − tangent angle at the origin) / 2π. The tangent angle is extrapolated
/// from the first two nodes in arc length. Throws if the curve returns to the
/// origin; consecutive duplicates are collapsed.
double winding_number(std::span<const Vec2> curve);

/// Number of transversal sign changes of the signed distance to the line through
/// the origin with direction angle `line_angle`, skipping the starting origin node.
/// A run of nodes exactly on the line counts once.
std::size_t line_intersections(std::span<const Vec2> curve, double line_angle);

} // namespace sectorflow
