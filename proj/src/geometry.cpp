#include "sectorflow/geometry.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <numbers>

namespace sectorflow {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double subtended(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }
} // namespace

double polygon_area(std::span<const Vec2> nodes)
{
    const std::size_t n = nodes.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(nodes[i], nodes[(i + 1) % n]);
    }
    return 0.5 * twice;
}

double polygon_perimeter(std::span<const Vec2> nodes, bool closed)
{
    const std::size_t n = nodes.size();
    if (n < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        total += norm(nodes[i + 1] - nodes[i]);
    }
    if (closed) {
        total += norm(nodes.front() - nodes.back());
    }
    return total;
}

SecondMoments polygon_moments(std::span<const Vec2> nodes)
{
    SecondMoments m;
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = nodes[i], b = nodes[(i + 1) % n];
        const double c = cross(a, b);
        m.xx += c * (a.x * a.x + a.x * b.x + b.x * b.x);
        m.yy += c * (a.y * a.y + a.y * b.y + b.y * b.y);
        m.xy += c * (a.x * b.y + 2.0 * a.x * a.y + 2.0 * b.x * b.y + b.x * a.y);
    }
    m.xx /= 12.0;
    m.yy /= 12.0;
    m.xy /= 24.0;
    return m;
}

namespace {

/// Signed area of triangle(0, a, b) ∩ disk(0, R).
double triangle_disk_area(Vec2 a, Vec2 b, double radius)
{
    const double r2 = radius * radius;
    const Vec2 d = b - a;
    // |a + t d|² = R² → t² |d|² + 2t a·d + |a|² − R² = 0
    const double qa = norm2(d);
    if (qa == 0.0) {
        return 0.0;
    }
    const double qb = dot(a, d);
    const double qc = norm2(a) - r2;
    double cuts[4] = {0.0, 0.0, 0.0, 1.0};
    std::size_t count = 1;
    const double disc = qb * qb - qa * qc;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        for (double t : {(-qb - s) / qa, (-qb + s) / qa}) {
            if (t > 0.0 && t < 1.0) {
                cuts[count++] = t;
            }
        }
    }
    cuts[count++] = 1.0;
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < count; ++k) {
        const Vec2 p = a + cuts[k] * d;
        const Vec2 q = a + cuts[k + 1] * d;
        const Vec2 mid = 0.5 * (p + q);
        if (norm2(mid) <= r2) {
            area += 0.5 * cross(p, q);
        } else {
            area += 0.5 * r2 * subtended(p, q);
        }
    }
    return area;
}

} // namespace

double polygon_disk_intersection_area(std::span<const Vec2> nodes, double radius)
{
    const std::size_t n = nodes.size();
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        area += triangle_disk_area(nodes[i], nodes[(i + 1) % n], radius);
    }
    return area;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c)
{
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

} // namespace

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

namespace {

struct Edge {
    Vec2 a, b;
    double xmin, xmax, ymin, ymax;
};

/// Edges sharing an endpoint only overlap if they fold back onto each other.
bool edges_conflict(const Edge& e, const Edge& f)
{
    for (Vec2 p : {e.a, e.b}) {
        for (Vec2 q : {f.a, f.b}) {
            if (p == q) {
                const Vec2 u = (p == e.a ? e.b : e.a) - p;
                const Vec2 v = (q == f.a ? f.b : f.a) - q;
                return cross(u, v) == 0.0 && dot(u, v) > 0.0;
            }
        }
    }
    return segments_intersect(e.a, e.b, f.a, f.b);
}

} // namespace

bool has_self_intersection(std::span<const PolygonEdges> polygons)
{
    std::vector<Edge> edges;
    for (const auto& poly : polygons) {
        const std::size_t n = poly.nodes.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = poly.nodes[i], b = poly.nodes[(i + 1) % n];
            edges.push_back({a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                             std::max(a.y, b.y)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& e, const Edge& f) { return e.xmin < f.xmin; });
    std::vector<const Edge*> active;
    for (const auto& e : edges) {
        std::erase_if(active, [&](const Edge* f) { return f->xmax < e.xmin; });
        for (const Edge* f : active) {
            if (f->ymax < e.ymin || e.ymax < f->ymin) {
                continue;
            }
            if (edges_conflict(e, *f)) {
                return true;
            }
        }
        active.push_back(&e);
    }
    return false;
}

double angle_sweep(std::span<const Vec2> polyline)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        require(norm2(polyline[i]) > 0.0 && norm2(polyline[i + 1]) > 0.0,
                "angle sweep needs a polyline avoiding the origin");
        total += subtended(polyline[i], polyline[i + 1]);
    }
    return total / two_pi;
}

double winding_number(std::span<const Vec2> curve)
{
    require(curve.size() >= 3, "winding number needs at least three nodes");
    require(norm(curve.front()) <= 1e-12, "winding number needs a curve starting at the origin");
    std::vector<Vec2> pts;
    pts.reserve(curve.size());
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (!pts.empty() && pts.back() == curve[i]) {
            continue;
        }
        require(norm(curve[i]) > 1e-12, "winding number: curve returns to the origin");
        pts.push_back(curve[i]);
    }
    require(pts.size() >= 2, "winding number needs two distinct nodes away from the origin");

    const double s1 = norm(pts[0]);
    const double s2 = s1 + norm(pts[1] - pts[0]);
    const double phi1 = polar_angle(pts[0]);
    const double phi2 = phi1 + subtended(pts[0], pts[1]);
    const double phi0 = phi1 - s1 * (phi2 - phi1) / (s2 - s1);

    double phi = phi1;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        phi += subtended(pts[i], pts[i + 1]);
    }
    return (phi - phi0) / two_pi;
}

std::size_t line_intersections(std::span<const Vec2> curve, double line_angle)
{
    const Vec2 d{std::cos(line_angle), std::sin(line_angle)};
    std::size_t count = 0;
    int last = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double s = cross(d, curve[i]);
        const int sign = (s > 0.0) - (s < 0.0);
        if (sign == 0) {
            continue;
        }
        if (last != 0 && sign != last) {
            ++count;
        }
        last = sign;
    }
    return count;
}

} // namespace sectorflow
