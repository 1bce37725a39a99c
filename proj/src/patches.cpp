#include "sectorflow/patches.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sectorflow {

namespace {
constexpr double pi = std::numbers::pi;
} // namespace

PatchContour disk_contour(std::size_t nodes, double radius)
{
    require(nodes >= 3, "disk needs at least 3 nodes");
    require(radius > 0.0, "disk radius must be positive");
    PatchContour c;
    for (std::size_t i = 0; i < nodes; ++i) {
        c.nodes.push_back(from_polar(radius, 2.0 * pi * static_cast<double>(i) / static_cast<double>(nodes)));
    }
    return c;
}

PatchContour ellipse_contour(double a, double b, std::size_t nodes)
{
    require(nodes >= 3, "ellipse needs at least 3 nodes");
    require(a > 0.0 && b > 0.0, "ellipse semi-axes must be positive");
    PatchContour c;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(nodes);
        c.nodes.push_back({a * std::cos(t), b * std::sin(t)});
    }
    return c;
}

RemeshOptions default_patch_mesh()
{
    RemeshOptions o;
    o.spacing.spacing_origin = 5e-3;
    o.spacing.spacing_outer = 2e-2;
    o.spacing.outer_radius = 1.0;
    o.curvature_weight = 0.05;
    o.density_cap = 10.0;
    return o;
}

namespace {

/// Straight segment or circular arc, parametrized by u in [0, 1].
struct Piece {
    bool arc = false;
    Vec2 a, b;            // line endpoints
    Vec2 center;          // arc centre
    double radius = 0.0;  // arc radius
    double start = 0.0;   // arc start angle
    double sweep = 0.0;   // signed arc sweep

    Vec2 at(double u) const
    {
        if (!arc) {
            return a + u * (b - a);
        }
        return center + from_polar(radius, start + u * sweep);
    }
    double curvature() const { return arc ? 1.0 / radius : 0.0; }
};

Piece line(Vec2 a, Vec2 b) { return {false, a, b, {}, 0.0, 0.0, 0.0}; }

Piece arc(Vec2 center, double radius, Vec2 from, Vec2 to, bool ccw)
{
    const Vec2 p = from - center, q = to - center;
    double sweep = std::atan2(cross(p, q), dot(p, q));
    if (ccw && sweep < 0.0) {
        sweep += 2.0 * pi;
    }
    if (!ccw && sweep > 0.0) {
        sweep -= 2.0 * pi;
    }
    return {true, {}, {}, center, radius, polar_angle(p), sweep};
}

/// Nodes along a chain of pieces at density-weighted equal spacing, both ends included.
std::vector<Vec2> sample_chain(const std::vector<Piece>& chain, const RemeshOptions& mesh)
{
    // Subsamples cluster cubically toward the start of each piece, where graded
    // spacing near the origin needs them.
    constexpr int sub = 4096;
    struct Mark {
        std::size_t piece;
        double u;
        double w;
    };
    std::vector<Mark> marks{{0, 0.0, 0.0}};
    double total = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& pc = chain[k];
        const double factor = std::min(mesh.density_cap, 1.0 + mesh.curvature_weight * pc.curvature());
        Vec2 prev = pc.at(0.0);
        double uprev = 0.0;
        for (int s = 1; s <= sub; ++s) {
            const double v = static_cast<double>(s) / sub;
            const double u = v * v * v;
            const Vec2 cur = pc.at(u);
            const Vec2 mid = pc.at(0.5 * (u + uprev));
            uprev = u;
            total += norm(cur - prev) * factor / mesh.spacing.at(norm(mid));
            marks.push_back({k, u, total});
            prev = cur;
        }
    }
    const auto segments = std::max<long>(1, std::lround(total));
    std::vector<Vec2> out{chain.front().at(0.0)};
    std::size_t j = 1;
    for (long q = 1; q < segments; ++q) {
        const double target = total * static_cast<double>(q) / static_cast<double>(segments);
        while (marks[j].w < target) {
            ++j;
        }
        const Mark& hi = marks[j];
        const Mark& lo = marks[j - 1];
        const double ulo = lo.piece == hi.piece ? lo.u : 0.0;
        const double f = (target - lo.w) / (hi.w - lo.w);
        out.push_back(chain[hi.piece].at(ulo + f * (hi.u - ulo)));
    }
    out.push_back(chain.back().at(1.0));
    return out;
}

struct Fillet {
    Vec2 t1, t2, center;
};

/// Fillet between line a→corner and line corner→b.
Fillet line_line_fillet(Vec2 a, Vec2 corner, Vec2 b, double radius, bool& left)
{
    const Vec2 din = (1.0 / norm(corner - a)) * (corner - a);
    const Vec2 dout = (1.0 / norm(b - corner)) * (b - corner);
    const double turn = std::atan2(cross(din, dout), dot(din, dout));
    const double t = radius * std::tan(0.5 * std::abs(turn));
    left = turn > 0.0;
    Fillet f;
    f.t1 = corner - t * din;
    f.t2 = corner + t * dout;
    f.center = f.t1 + (left ? radius : -radius) * perp(din);
    return f;
}

/// Fillet between the line from `a` along unit `d` (travelling outward) and the unit
/// circle, internally tangent to the circle, centre to the left of the line.
Fillet line_circle_fillet(Vec2 a, Vec2 d, double radius)
{
    const Vec2 q = a + radius * perp(d);
    const double qd = dot(q, d);
    const double disc = qd * qd - norm2(q) + (1.0 - radius) * (1.0 - radius);
    require(disc > 0.0, "smoothing radius too large for the outer corner");
    const double s = -qd + std::sqrt(disc);
    Fillet f;
    f.center = q + s * d;
    f.t1 = a + s * d;
    f.t2 = (1.0 / norm(f.center)) * f.center;
    return f;
}

/// Mirrors the lower half chain (origin to (1, 0)) into a closed 4-fold patch.
SimulationState assemble(const std::vector<Vec2>& lower)
{
    PatchContour c;
    c.nodes = lower;
    c.nodes.back() = {1.0, 0.0};
    c.nodes.front() = {0.0, 0.0};
    for (std::size_t i = lower.size() - 1; i-- > 1;) {
        c.nodes.push_back({lower[i].x, -lower[i].y});
    }
    c.pinned = {0};
    c.markers = {lower.size() - 1};
    SimulationState s;
    s.contours.push_back(std::move(c));
    s.symmetry = 4;
    s.validate();
    return s;
}

} // namespace

SimulationState build_spiral_patch(const SpiralPatchParams& p, const RemeshOptions& mesh)
{
    require(p.nu > 0.0 && p.nu < pi / 4.0, "nu must lie in (0, pi/4)");
    require(p.theta0 > 0.0 && p.theta0 < pi / 4.0 - p.nu, "theta0 must lie in (0, pi/4 - nu)");
    require(p.delta > 0.0 && p.delta < 1.0, "delta must lie in (0, 1)");
    require(p.smoothing > 0.0 && p.smoothing < p.delta / 4.0, "smoothing radius must lie in (0, delta/4)");

    const Vec2 a = from_polar(p.delta, -p.theta0);
    const Vec2 b = from_polar(1.0, -(pi / 4.0 - p.nu));
    bool left = false;
    const Fillet fa = line_line_fillet({0.0, 0.0}, a, b, p.smoothing, left);
    const Vec2 d = (1.0 / norm(b - a)) * (b - a);
    const Fillet fb = line_circle_fillet(a, d, p.smoothing);
    require(dot(fb.t1 - fa.t2, d) > 0.0, "smoothing radius too large: corner fillets overlap");
    require(norm(fa.t1) > 0.5 * p.delta, "smoothing radius too large: fillet enters B(0, delta/2)");

    std::vector<Piece> chain;
    chain.push_back(line({0.0, 0.0}, fa.t1));
    chain.push_back(arc(fa.center, p.smoothing, fa.t1, fa.t2, left));
    chain.push_back(line(fa.t2, fb.t1));
    chain.push_back(arc(fb.center, p.smoothing, fb.t1, fb.t2, true));
    chain.push_back(arc({0.0, 0.0}, 1.0, fb.t2, {1.0, 0.0}, true));
    return assemble(sample_chain(chain, mesh));
}

SimulationState build_sector_patch(double theta0, double smoothing, const RemeshOptions& mesh)
{
    require(theta0 > 0.0 && theta0 < pi / 4.0, "sector half-angle must lie in (0, pi/4)");
    require(smoothing > 0.0 && smoothing < 0.25, "smoothing radius must lie in (0, 1/4)");
    const Vec2 d = from_polar(1.0, -theta0);
    const Fillet f = line_circle_fillet({0.0, 0.0}, d, smoothing);
    require(f.t2.y < 0.0, "smoothing radius too large for the sector");
    std::vector<Piece> chain;
    chain.push_back(line({0.0, 0.0}, f.t1));
    chain.push_back(arc(f.center, smoothing, f.t1, f.t2, true));
    chain.push_back(arc({0.0, 0.0}, 1.0, f.t2, {1.0, 0.0}, true));
    return assemble(sample_chain(chain, mesh));
}

std::vector<std::vector<Vec2>> full_patch(const SimulationState& state)
{
    std::vector<std::vector<Vec2>> out;
    for (int k = 0; k < state.symmetry; ++k) {
        const double angle = 2.0 * pi * k / state.symmetry;
        for (const auto& c : state.contours) {
            std::vector<Vec2> img(c.nodes.size());
            std::transform(c.nodes.begin(), c.nodes.end(), img.begin(),
                           [&](Vec2 p) { return k == 0 ? p : rotate(p, angle); });
            out.push_back(std::move(img));
        }
    }
    return out;
}

namespace {

Vec2 fit_direction(const std::vector<Vec2>& pts)
{
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    Vec2 sum{};
    for (const auto& p : pts) {
        sxx += p.x * p.x;
        syy += p.y * p.y;
        sxy += p.x * p.y;
        sum += p;
    }
    const double alpha = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    Vec2 d{std::cos(alpha), std::sin(alpha)};
    if (dot(d, sum) < 0.0) {
        d = -d;
    }
    return d;
}

} // namespace

std::vector<CornerAngle> corner_angles(const PatchContour& contour, double fit_radius)
{
    require(!contour.pinned.empty(), "corner angles need a pinned node");
    require(fit_radius > 0.0, "fit radius must be positive");
    const std::size_t n = contour.nodes.size();
    std::vector<CornerAngle> out;
    for (auto c : contour.pinned) {
        std::vector<Vec2> fwd, bwd;
        for (std::size_t s = 1; s < n; ++s) {
            const std::size_t i = (c + s) % n;
            if (contour.is_pinned(i) || norm(contour.nodes[i]) > fit_radius) {
                break;
            }
            fwd.push_back(contour.nodes[i]);
        }
        for (std::size_t s = 1; s < n; ++s) {
            const std::size_t i = (c + n - s) % n;
            if (contour.is_pinned(i) || norm(contour.nodes[i]) > fit_radius) {
                break;
            }
            bwd.push_back(contour.nodes[i]);
        }
        if (fwd.size() < 3 || bwd.size() < 3) {
            throw InvalidInput("refine mesh: fewer than 3 nodes within the fit radius on a corner strand");
        }
        CornerAngle a;
        a.node = c;
        a.forward = fit_direction(fwd);
        a.backward = fit_direction(bwd);
        a.opening = std::atan2(cross(a.forward, a.backward), dot(a.forward, a.backward));
        if (a.opening <= 0.0) {
            a.opening += 2.0 * pi;
        }
        a.bisector = polar_angle(rotate(a.forward, 0.5 * a.opening));
        out.push_back(a);
    }
    return out;
}

Vec2 disk_velocity(Vec2 x)
{
    const double r2 = norm2(x);
    return r2 <= 1.0 ? 0.5 * perp(x) : (0.5 / r2) * perp(x);
}

std::vector<Vec2> deviation_lattice()
{
    constexpr int side = 64;
    std::vector<Vec2> pts;
    pts.reserve(side * side);
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            pts.push_back({-1.5 + 3.0 * i / (side - 1), -1.5 + 3.0 * j / (side - 1)});
        }
    }
    return pts;
}

bool self_intersects(const SimulationState& state)
{
    const auto images = full_patch(state);
    std::vector<PolygonEdges> polys;
    std::size_t k = 0;
    for (const auto& img : images) {
        polys.push_back({img, state.contours[k % state.contours.size()].pinned});
        ++k;
    }
    return has_self_intersection(polys);
}

PatchDiagnostics diagnostics(const SimulationState& state, double r0, bool with_velocity,
                             const VelocityOptions& options)
{
    state.validate();
    PatchDiagnostics d;
    double inside = 0.0;
    for (const auto& img : full_patch(state)) {
        d.area += polygon_area(img);
        d.perimeter += polygon_perimeter(img);
        inside += polygon_disk_intersection_area(img);
    }
    d.l1_disk = d.area + pi - 2.0 * inside;
    d.reliable = !self_intersects(state);
    if (with_velocity) {
        const auto lattice = deviation_lattice();
        const auto u = velocities_at(state, lattice, options);
        d.min_angular_velocity = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            d.max_velocity_deviation = std::max(d.max_velocity_deviation, norm(u[i] - disk_velocity(lattice[i])));
            const double r2 = norm2(lattice[i]);
            if (r2 >= r0 * r0 && r2 <= 1.0) {
                d.min_angular_velocity = std::min(d.min_angular_velocity, cross(lattice[i], u[i]) / r2);
            }
        }
    }
    return d;
}

namespace {

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 d = b - a;
    const double l2 = norm2(d);
    const double t = l2 > 0.0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * d));
}

} // namespace

double stability_sup(const SimulationState& state)
{
    const auto images = full_patch(state);
    bool pinned = false;
    for (const auto& c : state.contours) {
        pinned = pinned || !c.pinned.empty();
    }
    double turns = 0.0;
    double r_min = std::numeric_limits<double>::infinity();
    double r_max = 0.0;
    for (const auto& img : images) {
        const std::size_t n = img.size();
        for (std::size_t i = 0; i < n; ++i) {
            r_min = std::min(r_min, distance_to_segment({0.0, 0.0}, img[i], img[(i + 1) % n]));
            r_max = std::max(r_max, norm(img[i]));
        }
        if (!pinned) {
            std::vector<Vec2> loop(img);
            loop.push_back(img.front());
            turns += angle_sweep(loop);
        }
    }
    if (pinned || std::abs(turns) < 0.5) {
        r_min = 0.0; // origin not interior: B \ Ω reaches it
    }
    const double inner = r_min < 1.0 ? 1.0 - r_min * r_min : 0.0;
    const double outer = r_max > 1.0 ? r_max * r_max - 1.0 : 0.0;
    return std::max(inner, outer);
}

double orientation_angle(const PatchContour& contour)
{
    const auto m = polygon_moments(contour.nodes);
    return 0.5 * std::atan2(2.0 * m.xy, m.xx - m.yy);
}

} // namespace sectorflow
