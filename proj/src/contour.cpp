#include "sectorflow/contour.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <tuple>
#include <limits>
#include <numbers>
#include <string>

namespace sectorflow {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

bool finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }
} // namespace

bool PatchContour::is_pinned(std::size_t i) const
{
    return std::binary_search(pinned.begin(), pinned.end(), i);
}

void PatchContour::validate() const
{
    require(nodes.size() >= 3, "contour needs at least 3 nodes");
    require(std::isfinite(strength), "contour strength must be finite");
    for (const auto& p : nodes) {
        require(finite(p), "contour has a non-finite node");
    }
    require(std::is_sorted(pinned.begin(), pinned.end()) &&
                std::adjacent_find(pinned.begin(), pinned.end()) == pinned.end(),
            "pinned indices must be sorted and unique");
    require(std::is_sorted(markers.begin(), markers.end()) &&
                std::adjacent_find(markers.begin(), markers.end()) == markers.end(),
            "marker indices must be sorted and unique");
    for (auto i : pinned) {
        require(i < nodes.size(), "pinned index out of range");
        require(nodes[i] == Vec2{}, "pinned nodes must sit exactly at the origin");
    }
    for (auto i : markers) {
        require(i < nodes.size(), "marker index out of range");
    }
    if (closed) {
        require(area() > 0.0, "contour must be counterclockwise (positive signed area)");
    }
}

void SimulationState::validate() const
{
    require(symmetry >= 1, "symmetry must be at least 1");
    require(std::isfinite(time), "time must be finite");
    for (const auto& c : contours) {
        c.validate();
        require(c.closed, "simulated contours must be closed");
    }
}

namespace {

using cplx = std::complex<double>;

/// Contiguous range of segments [lo, hi) with a bounding disk and moments about its centre:
/// m[k] = ∫ ω^k dω / k and n[k] = ∫ conj(ω)^k dω / k (k >= 1), m[0] = ∫ dω, ω = w − centre.
struct TreeNode {
    std::size_t lo = 0, hi = 0;
    Vec2 centre;
    double radius = 0.0;
    int left = -1, right = -1;
    std::vector<cplx> m, n;
};

struct SegmentTable {
    std::vector<Vec2> nodes;
    std::vector<Vec2> dir; // unit direction of segment i → i+1
    std::vector<double> length;
    double strength = 1.0;
    std::vector<TreeNode> tree; // empty: plain sum
};

cplx as_complex(Vec2 v) { return {v.x, v.y}; }

int build_tree(SegmentTable& t, std::size_t lo, std::size_t hi, int order, std::size_t leaf)
{
    const std::size_t n = t.nodes.size();
    TreeNode node;
    node.lo = lo;
    node.hi = hi;
    Vec2 lo_corner = t.nodes[lo], hi_corner = t.nodes[lo];
    for (std::size_t i = lo; i <= hi; ++i) {
        const Vec2 p = t.nodes[i % n];
        lo_corner = {std::min(lo_corner.x, p.x), std::min(lo_corner.y, p.y)};
        hi_corner = {std::max(hi_corner.x, p.x), std::max(hi_corner.y, p.y)};
    }
    node.centre = 0.5 * (lo_corner + hi_corner);
    for (std::size_t i = lo; i <= hi; ++i) {
        node.radius = std::max(node.radius, norm(t.nodes[i % n] - node.centre));
    }
    node.m.assign(static_cast<std::size_t>(order) + 1, cplx{});
    node.n.assign(static_cast<std::size_t>(order) + 1, cplx{});
    for (std::size_t i = lo; i < hi; ++i) {
        if (t.length[i] == 0.0) {
            continue;
        }
        const cplx w1 = as_complex(t.nodes[i] - node.centre);
        const cplx w2 = as_complex(t.nodes[(i + 1) % n] - node.centre);
        const cplx d = w2 - w1;
        const cplx phase = d / std::conj(d);
        cplx p1 = w1, p2 = w2; // ω^(k+1) at the two ends
        node.m[0] += d;
        for (int k = 1; k <= order; ++k) {
            p1 *= w1;
            p2 *= w2;
            const double scale = 1.0 / (static_cast<double>(k) * (k + 1));
            node.m[static_cast<std::size_t>(k)] += scale * (p2 - p1);
            node.n[static_cast<std::size_t>(k)] += scale * phase * std::conj(p2 - p1);
        }
    }
    const int index = static_cast<int>(t.tree.size());
    t.tree.push_back(std::move(node));
    if (hi - lo > leaf) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const int l = build_tree(t, lo, mid, order, leaf);
        const int r = build_tree(t, mid, hi, order, leaf);
        t.tree[static_cast<std::size_t>(index)].left = l;
        t.tree[static_cast<std::size_t>(index)].right = r;
    }
    return index;
}

std::vector<SegmentTable> build_tables(const SimulationState& state, const VelocityOptions& options)
{
    require(options.tree_theta <= 0.0 || (options.tree_theta < 1.0 && options.tree_order >= 1 &&
                                          options.tree_leaf >= 1),
            "tree options need theta < 1, order >= 1 and leaf >= 1");
    std::vector<SegmentTable> tables;
    tables.reserve(state.contours.size());
    for (const auto& c : state.contours) {
        SegmentTable t;
        t.nodes = c.nodes;
        t.strength = c.strength;
        const std::size_t n = c.nodes.size();
        t.dir.resize(n);
        t.length.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 d = c.nodes[(i + 1) % n] - c.nodes[i];
            const double len = norm(d);
            t.length[i] = len;
            t.dir[i] = len > 0.0 ? (1.0 / len) * d : Vec2{};
        }
        if (options.tree_theta > 0.0 && n > 2 * options.tree_leaf) {
            build_tree(t, 0, n, options.tree_order, options.tree_leaf);
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

struct Workspace {
    std::vector<Vec2> rel;
    std::vector<double> r2;
    std::vector<double> logr;
    std::vector<int> stack;
};

/// Σ (∫ log|y − s| ds) · t̂ over segments [lo, hi) of one contour, target y.
Vec2 segment_range_integral(const SegmentTable& t, std::size_t lo, std::size_t hi, Vec2 y, double ratio2,
                            Workspace& ws)
{
    const std::size_t n = t.nodes.size();
    const std::size_t count = hi - lo + 1;
    ws.rel.resize(count);
    ws.r2.resize(count);
    ws.logr.resize(count);
    for (std::size_t a = 0; a < count; ++a) {
        const Vec2 d = t.nodes[(lo + a) % n] - y;
        const double r2 = norm2(d);
        ws.rel[a] = d;
        ws.r2[a] = r2;
        ws.logr[a] = r2 > 0.0 ? 0.5 * std::log(r2) : 0.0;
    }
    Vec2 acc{};
    for (std::size_t a = 0; a + 1 < count; ++a) {
        const std::size_t i = lo + a;
        const double len = t.length[i];
        if (len == 0.0) {
            continue;
        }
        const std::size_t b = a + 1;
        const Vec2 dir = t.dir[i];
        const double u1 = dot(dir, ws.rel[a]);
        const double u2 = dot(dir, ws.rel[b]);
        const double near = std::min(ws.r2[a], ws.r2[b]);
        double integral;
        if (near > ratio2 * len * len) {
            // trapezoid plus the first Euler-Maclaurin endpoint correction
            integral = 0.5 * len * (ws.logr[a] + ws.logr[b]) -
                       (len * len / 12.0) * (u2 / ws.r2[b] - u1 / ws.r2[a]);
        } else {
            const double c = std::abs(cross(ws.rel[a], ws.rel[b]));
            const double angle = std::atan2(c, dot(ws.rel[a], ws.rel[b]));
            integral = u2 * ws.logr[b] - u1 * ws.logr[a] - len + (c / len) * angle;
        }
        acc += integral * dir;
    }
    return acc;
}

/// ∫ log|z − w| dw over a tree node, from its moments (valid for |z − centre| > radius).
Vec2 multipole(const TreeNode& node, Vec2 y)
{
    const cplx zeta = as_complex(y - node.centre);
    const cplx inv = 1.0 / zeta;
    cplx power = inv;
    cplx sum{};
    for (std::size_t k = 1; k < node.m.size(); ++k) {
        sum += node.m[k] * power + node.n[k] * std::conj(power);
        power *= inv;
    }
    const cplx f = node.m[0] * std::log(std::abs(zeta)) - 0.5 * sum;
    return {f.real(), f.imag()};
}

/// Σ_segments (∫ log|y − s| ds) · t̂ for one contour, target y.
Vec2 contour_log_integral(const SegmentTable& t, Vec2 y, double ratio2, double theta, Workspace& ws)
{
    if (t.tree.empty()) {
        return segment_range_integral(t, 0, t.nodes.size(), y, ratio2, ws);
    }
    Vec2 acc{};
    ws.stack.assign(1, 0);
    while (!ws.stack.empty()) {
        const auto& node = t.tree[static_cast<std::size_t>(ws.stack.back())];
        ws.stack.pop_back();
        if (node.radius < theta * norm(y - node.centre)) {
            acc += multipole(node, y);
        } else if (node.left < 0) {
            acc += segment_range_integral(t, node.lo, node.hi, y, ratio2, ws);
        } else {
            // right first so the left half is summed first
            ws.stack.push_back(node.right);
            ws.stack.push_back(node.left);
        }
    }
    return acc;
}

struct ImageRotations {
    std::vector<double> cos, sin;
    explicit ImageRotations(int m)
    {
        for (int k = 0; k < m; ++k) {
            const double a = two_pi * k / m;
            cos.push_back(std::cos(a));
            sin.push_back(std::sin(a));
        }
    }
};

Vec2 evaluate(const std::vector<SegmentTable>& tables, const ImageRotations& rot, Vec2 x,
              double ratio2, double theta, Workspace& ws)
{
    Vec2 total{};
    for (std::size_t k = 0; k < rot.cos.size(); ++k) {
        const double c = rot.cos[k], s = rot.sin[k];
        // u(x) = Σ_k R_k u₀(R_k⁻¹ x)
        const Vec2 y{c * x.x + s * x.y, -s * x.x + c * x.y};
        Vec2 u{};
        for (const auto& t : tables) {
            if (t.strength != 0.0) {
                u += t.strength * contour_log_integral(t, y, ratio2, theta, ws);
            }
        }
        total += Vec2{c * u.x - s * u.y, s * u.x + c * u.y};
    }
    return (-1.0 / two_pi) * total;
}

double ratio_squared(const VelocityOptions& options)
{
    return options.far_field_ratio > 0.0 ? options.far_field_ratio * options.far_field_ratio
                                         : std::numeric_limits<double>::infinity();
}

} // namespace

Vec2 velocity_at(const SimulationState& state, Vec2 x, const VelocityOptions& options)
{
    require(finite(x), "velocity target must be finite");
    const auto tables = build_tables(state, options);
    Workspace ws;
    return evaluate(tables, ImageRotations(state.symmetry), x, ratio_squared(options), options.tree_theta, ws);
}

std::vector<Vec2> velocities_at(const SimulationState& state, std::span<const Vec2> points,
                                const VelocityOptions& options)
{
    const auto tables = build_tables(state, options);
    const ImageRotations rot(state.symmetry);
    const double ratio2 = ratio_squared(options);
    std::vector<Vec2> out(points.size());
#pragma omp parallel
    {
        Workspace ws;
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
            out[static_cast<std::size_t>(i)] =
                evaluate(tables, rot, points[static_cast<std::size_t>(i)], ratio2, options.tree_theta, ws);
        }
    }
    return out;
}

std::vector<std::vector<Vec2>> node_velocities(const SimulationState& state, const VelocityOptions& options)
{
    std::vector<Vec2> targets;
    for (const auto& c : state.contours) {
        targets.insert(targets.end(), c.nodes.begin(), c.nodes.end());
    }
    const auto flat = velocities_at(state, targets, options);
    std::vector<std::vector<Vec2>> out;
    std::size_t offset = 0;
    for (const auto& c : state.contours) {
        std::vector<Vec2> v(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                            flat.begin() + static_cast<std::ptrdiff_t>(offset + c.nodes.size()));
        for (auto i : c.pinned) {
            v[i] = Vec2{};
        }
        for (const auto& u : v) {
            if (!finite(u)) {
                throw NumericalHalt("non-finite node velocity at t = " + std::to_string(state.time));
            }
        }
        offset += c.nodes.size();
        out.push_back(std::move(v));
    }
    return out;
}

void step(SimulationState& state, double dt, const VelocityOptions& options)
{
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    const auto x0 = state.contours;
    auto stage = [&](const std::vector<std::vector<Vec2>>& k, double h) {
        SimulationState s = state;
        for (std::size_t c = 0; c < s.contours.size(); ++c) {
            auto& nodes = s.contours[c].nodes;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                nodes[i] = x0[c].nodes[i] + h * k[c][i];
            }
        }
        return s;
    };
    const auto k1 = node_velocities(state, options);
    const auto k2 = node_velocities(stage(k1, 0.5 * dt), options);
    const auto k3 = node_velocities(stage(k2, 0.5 * dt), options);
    const auto k4 = node_velocities(stage(k3, dt), options);
    for (std::size_t c = 0; c < state.contours.size(); ++c) {
        auto& contour = state.contours[c];
        for (std::size_t i = 0; i < contour.nodes.size(); ++i) {
            if (contour.is_pinned(i)) {
                continue;
            }
            contour.nodes[i] = x0[c].nodes[i] +
                               (dt / 6.0) * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
        }
    }
    state.time += dt;
}

SpacingProfile SpacingProfile::uniform(double h)
{
    SpacingProfile p;
    p.spacing_origin = h;
    p.spacing_outer = h;
    p.grading = 0.0;
    return p;
}

double SpacingProfile::at(double r) const
{
    const double frac = outer_radius > 0.0 ? std::min(1.0, r / outer_radius) : 1.0;
    double h = spacing_origin + (spacing_outer - spacing_origin) * frac;
    if (grading > 0.0) {
        h = std::min(h, std::max(min_spacing, grading * r));
    }
    return h;
}

namespace {

void check_remesh_options(const RemeshOptions& o)
{
    const auto& s = o.spacing;
    require(s.spacing_origin > 0.0 && s.spacing_outer > 0.0, "target spacing must be positive");
    require(s.grading <= 0.0 || s.min_spacing > 0.0, "graded spacing needs a positive minimum");
    require(o.curvature_weight >= 0.0, "curvature weight must be non-negative");
    require(o.density_cap >= 1.0, "density cap must be at least 1");
}

std::size_t prev_index(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }
std::size_t next_index(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }

double menger_curvature(Vec2 a, Vec2 b, Vec2 c)
{
    const double la = norm(b - a), lb = norm(c - b), lc = norm(c - a);
    const double denom = la * lb * lc;
    return denom > 0.0 ? 2.0 * std::abs(cross(b - a, c - a)) / denom : 0.0;
}

/// Derivative with respect to chord length of the parabola through three nodes, at the middle one.
Vec2 parabola_tangent(Vec2 p0, Vec2 p1, Vec2 p2)
{
    const double a = norm(p1 - p0), b = norm(p2 - p1);
    if (a == 0.0 || b == 0.0) {
        const Vec2 d = p2 - p0;
        const double l = norm(d);
        return l > 0.0 ? (1.0 / l) * d : Vec2{};
    }
    return (b / (a * (a + b))) * (p1 - p0) + (a / (b * (a + b))) * (p2 - p1);
}

} // namespace

namespace {

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b)
{
    const Vec2 d = b - a;
    const double l2 = norm2(d);
    const double t = l2 > 0.0 ? std::clamp(dot(x - a, d) / l2, 0.0, 1.0) : 0.0;
    return norm(x - (a + t * d));
}

double segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
    if (segments_intersect(a, b, c, d)) {
        return 0.0;
    }
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

/// Distance from each segment to the nearest piece of boundary that is not part of the
/// same local piece of curve: other images, or parts whose arc distance exceeds three
/// times their straight distance. With `to_segments` the distance is to whole segments,
/// otherwise from the segment midpoint to nodes. Candidates come from non-pinned nodes
/// within `reach` of the midpoint; larger gaps come back as infinity.
std::vector<double> proximity_gaps(const PatchContour& contour, int symmetry, double reach, bool to_segments)
{
    const auto& p = contour.nodes;
    const std::size_t n = p.size();
    std::vector<double> arc(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        arc[i + 1] = arc[i] + norm(p[next_index(i, n)] - p[i]);
    }
    const double total = arc[n];

    struct Entry {
        long long key;
        std::size_t image, index;
        Vec2 at;
    };
    auto cell = [&](double v) { return static_cast<long long>(std::floor(v / reach)); };
    auto key = [](long long cx, long long cy) { return cx * 4000037LL + cy; };
    std::vector<Entry> grid;
    grid.reserve(n * static_cast<std::size_t>(symmetry));
    for (int k = 0; k < symmetry; ++k) {
        const double a = 2.0 * std::numbers::pi * k / symmetry;
        for (std::size_t j = 0; j < n; ++j) {
            if (contour.is_pinned(j)) {
                continue;
            }
            const Vec2 q = rotate(p[j], a);
            grid.push_back({key(cell(q.x), cell(q.y)), static_cast<std::size_t>(k), j, q});
        }
    }
    std::sort(grid.begin(), grid.end(), [](const Entry& a, const Entry& b) {
        return a.key != b.key ? a.key < b.key : (a.image != b.image ? a.image < b.image : a.index < b.index);
    });

    std::vector<double> gap(n, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
    for (long li = 0; li < static_cast<long>(n); ++li) {
        const auto i = static_cast<std::size_t>(li);
        const Vec2 m = 0.5 * (p[i] + p[next_index(i, n)]);
        const double s = 0.5 * (arc[i] + arc[i + 1]);
        const long long cx = cell(m.x), cy = cell(m.y);
        double best = reach;
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                const long long kk = key(cx + dx, cy + dy);
                auto it = std::lower_bound(grid.begin(), grid.end(), kk,
                                           [](const Entry& e, long long v) { return e.key < v; });
                for (; it != grid.end() && it->key == kk; ++it) {
                    if (norm(it->at - m) >= reach) {
                        continue;
                    }
                    if (!to_segments) {
                        const double d = norm(it->at - m);
                        if (d >= best) {
                            continue;
                        }
                        if (it->image == 0) {
                            const double along = std::abs(arc[it->index] - s);
                            if (std::min(along, total - along) <= 3.0 * d) {
                                continue;
                            }
                        }
                        best = d;
                        continue;
                    }
                    const std::size_t q = it->index;
                    const double ang = 2.0 * std::numbers::pi * static_cast<double>(it->image) / symmetry;
                    const Vec2 before = rotate(p[prev_index(q, n)], ang), after = rotate(p[next_index(q, n)], ang);
                    const double s0 = arc[q] - 0.5 * norm(it->at - before);
                    const double s1 = arc[q] + 0.5 * norm(after - it->at);
                    for (const auto& [u, v, mid] : {std::tuple{before, it->at, s0}, std::tuple{it->at, after, s1}}) {
                        const double d = segment_distance(p[i], p[next_index(i, n)], u, v);
                        if (d >= best) {
                            continue;
                        }
                        if (it->image == 0) {
                            const double along = std::abs(std::fmod(mid + total, total) - s);
                            if (std::min(along, total - along) <= 3.0 * std::max(d, norm(0.5 * (u + v) - m))) {
                                continue;
                            }
                        }
                        best = d;
                    }
                }
            }
        }
        if (best < reach) {
            gap[i] = best;
        }
    }
    return gap;
}

} // namespace

namespace {

std::vector<double> density_with_gaps(const PatchContour& contour, const RemeshOptions& options, int symmetry,
                                      std::vector<double>* gaps_out);

} // namespace

std::vector<double> segment_density(const PatchContour& contour, const RemeshOptions& options, int symmetry)
{
    return density_with_gaps(contour, options, symmetry, nullptr);
}

namespace {

std::vector<double> density_with_gaps(const PatchContour& contour, const RemeshOptions& options, int symmetry,
                                      std::vector<double>* gaps_out)
{
    require(symmetry >= 1, "symmetry must be at least 1");
    const auto& p = contour.nodes;
    const std::size_t n = p.size();
    std::vector<double> kappa(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!contour.is_pinned(i)) {
            kappa[i] = menger_curvature(p[prev_index(i, n)], p[i], p[next_index(i, n)]);
        }
    }
    std::vector<double> gap;
    if (options.proximity_weight > 0.0) {
        // gaps wider than weight x the coarsest spacing cannot matter
        const double coarsest = std::max(options.spacing.spacing_origin, options.spacing.spacing_outer);
        gap = proximity_gaps(contour, symmetry, options.proximity_weight * coarsest, false);
        if (gaps_out) {
            *gaps_out = proximity_gaps(contour, symmetry, options.proximity_weight * coarsest, true);
        }
    }
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = next_index(i, n);
        const double k = 0.5 * (kappa[i] + kappa[j]);
        const double factor = std::min(options.density_cap, 1.0 + options.curvature_weight * k);
        rho[i] = factor / options.spacing.at(norm(0.5 * (p[i] + p[j])));
        if (!gap.empty()) {
            const double h = std::max(options.proximity_min_spacing, gap[i] / options.proximity_weight);
            rho[i] = std::max(rho[i], 1.0 / h);
        }
    }
    return rho;
}

} // namespace

namespace {

bool is_marker(const PatchContour& c, std::size_t i)
{
    return std::binary_search(c.markers.begin(), c.markers.end(), i);
}

PatchContour without(const PatchContour& contour, const std::vector<char>& drop)
{
    PatchContour out;
    out.closed = contour.closed;
    out.strength = contour.strength;
    for (std::size_t i = 0; i < contour.nodes.size(); ++i) {
        if (drop[i]) {
            continue;
        }
        if (contour.is_pinned(i)) {
            out.pinned.push_back(out.nodes.size());
        }
        if (is_marker(contour, i)) {
            out.markers.push_back(out.nodes.size());
        }
        out.nodes.push_back(contour.nodes[i]);
    }
    require(out.nodes.size() >= 3, "corner cutoff leaves fewer than 3 nodes");
    return out;
}

/// True when the straight segment from the origin to node `tip` crosses any edge of
/// any image that does not end at the origin or at `tip`.
bool corner_segment_blocked(const PatchContour& c, std::size_t tip, int symmetry)
{
    const std::size_t n = c.nodes.size();
    const Vec2 q = c.nodes[tip];
    for (int k = 0; k < symmetry; ++k) {
        const double a = 2.0 * std::numbers::pi * k / symmetry;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = next_index(i, n);
            if (c.is_pinned(i) || c.is_pinned(j)) {
                continue;
            }
            if (k == 0 && (i == tip || j == tip)) {
                continue;
            }
            if (segments_intersect(Vec2{}, q, rotate(c.nodes[i], a), rotate(c.nodes[j], a))) {
                return true;
            }
        }
    }
    return false;
}

/// Removes unmarked nodes within cutoff / 2 of the origin, then keeps removing the
/// neighbours of pinned nodes (up to 10 cutoffs out) while the straight corner
/// segments would cross the rest of the boundary or its images.
PatchContour trim_corner(const PatchContour& contour, double cutoff, int symmetry)
{
    std::vector<char> drop(contour.nodes.size(), 0);
    for (std::size_t i = 0; i < contour.nodes.size(); ++i) {
        drop[i] = !contour.is_pinned(i) && !is_marker(contour, i) && norm(contour.nodes[i]) < 0.5 * cutoff;
    }
    PatchContour out = without(contour, drop);
    for (bool changed = true; changed;) {
        changed = false;
        const std::size_t n = out.nodes.size();
        std::vector<char> more(n, 0);
        for (auto p : out.pinned) {
            for (std::size_t tip : {next_index(p, n), prev_index(p, n)}) {
                if (out.is_pinned(tip) || is_marker(out, tip) || norm(out.nodes[tip]) > 10.0 * cutoff) {
                    continue;
                }
                if (corner_segment_blocked(out, tip, symmetry)) {
                    more[tip] = 1;
                    changed = true;
                }
            }
        }
        if (changed) {
            out = without(out, more);
        }
    }
    return out;
}

PatchContour remesh_trimmed(const PatchContour& contour, const RemeshOptions& options, int symmetry,
                            double target_area);

} // namespace

PatchContour remesh(const PatchContour& contour, const RemeshOptions& options, int symmetry)
{
    require(contour.nodes.size() >= 3, "remesh needs at least 3 nodes");
    require(contour.closed, "remesh needs a closed contour");
    contour.validate();
    check_remesh_options(options);
    require(options.corner_cutoff >= 0.0, "corner cutoff must be non-negative");
    require(options.proximity_weight >= 0.0, "proximity weight must be non-negative");
    require(options.proximity_weight == 0.0 || options.proximity_min_spacing > 0.0,
            "proximity refinement needs a positive minimum spacing");
    if (options.corner_cutoff > 0.0 && !contour.pinned.empty()) {
        return remesh_trimmed(trim_corner(contour, options.corner_cutoff, symmetry), options, symmetry,
                              contour.area());
    }
    return remesh_trimmed(contour, options, symmetry, contour.area());
}

namespace {

PatchContour remesh_trimmed(const PatchContour& contour, const RemeshOptions& options, int symmetry,
                            double target_area)
{
    const auto& p = contour.nodes;
    const std::size_t n = p.size();
    std::vector<char> keep(n, 0);
    for (auto i : contour.pinned) {
        keep[i] = keep[prev_index(i, n)] = keep[next_index(i, n)] = 1;
    }
    for (auto i : contour.markers) {
        keep[i] = 1;
    }
    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            anchors.push_back(i);
        }
    }
    if (anchors.empty()) {
        anchors.push_back(0);
    }

    std::vector<double> gap;
    const auto rho = density_with_gaps(contour, options, symmetry, &gap);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = norm(p[next_index(i, n)] - p[i]) * rho[i];
    }

    auto tangent = [&](std::size_t i) {
        return parabola_tangent(p[prev_index(i, n)], p[i], p[next_index(i, n)]);
    };

    PatchContour out;
    out.closed = true;
    out.strength = contour.strength;
    std::vector<std::size_t> shiftable;

    for (std::size_t k = 0; k < anchors.size(); ++k) {
        const std::size_t a = anchors[k];
        const std::size_t b = anchors[(k + 1) % anchors.size()];
        std::size_t count = (b + n - a) % n;
        if (count == 0) {
            count = n;
        }
        if (contour.is_pinned(a)) {
            out.pinned.push_back(out.nodes.size());
        }
        if (std::binary_search(contour.markers.begin(), contour.markers.end(), a)) {
            out.markers.push_back(out.nodes.size());
        }
        out.nodes.push_back(p[a]);

        double total = 0.0;
        bool conforming = true;
        for (std::size_t s = 0; s < count; ++s) {
            const double w = weight[(a + s) % n];
            total += w;
            if (w > 1.6 || (count > 1 && w < 0.5)) {
                conforming = false;
            }
        }
        if (conforming) {
            for (std::size_t s = 1; s < count; ++s) {
                out.nodes.push_back(p[(a + s) % n]);
            }
            continue;
        }
        const auto segments = std::max<long>(1, std::lround(total));
        std::size_t seg = 0;
        double before = 0.0; // weight accumulated before segment `seg`
        for (long q = 1; q < segments; ++q) {
            const double target = total * static_cast<double>(q) / static_cast<double>(segments);
            while (seg + 1 < count && before + weight[(a + seg) % n] < target) {
                before += weight[(a + seg) % n];
                ++seg;
            }
            const std::size_t i = (a + seg) % n;
            const std::size_t j = next_index(i, n);
            const double w = weight[i];
            const double f = w > 0.0 ? std::clamp((target - before) / w, 0.0, 1.0) : 0.0;
            if (contour.is_pinned(i) || contour.is_pinned(j)) {
                // stay on the straight corner segment
                out.nodes.push_back(p[i] + f * (p[j] - p[i]));
                continue;
            }
            const double len = norm(p[j] - p[i]);
            const double f2 = f * f, f3 = f2 * f;
            const Vec2 m0 = tangent(i), m1 = tangent(j);
            Vec2 x = (2 * f3 - 3 * f2 + 1) * p[i] + (f3 - 2 * f2 + f) * len * m0 +
                     (-2 * f3 + 3 * f2) * p[j] + (f3 - f2) * len * m1;
            if (!gap.empty()) {
                // near another strand the cubic may bulge across it; fall back to the chord
                const Vec2 chord = p[i] + f * (p[j] - p[i]);
                if (norm(x - chord) > 0.25 * std::min(gap[i], gap[j])) {
                    x = chord;
                }
            }
            shiftable.push_back(out.nodes.size());
            out.nodes.push_back(x);
        }
    }

    // Restore the enclosed area by a normal shift of the resampled nodes, scaled by
    // the local chord so tiny features near the origin keep their shape.
    const std::size_t m = out.nodes.size();
    std::vector<double> scale(shiftable.size());
    for (std::size_t s = 0; s < shiftable.size(); ++s) {
        const std::size_t i = shiftable[s];
        scale[s] = 0.5 * norm(out.nodes[next_index(i, m)] - out.nodes[prev_index(i, m)]);
    }
    for (int iter = 0; iter < 3 && !shiftable.empty(); ++iter) {
        const double deficit = target_area - polygon_area(out.nodes);
        if (deficit == 0.0) {
            break;
        }
        std::vector<Vec2> normal(shiftable.size());
        double rate = 0.0;
        for (std::size_t s = 0; s < shiftable.size(); ++s) {
            const std::size_t i = shiftable[s];
            const Vec2 chord = out.nodes[next_index(i, m)] - out.nodes[prev_index(i, m)];
            const double l = norm(chord);
            normal[s] = l > 0.0 ? (scale[s] / l) * Vec2{chord.y, -chord.x} : Vec2{};
            rate += 0.5 * l * scale[s];
        }
        if (rate == 0.0) {
            break;
        }
        const double eps = deficit / rate;
        for (std::size_t s = 0; s < shiftable.size(); ++s) {
            out.nodes[shiftable[s]] += eps * normal[s];
        }
    }
    out.validate();
    return out;
}

} // namespace

} // namespace sectorflow
