#include "sectorflow/experiments.hpp"

#include "sectorflow/csv.hpp"
#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

namespace sectorflow {

namespace {
constexpr double pi = std::numbers::pi;
} // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && x.size() >= 2, "line fit needs at least two matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, "line fit needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

std::vector<double> unwrap(const std::vector<double>& angles, double period)
{
    std::vector<double> out(angles);
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double d = angles[i] - angles[i - 1];
        out[i] = out[i - 1] + (d - period * std::round(d / period));
    }
    return out;
}

std::string to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::completed:
        return "completed";
    case RunStatus::self_intersection:
        return "self_intersection";
    case RunStatus::halted:
        return "halted";
    }
    return "halted";
}

namespace {

long steps_for(double span, double dt, const char* what)
{
    const double ratio = span / dt;
    const double rounded = std::round(ratio);
    require(std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded),
            std::string(what) + " must be a whole number of time steps");
    return static_cast<long>(rounded);
}

} // namespace

CornerRecord run_corner_patch(SimulationState state, const CornerRunParams& p, const SampleHook& on_sample)
{
    state.validate();
    require(state.contours.size() == 1, "corner runs need a single fundamental contour");
    require(p.dt > 0.0 && p.t_end >= 0.0 && p.sample_interval > 0.0, "run times must be positive");
    require(p.remesh_every >= 1 && p.intersection_every >= 1, "remesh and intersection cadences must be >= 1");
    {
        const auto& c = state.contours.front();
        require(!c.pinned.empty() && c.pinned.front() == 0, "corner runs need node 0 pinned at the origin");
        require(!c.markers.empty() && c.markers.front() > 0, "corner runs need a tracked marker node");
    }
    const long total = steps_for(p.t_end, p.dt, "horizon");
    const long stride = steps_for(p.sample_interval, p.dt, "sample interval");

    CornerRecord rec;
    rec.stab_sup = stability_sup(state);
    rec.stab_bound = 4.0 * pi * rec.stab_sup * diagnostics(state, p.r0, false).l1_disk;

    bool have_bisector = false;
    double last_raw_bisector = 0.0;
    double last_bisector = 0.0;
    auto sample = [&]() {
        const auto& c = state.contours.front();
        CornerSample s;
        s.t = state.time;
        std::optional<CornerAngle> corner;
        try {
            corner = corner_angles(c, p.fit_radius).front();
        } catch (const InvalidInput&) {
            // strand too coarse near the corner: leave the corner columns empty
        }
        if (!corner) {
            s.corner_angle = s.corner_bisector = std::numeric_limits<double>::quiet_NaN();
        } else if (!have_bisector) {
            s.corner_angle = corner->opening;
            s.corner_bisector = corner->bisector;
        } else {
            s.corner_angle = corner->opening;
            const double d = corner->bisector - last_raw_bisector;
            s.corner_bisector = last_bisector + (d - 2.0 * pi * std::round(d / (2.0 * pi)));
        }
        if (corner) {
            have_bisector = true;
            last_raw_bisector = corner->bisector;
            last_bisector = s.corner_bisector;
        }

        const std::size_t marker = c.markers.front();
        const std::span<const Vec2> strand(c.nodes.data(), marker + 1);
        s.winding = winding_number(strand);
        s.tracked_radius = norm(c.nodes[marker]);
        s.min_line_intersections = std::numeric_limits<std::size_t>::max();
        for (int k = 0; k < intersection_lines; ++k) {
            s.min_line_intersections =
                std::min(s.min_line_intersections, line_intersections(strand, pi * k / intersection_lines));
        }
        const auto d = diagnostics(state, p.r0, p.velocity_diagnostics, p.velocity);
        s.area = d.area;
        s.perimeter = d.perimeter;
        s.l1_disk = d.l1_disk;
        s.max_vel_dev = d.max_velocity_deviation;
        s.min_angular_velocity = d.min_angular_velocity;
        s.reliable = d.reliable;
        s.nodes = c.nodes.size();
        rec.samples.push_back(s);
        if (on_sample) {
            on_sample(state, s);
        }
    };

    try {
        sample();
        for (long k = 1; k <= total; ++k) {
            step(state, p.dt, p.velocity);
            state.time = static_cast<double>(k) * p.dt; // no drift from repeated addition
            if (k % p.remesh_every == 0) {
                state.contours.front() = remesh(state.contours.front(), p.mesh, state.symmetry);
            }
            if (k % p.intersection_every == 0 && self_intersects(state)) {
                rec.status = RunStatus::self_intersection;
                rec.message = "self-intersection detected at t = " + csv::num(state.time);
                sample();
                break;
            }
            if (k % stride == 0) {
                sample();
            }
        }
    } catch (const NumericalHalt& e) {
        rec.status = RunStatus::halted;
        rec.message = e.what();
    } catch (const InvalidInput& e) {
        rec.status = RunStatus::halted;
        rec.message = e.what();
    }
    rec.final_state = std::move(state);
    return rec;
}

SpiralParams default_spiral_params()
{
    SpiralParams p;
    p.run.t_end = 40.0;
    p.run.dt = 0.05;
    p.run.sample_interval = 0.5;
    p.run.remesh_every = 10;
    // The corner flow is scale invariant and squeezes structure into the origin
    // along one edge, so spacing must shrink with the radius there.
    p.run.mesh.spacing.grading = 0.25;
    p.run.mesh.spacing.min_spacing = 2e-4;
    p.run.mesh.corner_cutoff = 2e-4;
    // area drift comes from the curved arms, not from the step size
    p.run.mesh.curvature_weight = 0.3;
    // thin filaments of neighbouring images come closer than the base spacing
    p.run.mesh.proximity_weight = 1.0;
    p.run.mesh.proximity_min_spacing = 1.5e-4;
    return p;
}

CornerRecord run_spiral_experiment(const SpiralParams& params, const SampleHook& on_sample)
{
    return run_corner_patch(build_spiral_patch(params.patch, params.run.mesh), params.run, on_sample);
}

CornerSummary summarize_corner(const CornerRecord& record)
{
    CornerSummary c;
    std::vector<double> t, b;
    for (const auto& s : record.samples) {
        if (!std::isfinite(s.corner_angle)) {
            continue;
        }
        if (t.empty()) {
            c.opening0 = s.corner_angle;
        }
        c.max_opening_dev = std::max(c.max_opening_dev, std::abs(s.corner_angle - c.opening0) / c.opening0);
        t.push_back(s.t);
        b.push_back(s.corner_bisector);
    }
    c.measured = t.size();
    require(t.size() >= 2, "corner summary needs at least two measured samples");
    c.bisector = fit_line(t, b);
    return c;
}

SpiralSummary summarize_spiral(const CornerRecord& record)
{
    require(record.samples.size() >= 2, "spiral summary needs at least two samples");
    SpiralSummary s;
    std::vector<double> t, w;
    s.stab_max_excess = -std::numeric_limits<double>::infinity();
    s.min_tracked_radius = std::numeric_limits<double>::infinity();
    s.min_angular_velocity = std::numeric_limits<double>::infinity();
    for (const auto& x : record.samples) {
        t.push_back(x.t);
        w.push_back(x.winding);
        if (static_cast<double>(x.min_line_intersections) < std::floor(x.winding)) {
            s.crossings_bound_holds = false;
        }
        s.stab_max_excess = std::max(s.stab_max_excess, x.l1_disk * x.l1_disk - record.stab_bound);
        s.min_tracked_radius = std::min(s.min_tracked_radius, x.tracked_radius);
        s.min_angular_velocity = std::min(s.min_angular_velocity, x.min_angular_velocity);
        s.all_reliable = s.all_reliable && x.reliable;
    }
    s.winding = fit_line(t, w);
    return s;
}

void write_corner_csv(std::ostream& out, const CornerRecord& record)
{
    csv::header(out, {"t", "area", "perimeter", "corner_angle", "corner_bisector", "winding", "l1_disk",
                      "max_vel_dev"});
    for (const auto& s : record.samples) {
        csv::row(out, {s.t, s.area, s.perimeter, s.corner_angle, s.corner_bisector, s.winding, s.l1_disk,
                       s.max_vel_dev});
    }
}

void write_spiral_checks_csv(std::ostream& out, const CornerRecord& record)
{
    csv::header(out, {"t", "tracked_radius", "min_angular_velocity", "min_line_intersections",
                      "floor_winding", "stab_lhs", "stab_rhs", "nodes", "reliable"});
    for (const auto& s : record.samples) {
        out << csv::num(s.t) << ',' << csv::num(s.tracked_radius) << ',' << csv::num(s.min_angular_velocity)
            << ',' << s.min_line_intersections << ',' << csv::num(std::floor(s.winding)) << ','
            << csv::num(s.l1_disk * s.l1_disk) << ',' << csv::num(record.stab_bound) << ',' << s.nodes << ','
            << (s.reliable ? 1 : 0) << '\n';
    }
}

void write_contour_csv(std::ostream& out, const SimulationState& state)
{
    csv::header(out, {"contour", "index", "x", "y", "pinned", "marker"});
    for (std::size_t c = 0; c < state.contours.size(); ++c) {
        const auto& con = state.contours[c];
        for (std::size_t i = 0; i < con.nodes.size(); ++i) {
            const bool marker = std::binary_search(con.markers.begin(), con.markers.end(), i);
            out << c << ',' << i << ',' << csv::num(con.nodes[i].x) << ',' << csv::num(con.nodes[i].y) << ','
                << (con.is_pinned(i) ? 1 : 0) << ',' << (marker ? 1 : 0) << '\n';
        }
    }
}

void write_contour_svg(std::ostream& out, const SimulationState& state)
{
    constexpr double size = 600.0;
    constexpr double extent = 1.2;
    auto sx = [&](double x) { return csv::num(size * 0.5 * (1.0 + x / extent)); };
    auto sy = [&](double y) { return csv::num(size * 0.5 * (1.0 - y / extent)); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<circle cx=\"" << sx(0.0) << "\" cy=\"" << sy(0.0) << "\" r=\"" << csv::num(size * 0.5 / extent)
        << "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& img : full_patch(state)) {
        out << "<polygon fill=\"#4a7ab0\" fill-opacity=\"0.6\" stroke=\"#1d3557\" stroke-width=\"0.6\" points=\"";
        for (const auto& p : img) {
            out << sx(p.x) << ',' << sy(p.y) << ' ';
        }
        out << "\"/>\n";
    }
    out << "<text x=\"10\" y=\"20\">t = " << csv::num(state.time) << "</text>\n";
    out << "</svg>\n";
}

void write_overlay_svg(std::ostream& out, const std::vector<SimulationState>& states)
{
    constexpr double size = 600.0;
    constexpr double extent = 1.3;
    auto sx = [&](double x) { return csv::num(size * 0.5 * (1.0 + x / extent)); };
    auto sy = [&](double y) { return csv::num(size * 0.5 * (1.0 - y / extent)); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
        const double shade = states.size() > 1 ? static_cast<double>(k) / static_cast<double>(states.size() - 1) : 1.0;
        const int grey = static_cast<int>(std::lround(200.0 * (1.0 - shade)));
        for (const auto& img : full_patch(states[k])) {
            out << "<polygon fill=\"none\" stroke=\"rgb(" << grey << ',' << grey << ',' << grey
                << ")\" stroke-width=\"0.5\" points=\"";
            for (const auto& p : img) {
                out << sx(p.x) << ',' << sy(p.y) << ' ';
            }
            out << "\"/>\n";
        }
    }
    out << "</svg>\n";
}

KirchhoffResult run_kirchhoff(double a, double b, std::size_t nodes, double t_end, double dt)
{
    require(a > 0.0 && b > 0.0 && a != b, "Kirchhoff ellipse needs distinct positive semi-axes");
    SimulationState state;
    state.contours.push_back(ellipse_contour(a, b, nodes));
    const long total = steps_for(t_end, dt, "horizon");
    KirchhoffResult r;
    r.expected = a * b / ((a + b) * (a + b));
    const double area0 = state.contours.front().area();
    std::vector<double> raw{orientation_angle(state.contours.front())};
    r.times.push_back(0.0);
    for (long k = 1; k <= total; ++k) {
        step(state, dt);
        state.time = static_cast<double>(k) * dt;
        r.times.push_back(state.time);
        raw.push_back(orientation_angle(state.contours.front()));
        r.area_drift = std::max(r.area_drift, std::abs(state.contours.front().area() - area0) / area0);
    }
    r.angles = unwrap(raw, pi);
    r.rate = fit_line(r.times, r.angles).slope;
    return r;
}

DiskCheck disk_boundary_check(std::size_t nodes)
{
    SimulationState state;
    state.contours.push_back(disk_contour(nodes));
    const auto u = node_velocities(state).front();
    DiskCheck d;
    for (std::size_t i = 0; i < nodes; ++i) {
        const Vec2 x = state.contours.front().nodes[i];
        const Vec2 exact = 0.5 * perp(x);
        d.max_relative_error = std::max(d.max_relative_error, norm(u[i] - exact) / norm(exact));
    }
    return d;
}

} // namespace sectorflow
