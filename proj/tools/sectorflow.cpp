#include "sectorflow/angle_dynamics.hpp"
#include "sectorflow/csv.hpp"
#include "sectorflow/cusp.hpp"
#include "sectorflow/equilibria.hpp"
#include "sectorflow/errors.hpp"
#include "sectorflow/experiments.hpp"
#include "sectorflow/oracles.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

using nlohmann::json;
using namespace sectorflow;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
constexpr const char* version = "0.1.0";

/// Bad configuration: reported with exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Typed access to one JSON object; finish() rejects keys nobody asked for.
class Fields {
public:
    Fields(const json& doc, std::string where) : doc_(doc), where_(std::move(where))
    {
        if (!doc_.is_object()) {
            throw ConfigError(label("") + "expected an object");
        }
    }

    double number(const std::string& key, double fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_number()) {
            throw ConfigError(label(key) + "expected a number");
        }
        return v->get<double>();
    }

    long integer(const std::string& key, long fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_number_integer()) {
            throw ConfigError(label(key) + "expected an integer");
        }
        return v->get<long>();
    }

    bool flag(const std::string& key, bool fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ConfigError(label(key) + "expected true or false");
        }
        return v->get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ConfigError(label(key) + "expected a string");
        }
        return v->get<std::string>();
    }

    /// Marks a key as consumed by someone else (e.g. a library parser).
    void take(const std::string& key) { used_.insert(key); }

    void finish() const
    {
        for (auto it = doc_.begin(); it != doc_.end(); ++it) {
            if (!used_.count(it.key())) {
                throw ConfigError(label(it.key()) + "unknown field");
            }
        }
    }

private:
    const json* find(const std::string& key)
    {
        used_.insert(key);
        auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &*it;
    }

    std::string label(const std::string& key) const
    {
        std::string l = where_.empty() ? key : (key.empty() ? where_ : where_ + "." + key);
        return "config field '" + (l.empty() ? std::string("<root>") : l) + "': ";
    }

    const json& doc_;
    std::string where_;
    std::set<std::string> used_;
};

struct Check {
    std::string name;
    double value;
    double threshold;
    std::string relation; // "<=", ">=", "<", ">", "=="
    bool pass;
};

Check check(std::string name, double value, const std::string& relation, double threshold)
{
    bool ok = false;
    if (relation == "<=") {
        ok = value <= threshold;
    } else if (relation == "<") {
        ok = value < threshold;
    } else if (relation == ">=") {
        ok = value >= threshold;
    } else if (relation == ">") {
        ok = value > threshold;
    } else {
        ok = value == threshold;
    }
    return {std::move(name), value, threshold, relation, ok && std::isfinite(value)};
}

struct Outcome {
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
    bool halted = false;
    std::string message;
};

struct Context {
    fs::path out;
    unsigned long long seed = 1;
    int snapshot_every = 0;
};

std::ofstream open_artifact(const Context& ctx, Outcome& o, const std::string& name)
{
    const fs::path path = ctx.out / name;
    fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    o.artifacts.push_back(name);
    return f;
}

// ---------------------------------------------------------------- angles

Outcome run_angles(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    f.take("m");
    f.take("sectors");
    f.take("constants");
    const double t_end = f.number("t_end", 100.0);
    StepControl control;
    control.dt = f.number("dt", 1e-3);
    control.adaptive = f.flag("adaptive", false);
    control.tolerance = f.number("tolerance", control.tolerance);
    control.output_interval = f.number("output_interval", 0.1);
    f.finish();
    if (!(t_end > 0.0) || !(control.dt > 0.0) || control.output_interval < 0.0) {
        throw ConfigError("config field 't_end'/'dt'/'output_interval': must be positive");
    }
    SectorConfiguration config = [&] {
        try {
            return configuration_from_json(cfg);
        } catch (const InvalidInput& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }();
    NormalizationConstants consts;
    try {
        consts = constants_from_json(cfg);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    Outcome o;
    const auto traj = integrate_angles(config, consts, t_end, control);
    {
        auto file = open_artifact(ctx, o, "angles.csv");
        write_angle_csv(file, traj, config);
    }
    const std::size_t n = config.size();
    double sum_drift = 0.0, closure = 0.0, min_angle = 0.0;
    double sum0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum0 += traj.states.front()[1 + i];
    }
    for (const auto& x : traj.states) {
        const auto c = unpack_state(x, config);
        double sum = 0.0, total = 0.0;
        for (double z : c.widths()) {
            sum += z;
            total += z;
            min_angle = std::min(min_angle, z);
        }
        for (double g : c.gaps()) {
            total += g;
            min_angle = std::min(min_angle, g);
        }
        sum_drift = std::max(sum_drift, std::abs(sum - sum0));
        closure = std::max(closure, std::abs(total - config.period()));
    }
    if (config.unit_strengths()) {
        o.checks.push_back(check("width_sum_drift", sum_drift, "<=", 1e-9));
    }
    o.checks.push_back(check("closure_error", closure, "<=", 1e-12));
    o.checks.push_back(check("min_angle", min_angle, ">=", -angle_negative_tolerance));
    if (traj.status != IntegrationStatus::completed) {
        o.halted = true;
        o.message = "integration ended early: " + to_string(traj.status);
    }
    return o;
}

// ---------------------------------------------------------------- equilibria

Outcome run_equilibria(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    const long family_points = f.integer("family_points", 100);
    const long divisor = f.integer("sweep_divisor", 256);
    const double eps = f.number("pair_epsilon", 0.05);
    const long zero_mean = f.integer("zero_mean_resolution", 64);
    f.finish();
    if (family_points < 2 || divisor < 4 || divisor % 4 != 0 || zero_mean < 2 || !(eps > 0.0 && eps < pi / 8.0)) {
        throw ConfigError("config: need family_points >= 2, sweep_divisor a multiple of 4, "
                          "zero_mean_resolution >= 2 and 0 < pair_epsilon < pi/8");
    }

    Outcome o;
    double worst = 0.0;
    {
        auto file = open_artifact(ctx, o, "rotating_family.csv");
        csv::header(file, {"xi", "zeta1", "zeta2", "gamma", "a1", "a2", "residual_norm", "mean"});
        for (long i = 0; i < family_points; ++i) {
            const double xi = std::min(pi / 8.0, (pi / 8.0) * static_cast<double>(i) / static_cast<double>(family_points - 1));
            const auto s = rotating_family(xi);
            const auto r = stationarity_residual(s);
            const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
            worst = std::max(worst, norm);
            const double mean = 4.0 * (s.a1 * s.zeta1 + s.a2 * s.zeta2);
            csv::row(file, {xi, s.zeta1, s.zeta2, s.gamma, s.a1, s.a2, norm, mean});
        }
    }
    o.checks.push_back(check("family_max_residual", worst, "<=", 1e-14));

    const double step = pi / static_cast<double>(divisor);
    const auto sweep = sweep_two_interval(step);
    {
        auto file = open_artifact(ctx, o, "sweep.csv");
        write_sweep_csv(file, step);
    }
    o.checks.push_back(check("sweep_min_residual", sweep.min_residual, ">", 0.0));
    o.checks.push_back(check("sweep_touching_max_residual", sweep.max_touching_residual, "<=", 1e-12));

    const AngularProfile straddling(4, {{-pi / 8.0 - eps, -pi / 8.0 + eps, 1.0}, {pi / 8.0 - eps, pi / 8.0 + eps, 1.0}});
    const double pair_residual = rigid_rotation_residual(straddling);
    o.checks.push_back(check("straddling_pair_residual", pair_residual, "<=", 1e-12));

    const auto zm = scan_zero_mean(static_cast<std::size_t>(zero_mean));
    {
        auto file = open_artifact(ctx, o, "zero_mean_scan.csv");
        csv::header(file, {"samples", "min_relative_mean", "zeta1", "zeta2", "gamma", "a1", "a2"});
        file << zm.samples << ',';
        csv::row(file, {zm.min_relative_mean, zm.argmin.zeta1, zm.argmin.zeta2, zm.argmin.gamma, zm.argmin.a1,
                        zm.argmin.a2});
    }
    return o;
}

// ---------------------------------------------------------------- cusp

Outcome run_cusp(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    const double z1 = f.number("zeta1", 0.05);
    const double z2 = f.number("zeta2", pi / 4.0 - 0.05);
    const double g = f.number("gamma", 0.05);
    const double t_end = f.number("t_end", 80.0);
    const double dt = f.number("dt", 1e-3);
    const double interval = f.number("output_interval", 0.01);
    const double expected = f.number("expected_rate", 0.5);
    const double tolerance = f.number("rate_tolerance", 0.05);
    f.finish();
    if (!(t_end > 0.0 && dt > 0.0 && interval >= 0.0)) {
        throw ConfigError("config field 't_end'/'dt'/'output_interval': must be positive");
    }
    for (double a : {z1, z2, g}) {
        if (!(a >= 0.0 && a <= pi / 2.0)) {
            throw ConfigError("config fields 'zeta1', 'zeta2', 'gamma': angles must lie in [0, pi/2]");
        }
    }

    Outcome o;
    const auto traj = integrate_reduced({z1, z2, g}, t_end, dt, interval);
    {
        auto file = open_artifact(ctx, o, "trajectory.csv");
        csv::header(file, {"t", "zeta1", "zeta2", "gamma"});
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const auto& x = traj.states[i];
            csv::row(file, {traj.times[i], x[0], x[1], x[2]});
        }
    }
    const auto cls = classify_asymptotic(traj);
    json result{{"classification", to_string(cls.kind)}, {"horizon_ok", cls.horizon_ok}};
    const bool cusp = cls.kind == Asymptotic::cusp_zeta1 || cls.kind == Asymptotic::cusp_zeta2;
    if (cusp) {
        const double rate = cusp_rate(traj);
        result["collapsing_angle"] = cls.kind == Asymptotic::cusp_zeta1 ? "zeta1" : "zeta2";
        result["rate"] = rate;
        o.checks.push_back(check("rate_relative_error", std::abs(rate - expected) / expected, "<=", tolerance));
    }
    o.checks.push_back(check("classified", cls.kind == Asymptotic::undecided ? 0.0 : 1.0, "==", 1.0));
    {
        auto file = open_artifact(ctx, o, "classification.json");
        file << result.dump(2) << '\n';
    }
    return o;
}

// ---------------------------------------------------------------- portrait

Outcome run_portrait(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    const long res = f.integer("resolution", 64);
    const double t_end = f.number("t_end", 200.0);
    const double dt = f.number("dt", 1e-2);
    f.finish();
    if (res < 4 || !(t_end >= min_classification_horizon) || !(dt > 0.0)) {
        throw ConfigError("config: need resolution >= 4, t_end >= 10 and dt > 0");
    }
    const auto n = static_cast<std::size_t>(res);

    Outcome o;
    const auto samples = phase_portrait(n);
    const auto cells = basin_map(n, t_end, dt);
    {
        auto file = open_artifact(ctx, o, "portrait.csv");
        write_portrait_csv(file, samples);
    }
    {
        auto file = open_artifact(ctx, o, "basins.csv");
        write_basin_csv(file, cells);
    }
    {
        auto file = open_artifact(ctx, o, "portrait.svg");
        write_portrait_svg(file, samples, cells, n);
    }
    // interior diagonal cells flow to the symmetric state; nothing else farther than one cell does
    double diagonal_misses = 0.0, stray = 0.0, cusp1 = 0.0, cusp2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto kind = cells[j * n + i].kind;
            const std::size_t d = i > j ? i - j : j - i;
            if (d == 0 && i > 0 && i + 1 < n && kind != Asymptotic::eightfold_symmetric) {
                diagonal_misses += 1.0;
            }
            if (d > 1 && kind == Asymptotic::eightfold_symmetric) {
                stray += 1.0;
            }
            cusp1 += kind == Asymptotic::cusp_zeta1;
            cusp2 += kind == Asymptotic::cusp_zeta2;
        }
    }
    o.checks.push_back(check("diagonal_cells_not_symmetric", diagonal_misses, "==", 0.0));
    o.checks.push_back(check("symmetric_cells_off_diagonal", stray, "==", 0.0));
    o.checks.push_back(check("cusp_zeta1_cells", cusp1, ">", 0.0));
    o.checks.push_back(check("cusp_zeta2_cells", cusp2, ">", 0.0));
    return o;
}

// ---------------------------------------------------------------- spiral / corner

Outcome run_spiral(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    const std::string patch = f.text("patch", "spiral");
    if (patch != "spiral" && patch != "sector") {
        throw ConfigError("config field 'patch': expected \"spiral\" or \"sector\"");
    }
    SpiralParams params = default_spiral_params();
    if (patch == "sector") {
        params.run = CornerRunParams{};
    }
    auto& p = params.patch;
    p.theta0 = f.number("theta0", p.theta0);
    p.delta = f.number("delta", p.delta);
    p.nu = f.number("nu", p.nu);
    p.smoothing = f.number("smoothing", p.smoothing);
    auto& r = params.run;
    r.t_end = f.number("t_end", r.t_end);
    r.dt = f.number("dt", r.dt);
    r.sample_interval = f.number("sample_interval", r.sample_interval);
    r.remesh_every = static_cast<int>(f.integer("remesh_every", r.remesh_every));
    r.intersection_every = static_cast<int>(f.integer("intersection_every", r.intersection_every));
    r.fit_radius = f.number("fit_radius", r.fit_radius);
    r.r0 = f.number("r0", r.r0);
    r.velocity_diagnostics = f.flag("velocity_diagnostics", r.velocity_diagnostics);
    const double slope_margin = f.number("slope_margin", 0.5);
    const double stab_slack = f.number("stab_slack", 1e-2);
    const double corner_tolerance = f.number("corner_tolerance", 0.02);
    f.finish();

    SimulationState initial;
    try {
        initial = patch == "spiral" ? build_spiral_patch(p, r.mesh) : build_sector_patch(p.theta0, p.smoothing, r.mesh);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    // cadence problems are configuration errors too
    if (!(r.dt > 0.0 && r.t_end >= 0.0 && r.sample_interval > 0.0) || r.remesh_every < 1 || r.intersection_every < 1) {
        throw ConfigError("config: need dt > 0, t_end >= 0, sample_interval > 0 and cadences >= 1");
    }
    for (double span : {r.t_end, r.sample_interval}) {
        const double k = span / r.dt;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::round(k))) {
            throw ConfigError("config fields 't_end'/'sample_interval': must be whole multiples of 'dt'");
        }
    }

    Outcome o;
    std::vector<SimulationState> snapshots;
    std::size_t sample_index = 0;
    auto hook = [&](const SimulationState& s, const CornerSample&) {
        if (ctx.snapshot_every > 0 && sample_index % static_cast<std::size_t>(ctx.snapshot_every) == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshots/contour_%05zu.csv", sample_index);
            auto file = open_artifact(ctx, o, name);
            write_contour_csv(file, s);
            snapshots.push_back(s);
        }
        ++sample_index;
    };
    const auto record = run_corner_patch(std::move(initial), r, hook);

    {
        auto file = open_artifact(ctx, o, "trajectory.csv");
        write_corner_csv(file, record);
    }
    {
        auto file = open_artifact(ctx, o, "spiral_checks.csv");
        write_spiral_checks_csv(file, record);
    }
    {
        auto file = open_artifact(ctx, o, "final_contour.csv");
        write_contour_csv(file, record.final_state);
    }
    {
        if (snapshots.empty()) {
            snapshots.push_back(record.final_state);
        }
        auto file = open_artifact(ctx, o, "overlay.svg");
        write_overlay_svg(file, snapshots);
    }

    if (record.status != RunStatus::completed) {
        o.halted = true;
        o.message = to_string(record.status) + ": " + record.message;
    }
    if (record.samples.size() < 2) {
        return o;
    }
    if (patch == "sector") {
        const auto c = summarize_corner(record);
        const AngularProfile sector(4, {{-p.theta0, p.theta0, 1.0}});
        const double speed = corner_angular_speed(sector, p.theta0);
        o.checks.push_back(check("opening_max_relative_drift", c.max_opening_dev, "<=", corner_tolerance));
        o.checks.push_back(
            check("bisector_rate_relative_error", std::abs(c.bisector.slope - speed) / speed, "<=", corner_tolerance));
    } else {
        const auto s = summarize_spiral(record);
        const double needed = slope_margin * 0.25 / (2.0 * pi);
        o.checks.push_back(check("winding_slope", s.winding.slope, ">=", needed));
        o.checks.push_back(check("winding_r_squared", s.winding.r_squared, ">", 0.9));
        o.checks.push_back(check("intersection_inequality", s.crossings_bound_holds ? 1.0 : 0.0, "==", 1.0));
        o.checks.push_back(check("stability_excess", s.stab_max_excess, "<=", stab_slack));
    }
    return o;
}

// ---------------------------------------------------------------- validate

Outcome run_validate(const json& cfg, const Context& ctx)
{
    Fields f(cfg, "");
    const long disk_nodes = f.integer("disk_nodes", 512);
    const double a = f.number("ellipse_a", 1.5);
    const double b = f.number("ellipse_b", 1.0);
    const long ellipse_nodes = f.integer("ellipse_nodes", 256);
    const double t_end = f.number("kirchhoff_t_end", 5.0);
    const double dt = f.number("kirchhoff_dt", 0.02);
    const long profiles = f.integer("kernel_profiles", 10);
    const long modes = f.integer("fourier_modes", 20000);
    const long points = f.integer("quadrature_points", 20);
    f.finish();
    if (disk_nodes < 8 || ellipse_nodes < 8 || profiles < 1 || modes < 1 || points < 1 || !(t_end > 0.0 && dt > 0.0)) {
        throw ConfigError("config: node counts >= 8, counts >= 1 and positive times required");
    }

    Outcome o;
    const auto disk = disk_boundary_check(static_cast<std::size_t>(disk_nodes));
    o.checks.push_back(check("disk_boundary_velocity_error", disk.max_relative_error, "<", 1e-3));

    const auto k = run_kirchhoff(a, b, static_cast<std::size_t>(ellipse_nodes), t_end, dt);
    {
        auto file = open_artifact(ctx, o, "kirchhoff.csv");
        csv::header(file, {"t", "orientation"});
        for (std::size_t i = 0; i < k.times.size(); ++i) {
            csv::row(file, {k.times[i], k.angles[i]});
        }
    }
    o.checks.push_back(check("kirchhoff_rate_relative_error", std::abs(k.rate - k.expected) / k.expected, "<", 0.01));
    o.checks.push_back(check("kirchhoff_area_drift", k.area_drift, "<", 1e-4));

    double kernel_err = 0.0;
    for (long i = 0; i < profiles; ++i) {
        const auto profile = random_profile(ctx.seed + static_cast<unsigned long long>(i), 4);
        for (int q = 0; q < 16; ++q) {
            const double theta = -pi / 4.0 + (pi / 2.0) * (q + 0.37) / 16.0;
            kernel_err = std::max(kernel_err, std::abs(kernel_h(profile, theta) -
                                                       fourier_kernel_h(profile, theta, static_cast<int>(modes))));
        }
    }
    o.checks.push_back(check("kernel_fourier_max_error", kernel_err, "<=", 1e-8));
    o.checks.push_back(
        check("disk_speed_error", std::abs(corner_angular_speed(AngularProfile::constant(4, 1.0), 0.3) - 0.5), "<=", 1e-12));
    const AngularProfile sector(4, {{-pi / 8.0, pi / 8.0, 1.0}});
    o.checks.push_back(check("sector_speed_error",
                             std::abs(corner_angular_speed(sector, pi / 8.0) - 0.25 * (1.0 - std::cos(pi / 2.0))),
                             "<=", 1e-12));

    // boundary integral against the ray-quadrature oracle at scattered interior/exterior points
    double quad_err = 0.0;
    std::vector<SimulationState> shapes(3);
    shapes[0].contours.push_back(disk_contour(200));
    shapes[1].contours.push_back(ellipse_contour(a, b, 200));
    shapes[2] = build_sector_patch(pi / 8.0, 0.01);
    for (const auto& s : shapes) {
        const auto polys = full_patch(s);
        for (long i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) + 0.5;
            const Vec2 x = from_polar(0.15 + 1.3 * std::fmod(t * 0.618033988749895, 1.0), 2.0 * pi * t / points + 0.1);
            quad_err = std::max(quad_err, norm(velocity_at(s, x) - area_quadrature_velocity(polys, x)));
        }
    }
    o.checks.push_back(check("velocity_vs_area_quadrature", quad_err, "<=", 1e-4));
    return o;
}

// ---------------------------------------------------------------- presets

struct Preset {
    std::string name, command, description, anchor;
    json config;
};

std::vector<Preset> presets()
{
    return {
        {"two-sector-angles", "angles",
         "corner-angle ODE, m = 4, two unit sectors, t in [0, 100]",
         "sum of sector widths is conserved",
         json{{"m", 4},
              {"sectors", json::array({{{"beta", 0.0}, {"zeta", pi / 8.0 + 0.1}},
                                       {{"beta", pi / 8.0 + 0.1 + pi / 8.0}, {"zeta", pi / 8.0 - 0.1}}})},
              {"t_end", 100.0},
              {"dt", 1e-3},
              {"output_interval", 0.1}}},
        {"rotating-solutions", "equilibria",
         "rotating two-sector family, two-interval rigidity sweep at step pi/256, straddling pair",
         "rotating family and single-interval rigidity",
         json{{"family_points", 100}, {"sweep_divisor", 256}, {"pair_epsilon", 0.05}}},
        {"cusp-collapse", "cusp",
         "reduced two-sector system from (0.05, pi/4 - 0.05, 0.05); the first sector cusps",
         "exponential cusp formation with linearized rate 1/2",
         json{{"zeta1", 0.05}, {"zeta2", pi / 4.0 - 0.05}, {"gamma", 0.05}, {"t_end", 80.0}}},
        {"basin-portrait", "portrait",
         "phase portrait and 64 x 64 basin map of the reduced system with zeta1 = pi/4 - zeta2",
         "three-basin phase portrait", json{{"resolution", 64}, {"t_end", 200.0}, {"dt", 1e-2}}},
        {"sector-corner", "spiral",
         "contour dynamics of the 4-fold pi/8 sector patch over t in [0, 5]",
         "corner angle persists and rotates at (1 - cos 4 theta0)/4",
         json{{"patch", "sector"}, {"t_end", 5.0}, {"dt", 0.02}, {"sample_interval", 0.2}}},
        {"spiral-winding", "spiral",
         "contour dynamics of the perturbed 4-fold sector patch, delta = nu = 0.05, T = 40",
         "linear-in-time winding of the boundary around the corner",
         json{{"patch", "spiral"}, {"t_end", 40.0}}},
        {"validate", "validate",
         "disk, Kirchhoff ellipse, kernel and area-quadrature oracles",
         "disk speed 1/2 and rotating ellipse rate ab/(a+b)^2", json::object()},
    };
}

const Preset* find_preset(const std::string& name)
{
    static const auto all = presets();
    for (const auto& p : all) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

json checks_json(const std::vector<Check>& checks)
{
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold},
                       {"pass", c.pass}});
    }
    return arr;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sectorflow: corner-angle dynamics and vortex-patch contour dynamics"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, preset_name, out_dir;
    int threads = 0;
    unsigned long long seed = 1;
    int snapshot_every = 0;
    app.add_option("--config", config_path, "JSON config file (applied on top of a preset)");
    app.add_option("--preset", preset_name, "named preset, see `presets`");
    app.add_option("--out", out_dir, "output directory (default $SECTORFLOW_OUT or ./sectorflow_out)");
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--snapshot-every", snapshot_every, "contour snapshot every k samples (spiral)")
        ->check(CLI::NonNegativeNumber);

    const std::vector<std::pair<std::string, std::string>> commands{
        {"angles", "integrate the corner-angle ODE"},
        {"equilibria", "rotating solutions and the two-interval sweep"},
        {"cusp", "reduced two-sector trajectory, classification and cusp rate"},
        {"portrait", "phase portrait and basin map"},
        {"spiral", "contour-dynamics run of a corner patch"},
        {"validate", "simulator and kernel validation against oracles"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help);
    }
    app.add_subcommand("presets", "list presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "presets") {
        for (const auto& p : presets()) {
            std::cout << p.name << "  [" << p.command << "]  " << p.description << "\n    reproduces: " << p.anchor
                      << '\n';
        }
        return 0;
    }

    if (out_dir.empty()) {
        const char* env = std::getenv("SECTORFLOW_OUT");
        out_dir = env && *env ? env : "sectorflow_out";
    }
    Context ctx;
    ctx.out = out_dir;
    ctx.seed = seed;
    ctx.snapshot_every = snapshot_every;
    if (threads > 0) {
        omp_set_num_threads(threads);
    }

    json manifest{{"command", command}, {"version", version}, {"preset", preset_name}, {"config_path", config_path},
                  {"threads", threads > 0 ? threads : omp_get_max_threads()}, {"seed", seed},
                  {"snapshot_every", snapshot_every}, {"output_dir", out_dir}};
    Outcome outcome;
    int code = 0;
    const auto start = std::chrono::steady_clock::now();
    try {
        fs::create_directories(ctx.out);
        json cfg = json::object();
        if (!preset_name.empty()) {
            const Preset* p = find_preset(preset_name);
            if (!p) {
                throw ConfigError("unknown preset '" + preset_name + "'");
            }
            if (p->command != command) {
                throw ConfigError("preset '" + preset_name + "' belongs to `" + p->command + "`, not `" + command + "`");
            }
            cfg = p->config;
        }
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot open config '" + config_path + "'");
            }
            json user;
            try {
                user = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError(config_path + ": " + e.what());
            }
            if (!user.is_object()) {
                throw ConfigError(config_path + ": top level must be an object");
            }
            cfg.merge_patch(user);
        }
        manifest["config"] = cfg;

        if (command == "angles") {
            outcome = run_angles(cfg, ctx);
        } else if (command == "equilibria") {
            outcome = run_equilibria(cfg, ctx);
        } else if (command == "cusp") {
            outcome = run_cusp(cfg, ctx);
        } else if (command == "portrait") {
            outcome = run_portrait(cfg, ctx);
        } else if (command == "spiral") {
            outcome = run_spiral(cfg, ctx);
        } else {
            outcome = run_validate(cfg, ctx);
        }
        bool all = true;
        for (const auto& c : outcome.checks) {
            all = all && c.pass;
        }
        code = outcome.halted ? 3 : (all ? 0 : 1);
    } catch (const ConfigError& e) {
        outcome.message = e.what();
        code = 2;
    } catch (const InvalidInput& e) {
        outcome.message = std::string("invalid input: ") + e.what();
        code = 2;
    } catch (const NumericalHalt& e) {
        outcome.message = std::string("numerical halt: ") + e.what();
        code = 3;
    } catch (const std::exception& e) {
        outcome.message = e.what();
        code = 3;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    manifest["wall_time_s"] = wall;
    manifest["checks"] = checks_json(outcome.checks);
    manifest["artifacts"] = outcome.artifacts;
    manifest["message"] = outcome.message;
    manifest["exit_code"] = code;
    manifest["status"] = code == 0 ? "pass" : code == 1 ? "checks_failed" : code == 2 ? "bad_config" : "halted";
    {
        std::error_code ec;
        fs::create_directories(ctx.out, ec);
        std::ofstream mf(ctx.out / "manifest.json");
        if (mf) {
            mf << manifest.dump(2) << '\n';
        } else {
            std::cerr << "cannot write manifest in " << ctx.out << '\n';
        }
    }

    for (const auto& c : outcome.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << csv::num(c.value) << " (" << c.relation << ' '
                  << csv::num(c.threshold) << ")\n";
    }
    if (!outcome.message.empty()) {
        std::cerr << outcome.message << '\n';
    }
    return code;
}
