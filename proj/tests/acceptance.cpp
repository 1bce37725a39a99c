// Acceptance run: one PASS/FAIL line per criterion.
#include "sectorflow/angle_dynamics.hpp"
#include "sectorflow/csv.hpp"
#include "sectorflow/cusp.hpp"
#include "sectorflow/equilibria.hpp"
#include "sectorflow/experiments.hpp"
#include "sectorflow/integrator.hpp"
#include "sectorflow/kernel.hpp"
#include "sectorflow/oracles.hpp"
#include "sectorflow/patches.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace sectorflow;

namespace {

constexpr double pi = std::numbers::pi;

struct Result {
    bool pass = true;
    std::string detail;
    std::uint64_t digest = 0; // of everything the criterion wrote
    double seconds = 0.0;
};

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// adds a sub-check to the result
void need(Result& r, bool ok, const std::string& what)
{
    r.pass = r.pass && ok;
    if (!r.detail.empty()) {
        r.detail += "; ";
    }
    r.detail += what + (ok ? "" : " [x]");
}

Result kernel_criterion()
{
    Result r;
    std::ostringstream art;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto p = random_profile(seed, 4);
        for (int q = 0; q < 16; ++q) {
            const double theta = -pi / 4.0 + (pi / 2.0) * (q + 0.37) / 16.0;
            const double a = kernel_h(p, theta), b = fourier_kernel_h(p, theta, 20000);
            worst = std::max(worst, std::abs(a - b));
            csv::row(art, {static_cast<double>(seed), theta, a});
        }
    }
    const double disk = std::abs(2.0 * kernel_h(AngularProfile::constant(4, 1.0), 0.2) - 0.5);
    const double t0 = pi / 8.0;
    const AngularProfile sector(4, {{-t0, t0, 1.0}});
    const double edge = std::abs(2.0 * kernel_h(sector, t0) - 0.25 * (1.0 - std::cos(4.0 * t0)));
    need(r, worst <= 1e-8, "fourier " + fmt("%.2e", worst));
    need(r, disk == 0.0, "disk " + fmt("%.1e", disk));
    need(r, edge <= 1e-12, "sector " + fmt("%.1e", edge));
    r.digest = fnv1a(art.str());
    return r;
}

Result conservation_criterion()
{
    Result r;
    std::ostringstream art;
    double drift = 0.0;
    for (const ReducedState x0 : {ReducedState{0.3, 0.2, 0.1}, ReducedState{0.05, pi / 4.0 - 0.05, 0.05},
                                  ReducedState{0.6, 0.1, 0.4}}) {
        const auto t = integrate_reduced(x0, 100.0, 1e-3, 1.0);
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            const auto& x = t.states[i];
            drift = std::max(drift, std::abs(x[0] + x[1] - (x0[0] + x0[1])));
            csv::row(art, {t.times[i], x[0], x[1], x[2]});
        }
    }
    need(r, drift <= 1e-9, "max drift " + fmt("%.2e", drift));
    r.digest = fnv1a(art.str());
    return r;
}

Result family_criterion()
{
    Result r;
    std::ostringstream art;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double xi = std::min(pi / 8.0, (pi / 8.0) * i / 99.0);
        const auto res = stationarity_residual(rotating_family(xi));
        for (double v : res) {
            worst = std::max(worst, std::abs(v));
        }
        csv::row(art, {xi, res[0], res[1], res[2]});
    }
    need(r, worst <= 1e-14, "max residual " + fmt("%.2e", worst));
    r.digest = fnv1a(art.str());
    return r;
}

Result sweep_criterion()
{
    Result r;
    const double step = pi / 256.0;
    const auto s = sweep_two_interval(step);
    std::ostringstream art;
    write_sweep_csv(art, step);
    const double e = 0.05;
    const AngularProfile pair(4, {{-pi / 8.0 - e, -pi / 8.0 + e, 1.0}, {pi / 8.0 - e, pi / 8.0 + e, 1.0}});
    const double pair_res = rigid_rotation_residual(pair);
    need(r, s.min_residual > 0.0,
         "min over " + std::to_string(s.genuine_configs) + " supports " + fmt("%.3e", s.min_residual));
    need(r, pair_res <= 1e-12, "straddling pair " + fmt("%.1e", pair_res));
    r.digest = fnv1a(art.str());
    return r;
}

double run_one_dim(double g0, Branch b)
{
    const OdeRhs f = [b](double, std::span<const double> x) {
        return StateVector{one_dim_rhs(std::clamp(x[0], 0.0, pi / 4.0), b)};
    };
    StepControl ctl;
    ctl.dt = 1e-3;
    return integrate(f, {g0}, 0.0, 200.0, ctl).final_state()[0];
}

Result one_dim_criterion()
{
    Result r;
    std::ostringstream art;
    double plus = 0.0, minus = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double g0 = 0.01 + (pi / 4.0 - 0.02) * i / 49.0;
        const double a = run_one_dim(g0, Branch::symmetric_with_zeta2);
        const double b = run_one_dim(g0, Branch::symmetric_with_zeta1);
        plus = std::max(plus, std::abs(a - pi / 8.0));
        minus = std::max(minus, std::abs(b - (g0 < pi / 8.0 ? 0.0 : pi / 4.0)));
        csv::row(art, {g0, a, b});
    }
    need(r, plus < 1e-6, "to pi/8 " + fmt("%.1e", plus));
    need(r, minus < 1e-6, "to 0 or pi/4 " + fmt("%.1e", minus));
    r.digest = fnv1a(art.str());
    return r;
}

Result cusp_criterion()
{
    Result r;
    std::ostringstream art;
    double worst = 0.0;
    int cusps = 0;
    for (int i = 0; i < 10; ++i) {
        const double z2 = 0.1 + 0.06 * i;
        const double g = i % 2 == 0 ? z2 + 0.04 : z2 - 0.04 + 0.003 * i;
        const auto t = integrate_reduced({pi / 4.0 - z2, z2, g}, 120.0, 1e-3, 0.01);
        const auto c = classify_asymptotic(t);
        const bool cusp = c.kind == Asymptotic::cusp_zeta1 || c.kind == Asymptotic::cusp_zeta2;
        cusps += cusp;
        const double rate = cusp ? cusp_rate(t) : 0.0;
        worst = std::max(worst, std::abs(rate - 0.5) / 0.5);
        csv::row(art, {z2, g, rate});
    }
    need(r, cusps == 10, std::to_string(cusps) + "/10 cusp");
    need(r, worst <= 0.05, "rate error " + fmt("%.2e", worst));
    r.digest = fnv1a(art.str());
    return r;
}

Result portrait_criterion()
{
    Result r;
    const std::size_t n = 64;
    const auto samples = phase_portrait(n);
    const auto cells = basin_map(n);
    std::ostringstream art;
    write_portrait_csv(art, samples);
    write_basin_csv(art, cells);
    write_portrait_svg(art, samples, cells, n);
    int misses = 0, stray = 0, c1 = 0, c2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = cells[j * n + i].kind;
            const std::size_t d = i > j ? i - j : j - i;
            misses += d == 0 && i > 0 && i + 1 < n && k != Asymptotic::eightfold_symmetric;
            stray += d > 1 && k == Asymptotic::eightfold_symmetric;
            c1 += k == Asymptotic::cusp_zeta1;
            c2 += k == Asymptotic::cusp_zeta2;
        }
    }
    need(r, misses == 0, "diagonal misses " + std::to_string(misses));
    need(r, stray == 0, "symmetric off diagonal " + std::to_string(stray));
    need(r, c1 > 0 && c2 > 0, "cusp basins " + std::to_string(c1) + "/" + std::to_string(c2));
    r.digest = fnv1a(art.str());
    return r;
}

Result simulator_criterion()
{
    Result r;
    const auto disk = disk_boundary_check(512);
    const auto k = run_kirchhoff(1.5, 1.0, 256, 5.0, 0.02);
    const double rate_err = std::abs(k.rate - k.expected) / k.expected;
    std::ostringstream art;
    csv::row(art, {disk.max_relative_error, k.rate, k.area_drift});
    for (std::size_t i = 0; i < k.times.size(); ++i) {
        csv::row(art, {k.times[i], k.angles[i]});
    }
    need(r, disk.max_relative_error < 1e-3, "disk " + fmt("%.2e", disk.max_relative_error));
    need(r, rate_err < 0.01, "ellipse rate " + fmt("%.2e", rate_err));
    need(r, k.area_drift < 1e-4, "area drift " + fmt("%.2e", k.area_drift));
    r.digest = fnv1a(art.str());
    return r;
}

Result corner_criterion()
{
    Result r;
    CornerRunParams p; // t in [0, 5]
    const auto rec = run_corner_patch(build_sector_patch(pi / 8.0, 0.01), p);
    std::ostringstream art;
    write_corner_csv(art, rec);
    write_contour_csv(art, rec.final_state);
    need(r, rec.status == RunStatus::completed, to_string(rec.status));
    if (rec.samples.size() >= 2) {
        const auto c = summarize_corner(rec);
        const double rate_err = std::abs(c.bisector.slope - 0.25) / 0.25;
        need(r, c.max_opening_dev <= 0.02, "opening drift " + fmt("%.2e", c.max_opening_dev));
        need(r, rate_err <= 0.02, "bisector rate " + fmt("%.5f", c.bisector.slope));
    }
    r.digest = fnv1a(art.str());
    return r;
}

Result spiral_criterion()
{
    Result r;
    const auto rec = run_spiral_experiment(default_spiral_params());
    std::ostringstream art;
    write_corner_csv(art, rec);
    write_spiral_checks_csv(art, rec);
    write_contour_csv(art, rec.final_state);
    need(r, rec.status == RunStatus::completed,
         to_string(rec.status) + (rec.message.empty() ? "" : " (" + rec.message + ")"));
    if (rec.samples.size() >= 2) {
        const auto s = summarize_spiral(rec);
        const double needed = 0.5 * 0.25 / (2.0 * pi);
        need(r, s.winding.slope >= needed, "slope " + fmt("%.4f", s.winding.slope) + " >= " + fmt("%.4f", needed));
        need(r, s.winding.r_squared > 0.9, "R2 " + fmt("%.3f", s.winding.r_squared));
        need(r, s.crossings_bound_holds, "line crossings");
        need(r, s.stab_max_excess <= 1e-2, "stability excess " + fmt("%.2e", s.stab_max_excess));
    }
    r.digest = fnv1a(art.str());
    return r;
}

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Result()> run;
};

Result timed(const Criterion& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    Result r = c.run();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    need(r, r.seconds < c.limit_s, fmt("%.1fs", r.seconds));
    return r;
}

} // namespace

int main()
{
    omp_set_num_threads(1);
    const std::vector<Criterion> criteria{
        {1, "kernel", 1.0, kernel_criterion},
        {2, "conservation", 1.0, conservation_criterion},
        {3, "rotating family", 1.0, family_criterion},
        {4, "two-interval sweep", 30.0, sweep_criterion},
        {5, "one-dimensional convergence", 5.0, one_dim_criterion},
        {6, "cusp rate", 10.0, cusp_criterion},
        {7, "phase portrait", 60.0, portrait_criterion},
        {8, "simulator validation", 300.0, simulator_criterion},
        {9, "corner persistence", 300.0, corner_criterion},
        {10, "spiral winding", 1800.0, spiral_criterion},
    };

    bool all = true;
    std::vector<std::uint64_t> first;
    for (const auto& c : criteria) {
        const Result r = timed(c);
        first.push_back(r.digest);
        all = all && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << r.detail
                  << std::endl;
    }

    // second pass, same thread count, compare everything written
    std::string diff;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (criteria[i].run().digest != first[i]) {
            diff += (diff.empty() ? "" : ",") + std::to_string(criteria[i].id);
        }
    }
    const bool same = diff.empty();
    all = all && same;
    std::cout << (same ? "PASS" : "FAIL") << " criterion 11 (determinism): "
              << (same ? "all artifacts identical on rerun" : "differs in " + diff) << std::endl;
    return all ? 0 : 1;
}
