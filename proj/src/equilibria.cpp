#include "sectorflow/equilibria.hpp"

#include "sectorflow/csv.hpp"
#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sectorflow {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double equal_gap_tolerance = 1e-12;
constexpr double touch_tolerance = 1e-13;
} // namespace

std::array<double, 3> stationarity_residual(const TwoSectorState& s)
{
    const double s1 = std::sin(s.zeta1);
    const double s2 = std::sin(s.zeta2);
    const double c = std::cos(2.0 * s.gamma + s.zeta1 + s.zeta2);
    return {-s.a2 * s1 * s2 * c, s.a1 * s1 * s2 * c,
            std::sin(s.gamma) * (s.a1 * s1 * std::cos(s.gamma + s.zeta1) -
                                 s.a2 * s2 * std::cos(s.gamma + s.zeta2))};
}

std::array<double, 3> stationarity_residual(const SectorConfiguration& config)
{
    require(config.m() == 4, "stationarity residual needs m = 4");
    require(config.size() == 2, "stationarity residual needs N = 2");
    const auto gaps = config.gaps();
    require(std::abs(gaps[0] - gaps[1]) <= equal_gap_tolerance,
            "stationarity residual needs equal gaps");
    return stationarity_residual(
        TwoSectorState{config[0].zeta, config[1].zeta, gaps[0], config[0].strength, config[1].strength});
}

SectorConfiguration to_configuration(const TwoSectorState& s, double beta1)
{
    return SectorConfiguration::from_angles(4, beta1, {s.zeta1, s.zeta2}, {s.gamma}, {s.a1, s.a2});
}

TwoSectorState rotating_family(double xi)
{
    require(xi >= 0.0 && xi <= pi / 8.0, "rotating family parameter must lie in [0, pi/8]");
    TwoSectorState s;
    s.zeta1 = pi / 8.0 + xi;
    s.zeta2 = pi / 8.0 - xi;
    s.gamma = pi / 8.0;
    s.a1 = std::sin(pi / 8.0 - xi) * std::cos(pi / 4.0 - xi);
    s.a2 = std::sin(pi / 8.0 + xi) * std::cos(pi / 4.0 + xi);
    return s;
}

double profile_mean(const AngularProfile& profile)
{
    double total = 0.0;
    for (const auto& piece : profile.pieces()) {
        total += piece.amplitude * (piece.hi - piece.lo);
    }
    return total * profile.m();
}

double rigid_rotation_residual(const AngularProfile& profile)
{
    require(!profile.empty(), "rigid rotation residual needs a nonempty profile");
    const double period = profile.period();

    struct Span {
        double lo, hi, amplitude;
    };
    std::vector<Span> spans;
    for (const auto& piece : profile.pieces()) {
        require(piece.amplitude > 0.0, "rigid rotation residual needs positive amplitudes");
        double lo = std::fmod(piece.lo, period);
        if (lo < 0.0) {
            lo += period;
        }
        spans.push_back({lo, lo + (piece.hi - piece.lo), piece.amplitude});
    }
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });

    std::vector<Span> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && std::abs(s.lo - merged.back().hi) <= touch_tolerance &&
            s.amplitude == merged.back().amplitude) {
            merged.back().hi = s.hi;
        } else {
            merged.push_back(s);
        }
    }
    if (merged.size() > 1 && std::abs(merged.back().hi - (merged.front().lo + period)) <= touch_tolerance &&
        merged.back().amplitude == merged.front().amplitude) {
        merged.front().lo = merged.back().lo - period;
        merged.pop_back();
    }

    std::vector<double> edges;
    for (const auto& s : merged) {
        if (s.hi - s.lo >= period - touch_tolerance) {
            continue; // covers the whole circle: no discontinuity
        }
        edges.push_back(s.lo);
        edges.push_back(s.hi);
    }
    if (edges.empty()) {
        return 0.0;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double e : edges) {
        const double h = kernel_h(profile, e);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return hi - lo;
}

double TwoIntervalSweep::node(std::size_t i) const
{
    return -pi / 8.0 + static_cast<double>(i) * step;
}

namespace {

std::size_t sweep_cells(double step)
{
    require(step > 0.0, "sweep step must be positive");
    const double cells = (pi / 4.0) / step;
    const double rounded = std::round(cells);
    require(rounded >= 3.0 && std::abs(cells - rounded) <= 1e-9 * rounded,
            "sweep step must divide pi/4 into at least 3 cells");
    return static_cast<std::size_t>(rounded);
}

/// max − min of H at the four endpoints of [b1, a1] ∪ [b2, a2] (unit amplitude, m = 4).
double two_interval_residual(double b1, double a1, double b2, double a2)
{
    const double ends[4] = {b1, a1, b2, a2};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double e : ends) {
        const double h = kernel_interval(4, e, b1, a1) + kernel_interval(4, e, b2, a2);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return hi - lo;
}

struct PartialSweep {
    std::size_t count = 0;
    double min_residual = std::numeric_limits<double>::infinity();
    std::array<std::size_t, 4> argmin{};
    double max_touching = 0.0;
};

} // namespace

TwoIntervalSweep sweep_two_interval(double step)
{
    const std::size_t cells = sweep_cells(step);
    const std::size_t points = cells + 1;
    TwoIntervalSweep result;
    result.step = (pi / 4.0) / static_cast<double>(cells);
    result.grid_points = points;

    std::vector<PartialSweep> partial(points);
    const auto node = [&](std::size_t i) { return result.node(i); };

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t s0 = 0; s0 < static_cast<std::ptrdiff_t>(points); ++s0) {
        const auto i0 = static_cast<std::size_t>(s0);
        PartialSweep& p = partial[i0];
        for (std::size_t i1 = i0 + 1; i1 < points; ++i1) {
            // touching pair: [b1, a1] ∪ [a1, a2] is one interval
            for (std::size_t i3 = i1 + 1; i3 < points; ++i3) {
                // the join is not a discontinuity, only the outer ends count
                const double b = node(i0), a = node(i3);
                const double r = std::abs(kernel_interval(4, b, b, a) - kernel_interval(4, a, b, a));
                p.max_touching = std::max(p.max_touching, r);
            }
            for (std::size_t i2 = i1 + 1; i2 < points; ++i2) {
                for (std::size_t i3 = i2 + 1; i3 < points; ++i3) {
                    const double r = two_interval_residual(node(i0), node(i1), node(i2), node(i3));
                    ++p.count;
                    if (r < p.min_residual) {
                        p.min_residual = r;
                        p.argmin = {i0, i1, i2, i3};
                    }
                }
            }
        }
    }

    // Reduce in index order so ties resolve to the lexicographically first tuple.
    result.min_residual = std::numeric_limits<double>::infinity();
    for (const auto& p : partial) {
        result.genuine_configs += p.count;
        result.max_touching_residual = std::max(result.max_touching_residual, p.max_touching);
        if (p.count > 0 && p.min_residual < result.min_residual) {
            result.min_residual = p.min_residual;
            result.argmin = p.argmin;
        }
    }
    return result;
}

void write_sweep_csv(std::ostream& out, double step)
{
    const auto summary = sweep_two_interval(step);
    csv::header(out, {"b1", "a1", "b2", "a2", "residual"});
    const std::size_t points = summary.grid_points;
    for (std::size_t i0 = 0; i0 < points; ++i0) {
        for (std::size_t i1 = i0 + 1; i1 < points; ++i1) {
            for (std::size_t i2 = i1 + 1; i2 < points; ++i2) {
                for (std::size_t i3 = i2 + 1; i3 < points; ++i3) {
                    const double b1 = summary.node(i0), a1 = summary.node(i1);
                    const double b2 = summary.node(i2), a2 = summary.node(i3);
                    csv::row(out, {b1, a1, b2, a2, two_interval_residual(b1, a1, b2, a2)});
                }
            }
        }
    }
    const auto& a = summary.argmin;
    out << "# min_residual=" << csv::num(summary.min_residual) << " argmin=" << csv::num(summary.node(a[0]))
        << ';' << csv::num(summary.node(a[1])) << ';' << csv::num(summary.node(a[2])) << ';'
        << csv::num(summary.node(a[3])) << '\n';
}

ZeroMeanScan scan_zero_mean(std::size_t resolution)
{
    require(resolution >= 2, "zero-mean scan needs resolution >= 2");
    ZeroMeanScan scan;
    scan.min_relative_mean = std::numeric_limits<double>::infinity();
    const double h = (pi / 2.0) / static_cast<double>(resolution + 1);
    for (std::size_t i = 1; i <= resolution; ++i) {
        for (std::size_t j = 1; i + j <= resolution; ++j) {
            TwoSectorState s;
            s.zeta1 = static_cast<double>(i) * h;
            s.zeta2 = static_cast<double>(j) * h;
            s.gamma = 0.5 * (pi / 2.0 - s.zeta1 - s.zeta2);
            s.a1 = 1.0;
            const double denom = std::sin(s.zeta2) * std::cos(s.gamma + s.zeta2);
            if (std::abs(denom) < 1e-14) {
                continue;
            }
            s.a2 = std::sin(s.zeta1) * std::cos(s.gamma + s.zeta1) / denom;
            const double rel = std::abs(s.a1 * s.zeta1 + s.a2 * s.zeta2) /
                               (std::abs(s.a1) * s.zeta1 + std::abs(s.a2) * s.zeta2);
            ++scan.samples;
            if (rel < scan.min_relative_mean) {
                scan.min_relative_mean = rel;
                scan.argmin = s;
            }
        }
    }
    return scan;
}

} // namespace sectorflow
