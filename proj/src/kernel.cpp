#include "sectorflow/kernel.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sectorflow {

namespace {

constexpr double overlap_tolerance = 1e-13;

double reduce(double theta, double period)
{
    double r = std::fmod(theta, period);
    if (r < 0.0) {
        r += period;
    }
    return r;
}

/// Antiderivative of the Green's function, continued across periods so that
/// Φ(v + P) = Φ(v) + 1/4.
double green_antiderivative(int m, double v)
{
    const double period = 2.0 * std::numbers::pi / m;
    const double half_width = std::numbers::pi / m;
    const double k = std::round(v / period);
    const double w = v - k * period;
    const double a = 1.0 / (4.0 * std::sin(2.0 * half_width));
    const double aw = std::abs(w);
    const double f = 0.5 * a * (std::sin(2.0 * aw - 2.0 * half_width) + std::sin(2.0 * half_width));
    return 0.25 * k + std::copysign(f, w);
}

} // namespace

AngularProfile::AngularProfile(int m, std::vector<Piece> pieces) : m_(m), pieces_(std::move(pieces))
{
    require(m_ >= 3, "profile fold symmetry m must be at least 3");
    const double p = period();
    double measure = 0.0;
    for (const auto& piece : pieces_) {
        require(std::isfinite(piece.lo) && std::isfinite(piece.hi) && std::isfinite(piece.amplitude),
                "profile piece has a non-finite field");
        require(piece.hi > piece.lo, "profile piece must have hi > lo");
        require(piece.hi - piece.lo <= p + overlap_tolerance, "profile piece longer than one period");
        measure += piece.hi - piece.lo;
    }
    require(measure <= p + overlap_tolerance, "profile pieces cover more than one period");

    // Disjointness modulo the period: sort by reduced start and compare neighbours,
    // including the wrap from the last piece back to the first.
    std::vector<std::pair<double, double>> spans;
    spans.reserve(pieces_.size());
    for (const auto& piece : pieces_) {
        const double lo = reduce(piece.lo, p);
        spans.emplace_back(lo, lo + (piece.hi - piece.lo));
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
        require(spans[i].second <= spans[i + 1].first + overlap_tolerance, "profile pieces overlap");
    }
    if (spans.size() > 1) {
        require(spans.back().second <= spans.front().first + p + overlap_tolerance,
                "profile pieces overlap across the period boundary");
    }
}

AngularProfile AngularProfile::constant(int m, double amplitude)
{
    const double p = 2.0 * std::numbers::pi / m;
    return AngularProfile(m, {{-0.5 * p, 0.5 * p, amplitude}});
}

double AngularProfile::value(double theta) const
{
    const double p = period();
    double h = 0.0;
    for (const auto& piece : pieces_) {
        const double offset = reduce(theta - piece.lo, p);
        if (offset < piece.hi - piece.lo) {
            h += piece.amplitude;
        }
    }
    return h;
}

double kernel_green(int m, double phi)
{
    require(m >= 3, "kernel needs m >= 3");
    const double period = 2.0 * std::numbers::pi / m;
    const double w = phi - std::round(phi / period) * period;
    const double half_width = std::numbers::pi / m;
    return std::cos(2.0 * std::abs(w) - 2.0 * half_width) / (4.0 * std::sin(2.0 * half_width));
}

double kernel_interval(int m, double theta, double lo, double hi)
{
    return green_antiderivative(m, theta - lo) - green_antiderivative(m, theta - hi);
}

double kernel_h(const AngularProfile& profile, double theta)
{
    double h = 0.0;
    for (const auto& piece : profile.pieces()) {
        h += piece.amplitude * (green_antiderivative(profile.m(), theta - piece.lo) -
                                green_antiderivative(profile.m(), theta - piece.hi));
    }
    return h;
}

double corner_angular_speed(const AngularProfile& profile, double theta)
{
    return 2.0 * kernel_h(profile, theta);
}

} // namespace sectorflow
