#include "sectorflow/oracles.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace sectorflow {

namespace {
constexpr double pi = std::numbers::pi;
}

double fourier_kernel_h(const AngularProfile& profile, double theta, int modes)
{
    require(modes >= 1, "need at least one Fourier mode");
    const int m = profile.m();
    const double period = profile.period();
    double h = 0.0;
    for (const auto& p : profile.pieces()) {
        h += p.amplitude * (p.hi - p.lo);
    }
    double out = h / period / 4.0; // k = 0
    for (int k = 1; k <= modes; ++k) {
        const double w = static_cast<double>(k) * m;
        // c_k = (1/P) ∫ h e^{−iwθ} dθ; H adds 2 Re(c_k e^{iwθ}) / (4 − w²)
        std::complex<double> c{};
        for (const auto& p : profile.pieces()) {
            const std::complex<double> a(0.0, -w * p.lo), b(0.0, -w * p.hi);
            c += p.amplitude * (std::exp(a) - std::exp(b)) / std::complex<double>(0.0, w);
        }
        c /= period;
        out += 2.0 * (c * std::exp(std::complex<double>(0.0, w * theta))).real() / (4.0 - w * w);
    }
    return out;
}

AngularProfile random_profile(std::uint64_t seed, int m, int max_pieces)
{
    require(m >= 3 && max_pieces >= 1, "random profile needs m >= 3 and at least one piece");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, max_pieces);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double period = 2.0 * pi / m;
    const int n = count(rng);
    std::vector<double> cuts(static_cast<std::size_t>(2 * n));
    for (auto& c : cuts) {
        c = unit(rng) * period;
    }
    std::sort(cuts.begin(), cuts.end());
    const double shift = unit(rng) * period - period / 2.0;
    std::vector<AngularProfile::Piece> pieces;
    for (int i = 0; i < n; ++i) {
        const double lo = cuts[static_cast<std::size_t>(2 * i)] + shift;
        const double hi = cuts[static_cast<std::size_t>(2 * i + 1)] + shift;
        if (hi > lo) {
            pieces.push_back({lo, hi, -1.0 + 3.0 * unit(rng)});
        }
    }
    return AngularProfile(m, std::move(pieces));
}

namespace {

/// Total length inside one polygon of the ray x + r e, r > 0 (even-odd rule).
double ray_length(const std::vector<Vec2>& poly, Vec2 x, Vec2 e)
{
    std::vector<double> hits;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i] - x, b = poly[(i + 1) % n] - x;
        const Vec2 d = b - a;
        const double den = cross(e, d);
        if (den == 0.0) {
            continue;
        }
        // x + r e = a + s d
        const double s = cross(a, e) / den;
        const double r = cross(a, d) / den;
        if (s >= 0.0 && s < 1.0 && r > 0.0) {
            hits.push_back(r);
        }
    }
    std::sort(hits.begin(), hits.end());
    double len = 0.0;
    double start = 0.0;
    bool in = hits.size() % 2 == 1; // an odd number of crossings means x starts inside
    for (double r : hits) {
        if (in) {
            len += r - start;
        }
        start = r;
        in = !in;
    }
    return len;
}

constexpr std::array<double, 8> gl_nodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl_weights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

} // namespace

Vec2 area_quadrature_velocity(const std::vector<std::vector<Vec2>>& polygons, Vec2 x)
{
    std::vector<double> breaks;
    for (const auto& poly : polygons) {
        require(poly.size() >= 3, "oracle polygons need at least 3 nodes");
        for (const auto& p : poly) {
            const Vec2 d = p - x;
            if (d.x != 0.0 || d.y != 0.0) {
                breaks.push_back(std::atan2(d.y, d.x));
            }
        }
    }
    breaks.push_back(-pi);
    breaks.push_back(pi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    Vec2 acc{};
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double lo = breaks[b], hi = breaks[b + 1];
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        if (half <= 0.0) {
            continue;
        }
        for (std::size_t q = 0; q < gl_nodes.size(); ++q) {
            const double phi = mid + half * gl_nodes[q];
            const Vec2 e{std::cos(phi), std::sin(phi)};
            double len = 0.0;
            for (const auto& poly : polygons) {
                len += ray_length(poly, x, e);
            }
            acc += (half * gl_weights[q] * len) * Vec2{-e.y, e.x};
        }
    }
    return (-1.0 / (2.0 * pi)) * acc;
}

} // namespace sectorflow
