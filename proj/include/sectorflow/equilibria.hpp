#pragma once

#include "sectorflow/kernel.hpp"
#include "sectorflow/sectors.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>

namespace sectorflow {

/// Two weighted sectors per fundamental domain of a 4-fold patch, with a single
/// gap γ between them.
struct TwoSectorState {
    double zeta1 = 0.0;
    double zeta2 = 0.0;
    double gamma = 0.0;
    double a1 = 1.0;
    double a2 = 1.0;
};

/// Right-hand sides of the N = 2 stationarity system. Zero iff
/// 2γ + ζ₁ + ζ₂ = π/2 and A₁ sin ζ₁ cos(γ+ζ₁) = A₂ sin ζ₂ cos(γ+ζ₂) (for angles in (0, π/2)).
std::array<double, 3> stationarity_residual(const TwoSectorState& s);

/// Same, from a configuration. Requires m = 4, N = 2 and equal gaps (1e-12).
std::array<double, 3> stationarity_residual(const SectorConfiguration& config);

/// The m = 4 configuration with sector 1 starting at β₁ and first gap γ; the
/// trailing gap closes the domain and equals γ exactly when 2γ + ζ₁ + ζ₂ = π/2.
SectorConfiguration to_configuration(const TwoSectorState& s, double beta1 = 0.0);

/// One-parameter rotating family, 0 ≤ ξ ≤ π/8:
/// ζ₁ = π/8 + ξ, ζ₂ = π/8 − ξ, γ = π/8,
/// A₁ = sin(π/8 − ξ) cos(π/4 − ξ), A₂ = sin(π/8 + ξ) cos(π/4 + ξ).
TwoSectorState rotating_family(double xi);

/// ∫ h over the whole circle: m Σ A_i |I_i|.
double profile_mean(const AngularProfile& profile);

/// max − min of H over the discontinuities of h (adjacent pieces with equal
/// amplitude are merged first). Zero characterizes a rigidly rotating profile.
double rigid_rotation_residual(const AngularProfile& profile);

struct TwoIntervalSweep {
    double step = 0.0;
    std::size_t grid_points = 0;
    std::size_t genuine_configs = 0;
    /// Minimum residual over supports with a gap of at least one cell.
    double min_residual = 0.0;
    /// Grid indices (b1, a1, b2, a2) of the minimizer, lexicographically first on ties.
    std::array<std::size_t, 4> argmin{};
    /// Largest residual among touching pairs, which are really single intervals.
    double max_touching_residual = 0.0;

    double node(std::size_t i) const;
};

/// Enumerates [b1, a1] ∪ [b2, a2] ⊂ [−π/8, π/8] with endpoints on a grid of the
/// given step (which must divide π/4) and a1 < b2.
TwoIntervalSweep sweep_two_interval(double step);

/// CSV rows b1,a1,b2,a2,residual for every genuine configuration and a summary line.
void write_sweep_csv(std::ostream& out, double step);

/// Scans the stationary N = 2 solutions (A₁ = 1, A₂ from the balance condition,
/// signed strengths allowed) over a (ζ₁, ζ₂) grid and reports the smallest
/// relative |mean|, i.e. |A₁ζ₁ + A₂ζ₂| / (|A₁|ζ₁ + |A₂|ζ₂).
struct ZeroMeanScan {
    std::size_t samples = 0;
    double min_relative_mean = 0.0;
    TwoSectorState argmin{};
};
ZeroMeanScan scan_zero_mean(std::size_t resolution);

} // namespace sectorflow
