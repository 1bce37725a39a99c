#pragma once

#include "sectorflow/integrator.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace sectorflow {

using ReducedState = std::array<double, 3>; ///< (ζ₁, ζ₂, γ)

/// Reduced two-sector system (normalized time). Component 1 + component 2 is
/// exactly zero for every input.
ReducedState reduced_rhs(double zeta1, double zeta2, double gamma);

enum class Branch {
    symmetric_with_zeta2, ///< γ(0) = ζ₂(0): flows to π/8
    symmetric_with_zeta1, ///< γ(0) = ζ₁(0): flows to 0 or π/4
};

/// ±sin γ sin(π/4 − 2γ) cos(γ + π/4), + on the ζ₂ branch.
double one_dim_rhs(double gamma, Branch branch);

enum class Asymptotic { cusp_zeta1, cusp_zeta2, eightfold_symmetric, undecided };

std::string to_string(Asymptotic a);

struct Classification {
    Asymptotic kind = Asymptotic::undecided;
    /// False when the trajectory was shorter than the minimum horizon.
    bool horizon_ok = true;
};

inline constexpr double cusp_angle_floor = 1e-4;
inline constexpr double eightfold_tolerance = 1e-4;
inline constexpr double min_classification_horizon = 10.0;

/// Classifies the last state of a reduced trajectory (states are (ζ₁, ζ₂, γ)).
Classification classify_asymptotic(const Trajectory& traj);

/// Integrates the reduced system with RK4 (clamping cusped angles to zero).
/// With `stop_when_classified`, the run ends at the first sample after
/// `min_classification_horizon` whose state is no longer undecided.
Trajectory integrate_reduced(const ReducedState& initial, double t_end, double dt = 1e-3,
                             double output_interval = 0.0, bool stop_when_classified = false);

inline constexpr double cusp_fit_lower = 1e-8;
inline constexpr double cusp_fit_upper = 1e-2;

/// Exponential decay rate −d log(angle)/dt fitted by least squares over the samples
/// with angle in [1e-8, 1e-2] (the collapsing angle is picked by classification).
double cusp_rate(const Trajectory& traj);

/// Least-squares rate on explicit samples (exposed for testing).
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values);

struct PortraitSample {
    double zeta2, gamma, dzeta2, dgamma;
};

/// Samples (dζ₂/dt, dγ/dt) with ζ₁ = π/4 − ζ₂ on a resolution × resolution grid over [0, π/4]².
std::vector<PortraitSample> phase_portrait(std::size_t resolution);

struct BasinCell {
    double zeta2, gamma;
    Asymptotic kind;
};

/// Classifies the forward limit of every grid point of the portrait grid.
std::vector<BasinCell> basin_map(std::size_t resolution, double t_end = 200.0, double dt = 1e-2);

void write_portrait_csv(std::ostream& out, const std::vector<PortraitSample>& samples);
void write_basin_csv(std::ostream& out, const std::vector<BasinCell>& cells);
/// Quiver plot of the field with basin colouring underneath.
void write_portrait_svg(std::ostream& out, const std::vector<PortraitSample>& samples,
                        const std::vector<BasinCell>& cells, std::size_t resolution);

} // namespace sectorflow
