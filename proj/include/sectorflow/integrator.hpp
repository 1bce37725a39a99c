#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sectorflow {

using StateVector = std::vector<double>;

/// Right-hand side f(t, x) of an autonomous or time-dependent ODE.
using OdeRhs = std::function<StateVector(double, std::span<const double>)>;

enum class IntegrationStatus {
    completed,
    boundary_reached, ///< a projection hook rejected the state; trajectory is partial
    stopped,          ///< the stop predicate fired
};

std::string to_string(IntegrationStatus status);

struct StepControl {
    double dt = 1e-3;
    /// Step-halving error control instead of fixed steps.
    bool adaptive = false;
    double tolerance = 1e-10;
    double dt_min = 1e-9;
    /// Spacing of recorded samples; 0 records every step.
    double output_interval = 0.0;
};

struct IntegrationHooks {
    /// Called after every accepted step; may modify the state (clamping,
    /// re-projection) and returns false when the state left the admissible set.
    std::function<bool(StateVector&)> project;
    /// Extra scalars recorded next to each sample.
    std::function<std::vector<double>(double, std::span<const double>)> diagnostics;
    /// Checked at sample times; returning true ends the run early.
    std::function<bool(double, std::span<const double>)> stop;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> diagnostics;
    IntegrationStatus status = IntegrationStatus::completed;
    std::size_t steps = 0;

    const StateVector& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

/// One classical RK4 step.
StateVector rk4_step(const OdeRhs& rhs, double t, std::span<const double> x, double dt);

/// Integrates over [t0, t1] with classical RK4.
///
/// Fixed-step mode divides the span into equal steps no longer than `dt`. The
/// adaptive mode compares one full step against two half steps and halves or
/// doubles dt (never above the requested dt) to keep the difference below
/// `tolerance`. The initial state is always recorded.
Trajectory integrate(const OdeRhs& rhs, StateVector x0, double t0, double t1,
                     const StepControl& control = {}, const IntegrationHooks& hooks = {});

} // namespace sectorflow
