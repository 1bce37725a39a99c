#include "sectorflow/integrator.hpp"

#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sectorflow {

std::string to_string(IntegrationStatus status)
{
    switch (status) {
    case IntegrationStatus::completed:
        return "completed";
    case IntegrationStatus::boundary_reached:
        return "boundary_reached";
    case IntegrationStatus::stopped:
        return "stopped";
    }
    return "unknown";
}

StateVector rk4_step(const OdeRhs& rhs, double t, std::span<const double> x, double dt)
{
    const std::size_t n = x.size();
    StateVector stage(n);

    const StateVector k1 = rhs(t, x);
    for (std::size_t i = 0; i < n; ++i) {
        stage[i] = x[i] + 0.5 * dt * k1[i];
    }
    const StateVector k2 = rhs(t + 0.5 * dt, stage);
    for (std::size_t i = 0; i < n; ++i) {
        stage[i] = x[i] + 0.5 * dt * k2[i];
    }
    const StateVector k3 = rhs(t + 0.5 * dt, stage);
    for (std::size_t i = 0; i < n; ++i) {
        stage[i] = x[i] + dt * k3[i];
    }
    const StateVector k4 = rhs(t + dt, stage);

    StateVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

namespace {

class Recorder {
public:
    Recorder(Trajectory& traj, const IntegrationHooks& hooks) : traj_(traj), hooks_(hooks) {}

    /// Records a sample; returns true when the stop predicate fired.
    bool record(double t, const StateVector& x)
    {
        traj_.times.push_back(t);
        traj_.states.push_back(x);
        if (hooks_.diagnostics) {
            traj_.diagnostics.push_back(hooks_.diagnostics(t, x));
        }
        return hooks_.stop && hooks_.stop(t, x);
    }

private:
    Trajectory& traj_;
    const IntegrationHooks& hooks_;
};

bool accept(const IntegrationHooks& hooks, StateVector& x)
{
    return !hooks.project || hooks.project(x);
}

Trajectory integrate_fixed(const OdeRhs& rhs, StateVector x, double t0, double t1,
                           const StepControl& control, const IntegrationHooks& hooks)
{
    Trajectory traj;
    Recorder recorder(traj, hooks);
    if (!accept(hooks, x)) {
        recorder.record(t0, x);
        traj.status = IntegrationStatus::boundary_reached;
        return traj;
    }
    if (recorder.record(t0, x)) {
        traj.status = IntegrationStatus::stopped;
        return traj;
    }

    const double span = t1 - t0;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / control.dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    std::size_t stride = 1;
    if (control.output_interval > 0.0) {
        stride = static_cast<std::size_t>(std::max(1.0, std::round(control.output_interval / h)));
    }

    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = t0 + static_cast<double>(k - 1) * h;
        x = rk4_step(rhs, t, x, h);
        ++traj.steps;
        const double t_next = (k == steps) ? t1 : t0 + static_cast<double>(k) * h;
        if (!accept(hooks, x)) {
            recorder.record(t_next, x);
            traj.status = IntegrationStatus::boundary_reached;
            return traj;
        }
        if (k % stride == 0 || k == steps) {
            if (recorder.record(t_next, x)) {
                traj.status = IntegrationStatus::stopped;
                return traj;
            }
        }
    }
    return traj;
}

Trajectory integrate_adaptive(const OdeRhs& rhs, StateVector x, double t0, double t1,
                              const StepControl& control, const IntegrationHooks& hooks)
{
    Trajectory traj;
    Recorder recorder(traj, hooks);
    if (!accept(hooks, x)) {
        recorder.record(t0, x);
        traj.status = IntegrationStatus::boundary_reached;
        return traj;
    }
    if (recorder.record(t0, x)) {
        traj.status = IntegrationStatus::stopped;
        return traj;
    }

    double h_current = control.dt;
    double t = t0;
    std::size_t next_output = 1;
    const double span = t1 - t0;
    auto output_time = [&](std::size_t k) {
        return control.output_interval > 0.0
                   ? std::min(t1, t0 + static_cast<double>(k) * control.output_interval)
                   : t1;
    };

    while (t1 - t > 1e-14 * std::max(1.0, std::abs(span))) {
        const double target = output_time(next_output);
        const bool clipped = h_current >= target - t;
        const double h = clipped ? target - t : h_current;

        const StateVector full = rk4_step(rhs, t, x, h);
        const StateVector half = rk4_step(rhs, t, x, 0.5 * h);
        StateVector two_half = rk4_step(rhs, t + 0.5 * h, half, 0.5 * h);
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err = std::max(err, std::abs(full[i] - two_half[i]));
        }
        if (err > control.tolerance && h > control.dt_min) {
            h_current = 0.5 * h;
            continue;
        }

        x = std::move(two_half);
        t = clipped ? target : t + h;
        ++traj.steps;
        if (!accept(hooks, x)) {
            recorder.record(t, x);
            traj.status = IntegrationStatus::boundary_reached;
            return traj;
        }
        if (err < control.tolerance / 32.0) {
            h_current = std::min(control.dt, 2.0 * h_current);
        }
        const bool at_output = clipped || control.output_interval <= 0.0;
        if (at_output) {
            if (clipped) {
                ++next_output;
            }
            if (recorder.record(t, x)) {
                traj.status = IntegrationStatus::stopped;
                return traj;
            }
        }
    }
    return traj;
}

} // namespace

Trajectory integrate(const OdeRhs& rhs, StateVector x0, double t0, double t1,
                     const StepControl& control, const IntegrationHooks& hooks)
{
    require(static_cast<bool>(rhs), "integrate needs a right-hand side");
    require(std::isfinite(t0) && std::isfinite(t1) && t1 >= t0, "integrate needs a finite span t1 >= t0");
    require(control.dt > 0.0, "step size must be positive");
    if (t1 == t0) {
        Trajectory traj;
        Recorder recorder(traj, hooks);
        if (!accept(hooks, x0)) {
            traj.status = IntegrationStatus::boundary_reached;
        }
        recorder.record(t0, x0);
        return traj;
    }
    return control.adaptive ? integrate_adaptive(rhs, std::move(x0), t0, t1, control, hooks)
                            : integrate_fixed(rhs, std::move(x0), t0, t1, control, hooks);
}

} // namespace sectorflow
