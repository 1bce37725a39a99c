#include "sectorflow/cusp.hpp"

#include "sectorflow/csv.hpp"
#include "sectorflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace sectorflow {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double clamp_threshold = 1e-12;
constexpr double negative_tolerance = 1e-9;
} // namespace

ReducedState reduced_rhs(double zeta1, double zeta2, double gamma)
{
    for (double a : {zeta1, zeta2, gamma}) {
        require(a >= 0.0 && a <= pi / 2.0, "reduced system angles must lie in [0, pi/2]");
    }
    const double coupling = std::sin(zeta1) * std::sin(zeta2) * std::cos(2.0 * gamma + zeta1 + zeta2);
    return {-coupling, coupling,
            std::sin(gamma) * std::sin(zeta1 - zeta2) * std::cos(gamma + zeta1 + zeta2)};
}

double one_dim_rhs(double gamma, Branch branch)
{
    require(gamma >= 0.0 && gamma <= pi / 4.0, "one-dimensional branch needs gamma in [0, pi/4]");
    const double f = std::sin(gamma) * std::sin(pi / 4.0 - 2.0 * gamma) * std::cos(gamma + pi / 4.0);
    return branch == Branch::symmetric_with_zeta2 ? f : -f;
}

std::string to_string(Asymptotic a)
{
    switch (a) {
    case Asymptotic::cusp_zeta1:
        return "cusp_zeta1";
    case Asymptotic::cusp_zeta2:
        return "cusp_zeta2";
    case Asymptotic::eightfold_symmetric:
        return "eightfold_symmetric";
    case Asymptotic::undecided:
        return "undecided";
    }
    return "undecided";
}

namespace {

Asymptotic classify_state(std::span<const double> x)
{
    if (x[0] < cusp_angle_floor) {
        return Asymptotic::cusp_zeta1;
    }
    if (x[1] < cusp_angle_floor) {
        return Asymptotic::cusp_zeta2;
    }
    const double dev = std::max({std::abs(x[0] - pi / 8.0), std::abs(x[1] - pi / 8.0),
                                 std::abs(x[2] - pi / 8.0)});
    if (dev < eightfold_tolerance) {
        return Asymptotic::eightfold_symmetric;
    }
    return Asymptotic::undecided;
}

void clamp_reduced(std::span<double> x)
{
    for (double& a : x) {
        if (a < clamp_threshold && a > -negative_tolerance) {
            a = 0.0;
        }
    }
}

} // namespace

Classification classify_asymptotic(const Trajectory& traj)
{
    require(!traj.states.empty() && traj.states.back().size() == 3,
            "classification needs a reduced (zeta1, zeta2, gamma) trajectory");
    if (traj.final_time() - traj.times.front() < min_classification_horizon) {
        return {Asymptotic::undecided, false};
    }
    return {classify_state(traj.final_state()), true};
}

Trajectory integrate_reduced(const ReducedState& initial, double t_end, double dt,
                             double output_interval, bool stop_when_classified)
{
    const OdeRhs rhs = [](double, std::span<const double> x) {
        double y[3] = {x[0], x[1], x[2]};
        clamp_reduced(y);
        const auto r = reduced_rhs(y[0], y[1], y[2]);
        return StateVector(r.begin(), r.end());
    };
    IntegrationHooks hooks;
    hooks.project = [](StateVector& x) {
        for (double a : x) {
            if (!std::isfinite(a) || a < -negative_tolerance || a > pi / 2.0) {
                return false;
            }
        }
        clamp_reduced(x);
        return true;
    };
    if (stop_when_classified) {
        hooks.stop = [](double t, std::span<const double> x) {
            return t >= min_classification_horizon && classify_state(x) != Asymptotic::undecided;
        };
    }
    StepControl control;
    control.dt = dt;
    control.output_interval = output_interval;
    return integrate(rhs, StateVector(initial.begin(), initial.end()), 0.0, t_end, control, hooks);
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values)
{
    require(times.size() == values.size(), "fit needs matching samples");
    require(times.size() >= 2, "insufficient decay: fewer than two samples in the fit window");
    const double n = static_cast<double>(times.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        require(values[i] > 0.0, "decay fit needs positive values");
        st += times[i];
        sy += std::log(values[i]);
    }
    const double tm = st / n, ym = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dt = times[i] - tm;
        num += dt * (std::log(values[i]) - ym);
        den += dt * dt;
    }
    require(den > 0.0, "insufficient decay: fit window has zero time extent");
    return -num / den;
}

double cusp_rate(const Trajectory& traj)
{
    const auto cls = classify_asymptotic(traj);
    require(cls.kind == Asymptotic::cusp_zeta1 || cls.kind == Asymptotic::cusp_zeta2,
            "cusp rate needs a trajectory classified as a cusp");
    const std::size_t index = cls.kind == Asymptotic::cusp_zeta1 ? 0 : 1;
    std::vector<double> t, v;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double a = traj.states[k][index];
        if (a >= cusp_fit_lower && a <= cusp_fit_upper) {
            t.push_back(traj.times[k]);
            v.push_back(a);
        }
    }
    if (t.size() < 2) {
        throw InvalidInput("insufficient decay: collapsing angle never enters [1e-8, 1e-2]");
    }
    return fit_decay_rate(t, v);
}

std::vector<PortraitSample> phase_portrait(std::size_t resolution)
{
    require(resolution >= 2, "portrait resolution must be at least 2");
    std::vector<PortraitSample> out;
    out.reserve(resolution * resolution);
    const double h = (pi / 4.0) / static_cast<double>(resolution - 1);
    for (std::size_t j = 0; j < resolution; ++j) {
        for (std::size_t i = 0; i < resolution; ++i) {
            const double zeta2 = static_cast<double>(i) * h;
            const double gamma = static_cast<double>(j) * h;
            const auto r = reduced_rhs(pi / 4.0 - zeta2, zeta2, gamma);
            out.push_back({zeta2, gamma, r[1], r[2]});
        }
    }
    return out;
}

std::vector<BasinCell> basin_map(std::size_t resolution, double t_end, double dt)
{
    require(resolution >= 2, "basin resolution must be at least 2");
    const double h = (pi / 4.0) / static_cast<double>(resolution - 1);
    std::vector<BasinCell> cells(resolution * resolution);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(cells.size()); ++k) {
        const auto i = static_cast<std::size_t>(k) % resolution;
        const auto j = static_cast<std::size_t>(k) / resolution;
        const double zeta2 = static_cast<double>(i) * h;
        const double gamma = static_cast<double>(j) * h;
        const auto traj = integrate_reduced({pi / 4.0 - zeta2, zeta2, gamma}, t_end, dt, 0.0, true);
        cells[static_cast<std::size_t>(k)] = {zeta2, gamma, classify_asymptotic(traj).kind};
    }
    return cells;
}

void write_portrait_csv(std::ostream& out, const std::vector<PortraitSample>& samples)
{
    csv::header(out, {"zeta2", "gamma", "dzeta2_dt", "dgamma_dt"});
    for (const auto& s : samples) {
        csv::row(out, {s.zeta2, s.gamma, s.dzeta2, s.dgamma});
    }
}

void write_basin_csv(std::ostream& out, const std::vector<BasinCell>& cells)
{
    csv::header(out, {"zeta2", "gamma", "classification"});
    for (const auto& c : cells) {
        out << csv::num(c.zeta2) << ',' << csv::num(c.gamma) << ',' << to_string(c.kind) << '\n';
    }
}

void write_portrait_svg(std::ostream& out, const std::vector<PortraitSample>& samples,
                        const std::vector<BasinCell>& cells, std::size_t resolution)
{
    constexpr double size = 640.0;
    constexpr double margin = 40.0;
    const double scale = size / (pi / 4.0);
    const double cell = size / static_cast<double>(resolution);
    auto px = [&](double zeta2) { return margin + zeta2 * scale; };
    auto py = [&](double gamma) { return margin + size - gamma * scale; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
        << size + 2 * margin << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& c : cells) {
        const char* colour = "#dddddd";
        switch (c.kind) {
        case Asymptotic::cusp_zeta1:
            colour = "#9ecae1";
            break;
        case Asymptotic::cusp_zeta2:
            colour = "#fdae6b";
            break;
        case Asymptotic::eightfold_symmetric:
            colour = "#74c476";
            break;
        case Asymptotic::undecided:
            break;
        }
        out << "<rect x=\"" << csv::num(px(c.zeta2) - 0.5 * cell) << "\" y=\""
            << csv::num(py(c.gamma) - 0.5 * cell) << "\" width=\"" << csv::num(cell) << "\" height=\""
            << csv::num(cell) << "\" fill=\"" << colour << "\"/>\n";
    }
    double vmax = 0.0;
    for (const auto& s : samples) {
        vmax = std::max(vmax, std::hypot(s.dzeta2, s.dgamma));
    }
    const std::size_t stride = std::max<std::size_t>(1, resolution / 16);
    for (std::size_t j = 0; j < resolution; j += stride) {
        for (std::size_t i = 0; i < resolution; i += stride) {
            const auto& s = samples[j * resolution + i];
            const double len = vmax > 0.0 ? 0.9 * cell * static_cast<double>(stride) / vmax : 0.0;
            const double x0 = px(s.zeta2), y0 = py(s.gamma);
            const double x1 = x0 + s.dzeta2 * len, y1 = y0 - s.dgamma * len;
            out << "<line x1=\"" << csv::num(x0) << "\" y1=\"" << csv::num(y0) << "\" x2=\""
                << csv::num(x1) << "\" y2=\"" << csv::num(y1)
                << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
            out << "<circle cx=\"" << csv::num(x1) << "\" cy=\"" << csv::num(y1)
                << "\" r=\"1.5\" fill=\"black\"/>\n";
        }
    }
    out << "<text x=\"" << margin + size / 2 << "\" y=\"" << size + 2 * margin - 8
        << "\" text-anchor=\"middle\">zeta2</text>\n";
    out << "<text x=\"12\" y=\"" << margin + size / 2 << "\">gamma</text>\n";
    out << "</svg>\n";
}

} // namespace sectorflow
