#pragma once

#include "sectorflow/patches.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sectorflow {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Adds multiples of `period` so consecutive values differ by at most period/2.
std::vector<double> unwrap(const std::vector<double>& angles, double period);

struct CornerRunParams {
    double t_end = 5.0;
    double dt = 0.02;
    double sample_interval = 0.2;
    int remesh_every = 20;
    int intersection_every = 100;
    double fit_radius = 0.021;
    double r0 = 0.3; ///< inner radius of the angular-velocity check
    bool velocity_diagnostics = true;
    RemeshOptions mesh = default_patch_mesh();
    VelocityOptions velocity;
};

struct CornerSample {
    double t = 0.0;
    double area = 0.0;
    double perimeter = 0.0;
    double corner_angle = 0.0;
    double corner_bisector = 0.0; ///< unwrapped
    double winding = 0.0;         ///< tracked strand, origin to the marker node
    double l1_disk = 0.0;
    double max_vel_dev = 0.0;
    double min_angular_velocity = 0.0;
    double tracked_radius = 0.0;
    std::size_t min_line_intersections = 0;
    std::size_t nodes = 0;
    bool reliable = true;
};

enum class RunStatus { completed, self_intersection, halted };
std::string to_string(RunStatus s);

struct CornerRecord {
    std::vector<CornerSample> samples;
    RunStatus status = RunStatus::completed;
    std::string message;
    double stab_sup = 0.0;    ///< sup_{Ω₀ △ B} |1 − |x|²|
    double stab_bound = 0.0;  ///< 4π · stab_sup · L¹(0)
    SimulationState final_state;
};

using SampleHook = std::function<void(const SimulationState&, const CornerSample&)>;

/// Evolves a pinned-corner patch, sampling corner angle, bisector, tracked-strand
/// winding and disk diagnostics every `sample_interval`. Self-intersection found by
/// the periodic check ends the run with a partial record.
CornerRecord run_corner_patch(SimulationState state, const CornerRunParams& params,
                              const SampleHook& on_sample = {});

struct SpiralParams {
    SpiralPatchParams patch;
    CornerRunParams run;
};

/// Default horizon T = 40 with the spiral mesh and step.
SpiralParams default_spiral_params();

CornerRecord run_spiral_experiment(const SpiralParams& params, const SampleHook& on_sample = {});

struct CornerSummary {
    double opening0 = 0.0;      ///< first measured opening
    double max_opening_dev = 0.0; ///< max |opening − opening0| / opening0
    LineFit bisector;           ///< unwrapped bisector against t
    std::size_t measured = 0;   ///< samples with a valid corner fit
};

/// Opening drift and bisector rotation rate over the samples with a corner fit.
CornerSummary summarize_corner(const CornerRecord& record);

struct SpiralSummary {
    LineFit winding;           ///< winding number against t
    bool crossings_bound_holds = true;   ///< count >= floor(winding) at every sample
    double stab_max_excess = 0.0; ///< max over samples of L¹² − 4π sup L¹(0), <= 0 when satisfied
    double min_tracked_radius = 0.0;
    double min_angular_velocity = 0.0;
    bool all_reliable = true;
};

SpiralSummary summarize_spiral(const CornerRecord& record);

/// The eight lines through the origin used for the intersection inequality.
inline constexpr int intersection_lines = 8;

void write_corner_csv(std::ostream& out, const CornerRecord& record);
/// Extra per-sample checks of the spiral: tracked radius, angular velocity,
/// intersection counts, node count.
void write_spiral_checks_csv(std::ostream& out, const CornerRecord& record);
void write_contour_csv(std::ostream& out, const SimulationState& state);
void write_contour_svg(std::ostream& out, const SimulationState& state);
/// Outlines of several states in one picture, later ones darker.
void write_overlay_svg(std::ostream& out, const std::vector<SimulationState>& states);

struct KirchhoffResult {
    double rate = 0.0;       ///< fitted rotation rate of the principal axis
    double expected = 0.0;   ///< ab/(a + b)²
    double area_drift = 0.0; ///< max relative area change
    std::vector<double> times, angles;
};

KirchhoffResult run_kirchhoff(double a, double b, std::size_t nodes, double t_end, double dt);

struct DiskCheck {
    double max_relative_error = 0.0; ///< max over boundary nodes of |u − x^⊥/2| / |x^⊥/2|
};

DiskCheck disk_boundary_check(std::size_t nodes);

} // namespace sectorflow
