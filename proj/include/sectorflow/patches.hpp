#pragma once

#include "sectorflow/contour.hpp"

#include <vector>

namespace sectorflow {

/// Unit-density disk boundary with `nodes` equally spaced nodes.
PatchContour disk_contour(std::size_t nodes, double radius = 1.0);

/// Ellipse x²/a² + y²/b² = 1 sampled at equal parameter steps.
PatchContour ellipse_contour(double a, double b, std::size_t nodes);

struct SpiralPatchParams {
    double theta0 = 0.39269908169872414; // π/8
    double delta = 0.05;
    double nu = 0.05;
    double smoothing = 0.01;
};

/// Default mesh density for the corner-patch builders.
RemeshOptions default_patch_mesh();

/// 4-fold patch whose fundamental piece runs from the origin along the ray at −θ₀
/// to A⁻ = (δ, −θ₀), straight to B⁻ = (1, −(π/4 − ν)), along the unit circle through
/// (1, 0) and back symmetrically, with circular fillets of radius `smoothing` at A±
/// and B±. Node 0 is pinned at the origin; the node at (1, 0) is a marker.
SimulationState build_spiral_patch(const SpiralPatchParams& params,
                                   const RemeshOptions& mesh = default_patch_mesh());

/// 4-fold union of sectors of half-angle θ₀ truncated by the unit circle, outer
/// corners filleted with radius `smoothing`. Same pinning and marker as above.
SimulationState build_sector_patch(double theta0, double smoothing,
                                   const RemeshOptions& mesh = default_patch_mesh());

/// Rotated copies of every stored contour (all m images).
std::vector<std::vector<Vec2>> full_patch(const SimulationState& state);

struct CornerAngle {
    std::size_t node = 0;
    Vec2 forward;  ///< fitted unit direction of the strand leaving the corner
    Vec2 backward; ///< fitted unit direction of the strand entering it
    double opening = 0.0;  ///< counterclockwise angle from forward to backward, in (0, 2π)
    double bisector = 0.0; ///< polar angle of the bisecting ray, in (−π, π]
};

/// Least-squares direction through the origin of each strand within `fit_radius`
/// of every pinned node. Throws InvalidInput("refine mesh ...") with fewer than
/// three nodes on a strand.
std::vector<CornerAngle> corner_angles(const PatchContour& contour, double fit_radius);

struct PatchDiagnostics {
    double area = 0.0;      ///< total over all images
    double perimeter = 0.0; ///< total over all images
    double l1_disk = 0.0;   ///< ‖1_Ω − 1_B‖_{L¹}
    double max_velocity_deviation = 0.0; ///< max |u − u_B| on the 64 × 64 lattice of [−1.5, 1.5]²
    /// min over lattice points with r0 <= |x| <= 1 of u^θ/|x|
    double min_angular_velocity = 0.0;
    bool reliable = true; ///< false when the boundary self-intersects
};

/// Velocity of the unit disk patch.
Vec2 disk_velocity(Vec2 x);

/// The fixed 64 × 64 lattice on [−1.5, 1.5]².
std::vector<Vec2> deviation_lattice();

PatchDiagnostics diagnostics(const SimulationState& state, double r0 = 0.3, bool with_velocity = true,
                             const VelocityOptions& options = {});

/// sup of |1 − |x|²| over Ω △ B computed from the boundary: 1 − r_min² where r_min is
/// the distance from the origin to Ω's complement inside B (0 when the origin is on
/// the boundary), and r_max² − 1 for the part of Ω outside B.
double stability_sup(const SimulationState& state);

bool self_intersects(const SimulationState& state);

/// Principal-axis angle of the second-moment tensor, in (−π/2, π/2].
double orientation_angle(const PatchContour& contour);

} // namespace sectorflow
