#pragma once

#include "sectorflow/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sectorflow {

/// Closed counterclockwise boundary of one patch component.
struct PatchContour {
    std::vector<Vec2> nodes;
    bool closed = true;
    /// Sorted indices of nodes fixed at the origin.
    std::vector<std::size_t> pinned;
    /// Sorted indices of tracked material nodes. Remeshing keeps them and their index mapping.
    std::vector<std::size_t> markers;
    double strength = 1.0;

    double area() const { return polygon_area(nodes); }
    bool is_pinned(std::size_t i) const;
    /// Throws InvalidInput on fewer than 3 nodes, non-finite data, pinned nodes off the
    /// origin, out-of-range indices or clockwise orientation.
    void validate() const;
};

/// Fundamental contours plus time. With symmetry m > 1 the full patch is the union
/// of the m rotations of every stored contour by multiples of 2π/m.
struct SimulationState {
    std::vector<PatchContour> contours;
    double time = 0.0;
    int symmetry = 1;

    void validate() const;
};

struct VelocityOptions {
    /// Segments whose nearer endpoint lies farther than ratio × length from the target
    /// use the endpoint-corrected trapezoid rule (error ~ L⁵/r⁴); nearer ones use the
    /// exact log-segment integral. A ratio <= 0 makes every segment exact.
    double far_field_ratio = 0.0;
    /// Groups of consecutive segments whose bounding radius is below tree_theta × their
    /// distance to the target are summed by a complex multipole series of `tree_order`
    /// terms (truncation ~ tree_theta^(order+1)). tree_theta <= 0 sums every segment.
    double tree_theta = 0.4;
    int tree_order = 20;
    std::size_t tree_leaf = 16;
};

/// u(x) = −Σ (q/2π) ∮ log|x − y| dy over all contours and their rotated images
/// (counterclockwise contours; this is K ∗ q 1_Ω with K(x) = x^⊥ / (2π|x|²)).
Vec2 velocity_at(const SimulationState& state, Vec2 x, const VelocityOptions& options = {});

/// Velocity at many points, parallel over targets.
std::vector<Vec2> velocities_at(const SimulationState& state, std::span<const Vec2> points,
                                const VelocityOptions& options = {});

/// Velocity of every stored node (pinned nodes get zero), one vector per contour.
std::vector<std::vector<Vec2>> node_velocities(const SimulationState& state,
                                               const VelocityOptions& options = {});

/// One classical RK4 step of all unpinned nodes. Throws NumericalHalt on a
/// non-finite velocity and InvalidInput when dt <= 0.
void step(SimulationState& state, double dt, const VelocityOptions& options = {});

/// Target node spacing as a function of the distance to the origin:
/// h(r) = min(h_lin(r), max(h_min, grading · r)), where h_lin grows linearly from
/// `spacing_origin` at r = 0 to `spacing_outer` at `outer_radius` and stays there.
/// `grading` <= 0 disables the near-origin refinement.
struct SpacingProfile {
    double spacing_origin = 5e-3;
    double spacing_outer = 2e-2;
    double outer_radius = 1.0;
    double grading = 0.0;
    double min_spacing = 5e-4;

    static SpacingProfile uniform(double h);
    double at(double r) const;
};

struct RemeshOptions {
    SpacingProfile spacing;
    /// Local density is multiplied by min(density_cap, 1 + curvature_weight · κ).
    double curvature_weight = 0.0;
    double density_cap = 10.0;
    /// When positive, unmarked nodes closer than corner_cutoff / 2 to the origin are
    /// dropped from contours with a pinned corner, so the corner segments stay straight
    /// below that scale. Pair it with spacing.min_spacing >= corner_cutoff.
    double corner_cutoff = 0.0;
    /// When positive, spacing is also kept below gap / proximity_weight, where gap is the
    /// distance from a segment midpoint to boundary nodes of other images or to nodes of
    /// the same contour that are much farther away along the curve (filament tips, necks).
    double proximity_weight = 0.0;
    double proximity_min_spacing = 1e-3;
};

/// Node density (1 / target spacing) of segment i → i+1 of a closed contour.
/// `symmetry` is the number of rotated images seen by the proximity term.
std::vector<double> segment_density(const PatchContour& contour, const RemeshOptions& options,
                                    int symmetry = 1);

/// Redistributes nodes by density-weighted arc length on a cubic Hermite
/// interpolant. Pinned nodes, their two neighbours and markers are kept exactly;
/// runs between them whose segments already hold 0.5 to 1.6 target spacings are
/// left untouched, so remeshing a conforming contour is the identity. Resampled
/// nodes are shifted along the normal (in proportion to the local chord) to restore
/// the enclosed area.
PatchContour remesh(const PatchContour& contour, const RemeshOptions& options, int symmetry = 1);

} // namespace sectorflow
