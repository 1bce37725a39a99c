#pragma once

#include <numbers>
#include <vector>

namespace sectorflow {

/// Piecewise-constant vorticity h(θ) with period 2π/m.
///
/// Each piece covers [lo, hi) with a constant amplitude. Pieces may be given in
/// any window of the circle; they are compared modulo the period when checking
/// that they do not overlap.
class AngularProfile {
public:
    struct Piece {
        double lo = 0.0;
        double hi = 0.0;
        double amplitude = 1.0;
    };

    AngularProfile(int m, std::vector<Piece> pieces);

    /// h ≡ amplitude on the whole circle.
    static AngularProfile constant(int m, double amplitude);

    int m() const { return m_; }
    double period() const { return 2.0 * std::numbers::pi / m_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    /// h(θ), with the convention that pieces are closed on the left.
    double value(double theta) const;

private:
    int m_;
    std::vector<Piece> pieces_;
};

/// Periodic solution H of 4H + H'' = h, evaluated in closed form.
///
/// H(θ) = ∫ G(θ − θ') h(θ') dθ' with the periodic Green's function
/// G(φ) = cos(2|φ| − 2π/m) / (4 sin(2π/m)) on |φ| ≤ π/m. For m = 4 this is
/// G(φ) = |sin 2φ| / 4.
double kernel_h(const AngularProfile& profile, double theta);

/// ∫_{lo}^{hi} G(θ − θ') dθ', i.e. H(θ) for a unit-amplitude single piece.
double kernel_interval(int m, double theta, double lo, double hi);

/// The Green's function itself (exposed for tests and for the sweep tooling).
double kernel_green(int m, double phi);

/// lim_{r→0} u^θ(r, θ)/r for the exact-sector flow with vorticity h(θ): 2 H(θ).
double corner_angular_speed(const AngularProfile& profile, double theta);

} // namespace sectorflow
