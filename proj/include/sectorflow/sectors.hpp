#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace sectorflow {

/// One sector of the fundamental domain: ray offset, opening width, vorticity strength.
struct Sector {
    double beta = 0.0;
    double zeta = 0.0;
    double strength = 1.0;
};

/// Multiplicative constants of the corner-angle system.
///
/// The default is the normalized gauge (C_m = C_m' = 1, C_m'' = 0), i.e. time is
/// measured in units where the ζ/γ equations carry no prefactor.
struct NormalizationConstants {
    double c = 1.0;
    double c_prime = 1.0;
    double c_double_prime = 0.0;

    void validate() const;
};

/// N sectors per fundamental domain of an m-fold symmetric patch.
///
/// Sectors are ordered by increasing offset and must not overlap; the gap after
/// the last sector wraps around by the period 2π/m.
class SectorConfiguration {
public:
    SectorConfiguration(int m, std::vector<Sector> sectors);

    /// Builds a configuration from β₁, the widths ζ and the first N−1 gaps; the
    /// trailing gap is whatever closes the fundamental domain.
    static SectorConfiguration from_angles(int m, double beta1, const std::vector<double>& zeta,
                                           const std::vector<double>& leading_gaps,
                                           std::vector<double> strengths = {});

    int m() const { return m_; }
    std::size_t size() const { return sectors_.size(); }
    const std::vector<Sector>& sectors() const { return sectors_; }
    const Sector& operator[](std::size_t i) const { return sectors_[i]; }

    double period() const { return 2.0 * std::numbers::pi / m_; }

    /// γ_{i+1/2} for i = 1..N; the last entry is the wrap-around gap.
    std::vector<double> gaps() const;
    std::vector<double> widths() const;
    bool unit_strengths() const;

private:
    int m_;
    std::vector<Sector> sectors_;
};

} // namespace sectorflow
