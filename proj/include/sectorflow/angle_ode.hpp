#pragma once

#include "sectorflow/sectors.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sectorflow {

/// Time derivatives of the integrated corner angles.
///
/// `gamma` holds the rates of the first N−1 gaps only; the trailing gap is
/// slaved to the closure Σζ + Σγ = 2π/m and is never integrated.
struct AngleRates {
    std::optional<double> beta1;
    std::vector<double> zeta;
    std::vector<double> gamma;
};

/// Corner-angle system for unit-strength sectors and general m ≥ 3.
/// sgn(0) = 0, so a sector does not drive itself.
AngleRates rhs_general(const SectorConfiguration& config,
                       const NormalizationConstants& consts = {});

/// The m = 4 system with per-sector strengths A_l inside the sums. No equation
/// for β₁ is available for weighted sectors, so `beta1` is left empty.
AngleRates rhs_m4_weighted(const SectorConfiguration& config,
                           const NormalizationConstants& consts = {});

/// Packs the integrated coordinates (β₁, ζ₁..ζ_N, γ_{3/2}..γ_{N−1/2}).
std::vector<double> pack_state(const SectorConfiguration& config);

/// Inverse of pack_state; strengths are taken from `like`.
SectorConfiguration unpack_state(std::span<const double> state, const SectorConfiguration& like);

/// Flattens rates in the pack_state layout; a missing β₁ rate is written as 0.
std::vector<double> pack_rates(const AngleRates& rates);

} // namespace sectorflow
