#pragma once

#include "sectorflow/geometry.hpp"
#include "sectorflow/kernel.hpp"

#include <cstdint>
#include <vector>

namespace sectorflow {

/// Truncated Fourier solve of 4H + H'' = h on period-2π/m modes e^{ikmθ}, |k| <= modes.
/// Independent of the closed-form kernel; used as its oracle.
double fourier_kernel_h(const AngularProfile& profile, double theta, int modes);

/// Random profile with 1..max_pieces disjoint pieces in one period and amplitudes in
/// [−1, 2]. Deterministic for a given seed.
AngularProfile random_profile(std::uint64_t seed, int m, int max_pieces = 4);

/// u(x) = ∫_Ω K(x − y) dy from the ray lengths of Ω seen from x:
/// u = −(1/2π) ∫ ℓ(φ) (−sin φ, cos φ) dφ, ℓ(φ) = |{r > 0 : x + r e_φ ∈ Ω}|.
/// ℓ is smooth between the polar angles of the vertices, so each such arc gets a
/// Gauss-Legendre rule. `polygons` must have disjoint interiors; x must not lie on an edge.
Vec2 area_quadrature_velocity(const std::vector<std::vector<Vec2>>& polygons, Vec2 x);

} // namespace sectorflow
