#pragma once

#include "sectorflow/angle_ode.hpp"
#include "sectorflow/integrator.hpp"
#include "sectorflow/sectors.hpp"

#include <json.hpp>

#include <iosfwd>

namespace sectorflow {

/// Angles below this are treated as cusps: clamped to exactly zero.
inline constexpr double angle_clamp_threshold = 1e-12;
/// Angles more negative than this mean the trajectory left the admissible set.
inline constexpr double angle_negative_tolerance = 1e-9;

/// The corner-angle ODE on the packed state of `like`. Unit strengths use
/// rhs_general; otherwise m must be 4 and rhs_m4_weighted is used.
OdeRhs angle_rhs(const SectorConfiguration& like, const NormalizationConstants& consts = {});

/// Clamps near-zero angles and rejects states whose widths or gaps (including
/// the reconstructed trailing gap) fall outside [0, 2π/m].
IntegrationHooks angle_hooks(const SectorConfiguration& like);

Trajectory integrate_angles(const SectorConfiguration& config, const NormalizationConstants& consts,
                            double t_end, const StepControl& control = {});

SectorConfiguration configuration_from_json(const nlohmann::json& doc);
NormalizationConstants constants_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SectorConfiguration& config, const NormalizationConstants& consts);

/// CSV with header t,beta1,zeta_1..zeta_N,gamma_1..gamma_N (all gaps, the last
/// one reconstructed), 17 significant digits.
void write_angle_csv(std::ostream& out, const Trajectory& traj, const SectorConfiguration& like);

} // namespace sectorflow
