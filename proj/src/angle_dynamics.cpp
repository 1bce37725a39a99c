#include "sectorflow/angle_dynamics.hpp"

#include "sectorflow/csv.hpp"
#include "sectorflow/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace sectorflow {

namespace {

/// Widths and leading gaps live at indices 1..2N-1 of the packed state.
void clamp_angles(std::span<double> state)
{
    for (std::size_t i = 1; i < state.size(); ++i) {
        if (state[i] < angle_clamp_threshold && state[i] > -angle_negative_tolerance) {
            state[i] = 0.0;
        }
    }
}

double trailing_gap(std::span<const double> state, double period)
{
    double used = 0.0;
    for (std::size_t i = 1; i < state.size(); ++i) {
        used += state[i];
    }
    return period - used;
}

} // namespace

OdeRhs angle_rhs(const SectorConfiguration& like, const NormalizationConstants& consts)
{
    consts.validate();
    const bool weighted = !like.unit_strengths();
    require(!weighted || like.m() == 4, "non-unit strengths are only supported for m = 4");
    return [like, consts, weighted](double, std::span<const double> x) {
        StateVector clean(x.begin(), x.end());
        clamp_angles(clean);
        const auto config = unpack_state(clean, like);
        const auto rates = weighted ? rhs_m4_weighted(config, consts) : rhs_general(config, consts);
        return pack_rates(rates);
    };
}

IntegrationHooks angle_hooks(const SectorConfiguration& like)
{
    IntegrationHooks hooks;
    const double period = like.period();
    hooks.project = [period](StateVector& x) {
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || x[i] < -angle_negative_tolerance || x[i] > period) {
                return false;
            }
        }
        clamp_angles(x);
        const double last = trailing_gap(x, period);
        return last >= -angle_negative_tolerance && last <= period;
    };
    return hooks;
}

Trajectory integrate_angles(const SectorConfiguration& config, const NormalizationConstants& consts,
                            double t_end, const StepControl& control)
{
    return integrate(angle_rhs(config, consts), pack_state(config), 0.0, t_end, control,
                     angle_hooks(config));
}

namespace {

template <typename T>
T field(const nlohmann::json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw InvalidInput(path + key + ": missing field");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput(path + key + ": wrong type");
    }
}

template <typename T>
T field_or(const nlohmann::json& obj, const std::string& key, const std::string& path, T fallback)
{
    if (!obj.is_object() || !obj.contains(key)) {
        return fallback;
    }
    return field<T>(obj, key, path);
}

} // namespace

SectorConfiguration configuration_from_json(const nlohmann::json& doc)
{
    const int m = field<int>(doc, "m", "");
    if (!doc.contains("sectors") || !doc.at("sectors").is_array()) {
        throw InvalidInput("sectors: missing array");
    }
    std::vector<Sector> sectors;
    const auto& arr = doc.at("sectors");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "sectors[" + std::to_string(i) + "].";
        Sector s;
        s.beta = field<double>(arr[i], "beta", path);
        s.zeta = field<double>(arr[i], "zeta", path);
        s.strength = field_or<double>(arr[i], "strength", path, 1.0);
        sectors.push_back(s);
    }
    return SectorConfiguration(m, std::move(sectors));
}

NormalizationConstants constants_from_json(const nlohmann::json& doc)
{
    NormalizationConstants c;
    if (doc.is_object() && doc.contains("constants")) {
        const auto& k = doc.at("constants");
        c.c = field_or<double>(k, "c", "constants.", c.c);
        c.c_prime = field_or<double>(k, "c_prime", "constants.", c.c_prime);
        c.c_double_prime = field_or<double>(k, "c_double_prime", "constants.", c.c_double_prime);
    }
    c.validate();
    return c;
}

nlohmann::json to_json(const SectorConfiguration& config, const NormalizationConstants& consts)
{
    nlohmann::json doc;
    doc["m"] = config.m();
    doc["sectors"] = nlohmann::json::array();
    for (const auto& s : config.sectors()) {
        doc["sectors"].push_back({{"beta", s.beta}, {"zeta", s.zeta}, {"strength", s.strength}});
    }
    doc["constants"] = {{"c", consts.c}, {"c_prime", consts.c_prime},
                        {"c_double_prime", consts.c_double_prime}};
    return doc;
}

void write_angle_csv(std::ostream& out, const Trajectory& traj, const SectorConfiguration& like)
{
    const std::size_t n = like.size();
    std::vector<std::string> names{"t", "beta1"};
    for (std::size_t i = 1; i <= n; ++i) {
        names.push_back("zeta_" + std::to_string(i));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        names.push_back("gamma_" + std::to_string(i));
    }
    csv::header(out, names);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& x = traj.states[k];
        std::vector<double> row{traj.times[k]};
        row.insert(row.end(), x.begin(), x.end());
        row.push_back(trailing_gap(x, like.period()));
        csv::row(out, row);
    }
}

} // namespace sectorflow
