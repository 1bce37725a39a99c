#include "sectorflow/angle_ode.hpp"

#include "sectorflow/errors.hpp"

#include <cmath>

namespace sectorflow {

namespace {

double sgn(double x)
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

/// Shared body of both systems: `weights` multiplies the l-th term of each sum
/// and `q` is m/4.
AngleRates interaction_rates(const SectorConfiguration& config, const std::vector<double>& weights,
                             double c)
{
    const std::size_t n = config.size();
    const double q = config.m() / 4.0;
    const auto gaps = config.gaps();

    std::vector<double> sin_zeta(n);
    for (std::size_t l = 0; l < n; ++l) {
        sin_zeta[l] = weights[l] * std::sin(q * config[l].zeta);
    }

    AngleRates rates;
    rates.zeta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) {
                continue;
            }
            const double phase =
                q * (2.0 * (config[j].beta - config[l].beta) + (config[j].zeta - config[l].zeta));
            sum += sgn(static_cast<double>(j) - static_cast<double>(l)) * sin_zeta[l] * std::cos(phase);
        }
        rates.zeta[j] = c * std::sin(q * config[j].zeta) * sum;
    }

    rates.gamma.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            const double phase = q * ((config[j + 1].beta - config[l].beta) +
                                      (config[j].beta - config[l].beta) +
                                      (config[j].zeta - config[l].zeta));
            sum += sgn(static_cast<double>(j) + 0.5 - static_cast<double>(l)) * sin_zeta[l] *
                   std::cos(phase);
        }
        rates.gamma[j] = c * std::sin(q * gaps[j]) * sum;
    }
    return rates;
}

} // namespace

AngleRates rhs_general(const SectorConfiguration& config, const NormalizationConstants& consts)
{
    require(config.m() >= 3, "corner-angle system needs m >= 3");
    require(config.unit_strengths(), "rhs_general needs unit strengths; use rhs_m4_weighted");
    consts.validate();

    const std::vector<double> ones(config.size(), 1.0);
    AngleRates rates = interaction_rates(config, ones, consts.c);

    const double q = config.m() / 4.0;
    double drift = 0.0;
    double total_width = 0.0;
    for (const auto& s : config.sectors()) {
        drift += std::sin(q * (2.0 * s.beta + s.zeta)) * std::sin(q * s.zeta);
        total_width += s.zeta;
    }
    rates.beta1 = consts.c_prime * drift - consts.c_double_prime * total_width;
    return rates;
}

AngleRates rhs_m4_weighted(const SectorConfiguration& config, const NormalizationConstants& consts)
{
    require(config.m() == 4, "rhs_m4_weighted needs m = 4");
    consts.validate();
    std::vector<double> weights;
    weights.reserve(config.size());
    for (const auto& s : config.sectors()) {
        weights.push_back(s.strength);
    }
    return interaction_rates(config, weights, consts.c);
}

std::vector<double> pack_state(const SectorConfiguration& config)
{
    const std::size_t n = config.size();
    std::vector<double> state;
    state.reserve(2 * n);
    state.push_back(config[0].beta);
    for (const auto& s : config.sectors()) {
        state.push_back(s.zeta);
    }
    const auto gaps = config.gaps();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        state.push_back(gaps[i]);
    }
    return state;
}

SectorConfiguration unpack_state(std::span<const double> state, const SectorConfiguration& like)
{
    const std::size_t n = like.size();
    require(state.size() == 2 * n, "state vector has the wrong length");
    std::vector<double> zeta(state.begin() + 1, state.begin() + 1 + static_cast<std::ptrdiff_t>(n));
    std::vector<double> gaps(state.begin() + 1 + static_cast<std::ptrdiff_t>(n), state.end());
    std::vector<double> strengths;
    strengths.reserve(n);
    for (const auto& s : like.sectors()) {
        strengths.push_back(s.strength);
    }
    return SectorConfiguration::from_angles(like.m(), state[0], zeta, gaps, std::move(strengths));
}

std::vector<double> pack_rates(const AngleRates& rates)
{
    std::vector<double> out;
    out.reserve(1 + rates.zeta.size() + rates.gamma.size());
    out.push_back(rates.beta1.value_or(0.0));
    out.insert(out.end(), rates.zeta.begin(), rates.zeta.end());
    out.insert(out.end(), rates.gamma.begin(), rates.gamma.end());
    return out;
}

} // namespace sectorflow
