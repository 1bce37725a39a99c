#include "sectorflow/sectors.hpp"

#include "sectorflow/errors.hpp"

#include <cmath>
#include <string>

namespace sectorflow {

namespace {
constexpr double closure_tolerance = 1e-9;
}

void NormalizationConstants::validate() const
{
    require(std::isfinite(c) && c > 0.0, "constants.c must be positive");
    require(std::isfinite(c_prime) && c_prime >= 0.0, "constants.c_prime must be nonnegative");
    require(std::isfinite(c_double_prime) && c_double_prime >= 0.0,
            "constants.c_double_prime must be nonnegative");
}

SectorConfiguration::SectorConfiguration(int m, std::vector<Sector> sectors)
    : m_(m), sectors_(std::move(sectors))
{
    require(m_ >= 3, "fold symmetry m must be at least 3");
    require(!sectors_.empty(), "configuration needs at least one sector");
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
        const auto& s = sectors_[i];
        require(std::isfinite(s.beta) && std::isfinite(s.zeta) && std::isfinite(s.strength),
                "sector " + std::to_string(i) + " has a non-finite field");
        require(s.zeta >= 0.0, "sector " + std::to_string(i) + " has negative width");
    }
    const auto g = gaps();
    for (std::size_t i = 0; i < g.size(); ++i) {
        require(g[i] >= -closure_tolerance,
                "sectors overlap: gap " + std::to_string(i) + " is negative");
    }
}

SectorConfiguration SectorConfiguration::from_angles(int m, double beta1,
                                                     const std::vector<double>& zeta,
                                                     const std::vector<double>& leading_gaps,
                                                     std::vector<double> strengths)
{
    require(!zeta.empty(), "need at least one width");
    require(leading_gaps.size() + 1 == zeta.size(), "need N-1 leading gaps for N widths");
    if (strengths.empty()) {
        strengths.assign(zeta.size(), 1.0);
    }
    require(strengths.size() == zeta.size(), "need one strength per sector");

    std::vector<Sector> sectors;
    sectors.reserve(zeta.size());
    double beta = beta1;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        sectors.push_back({beta, zeta[i], strengths[i]});
        if (i + 1 < zeta.size()) {
            beta += zeta[i] + leading_gaps[i];
        }
    }
    return SectorConfiguration(m, std::move(sectors));
}

std::vector<double> SectorConfiguration::gaps() const
{
    const std::size_t n = sectors_.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g[i] = sectors_[i + 1].beta - sectors_[i].beta - sectors_[i].zeta;
    }
    g[n - 1] = sectors_[0].beta + period() - sectors_[n - 1].beta - sectors_[n - 1].zeta;
    return g;
}

std::vector<double> SectorConfiguration::widths() const
{
    std::vector<double> w;
    w.reserve(sectors_.size());
    for (const auto& s : sectors_) {
        w.push_back(s.zeta);
    }
    return w;
}

bool SectorConfiguration::unit_strengths() const
{
    for (const auto& s : sectors_) {
        if (s.strength != 1.0) {
            return false;
        }
    }
    return true;
}

} // namespace sectorflow
