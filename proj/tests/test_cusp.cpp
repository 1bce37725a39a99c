#include "sectorflow/cusp.hpp"
#include "sectorflow/integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sectorflow;
constexpr double pi = std::numbers::pi;

namespace {

double run_1d(double g0, Branch b, double t_end)
{
    OdeRhs f = [b](double, std::span<const double> x) {
        return StateVector{one_dim_rhs(std::clamp(x[0], 0.0, pi / 4.0), b)};
    };
    StepControl ctl;
    ctl.dt = 1e-2;
    return integrate(f, {g0}, 0.0, t_end, ctl).final_state()[0];
}

} // namespace

TEST_CASE("reduced system keeps zeta1 + zeta2")
{
    const auto t = integrate_reduced({0.3, 0.2, 0.1}, 100.0, 1e-3, 1.0);
    const double s0 = 0.5;
    for (const auto& x : t.states) {
        CHECK(std::abs(x[0] + x[1] - s0) <= 1e-9);
    }
}

TEST_CASE("one-dimensional branches")
{
    for (double g0 : {0.02, 0.2, 0.5, 0.76}) {
        CHECK(std::abs(run_1d(g0, Branch::symmetric_with_zeta2, 200.0) - pi / 8.0) < 1e-6);
        const double end = run_1d(g0, Branch::symmetric_with_zeta1, 200.0);
        const double target = g0 < pi / 8.0 ? 0.0 : pi / 4.0;
        CHECK(std::abs(end - target) < 1e-6);
    }
}

TEST_CASE("cusp rate from the linearization")
{
    for (double g : {0.05, 0.1, 0.3}) {
        const auto t = integrate_reduced({0.05, pi / 4.0 - 0.05, g}, 80.0, 1e-3, 0.01);
        const auto c = classify_asymptotic(t);
        REQUIRE((c.kind == Asymptotic::cusp_zeta1 || c.kind == Asymptotic::cusp_zeta2));
        CHECK(std::abs(cusp_rate(t) - 0.5) <= 0.025);
    }
}

TEST_CASE("decay fit recovers an exponential")
{
    std::vector<double> t, v;
    for (int i = 0; i < 50; ++i) {
        t.push_back(0.1 * i);
        v.push_back(3.0 * std::exp(-0.7 * t.back()));
    }
    CHECK(fit_decay_rate(t, v) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("diagonal flows to the symmetric state")
{
    const auto t = integrate_reduced({pi / 4.0 - 0.3, 0.3, 0.3}, 200.0, 1e-2, 0.0, true);
    CHECK(classify_asymptotic(t).kind == Asymptotic::eightfold_symmetric);
}

TEST_CASE("portrait grid")
{
    const auto s = phase_portrait(8);
    CHECK(s.size() == 64);
    CHECK(s.front().zeta2 == doctest::Approx(0.0));
    CHECK(s.back().gamma == doctest::Approx(pi / 4.0));
}
