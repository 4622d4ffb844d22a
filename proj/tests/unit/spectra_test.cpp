#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fanosaw/spectra.hpp"
#include "support/reference.hpp"

using namespace fanosaw;

namespace {

ref::Params as_ref(const SystemParams& p) { return {p.omega_e, p.gamma_m, p.gamma_s, p.t_l}; }

}  // namespace

TEST(Spectra, MatchesRealExpandedReference)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const SystemParams p =
            params_from_linear(1.0 + 5.0 * u(rng), 0.001 + 0.05 * u(rng), 0.1 * u(rng), 1.0 + 80.0 * u(rng));
        const double w = p.omega_e + (2.0 * u(rng) - 1.0) * 0.5;
        const auto r = as_ref(p);
        EXPECT_NEAR(reflect_microwave(p, w), static_cast<double>(ref::r_m(r, w)), 1e-12);
        EXPECT_NEAR(scatter_saw(p, w), static_cast<double>(ref::r_s(r, w)), 1e-12);
    }
}

TEST(Spectra, ResonantMirrorWithoutSaw)
{
    const SystemParams p = params_from_linear(2.3, 0.01, 0.0, 25.0);
    EXPECT_DOUBLE_EQ(reflect_microwave(p, p.omega_e), 1.0);
    EXPECT_DOUBLE_EQ(scatter_saw(p, p.omega_e), 0.0);
    EXPECT_NEAR(transmit_microwave(p, p.omega_e), 0.0, 1e-15);
}

TEST(Spectra, SawZerosAtOddMultiples)
{
    const SystemParams p = params_from_linear(2.3, 0.01, 0.038, 25.0);
    for (int k = 0; k < 200; ++k) {
        EXPECT_LE(scatter_saw(p, (2 * k + 1) * std::numbers::pi / p.t_l), 1e-15);
    }
}

TEST(Spectra, GridEndpointsAndSize)
{
    const auto g = uniform_grid(1.0, 2.0, 11);
    ASSERT_EQ(g.size(), 11u);
    EXPECT_EQ(g.front(), 1.0);
    EXPECT_EQ(g.back(), 2.0);
    EXPECT_THROW((void)uniform_grid(2.0, 1.0, 5), ValidationError);
}

TEST(Spectra, EvaluateSpectrumSatisfiesIdentity)
{
    const SystemParams p = params_from_linear(2.3, 0.01, 0.038, 25.0);
    const Spectrum s = spectrum_grid(p, p.omega_e - 1.0, p.omega_e + 1.0, 4001);
    ASSERT_EQ(s.omega.size(), 4001u);
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        EXPECT_NEAR(s.r_m[i] + s.t_m[i] + 2.0 * s.r_s[i], 1.0, 1e-13);
    }
}
