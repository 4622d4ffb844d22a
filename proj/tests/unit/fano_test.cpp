#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fanosaw/fano.hpp"
#include "fanosaw/spectra.hpp"
#include "support/reference.hpp"

using namespace fanosaw;

namespace {

SystemParams fig1() { return params_from_linear(2.3, 0.01, 0.038, 25.0); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Fano, PeriodicFrequencyConvention)
{
    EXPECT_DOUBLE_EQ(periodic_frequency(0, 1.0), std::numbers::pi);
    EXPECT_DOUBLE_EQ(periodic_frequency(3, 2.0), 7.0 * std::numbers::pi / 2.0);
    EXPECT_THROW((void)periodic_frequency(-1, 1.0), ValidationError);
}

TEST(Fano, NearestIndex)
{
    const SystemParams p = fig1();
    EXPECT_EQ(nearest_index(p), 57);
    EXPECT_EQ(nearest_index(p.with_t_l(25.1)), 57);
    EXPECT_EQ(nearest_index(p.with_t_l(25.3)), 58);
    // Exactly halfway between ω_56 and ω_57: the smaller index wins.
    const double t_tie = 2.0 * std::numbers::pi * 57.0 / p.omega_e;
    EXPECT_EQ(nearest_index(p.with_t_l(t_tie)), 56);
}

TEST(Fano, DescriptorMatchesHighPrecision)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const SystemParams p =
            params_from_linear(2.0 + u(rng), 0.001 + 0.09 * u(rng), 0.001 + 0.09 * u(rng), 5.0 + 60.0 * u(rng));
        const ResonanceIndex n = nearest_index(p) + static_cast<ResonanceIndex>(u(rng) * 5) - 2;
        const FanoProfile f = fano_descriptor(p, n);
        const auto r = ref::descriptor(p.omega_e, p.gamma_m, p.gamma_s, p.t_l, n);
        EXPECT_LT(rel(f.eta, static_cast<double>(r.eta)), 1e-12);
        EXPECT_LT(rel(f.gamma_n, static_cast<double>(r.gamma_n)), 1e-10);
        EXPECT_LT(rel(f.omega_eff, static_cast<double>(r.omega_eff)), 1e-12);
        EXPECT_LT(rel(f.i_m, static_cast<double>(r.i_m)), 1e-10);
        EXPECT_LT(rel(f.d_s2, static_cast<double>(r.d_s2)), 1e-12);
        EXPECT_LT(rel(f.q, static_cast<double>(r.q)), 1e-9);
        ASSERT_TRUE(f.delta_omega.has_value());
        EXPECT_LT(rel(*f.delta_omega, static_cast<double>(r.delta_omega)), 1e-9);
    }
}

TEST(Fano, DipSitsAtDestructivePoint)
{
    const SystemParams p = fig1().with_t_l(23.4);
    for (ResonanceIndex n = 50; n < 60; ++n) {
        const FanoProfile f = fano_descriptor(p, n);
        EXPECT_NEAR(f.dip_frequency(), f.omega_n, 1e-12 * f.omega_n);
        EXPECT_NEAR(fano_profile(f, f.omega_n), 0.0, 1e-20);
    }
}

TEST(Fano, AlignmentGivesZeroQAndNoWidth)
{
    const SystemParams p = fig1();
    const FanoProfile f = fano_descriptor(p, 57);
    EXPECT_EQ(f.q, 0.0);
    EXPECT_FALSE(f.delta_omega.has_value());
    EXPECT_THROW((void)fano_width(p, 57), DomainError);
}

TEST(Fano, WidthSignFollowsDetuning)
{
    const SystemParams p = fig1().with_t_l(23.4);
    const ResonanceIndex c = nearest_index(p);
    for (ResonanceIndex n = c - 3; n <= c + 3; ++n) {
        const FanoProfile f = fano_descriptor(p, n);
        EXPECT_EQ(std::signbit(*f.delta_omega), std::signbit(f.delta_ep));
        EXPECT_EQ(std::signbit(f.q), std::signbit(f.delta_ep));
    }
}

TEST(Fano, LorentzPeakEqualsIntensityOverWidth)
{
    const FanoProfile f = fano_descriptor(fig1().with_t_l(23.4), 53);
    EXPECT_NEAR(lorentz_profile(f, f.omega_eff), f.i_m / f.gamma_n, 1e-12 * f.i_m / f.gamma_n);
}

TEST(Fano, ApproximantsTrackExactNearAlignedResonance)
{
    const SystemParams p = fig1();
    const double w = periodic_frequency(57, p.t_l);
    const double apex_m = reflect_microwave(p, w);
    for (double x = w - 0.02; x <= w + 0.02; x += 0.001) {
        EXPECT_NEAR(lorentz_approx_rm(p, 57, x), reflect_microwave(p, x), 0.01 * apex_m);
    }
}
