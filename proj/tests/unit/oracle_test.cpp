#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fanosaw/oracle.hpp"

using namespace fanosaw;

namespace {

SystemParams fig1() { return params_from_linear(2.3, 0.01, 0.038, 25.0); }

}  // namespace

TEST(Oracle, BandWindowShape)
{
    EXPECT_EQ(band_window(0.0, 1.0, 0.25), 1.0);
    EXPECT_EQ(band_window(0.75, 1.0, 0.25), 1.0);
    EXPECT_NEAR(band_window(0.875, 1.0, 0.25), 0.5, 1e-12);
    EXPECT_NEAR(band_window(1.0, 1.0, 0.25), 0.0, 1e-12);
}

TEST(Oracle, SawCouplingVanishesAtDestructivePoints)
{
    EXPECT_NEAR(saw_phase_factor(std::numbers::pi / 25.0, 25.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(saw_phase_factor(0.0, 25.0)), 2.0, 1e-15);
}

TEST(Oracle, FreeDecayRateWithoutSaw)
{
    const SystemParams p = params_from_linear(2.3, 0.01, 0.0, 25.0);
    const OracleResult r = evolve(decay_config(p), p);
    const double rate = fit_decay_rate(r.times, r.e_pop);
    EXPECT_NEAR(rate / (2.0 * p.gamma_m), 1.0, 0.02);
    EXPECT_TRUE(r.atom_relaxed);
    EXPECT_LT(r.norm_drift, 1e-9);
    // Emission is split evenly between the two microwave directions.
    EXPECT_NEAR(r.channel(OracleChannel::microwave_left), 0.5, 0.01);
    EXPECT_NEAR(r.channel(OracleChannel::microwave_right), 0.5, 0.01);
}

TEST(Oracle, ResonantMirror)
{
    const SystemParams p = params_from_linear(2.3, 0.01, 0.0, 25.0);
    const OracleResult r = evolve(probe_config(p, p.omega_e, max_probe_sigma(p)), p);
    EXPECT_GE(r.effective_r_m, 0.98);
    EXPECT_LT(r.norm_drift, 1e-9);
    EXPECT_NEAR(r.effective_r_m + r.effective_t_m + 2.0 * r.effective_r_s, 1.0, 1e-6);
}

TEST(Oracle, SawSilentAtAlignedResonance)
{
    const SystemParams p = fig1();
    const double sigma = default_probe_sigma(p);
    const auto omega = period_grid(p, 21);
    const Spectrum exact = evaluate_spectrum(p, omega);
    const double peak = *std::max_element(exact.r_s.begin(), exact.r_s.end());
    const OracleResult r = evolve(probe_config(p, p.omega_e, sigma), p);
    EXPECT_LE(r.effective_r_s, 0.02 * peak);
    EXPECT_NEAR(r.channel(OracleChannel::saw_left), r.channel(OracleChannel::saw_right), 1e-9);
}

TEST(Oracle, EmptyProbeList)
{
    const SystemParams p = fig1();
    const auto c = probe_config(p, p.omega_e, default_probe_sigma(p));
    EXPECT_TRUE(oracle_runs(c, p, {}).empty());
    EXPECT_TRUE(oracle_spectrum(c, p, {}).omega.empty());
}

TEST(Oracle, RejectsUnderResolvedContinuum)
{
    const SystemParams p = fig1();
    OracleConfig c = probe_config(p, p.omega_e, default_probe_sigma(p));
    c.n_modes_per_channel /= 20;
    try {
        validate_oracle_config(c, p);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("under-resolved"), std::string::npos);
    }
}

TEST(Oracle, RejectsBadConfigs)
{
    const SystemParams p = fig1();
    const OracleConfig good = probe_config(p, p.omega_e, default_probe_sigma(p));
    EXPECT_NO_THROW(validate_oracle_config(good, p));

    OracleConfig c = good;
    c.n_modes_per_channel = 8;
    EXPECT_THROW(validate_oracle_config(c, p), ValidationError);

    c = good;
    c.dt = 0.0;
    EXPECT_THROW(validate_oracle_config(c, p), ValidationError);

    c = good;
    c.pulse_center = p.omega_e + good.band_halfwidth;
    EXPECT_THROW(validate_oracle_config(c, p), ValidationError);

    c = good;
    c.pulse_arrival = 1.0 / good.pulse_sigma;
    EXPECT_THROW(validate_oracle_config(c, p), ValidationError);

    c = good;
    c.pulse_sigma = 2.0 * max_probe_sigma(p);
    EXPECT_THROW((void)oracle_runs(c, p, {p.omega_e}), ValidationError);
}

TEST(Oracle, IntegratorsAgree)
{
    const SystemParams p = params_from_linear(2.3, 0.05, 0.02, 2.0);
    const double probe = p.omega_e + 0.1;
    OracleConfig c = probe_config(p, probe, max_probe_sigma(p));
    const OracleResult split = evolve(c, p);
    c.integrator = Integrator::rk4;
    c.dt *= 0.5;
    const OracleResult rk = evolve(c, p);
    EXPECT_NEAR(split.effective_r_m, rk.effective_r_m, 1e-3);
    EXPECT_NEAR(split.effective_r_s, rk.effective_r_s, 1e-3);
    EXPECT_NEAR(split.effective_r_m, reflect_microwave(p, probe), 0.02 * reflect_microwave(p, probe));
    EXPECT_NEAR(split.effective_r_s, scatter_saw(p, probe), 0.02 * scatter_saw(p, probe));
}

TEST(Oracle, FitDecayRateOnSyntheticData)
{
    std::vector<double> t, pop;
    for (int i = 0; i < 200; ++i) {
        t.push_back(0.1 * i);
        pop.push_back(std::exp(-0.7 * 0.1 * i));
    }
    EXPECT_NEAR(fit_decay_rate(t, pop), 0.7, 1e-10);
}
