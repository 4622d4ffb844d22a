#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fanosaw/design.hpp"
#include "support/reference.hpp"

using namespace fanosaw;

namespace {

SystemParams fig1() { return params_from_linear(2.3, 0.01, 0.038, 25.0); }

}  // namespace

TEST(Design, WindowAndAlignment)
{
    const double we = fig1().omega_e;
    const Bracket w = nearest_window(we, 51);
    const double t0 = alignment_delay(we, 51);
    EXPECT_LT(w.lo, t0);
    EXPECT_LT(t0, w.hi);
    EXPECT_NEAR(periodic_frequency(51, t0), we, 1e-12 * we);
    EXPECT_EQ(nearest_index(fig1().with_t_l(0.5 * (w.lo + w.hi))), 51);
}

TEST(Design, SolveTargetsAndVerifyIndependently)
{
    const SystemParams base = fig1();
    for (double target : {-1.5, -1.0, -0.3, 0.3, 1.0, 1.5}) {
        const DesignResult r = solve_tl_for_q(base, 50, target, nearest_window(base.omega_e, 50));
        EXPECT_LE(r.residual, 1e-9);
        EXPECT_EQ(r.parameter_kind, DesignParameter::time_delay);
        const auto d = ref::descriptor(base.omega_e, base.gamma_m, base.gamma_s, r.solved_value, 50);
        EXPECT_NEAR(static_cast<double>(d.q), target, 1e-9);
    }
}

TEST(Design, ZeroTargetIsAlignment)
{
    const SystemParams base = fig1();
    const DesignResult r = solve_tl_for_q(base, 51, 0.0, nearest_window(base.omega_e, 51));
    EXPECT_NEAR(r.solved_value, 103.0 * std::numbers::pi / base.omega_e, 1e-12 * r.solved_value);
}

TEST(Design, UnreachableTargetReportsMaximum)
{
    const SystemParams base = fig1();
    try {
        (void)solve_tl_for_q(base, 118, 10.0, nearest_window(base.omega_e, 118));
        FAIL();
    } catch (const NoSolutionError& e) {
        EXPECT_NE(std::string(e.what()).find("max attainable |q|"), std::string::npos);
    }
}

TEST(Design, BadBracketRejected)
{
    EXPECT_THROW((void)solve_tl_for_q(fig1(), 50, 1.0, {30.0, 20.0}), ValidationError);
}

TEST(Design, QmaxAgreesWithDenseScan)
{
    const SystemParams base = fig1();
    const Bracket w = nearest_window(base.omega_e, 50);
    const DesignResult r = solve_tl_qmax(base, 50, w);
    auto abs_q = [&](double t) { return std::abs(static_cast<double>(
                                     ref::descriptor(base.omega_e, base.gamma_m, base.gamma_s, t, 50).q)); };
    const double best = ref::grid_argmax(abs_q, w.lo, w.hi, 20001, false);
    EXPECT_GE(std::abs(r.achieved_q), abs_q(best) * (1.0 - 1e-6));
}

TEST(Design, QmaxShrinksWithDelay)
{
    const SystemParams base = fig1();
    double previous = INFINITY;
    for (ResonanceIndex n : {40, 60, 80, 100, 118}) {
        const double q = std::abs(solve_tl_qmax(base, n, nearest_window(base.omega_e, n)).achieved_q);
        EXPECT_LT(q, previous);
        previous = q;
    }
}

TEST(Design, FanoClosedFormHitsUnitQ)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double t = 10.0 + 40.0 * u(rng);
        const ResonanceIndex n = 40;
        const double delta = (0.2 + 0.6 * u(rng)) * std::numbers::pi / t * (u(rng) < 0.5 ? -1 : 1);
        const SystemParams p{periodic_frequency(n, t) + delta, two_pi * 0.01,
                             two_pi * (0.005 + 0.09 * u(rng)), t};
        const DesignResult r = gamma_for_fano(p, n);
        EXPECT_EQ(r.parameter_kind, DesignParameter::gamma_m);
        EXPECT_NEAR(std::abs(fano_parameter(p.with_gamma_m(r.solved_value), n)), 1.0, 1e-6);
        EXPECT_NEAR(r.solved_value, gamma_m_fano_numeric(p, n), 1e-6 * r.solved_value);
    }
}

TEST(Design, LorentzStationaryPointAbsent)
{
    // |q| decreases monotonically in γ_m, so no interior extremum exists.
    const SystemParams p{periodic_frequency(50, 22.0) + 0.05, two_pi * 0.01, two_pi * 0.038, 22.0};
    const auto root = lorentz_stationary_root(p, 50);
    EXPECT_TRUE(!root || *root <= 0.0);
    EXPECT_THROW((void)gamma_m_for_lorentz(p, 50), NoSolutionError);
    double prev = INFINITY;
    for (double g : ref::grid(1e-5, 10.0, 200, true)) {
        const double q = std::abs(fano_parameter(p.with_gamma_m(g), 50));
        EXPECT_LT(q, prev);
        prev = q;
    }
}

TEST(Design, RegimeThresholds)
{
    EXPECT_EQ(classify_q(5.0), Regime::lorentz_like);
    EXPECT_EQ(classify_q(-3.5), Regime::lorentz_like);
    EXPECT_EQ(classify_q(1.0), Regime::fano_like);
    EXPECT_EQ(classify_q(0.2), Regime::quasi_lorentz);
    EXPECT_EQ(classify_q(0.0), Regime::quasi_lorentz);
}

TEST(Design, WidthTrackDecreases)
{
    const auto track = fano_width_track(fig1(), 40, 80);
    ASSERT_EQ(track.size(), 41u);
    for (std::size_t k = 1; k < track.size(); ++k) {
        EXPECT_GT(track[k].t_l, track[k - 1].t_l);
        EXPECT_LT(track[k].gamma_n, track[k - 1].gamma_n);
        EXPECT_LT(track[k].delta_omega, track[k - 1].delta_omega);
    }
    EXPECT_THROW((void)fano_width_track(fig1(), 80, 40), ValidationError);
}
