// Acceptance checks, one per criterion. Usage:
//   fanosaw_acceptance               run all, one PASS/FAIL line each
//   fanosaw_acceptance --criterion N run criterion N only
// Exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fanosaw/design.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/oracle.hpp"
#include "fanosaw/spectra.hpp"
#include "support/reference.hpp"

using namespace fanosaw;

namespace {

// Tolerances, pinned.
constexpr double identity_tol = 1e-12;
constexpr double zero_tol = 1e-15;
constexpr double apex_fraction = 0.05;
constexpr double q_regime_rel_tol = 0.20;
constexpr double solver_tol = 1e-9;
constexpr double alignment_rel_tol = 1e-12;
constexpr double qmax_expected = 0.8;
constexpr double qmax_abs_tol = 0.15;
constexpr double width_rel_tol = 0.05;
constexpr double oracle_rel_tol = 0.02;
constexpr double oracle_norm_tol = 1e-6;
constexpr double oracle_symmetry_tol = 1e-6;
constexpr double oracle_refine_tol = 0.005;
constexpr double lorentz_rel_tol = 0.005;
constexpr double fano_residual_tol = 1e-6;
constexpr double fano_agreement_tol = 1e-6;
constexpr double slope_expected = -1.5;
constexpr double slope_tol = 0.1;

// Couplings of the delay-sweep and spectrum figures.
constexpr double f_e = 2.3;
constexpr double gm_fig = 0.01;
constexpr double gs_fig = 0.038;
// t_L with ω_57 = (2·57 + 1)π / t_L exactly at ω_e: 57.5 / 2.3 ns.
constexpr double t_fig1 = 57.5 / 2.3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

SystemParams fig1() { return params_from_linear(f_e, gm_fig, gs_fig, t_fig1); }

Outcome identity()
{
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo)));
    };
    double worst = 0.0;
    std::size_t out_of_range = 0;
    std::size_t draws = 10000;
    for (std::size_t i = 0; i < draws; ++i) {
        const double fe = 1.0 + 9.0 * u(rng);
        // Weak coupling: both rates at most a tenth of ω_e.
        const double gm = log_uniform(1e-4, 0.1 * fe);
        const double gs = log_uniform(1e-4, 0.1 * fe);
        const double t = log_uniform(1.0, 200.0);
        const SystemParams p = params_from_linear(fe, gm * 0.999, gs * 0.999, t);
        const double span = 20.0 * (p.gamma_m + p.gamma_s) + 4.0 * two_pi / t;
        const double w = p.omega_e + span * (2.0 * u(rng) - 1.0);
        const double rm = reflect_microwave(p, w);
        const double rs = scatter_saw(p, w);
        const double tm = transmit_microwave(p, w);
        worst = std::max(worst, std::abs(rm + tm + 2.0 * rs - 1.0));
        if (rm < 0.0 || rm > 1.0 || rs < 0.0 || rs > 1.0) {
            ++out_of_range;
        }
    }
    return {worst <= identity_tol && out_of_range == 0,
            "10000 draws, max |R_m+T_m+2R_s-1| = " + fmt("%.3g", worst) +
                ", probabilities outside [0,1]: " + std::to_string(out_of_range)};
}

Outcome interference_zeros()
{
    double worst = 0.0;
    for (double t : {t_fig1, 7.3, 113.0}) {
        const SystemParams p = params_from_linear(f_e, gm_fig, gs_fig, t);
        for (long k = 0; k < 100; ++k) {
            const double w = (2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi / t;
            worst = std::max(worst, std::abs(scatter_saw(p, w)));
        }
    }
    return {worst <= zero_tol, "k = 0..99 at three delays, max |R_s| = " + fmt("%.3g", worst)};
}

struct ApproxError {
    double rm = 0.0;
    double rs = 0.0;
};

// Max |approximant − exact| over |ω − ω_n| ≤ 0.1 · 2π/t_L, relative to the
// exact apex in that window.
ApproxError approximant_error(const SystemParams& p, ResonanceIndex n)
{
    const double wn = periodic_frequency(n, p.t_l);
    const double half = 0.1 * two_pi / p.t_l;
    const auto w = uniform_grid(wn - half, wn + half, 4001);
    double apex_m = 0.0, apex_s = 0.0, dm = 0.0, ds = 0.0;
    for (double x : w) {
        const double em = reflect_microwave(p, x);
        const double es = scatter_saw(p, x);
        apex_m = std::max(apex_m, em);
        apex_s = std::max(apex_s, es);
        dm = std::max(dm, std::abs(lorentz_approx_rm(p, n, x) - em));
        ds = std::max(ds, std::abs(fano_approx_rs(p, n, x) - es));
    }
    return {dm / apex_m, ds / apex_s};
}

Outcome taylor_approximants()
{
    const SystemParams p = fig1();
    const ResonanceIndex nearest = nearest_index(p);
    const ApproxError e57 = approximant_error(p, 57);
    const ApproxError e58 = approximant_error(p, 58);
    const bool pass = nearest == 57 && e57.rm <= apex_fraction && e57.rs <= apex_fraction &&
                      e57.rm < e58.rm && e57.rs < e58.rs;
    return {pass, "t_L = " + fmt("%.6g", p.t_l) + " ns, nearest n = " + std::to_string(nearest) +
                      "; n=57 error R_m " + fmt("%.3g", e57.rm) + ", R_s " + fmt("%.3g", e57.rs) +
                      " of apex; n=58 error R_m " + fmt("%.3g", e58.rm) + ", R_s " +
                      fmt("%.3g", e58.rs)};
}

Outcome fano_regimes()
{
    const SystemParams base = fig1();
    const ResonanceIndex n = nearest_index(base);
    const double gms[3] = {0.001, 0.01, 0.05};
    const double expected[3] = {5.0, 1.0, 0.2};
    bool pass = true;
    std::string detail = "t_L = " + fmt("%.6g", base.t_l) + " ns, n = " + std::to_string(n) + ":";
    for (int i = 0; i < 3; ++i) {
        const double q = std::abs(fano_parameter(base.with_gamma_m(two_pi * gms[i]), n));
        const double rel = std::abs(q - expected[i]) / expected[i];
        pass = pass && rel <= q_regime_rel_tol;
        detail += " |q|(" + fmt("%g", gms[i]) + " GHz) = " + fmt("%.4g", q) + " vs " +
                  fmt("%g", expected[i]) + ";";
    }
    return {pass, detail};
}

Outcome design_round_trip()
{
    const SystemParams base = fig1();
    const double targets[3] = {-1.0, 0.0, 1.0};
    const ResonanceIndex ns[3] = {50, 51, 52};
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
        const DesignResult r =
            solve_tl_for_q(base, ns[i], targets[i], nearest_window(base.omega_e, ns[i]));
        const double q_lib = fano_parameter(base.with_t_l(r.solved_value), ns[i]);
        const double q_ref = static_cast<double>(
            ref::descriptor(base.omega_e, base.gamma_m, base.gamma_s, r.solved_value, ns[i]).q);
        const bool ok = r.residual <= solver_tol && std::abs(q_lib - targets[i]) <= solver_tol &&
                        std::abs(q_ref - targets[i]) <= solver_tol;
        pass = pass && ok;
        detail += "n=" + std::to_string(ns[i]) + " t_L=" + fmt("%.10g", r.solved_value) +
                  " residual " + fmt("%.2g", r.residual) + " (independent q " +
                  fmt("%.12g", q_ref) + "); ";
        if (targets[i] == 0.0) {
            // Destructive point ω_51 = 103π / t_L coincides with ω_e.
            const double analytic = 103.0 * std::numbers::pi / base.omega_e;
            const double rel = std::abs(r.solved_value - analytic) / analytic;
            pass = pass && rel <= alignment_rel_tol;
            detail += "q=0 vs 103pi/omega_e rel " + fmt("%.2g", rel) + "; ";
        }
    }
    return {pass, detail};
}

Outcome qmax_decay()
{
    const SystemParams base = fig1();
    const DesignResult longer = solve_tl_qmax(base, 118, nearest_window(base.omega_e, 118));
    const DesignResult shorter = solve_tl_qmax(base, 50, nearest_window(base.omega_e, 50));
    const double ql = std::abs(longer.achieved_q);
    const double qs = std::abs(shorter.achieved_q);
    const bool pass = std::abs(ql - qmax_expected) <= qmax_abs_tol && ql < qs;
    return {pass, "long window n=118: max|q| = " + fmt("%.4f", ql) + " at t_L = " +
                      fmt("%.6g", longer.solved_value) + " (" + longer.branch +
                      "); short window n=50: max|q| = " + fmt("%.4f", qs)};
}

Outcome width_monotonicity()
{
    const SystemParams base = fig1();
    const auto gm = ref::grid(two_pi * 1e-3, two_pi * 0.1, 20, true);
    const auto gs = ref::grid(two_pi * 1e-3, two_pi * 0.1, 20, true);
    auto width = [&](double m, double s) {
        SystemParams p = base.with_gamma_m(m).with_gamma_s(s);
        return fano_descriptor(p, nearest_index(p)).gamma_n;
    };
    std::size_t bad_m = 0, bad_s = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            if (i + 1 < 20 && !(width(gm[i + 1], gs[j]) > width(gm[i], gs[j]))) ++bad_m;
            if (j + 1 < 20 && !(width(gm[i], gs[j + 1]) < width(gm[i], gs[j]))) ++bad_s;
        }
    }
    const auto track = fano_width_track(base, 40, 119);
    std::size_t bad_gamma = 0, bad_dw = 0;
    for (std::size_t k = 1; k < track.size(); ++k) {
        if (!(track[k].gamma_n < track[k - 1].gamma_n)) ++bad_gamma;
        if (!(std::abs(track[k].delta_omega) < std::abs(track[k - 1].delta_omega))) ++bad_dw;
    }
    const bool pass = bad_m == 0 && bad_s == 0 && bad_gamma == 0 && bad_dw == 0;
    return {pass, "20x20 grid at t_L = " + fmt("%.6g", base.t_l) +
                      " ns: wrong-sign differences along gamma_m " + std::to_string(bad_m) +
                      ", along gamma_s " + std::to_string(bad_s) + "; track n=40..119 (t_L " +
                      fmt("%.4g", track.front().t_l) + " to " + fmt("%.4g", track.back().t_l) +
                      " ns): non-decreasing steps Gamma_n " + std::to_string(bad_gamma) +
                      ", Delta_omega " + std::to_string(bad_dw)};
}

Outcome width_vs_numeric()
{
    const SystemParams base = fig1();
    bool pass = true;
    std::string detail;
    // The q = +1 design point of n = 52 plus two generic delays across 20-50 ns.
    const double t52 =
        solve_tl_for_q(base, 52, 1.0, {alignment_delay(base.omega_e, 52), nearest_window(base.omega_e, 52).hi})
            .solved_value;
    for (double t : {t52, 35.3, 48.7}) {
        const SystemParams p = base.with_t_l(t);
        const ResonanceIndex c = nearest_index(p);
        detail += "t_L=" + fmt("%.4g", t) + ":";
        for (ResonanceIndex n = c - 2; n <= c + 2; ++n) {
            const double analytic = fano_width(p, n);
            const double numeric =
                ref::peak_dip_separation({p.omega_e, p.gamma_m, p.gamma_s, p.t_l}, n);
            const double rel = std::abs(std::abs(analytic) - std::abs(numeric)) / std::abs(numeric);
            pass = pass && rel <= width_rel_tol;
            detail += " n" + std::to_string(n) + " " + fmt("%.3g", rel);
        }
        detail += "; ";
    }
    return {pass, "relative |Delta_omega| mismatch per index: " + detail};
}

Outcome oracle_equivalence()
{
    const auto start = std::chrono::steady_clock::now();
    const SystemParams p = fig1();
    const auto omega = period_grid(p, 21);
    const double sigma = default_probe_sigma(p);
    const OracleConfig c = probe_config(p, p.omega_e, sigma);
    const OracleComparison cmp = compare_with_closed_form(c, p, omega);

    OracleConfig fine = c;
    fine.n_modes_per_channel *= 2;
    fine.dt *= 0.5;
    const Spectrum refined = oracle_spectrum(fine, p, omega);
    const double change = max_relative_change(cmp.oracle, refined);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass = cmp.max_rel_deviation <= oracle_rel_tol &&
                      cmp.max_norm_drift <= oracle_norm_tol &&
                      cmp.max_saw_asymmetry <= oracle_symmetry_tol && change < oracle_refine_tol;
    return {pass, "21 probes, sigma = " + fmt("%.3g", sigma) + " rad/ns: max relative deviation " +
                      fmt("%.4f", cmp.max_rel_deviation) + ", norm drift " +
                      fmt("%.2g", cmp.max_norm_drift) + ", SAW asymmetry " +
                      fmt("%.2g", cmp.max_saw_asymmetry) + ", refinement change " +
                      fmt("%.2g", change) + ", " + fmt("%.0f", secs) + " s"};
}

Outcome closed_form_inversions()
{
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t lorentz_ok = 0, lorentz_no_root = 0, argmax_at_edge = 0;
    std::size_t fano_validated = 0, fano_ok = 0;
    double worst_lorentz = 0.0, worst_residual = 0.0, worst_agreement = 0.0;
    const std::size_t draws = 50;
    for (std::size_t i = 0; i < draws; ++i) {
        const double gs = two_pi * (0.005 + 0.095 * u(rng));
        const double t = 10.0 + 50.0 * u(rng);
        const ResonanceIndex n = static_cast<ResonanceIndex>(std::floor(f_e * t));
        const double wn = periodic_frequency(n, t);
        const double delta = (2.0 * u(rng) - 1.0) * 0.9 * std::numbers::pi / t;
        const SystemParams p{wn + (delta == 0.0 ? 1e-3 : delta), two_pi * gm_fig, gs, t};

        // Lorentz-like coupling: numeric argmax of |q(γ_m)| on a log grid.
        const double lo = 1e-6, hi = 10.0;
        auto abs_q = [&](double g) { return std::abs(fano_parameter(p.with_gamma_m(g), n)); };
        const double best = ref::grid_argmax(abs_q, lo, hi, 4001, true);
        if (best <= lo * (1.0 + 1e-9) || best >= hi * (1.0 - 1e-9)) {
            ++argmax_at_edge;
        }
        try {
            const DesignResult r = gamma_m_for_lorentz(p, n);
            const double rel = std::abs(r.solved_value - best) / best;
            worst_lorentz = std::max(worst_lorentz, rel);
            if (rel <= lorentz_rel_tol) {
                ++lorentz_ok;
            }
        } catch (const NoSolutionError&) {
            ++lorentz_no_root;
        }

        // |q| = 1 coupling: closed form against the numeric root.
        const DesignResult f = gamma_for_fano(p, n);
        if (f.branch == "closed-form") {
            ++fano_validated;
            const double numeric = gamma_m_fano_numeric(p, n);
            const double agreement = std::abs(f.solved_value - numeric) / numeric;
            worst_residual = std::max(worst_residual, f.residual);
            worst_agreement = std::max(worst_agreement, agreement);
            if (f.residual <= fano_residual_tol && agreement <= fano_agreement_tol) {
                ++fano_ok;
            }
        }
    }
    const bool pass = lorentz_ok == draws && fano_ok == fano_validated && fano_validated > 0;
    return {pass, "Lorentz closed form within 0.5% of argmax in " + std::to_string(lorentz_ok) +
                      "/50 (no admissible root " + std::to_string(lorentz_no_root) +
                      ", grid argmax on the lower edge " + std::to_string(argmax_at_edge) +
                      "); Fano closed form validated " + std::to_string(fano_validated) +
                      "/50, passing " + std::to_string(fano_ok) + ", worst residual " +
                      fmt("%.2g", worst_residual) + ", worst agreement " +
                      fmt("%.2g", worst_agreement)};
}

Outcome large_gamma_m_slope()
{
    const SystemParams base = fig1();
    const ResonanceIndex n = 52;
    const Bracket w = nearest_window(base.omega_e, n);
    const double t = solve_tl_for_q(base, n, 1.0, {alignment_delay(base.omega_e, n), w.hi}).solved_value;
    const SystemParams p = base.with_t_l(t);
    const auto g = ref::grid(10.0 * p.gamma_s, 100.0 * p.gamma_s, 41, true);
    std::vector<double> q;
    for (double x : g) {
        q.push_back(fano_parameter(p.with_gamma_m(x), n));
    }
    const double slope = ref::loglog_slope(g, q);
    return {std::abs(slope - slope_expected) <= slope_tol,
            "t_L = " + fmt("%.6g", t) + " ns, n = 52, gamma_m in [10, 100] gamma_s: slope " +
                fmt("%.4f", slope)};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria()
{
    static const std::map<int, std::pair<const char*, std::function<Outcome()>>> table{
        {1, {"probability identity", identity}},
        {2, {"destructive-interference zeros", interference_zeros}},
        {3, {"Taylor approximants", taylor_approximants}},
        {4, {"Fano-parameter regimes", fano_regimes}},
        {5, {"design round trip", design_round_trip}},
        {6, {"q_max amplitude decay", qmax_decay}},
        {7, {"width monotonicity", width_monotonicity}},
        {8, {"analytic vs numeric Fano width", width_vs_numeric}},
        {9, {"oracle equivalence", oracle_equivalence}},
        {10, {"closed-form inversions", closed_form_inversions}},
        {11, {"large-gamma_m asymptote", large_gamma_m_slope}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty()) {
        for (const auto& [id, entry] : criteria()) {
            selected.push_back(id);
        }
    }
    bool all = true;
    for (int id : selected) {
        const auto it = criteria().find(id);
        if (it == criteria().end()) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %d (%s): %s: %s\n", id, it->second.first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
