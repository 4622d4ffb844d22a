#pragma once

// Inverse design: time delays and coupling rates that realise a requested
// Fano shape. Numeric bracketing is the primary mechanism; the closed-form
// inversions are evaluated and then checked against it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fanosaw/error.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/roots.hpp"

namespace fanosaw {

enum class DesignParameter { time_delay, gamma_m, gamma_s };

[[nodiscard]] inline std::string_view to_string(DesignParameter k) noexcept
{
    switch (k) {
    case DesignParameter::time_delay: return "time_delay";
    case DesignParameter::gamma_m: return "gamma_m";
    case DesignParameter::gamma_s: return "gamma_s";
    }
    return "unknown";
}

struct DesignResult {
    double solved_value = 0.0;  // ns for time_delay, rad/ns for rates
    DesignParameter parameter_kind = DesignParameter::time_delay;
    double achieved_q = 0.0;
    double residual = 0.0;
    ResonanceIndex n = 0;
    std::string branch;
    std::size_t root_count = 1;     // roots seen in the bracket (smallest returned)
    bool boundary_extremum = false; // extremum search ended on a bracket edge
    std::vector<std::string> warnings;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct SolverOptions {
    double q_tol = 1e-9;
    double x_rel_tol = 1e-9;
    std::size_t scan_intervals = 512;
};

/// t_L window in which n is the index nearest ω_e.
[[nodiscard]] inline Bracket nearest_window(double omega_e, ResonanceIndex n)
{
    detail::require_index(n);
    detail::require_positive(omega_e, "omega_e");
    return {two_pi * static_cast<double>(n) / omega_e,
            two_pi * static_cast<double>(n + 1) / omega_e};
}

/// t_L that puts ω_n exactly on ω_e, i.e. q = 0.
[[nodiscard]] inline double alignment_delay(double omega_e, ResonanceIndex n)
{
    detail::require_index(n);
    detail::require_positive(omega_e, "omega_e");
    return (2.0 * static_cast<double>(n) + 1.0) * std::numbers::pi / omega_e;
}

namespace detail {

inline void require_bracket(const Bracket& b)
{
    require_positive(b.lo, "bracket.lo");
    require_positive(b.hi, "bracket.hi");
    if (!(b.lo < b.hi)) {
        throw ValidationError("bracket requires lo < hi");
    }
}

inline std::string format_range(double lo, double hi)
{
    std::ostringstream os;
    os.precision(6);
    os << '[' << lo << ", " << hi << ']';
    return os.str();
}

}  // namespace detail

[[nodiscard]] inline double max_abs_q(const SystemParams& base, ResonanceIndex n, Bracket bracket,
                                      const SolverOptions& opt);

/// Time delay at which the n-th resonance has asymmetry q_target. q_target = 0
/// is answered analytically (Δ_ep = 0); other targets by bisection on the
/// smallest sign change of q(t_L) − q_target inside the bracket.
[[nodiscard]] inline DesignResult solve_tl_for_q(const SystemParams& base, ResonanceIndex n,
                                                 double q_target, Bracket bracket,
                                                 const SolverOptions& opt = {})
{
    detail::require_index(n);
    detail::require_bracket(bracket);
    detail::require_finite(q_target, "q_target");
    base.with_t_l(bracket.lo).validate();

    auto q_at = [&](double t) { return fano_parameter(base.with_t_l(t), n); };

    DesignResult r;
    r.parameter_kind = DesignParameter::time_delay;
    r.n = n;

    if (q_target == 0.0) {
        const double t = alignment_delay(base.omega_e, n);
        if (t < bracket.lo || t > bracket.hi) {
            throw NoSolutionError("q = 0 requires t_L = " + std::to_string(t) +
                                  " ns, outside bracket " +
                                  detail::format_range(bracket.lo, bracket.hi));
        }
        r.solved_value = t;
        r.achieved_q = q_at(t);
        r.residual = std::abs(r.achieved_q);
        r.branch = "alignment";
        return r;
    }

    auto f = [&](double t) { return q_at(t) - q_target; };
    const auto changes = roots::sign_changes(f, bracket.lo, bracket.hi, opt.scan_intervals);
    if (changes.empty()) {
        double q_min = std::numeric_limits<double>::infinity();
        double q_max = -q_min;
        const double step = (bracket.hi - bracket.lo) / static_cast<double>(opt.scan_intervals);
        for (std::size_t i = 0; i <= opt.scan_intervals; ++i) {
            const double q = q_at(bracket.lo + step * static_cast<double>(i));
            q_min = std::min(q_min, q);
            q_max = std::max(q_max, q);
        }
        throw NoSolutionError("no t_L in " + detail::format_range(bracket.lo, bracket.hi) +
                              " gives q = " + std::to_string(q_target) + "; q spans " +
                              detail::format_range(q_min, q_max) + ", max attainable |q| = " +
                              std::to_string(max_abs_q(base, n, bracket, opt)));
    }
    const auto [lo, hi] = changes.front();
    r.solved_value = lo == hi ? lo : roots::bisect(f, lo, hi);
    r.achieved_q = q_at(r.solved_value);
    r.residual = std::abs(r.achieved_q - q_target);
    r.root_count = changes.size();
    r.branch = "bisection";
    if (r.root_count > 1) {
        r.warnings.push_back(std::to_string(r.root_count) +
                             " roots in bracket; returned the smallest t_L");
    }
    if (r.residual > opt.q_tol) {
        throw NoSolutionError("bisection did not reach the q tolerance (residual " +
                              std::to_string(r.residual) + ")");
    }
    return r;
}

/// Relative stationarity of a scalar function at x: |f'(x)| x / |f(x)| from a
/// central difference with step h = 1e-6 x.
template <class F>
[[nodiscard]] double relative_slope(F&& f, double x)
{
    const double h = 1e-6 * std::abs(x);
    const double fx = f(x);
    const double d = (f(x + h) - f(x - h)) / (2.0 * h);
    return fx == 0.0 ? std::abs(d) : std::abs(d) * std::abs(x) / std::abs(fx);
}

/// t_L maximising |q| of the n-th resonance inside the bracket. A coarse scan
/// locates the best sample; interior maxima are refined by golden section,
/// edge maxima are returned with boundary_extremum set.
[[nodiscard]] inline DesignResult solve_tl_qmax(const SystemParams& base, ResonanceIndex n,
                                                Bracket bracket, const SolverOptions& opt = {})
{
    detail::require_index(n);
    detail::require_bracket(bracket);
    base.with_t_l(bracket.lo).validate();

    auto abs_q = [&](double t) { return std::abs(fano_parameter(base.with_t_l(t), n)); };

    const std::size_t m = std::max<std::size_t>(opt.scan_intervals, 8);
    const double step = (bracket.hi - bracket.lo) / static_cast<double>(m);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i <= m; ++i) {
        const double t = i == m ? bracket.hi : bracket.lo + step * static_cast<double>(i);
        const double v = abs_q(t);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    DesignResult r;
    r.parameter_kind = DesignParameter::time_delay;
    r.n = n;
    if (best == 0 || best == m) {
        const double t = best == 0 ? bracket.lo : bracket.hi;
        const double inward = best == 0 ? t + 1e-6 * t : t - 1e-6 * t;
        // A genuine edge maximum still falls off when moving inward.
        if (abs_q(inward) <= abs_q(t)) {
            r.solved_value = t;
            r.boundary_extremum = true;
            r.branch = "boundary";
            r.warnings.push_back("|q| is monotone towards the bracket edge; returned the better endpoint");
        }
    }
    if (!r.boundary_extremum) {
        const double lo = bracket.lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
        const double hi = std::min(bracket.hi, bracket.lo + step * static_cast<double>(best + 1));
        r.solved_value = roots::golden_max(abs_q, lo, hi, opt.x_rel_tol);
        r.branch = "golden-section";
    }
    r.achieved_q = fano_parameter(base.with_t_l(r.solved_value), n);
    r.residual = r.boundary_extremum ? 0.0 : relative_slope(abs_q, r.solved_value);
    return r;
}

/// Largest |q| of the n-th resonance over the bracket.
[[nodiscard]] inline double max_abs_q(const SystemParams& base, ResonanceIndex n, Bracket bracket,
                                      const SolverOptions& opt)
{
    return std::abs(solve_tl_qmax(base, n, bracket, opt).achieved_q);
}

/// Raw closed-form root of ∂q/∂γ_m = 0,
///   γ_m = [sqrt(f_s1⁴ − 3 t_L² Δ_ep² f_s0²) − f_s1²] / (3 t_L f_s0),
/// with f_s0 = γ_s t_L and f_s1 = f_s0 + 1. Empty when the discriminant is
/// negative. γ_m in `p` is ignored.
[[nodiscard]] inline std::optional<double> lorentz_stationary_root(const SystemParams& p,
                                                                   ResonanceIndex n)
{
    detail::require_positive(p.gamma_s, "gamma_s");
    detail::require_positive(p.t_l, "t_L");
    detail::require_positive(p.omega_e, "omega_e");
    const double t = p.t_l;
    const double delta = p.omega_e - periodic_frequency(n, t);
    const double f_s0 = p.gamma_s * t;
    const double f_s1 = f_s0 + 1.0;
    const double f_s1_sq = f_s1 * f_s1;
    const double disc = f_s1_sq * f_s1_sq - 3.0 * t * t * delta * delta * f_s0 * f_s0;
    if (disc < 0.0) {
        return std::nullopt;
    }
    return (std::sqrt(disc) - f_s1_sq) / (3.0 * t * f_s0);
}

/// Microwave coupling at which |q| of the n-th resonance is stationary
/// (Lorentz-like limit). Throws NoSolutionError for a negative discriminant
/// or a non-positive root.
[[nodiscard]] inline DesignResult gamma_m_for_lorentz(const SystemParams& p, ResonanceIndex n)
{
    detail::require_index(n);
    const auto root = lorentz_stationary_root(p, n);
    if (!root) {
        throw NoSolutionError("gamma_m^Lor: negative discriminant, no real solution");
    }
    if (!(*root > 0.0)) {
        throw NoSolutionError("gamma_m^Lor = " + std::to_string(*root) +
                              " rad/ns is not a physical (positive) coupling rate");
    }
    DesignResult r;
    r.parameter_kind = DesignParameter::gamma_m;
    r.n = n;
    r.solved_value = *root;
    r.achieved_q = fano_parameter(p.with_gamma_m(*root), n);
    r.residual = relative_slope(
        [&](double g) { return fano_parameter(p.with_gamma_m(g), n); }, *root);
    r.branch = "closed-form";
    if (r.residual > 1e-6) {
        r.warnings.push_back("finite-difference stationarity check failed");
    }
    return r;
}

/// Relative residual of the |q| = 1 condition
///   Δ_ep² (η − 4 t_L² γ_m γ_s) = η γ_m²,
/// normalised by η γ_m².
[[nodiscard]] inline double unit_q_residual(const SystemParams& p, ResonanceIndex n)
{
    const FanoProfile f = fano_descriptor(p, n);
    const double t = p.t_l;
    const double lhs = f.delta_ep * f.delta_ep * (f.eta - 4.0 * t * t * p.gamma_m * p.gamma_s);
    const double rhs = f.eta * p.gamma_m * p.gamma_m;
    return std::abs(lhs - rhs) / rhs;
}

/// Cardano root of the |q| = 1 cubic in γ_m,
///   γ_s t_L² γ³ + f_s1² γ² + Δ_ep² γ_s t_L² γ − Δ_ep² f_s1² = 0,
/// on the branch
///   γ = { (1+√3 i) Δ₀ / h + (1−√3 i) h − 2 f_s1² } / (6 t_L f_s0),
///   Δ₀ = f_s1⁴ − 3 (t_L Δ_ep f_s0)²,  h = (3√f_s + g_s + 1)^{1/3},
/// evaluated with principal complex roots.
[[nodiscard]] inline std::complex<double> gamma_m_fano_closed_form(const SystemParams& p,
                                                                   ResonanceIndex n)
{
    detail::require_positive(p.gamma_s, "gamma_s");
    detail::require_positive(p.t_l, "t_L");
    const double t = p.t_l;
    const double delta = p.omega_e - periodic_frequency(n, t);
    const double f0 = p.gamma_s * t;
    const double f1 = f0 + 1.0;
    const double x = t * delta * f0;   // T Δ_ep f_s0
    const double td2 = t * t * delta * delta;

    const double f1_2 = f1 * f1;
    const double f1_4 = f1_2 * f1_2;
    const double x2 = x * x;
    const double f_s = 3.0 * x2 * x2 * x2 + 33.0 * std::pow(x * f1, 4) - 3.0 * std::pow(x * f1_4, 2);
    const double f0_2 = f0 * f0;
    const double f0_3 = f0_2 * f0;
    const double f0_4 = f0_2 * f0_2;
    const double g_s = f0_4 * f0_2 + 6.0 * f0_4 * f0 + 3.0 * (5.0 - 6.0 * td2) * (f0_4 + f0_2) +
                       4.0 * (5.0 - 9.0 * td2) * f0_3 + 6.0 * f0;

    using namespace std::complex_literals;
    const std::complex<double> root_fs = std::sqrt(std::complex<double>(f_s, 0.0));
    const std::complex<double> h = std::pow(3.0 * root_fs + g_s + 1.0, 1.0 / 3.0);
    const double delta0 = f1_4 - 3.0 * x2;
    const std::complex<double> sqrt3i = std::sqrt(3.0) * 1.0i;
    return ((1.0 + sqrt3i) / h * delta0 + (1.0 - sqrt3i) * h - 2.0 * f1_2) / (6.0 * t * f0);
}

/// γ_m with |q| = 1 by bisection on |q(γ_m)| − 1. |q| falls monotonically
/// from +∞ (γ_m → 0) to 0, so the root is unique when Δ_ep ≠ 0.
[[nodiscard]] inline double gamma_m_fano_numeric(const SystemParams& p, ResonanceIndex n)
{
    detail::require_positive(p.t_l, "t_L");
    detail::require_non_negative(p.gamma_s, "gamma_s");
    const double delta = p.omega_e - periodic_frequency(n, p.t_l);
    if (delta == 0.0) {
        throw NoSolutionError("|q| = 1 impossible at exact alignment (q = 0 for every gamma_m)");
    }
    auto f = [&](double g) { return std::abs(fano_parameter(p.with_gamma_m(g), n)) - 1.0; };
    double lo = std::abs(delta) * 1e-3;
    double hi = std::abs(delta) * 2.0;
    for (int i = 0; i < 200 && f(lo) <= 0.0; ++i) {
        lo *= 0.5;
    }
    for (int i = 0; i < 200 && f(hi) >= 0.0; ++i) {
        hi *= 2.0;
    }
    if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
        throw NoSolutionError("could not bracket |q| = 1 in gamma_m");
    }
    return roots::bisect(f, lo, hi);
}

/// Microwave coupling that makes the n-th resonance Fano-like (|q| = 1).
/// The closed form is accepted when it is real to 1e-9 relative, positive, and
/// satisfies the |q| = 1 condition to 1e-6; otherwise the numeric path is used.
[[nodiscard]] inline DesignResult gamma_for_fano(const SystemParams& p, ResonanceIndex n)
{
    detail::require_index(n);
    detail::require_positive(p.omega_e, "omega_e");
    detail::require_positive(p.t_l, "t_L");
    detail::require_non_negative(p.gamma_s, "gamma_s");
    const double delta = p.omega_e - periodic_frequency(n, p.t_l);
    if (delta == 0.0) {
        throw NoSolutionError("|q| = 1 impossible at exact alignment (q = 0 for every gamma_m)");
    }

    DesignResult r;
    r.parameter_kind = DesignParameter::gamma_m;
    r.n = n;

    if (p.gamma_s > 0.0) {
        const std::complex<double> z = gamma_m_fano_closed_form(p, n);
        const bool real_enough = std::abs(z.imag()) <= 1e-9 * std::abs(z.real());
        if (real_enough && z.real() > 0.0) {
            const double residual = unit_q_residual(p.with_gamma_m(z.real()), n);
            if (residual <= 1e-6) {
                r.solved_value = z.real();
                r.residual = residual;
                r.branch = "closed-form";
            }
        }
    }
    if (r.branch.empty()) {
        r.solved_value = gamma_m_fano_numeric(p, n);
        r.residual = unit_q_residual(p.with_gamma_m(r.solved_value), n);
        r.branch = "numeric-fallback";
    }
    r.achieved_q = fano_parameter(p.with_gamma_m(r.solved_value), n);
    return r;
}

enum class Regime { lorentz_like, fano_like, quasi_lorentz };

[[nodiscard]] inline std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::lorentz_like: return "lorentz-like";
    case Regime::fano_like: return "fano-like";
    case Regime::quasi_lorentz: return "quasi-lorentz";
    }
    return "unknown";
}

inline constexpr double lorentz_q_threshold = 3.0;
inline constexpr double fano_q_threshold = 0.5;

[[nodiscard]] inline Regime classify_q(double q) noexcept
{
    const double a = std::abs(q);
    if (a >= lorentz_q_threshold) {
        return Regime::lorentz_like;
    }
    if (a >= fano_q_threshold) {
        return Regime::fano_like;
    }
    return Regime::quasi_lorentz;
}

[[nodiscard]] inline Regime classify_regime(const SystemParams& p, ResonanceIndex n)
{
    return classify_q(fano_parameter(p, n));
}

/// One point of the Fano-width-versus-delay track: for index n, the t_L in
/// its nearest-ω_e window where q = +1 when reachable, else where q peaks.
struct TrackPoint {
    ResonanceIndex n = 0;
    double t_l = 0.0;
    double q = 0.0;
    double gamma_n = 0.0;
    double delta_omega = 0.0;
    bool unit_q = false;
};

[[nodiscard]] inline std::vector<TrackPoint> fano_width_track(const SystemParams& base,
                                                              ResonanceIndex n_first,
                                                              ResonanceIndex n_last,
                                                              const SolverOptions& opt = {})
{
    if (n_last < n_first) {
        throw ValidationError("track requires n_first <= n_last");
    }
    std::vector<TrackPoint> out;
    for (ResonanceIndex n = n_first; n <= n_last; ++n) {
        const Bracket window = nearest_window(base.omega_e, n);
        const Bracket upper{alignment_delay(base.omega_e, n), window.hi};
        TrackPoint pt;
        pt.n = n;
        if (std::abs(fano_parameter(base.with_t_l(upper.hi), n)) > 1.0) {
            pt.t_l = solve_tl_for_q(base, n, 1.0, upper, opt).solved_value;
            pt.unit_q = true;
        } else {
            pt.t_l = solve_tl_qmax(base, n, upper, opt).solved_value;
        }
        const FanoProfile f = fano_descriptor(base.with_t_l(pt.t_l), n);
        pt.q = f.q;
        pt.gamma_n = f.gamma_n;
        pt.delta_omega = f.delta_omega.value_or(std::numeric_limits<double>::quiet_NaN());
        out.push_back(pt);
    }
    return out;
}

}  // namespace fanosaw
