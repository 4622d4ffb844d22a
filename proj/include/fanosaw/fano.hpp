#pragma once

// Resonance descriptors from the second-order Taylor expansion of the
// interference phase about the n-th destructive point,
//
//   e^{iωt_L} ≈ ½ t_L² (ω − ω_n)² − i t_L (ω − ω_n) − 1,   e^{iω_n t_L} = −1,
//
// which turns R_m into a Lorentzian and R_s into a Fano profile near ω_n.
//
// Index convention: ω_n = (2n + 1) π / t_L. These are the frequencies where
// the two IDT coupling points cancel (R_s = 0), the only points about which
// the expansion above is valid.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>

#include "fanosaw/error.hpp"
#include "fanosaw/model.hpp"

namespace fanosaw {

using ResonanceIndex = std::int64_t;

struct FanoProfile {
    ResonanceIndex n = 0;
    double omega_n = 0.0;    // destructive-interference frequency, rad/ns
    double delta_ep = 0.0;   // ω_e − ω_n, rad/ns
    double eta = 0.0;        // 2γ_mγ_s t_L² + 2(γ_s t_L + 1)²
    double eta_n = 0.0;      // sqrt(2γ_m[2γ_s t_L² Δ_ep² + γ_m η])
    double gamma_n = 0.0;    // resonance width η_n / η, rad/ns
    double omega_eff = 0.0;  // Lorentz centre, rad/ns
    double i_m = 0.0;        // Lorentz intensity 2γ_m² / η_n
    double d_s2 = 0.0;       // Fano intensity γ_mγ_s t_L² / η
    double q = 0.0;          // asymmetry parameter
    /// Signed peak-to-dip separation (peak minus dip); empty when Δ_ep = 0.
    std::optional<double> delta_omega;

    /// Position of the Fano zero, ω_eff − qΓ_n (equals omega_n).
    [[nodiscard]] double dip_frequency() const noexcept { return omega_eff - q * gamma_n; }
};

namespace detail {

inline void require_index(ResonanceIndex n)
{
    if (n < 0) {
        throw ValidationError("resonance index n must be >= 0");
    }
}

}  // namespace detail

[[nodiscard]] inline double periodic_frequency(ResonanceIndex n, double t_l)
{
    detail::require_index(n);
    detail::require_positive(t_l, "t_L");
    return (2.0 * static_cast<double>(n) + 1.0) * std::numbers::pi / t_l;
}

/// Index whose ω_n is closest to ω_e; exact ties go to the smaller index.
[[nodiscard]] inline ResonanceIndex nearest_index(const SystemParams& p)
{
    p.validate();
    const double x = p.omega_e * p.t_l / two_pi - 0.5;
    const auto lower = static_cast<ResonanceIndex>(std::floor(x));
    if (lower < 0) {
        return 0;
    }
    const double d_lower = std::abs(p.omega_e - periodic_frequency(lower, p.t_l));
    const double d_upper = std::abs(p.omega_e - periodic_frequency(lower + 1, p.t_l));
    // Both distances carry rounding from ω_e t_L / 2π; treat near-equality as a tie.
    const double tie_slack = 1e-9 * two_pi / p.t_l;
    return d_upper < d_lower - tie_slack ? lower + 1 : lower;
}

inline constexpr double alignment_ulps = 8.0;

[[nodiscard]] inline FanoProfile fano_descriptor(const SystemParams& p, ResonanceIndex n)
{
    p.validate();
    FanoProfile f;
    f.n = n;
    f.omega_n = periodic_frequency(n, p.t_l);
    f.delta_ep = p.omega_e - f.omega_n;
    // A detuning at the rounding level of ω_n is exact alignment.
    if (std::abs(f.delta_ep) <= alignment_ulps * std::numeric_limits<double>::epsilon() *
                                     std::max(p.omega_e, f.omega_n)) {
        f.delta_ep = 0.0;
    }

    const double t = p.t_l;
    const double f_s1 = p.gamma_s * t + 1.0;
    f.eta = 2.0 * p.gamma_m * p.gamma_s * t * t + 2.0 * f_s1 * f_s1;
    f.eta_n = std::sqrt(2.0 * p.gamma_m *
                        (2.0 * p.gamma_s * t * t * f.delta_ep * f.delta_ep + p.gamma_m * f.eta));
    f.gamma_n = f.eta_n / f.eta;
    f.omega_eff = f.omega_n + (2.0 / f.eta) * f.delta_ep * f_s1;
    f.i_m = 2.0 * p.gamma_m * p.gamma_m / f.eta_n;
    f.d_s2 = p.gamma_m * p.gamma_s * t * t / f.eta;
    f.q = (2.0 / f.eta_n) * f.delta_ep * f_s1;
    if (f.delta_ep != 0.0) {
        f.delta_omega = (f.delta_ep * f.delta_ep + p.gamma_m * p.gamma_m) / (f.delta_ep * f_s1);
    }
    return f;
}

/// q alone; the design solvers and sweeps all route through here.
[[nodiscard]] inline double fano_parameter(const SystemParams& p, ResonanceIndex n)
{
    return fano_descriptor(p, n).q;
}

[[nodiscard]] inline double lorentz_profile(const FanoProfile& f, double omega) noexcept
{
    const double x = omega - f.omega_eff;
    return f.i_m * f.gamma_n / (x * x + f.gamma_n * f.gamma_n);
}

[[nodiscard]] inline double fano_profile(const FanoProfile& f, double omega) noexcept
{
    const double reduced = (omega - f.omega_eff) / f.gamma_n;
    const double num = reduced + f.q;
    return f.d_s2 * num * num / (reduced * reduced + 1.0);
}

/// Lorentzian approximant of R_m about the n-th resonance.
[[nodiscard]] inline double lorentz_approx_rm(const SystemParams& p, ResonanceIndex n, double omega)
{
    return lorentz_profile(fano_descriptor(p, n), omega);
}

/// Fano approximant of R_s about the n-th resonance.
[[nodiscard]] inline double fano_approx_rs(const SystemParams& p, ResonanceIndex n, double omega)
{
    return fano_profile(fano_descriptor(p, n), omega);
}

/// Signed Fano width Δω = (Δ_ep² + γ_m²) / (Δ_ep (γ_s t_L + 1)), the distance
/// from the dip (ω_n) to the peak (ω_eff + Γ_n / q). Negative when the peak
/// lies below the dip.
[[nodiscard]] inline double fano_width(const SystemParams& p, ResonanceIndex n)
{
    const FanoProfile f = fano_descriptor(p, n);
    if (!f.delta_omega) {
        throw DomainError("Fano width undefined at exact alignment (Delta_ep = 0, q = 0)");
    }
    return *f.delta_omega;
}

}  // namespace fanosaw
