#pragma once

// Exact long-time scattering probabilities for a single microwave photon
// incident on the giant atom:
//
//   D(ω)  = γ_m + (1 + e^{iωt_L}) γ_s − i(ω − ω_e)
//   R_m   = γ_m² / |D|²
//   R_s   = T_s = γ_m γ_s [cos(ωt_L) + 1] / |D|²      (each SAW direction)
//   T_m   = 1 − R_m − 2 R_s

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "fanosaw/error.hpp"
#include "fanosaw/model.hpp"

namespace fanosaw {

/// Probabilities per probe frequency, aligned with `omega` (rad/ns).
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> r_m;
    std::vector<double> r_s;
    std::vector<double> t_m;

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
    [[nodiscard]] bool empty() const noexcept { return omega.empty(); }
};

/// Tolerance of the R_m + T_m + 2R_s = 1 identity and of the [0, 1] clamp.
inline constexpr double probability_slack = 1e-12;

[[nodiscard]] inline std::complex<double> scattering_denominator(const SystemParams& p,
                                                                 double omega) noexcept
{
    using namespace std::complex_literals;
    const std::complex<double> phase = std::polar(1.0, omega * p.t_l);
    return p.gamma_m + (1.0 + phase) * p.gamma_s - 1.0i * (omega - p.omega_e);
}

[[nodiscard]] inline double reflect_microwave(const SystemParams& p, double omega) noexcept
{
    return p.gamma_m * p.gamma_m / std::norm(scattering_denominator(p, omega));
}

[[nodiscard]] inline double scatter_saw(const SystemParams& p, double omega) noexcept
{
    const double interference = std::cos(omega * p.t_l) + 1.0;
    return p.gamma_m * p.gamma_s * interference / std::norm(scattering_denominator(p, omega));
}

namespace detail {

inline double checked_transmission(double r_m, double r_s)
{
    const double t = 1.0 - r_m - 2.0 * r_s;
    if (t < -probability_slack || t > 1.0 + probability_slack) {
        throw InternalConsistencyError("T_m = " + std::to_string(t) + " outside [0, 1]");
    }
    if (t < 0.0) {
        return 0.0;
    }
    if (t > 1.0) {
        return 1.0;
    }
    return t;
}

}  // namespace detail

[[nodiscard]] inline double transmit_microwave(const SystemParams& p, double omega)
{
    return detail::checked_transmission(reflect_microwave(p, omega), scatter_saw(p, omega));
}

/// Uniform grid of n_points frequencies including both endpoints.
[[nodiscard]] inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n_points)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ValidationError("grid requires finite omega_min < omega_max");
    }
    if (n_points < 2) {
        throw ValidationError("grid requires n_points >= 2");
    }
    std::vector<double> grid(n_points);
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    grid.back() = hi;
    return grid;
}

[[nodiscard]] inline Spectrum evaluate_spectrum(const SystemParams& p, std::vector<double> omega)
{
    p.validate();
    Spectrum s;
    s.r_m.reserve(omega.size());
    s.r_s.reserve(omega.size());
    s.t_m.reserve(omega.size());
    for (const double w : omega) {
        const double rm = reflect_microwave(p, w);
        const double rs = scatter_saw(p, w);
        s.r_m.push_back(rm);
        s.r_s.push_back(rs);
        s.t_m.push_back(detail::checked_transmission(rm, rs));
    }
    s.omega = std::move(omega);
    return s;
}

[[nodiscard]] inline Spectrum spectrum_grid(const SystemParams& p, double omega_min,
                                            double omega_max, std::size_t n_points)
{
    return evaluate_spectrum(p, uniform_grid(omega_min, omega_max, n_points));
}

}  // namespace fanosaw
