#pragma once

// Physical parameters of the giant atom and the unit conventions shared by
// every other header.
//
// Internal units: angular frequencies and rates in rad/ns, times in ns, so
// that omega * t is a phase in radians. User-facing values (config files,
// CSV headers) use linear frequencies in GHz; conversion happens only in
// params_from_linear() and to_linear().

#include <cmath>
#include <numbers>
#include <string>

#include "fanosaw/error.hpp"

namespace fanosaw {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct SystemParams {
    double omega_e = 0.0;  // qubit transition, rad/ns
    double gamma_m = 0.0;  // microwave-waveguide coupling rate, rad/ns
    double gamma_s = 0.0;  // acoustic (IDT) coupling rate, rad/ns
    double t_l = 0.0;      // delay between the two IDT coupling points, ns

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// True when both coupling rates are below omega_e / 10. Formulas stay
    /// evaluable outside this regime; callers may warn.
    [[nodiscard]] bool weak_coupling() const noexcept
    {
        return gamma_m < omega_e / 10.0 && gamma_s < omega_e / 10.0;
    }

    [[nodiscard]] SystemParams with_t_l(double t) const noexcept
    {
        SystemParams p = *this;
        p.t_l = t;
        return p;
    }
    [[nodiscard]] SystemParams with_gamma_m(double g) const noexcept
    {
        SystemParams p = *this;
        p.gamma_m = g;
        return p;
    }
    [[nodiscard]] SystemParams with_gamma_s(double g) const noexcept
    {
        SystemParams p = *this;
        p.gamma_s = g;
        return p;
    }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Linear-frequency view of SystemParams (GHz, ns).
struct LinearParams {
    double f_e_ghz = 0.0;
    double gamma_m_over_2pi_ghz = 0.0;
    double gamma_s_over_2pi_ghz = 0.0;
    double t_l_ns = 0.0;
};

/// IDT geometry: coupling-point separation and SAW group velocity.
struct Geometry {
    double length_um = 0.0;         // L, µm
    double v_gs_um_per_ns = 0.0;    // SAW group velocity, µm/ns
};

namespace detail {

inline void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

inline void require_positive(double v, const char* name)
{
    require_finite(v, name);
    if (!(v > 0.0)) {
        throw ValidationError(std::string(name) + " must be positive");
    }
}

inline void require_non_negative(double v, const char* name)
{
    require_finite(v, name);
    if (v < 0.0) {
        throw ValidationError(std::string(name) + " must be non-negative");
    }
}

}  // namespace detail

inline void SystemParams::validate() const
{
    detail::require_positive(omega_e, "omega_e");
    detail::require_positive(gamma_m, "gamma_m");
    detail::require_non_negative(gamma_s, "gamma_s");
    detail::require_positive(t_l, "t_L");
}

/// Build SystemParams from the linear-frequency convention (f_e and γ/2π in
/// GHz, t_L in ns). gs_over_2pi may be zero.
[[nodiscard]] inline SystemParams params_from_linear(double f_e_ghz, double gm_over_2pi_ghz,
                                                     double gs_over_2pi_ghz, double t_l_ns)
{
    detail::require_positive(f_e_ghz, "f_e");
    detail::require_positive(gm_over_2pi_ghz, "gamma_m");
    detail::require_non_negative(gs_over_2pi_ghz, "gamma_s");
    detail::require_positive(t_l_ns, "t_L");
    SystemParams p{two_pi * f_e_ghz, two_pi * gm_over_2pi_ghz, two_pi * gs_over_2pi_ghz, t_l_ns};
    p.validate();
    return p;
}

[[nodiscard]] inline SystemParams params_from_linear(const LinearParams& lin)
{
    return params_from_linear(lin.f_e_ghz, lin.gamma_m_over_2pi_ghz, lin.gamma_s_over_2pi_ghz,
                              lin.t_l_ns);
}

[[nodiscard]] inline LinearParams to_linear(const SystemParams& p) noexcept
{
    return {p.omega_e / two_pi, p.gamma_m / two_pi, p.gamma_s / two_pi, p.t_l};
}

/// t_L = L / v_gs in ns.
[[nodiscard]] inline double time_delay(const Geometry& g)
{
    detail::require_finite(g.length_um, "L");
    detail::require_finite(g.v_gs_um_per_ns, "v_gs");
    if (g.v_gs_um_per_ns == 0.0) {
        throw DomainError("v_gs must be non-zero (t_L = L / v_gs)");
    }
    detail::require_positive(g.length_um, "L");
    detail::require_positive(g.v_gs_um_per_ns, "v_gs");
    return g.length_um / g.v_gs_um_per_ns;
}

}  // namespace fanosaw
