#pragma once

// JSON views of the library results. Frequencies and rates appear twice where
// useful: in rad/ns (suffix _rad_per_ns) and as ω/2π in GHz (suffix _GHz).
// Undefined values serialise as null.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "fanosaw/design.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/oracle.hpp"
#include "fanosaw/sweep.hpp"

namespace fanosaw::io {

using Json = nlohmann::json;

[[nodiscard]] inline Json number_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

[[nodiscard]] inline Json number_or_null(std::optional<double> v)
{
    return v ? number_or_null(*v) : Json(nullptr);
}

[[nodiscard]] inline Json params_json(const SystemParams& p)
{
    const LinearParams lin = to_linear(p);
    return Json{
        {"f_e_GHz", lin.f_e_ghz},
        {"gamma_m_over_2pi_GHz", lin.gamma_m_over_2pi_ghz},
        {"gamma_s_over_2pi_GHz", lin.gamma_s_over_2pi_ghz},
        {"t_L_ns", p.t_l},
    };
}

[[nodiscard]] inline Json fano_json(const FanoProfile& f)
{
    const auto ghz = [](double w) { return w / two_pi; };
    return Json{
        {"n", f.n},
        {"omega_n_GHz", ghz(f.omega_n)},
        {"delta_ep_GHz", ghz(f.delta_ep)},
        {"eta", f.eta},
        {"eta_n", f.eta_n},
        {"gamma_n_GHz", ghz(f.gamma_n)},
        {"omega_eff_GHz", ghz(f.omega_eff)},
        {"i_m", f.i_m},
        {"d_s2", f.d_s2},
        {"q", f.q},
        {"regime", std::string(to_string(classify_q(f.q)))},
        {"delta_omega_GHz", f.delta_omega ? Json(ghz(*f.delta_omega)) : Json(nullptr)},
    };
}

[[nodiscard]] inline Json design_json(const DesignResult& r)
{
    const bool is_rate = r.parameter_kind != DesignParameter::time_delay;
    Json j{
        {"parameter", std::string(to_string(r.parameter_kind))},
        {"solved_value", number_or_null(r.solved_value)},
        {"unit", is_rate ? "rad/ns" : "ns"},
        {"achieved_q", number_or_null(r.achieved_q)},
        {"residual", number_or_null(r.residual)},
        {"n", r.n},
        {"branch", r.branch},
        {"root_count", r.root_count},
        {"boundary_extremum", r.boundary_extremum},
        {"warnings", r.warnings},
    };
    if (is_rate) {
        j["solved_value_over_2pi_GHz"] = number_or_null(r.solved_value / two_pi);
    }
    return j;
}

/// Summary without the time series (those go to CSV).
[[nodiscard]] inline Json oracle_json(const OracleResult& r)
{
    return Json{
        {"channel_probs",
         Json{{"microwave_left", r.channel_probs[0]},
              {"microwave_right", r.channel_probs[1]},
              {"saw_left", r.channel_probs[2]},
              {"saw_right", r.channel_probs[3]}}},
        {"effective_R_m", r.effective_r_m},
        {"effective_R_s", r.effective_r_s},
        {"effective_T_m", r.effective_t_m},
        {"final_e_pop", r.final_e_pop},
        {"norm_drift", r.norm_drift},
        {"atom_relaxed", r.atom_relaxed},
        {"warnings", r.warnings},
    };
}

[[nodiscard]] inline Json oracle_config_json(const OracleConfig& c)
{
    return Json{
        {"n_modes_per_channel", c.n_modes_per_channel},
        {"band_halfwidth_rad_per_ns", c.band_halfwidth},
        {"dt_ns", c.dt},
        {"t_final_ns", c.t_final},
        {"pulse_center_GHz", c.pulse_center / two_pi},
        {"pulse_sigma_rad_per_ns", c.pulse_sigma},
        {"pulse_arrival_ns", c.arrival()},
        {"taper_fraction", c.taper_fraction},
        {"initial", c.initial == InitialState::excited_atom ? "excited_atom" : "incident_photon"},
        {"integrator", c.integrator == Integrator::rk4 ? "rk4" : "split4"},
    };
}

[[nodiscard]] inline Json axis_json(const SweepAxis& a)
{
    return Json{
        {"parameter", std::string(to_string(a.parameter))},
        {"lo", a.lo},
        {"hi", a.hi},
        {"count", a.count},
        {"spacing", std::string(to_string(a.spacing))},
    };
}

/// Axis values and cells in internal units (ns, rad/ns); regime cells as names.
[[nodiscard]] inline Json sweep_json(const SweepTable& t)
{
    Json values = Json::array();
    for (double v : t.values) {
        if (t.spec.quantity == SweepQuantity::regime && std::isfinite(v)) {
            values.push_back(std::string(to_string(static_cast<Regime>(static_cast<int>(v)))));
        } else {
            values.push_back(number_or_null(v));
        }
    }
    Json j{
        {"quantity", std::string(to_string(t.spec.quantity))},
        {"index_policy", std::string(to_string(t.spec.index_policy))},
        {"base_params", params_json(t.base)},
        {"axis1", axis_json(t.spec.axis1)},
        {"axis1_values", t.axis1},
        {"values", values},
        {"indices", t.indices},
        {"units", "ns for t_L, rad/ns for rates and frequencies"},
    };
    if (t.spec.index_policy == IndexPolicy::fixed) {
        j["fixed_n"] = t.spec.fixed_n;
    }
    if (t.spec.axis2) {
        j["axis2"] = axis_json(*t.spec.axis2);
        j["axis2_values"] = t.axis2;
    }
    return j;
}

}  // namespace fanosaw::io
