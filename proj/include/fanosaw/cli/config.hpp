#pragma once

// Run configuration: one JSON document with a "command" field, a "params"
// object in linear-frequency units (GHz, ns) and one optional section per
// command. Command-line flags are merged into the same document before
// parsing, so both routes share one set of names and checks.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanosaw/design.hpp"
#include "fanosaw/error.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/oracle.hpp"
#include "fanosaw/sweep.hpp"

namespace fanosaw::cli {

using Json = nlohmann::json;

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"spectrum", "fano", "design", "oracle", "sweep"};
    return names;
}

struct OutputPaths {
    std::optional<std::string> csv;
    std::optional<std::string> json;
    std::optional<std::string> svg;
    bool stdout_json = false;
};

struct SpectrumOptions {
    std::optional<double> f_min_ghz;
    std::optional<double> f_max_ghz;
    std::size_t points = 2001;
    std::vector<ResonanceIndex> approx_n;
};

struct FanoOptions {
    std::vector<ResonanceIndex> indices;  // empty: nearest index only
};

enum class DesignMode { q, qmax, lorentz, fano, track };

struct DesignOptions {
    DesignMode mode = DesignMode::q;
    std::vector<double> targets;
    std::vector<ResonanceIndex> indices;  // empty: nearest index of params
    std::optional<double> t_lo_ns;
    std::optional<double> t_hi_ns;
    std::optional<ResonanceIndex> n_first;
    std::optional<ResonanceIndex> n_last;
    SolverOptions solver;
};

enum class OracleMode { single, compare, decay };

struct OracleOptions {
    OracleMode mode = OracleMode::compare;
    std::optional<double> pulse_center_ghz;
    std::optional<double> pulse_sigma;  // rad/ns
    std::optional<std::size_t> n_modes;
    std::optional<double> band_halfwidth;  // rad/ns
    std::optional<double> dt;              // ns
    std::optional<double> t_final;         // ns
    std::optional<double> pulse_arrival;   // ns
    std::optional<double> taper;
    Integrator integrator = Integrator::split4;
    std::size_t points = 21;
    std::optional<double> f_min_ghz;
    std::optional<double> f_max_ghz;
    bool check_convergence = false;
    std::optional<std::string> comparison_csv;
};

struct SweepOptions {
    SweepSpec spec;  // internal units
    bool valid = false;
};

struct RunConfig {
    std::string command;
    LinearParams params;
    OutputPaths output;
    SpectrumOptions spectrum;
    FanoOptions fano;
    DesignOptions design;
    OracleOptions oracle;
    SweepOptions sweep;

    [[nodiscard]] SystemParams system() const { return params_from_linear(params); }
};

namespace detail {

inline void require_keys(const Json& obj, const std::string& where,
                         const std::set<std::string>& allowed)
{
    if (!obj.is_object()) {
        throw ValidationError("'" + where + "' must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            std::string list;
            for (const auto& a : allowed) {
                list += (list.empty() ? "" : ", ") + a;
            }
            throw ValidationError("unknown key '" + key + "' in '" + where + "'; expected one of: " +
                                  list);
        }
    }
}

template <class T>
T get(const Json& obj, const std::string& key, const std::string& where)
{
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("'" + where + "." + key + "' has the wrong type");
    }
}

template <class T>
void read(const Json& obj, const std::string& key, const std::string& where, T& out)
{
    if (obj.contains(key) && !obj.at(key).is_null()) {
        out = get<T>(obj, key, where);
    }
}

template <class T>
void read(const Json& obj, const std::string& key, const std::string& where, std::optional<T>& out)
{
    if (obj.contains(key) && !obj.at(key).is_null()) {
        out = get<T>(obj, key, where);
    }
}

inline SweepAxis parse_axis(const Json& a, const std::string& where)
{
    require_keys(a, where, {"parameter", "lo", "hi", "count", "spacing"});
    for (const char* k : {"parameter", "lo", "hi", "count"}) {
        if (!a.contains(k)) {
            throw ValidationError("'" + where + "' needs '" + k + "'");
        }
    }
    SweepAxis axis;
    axis.parameter = parse_sweep_parameter(get<std::string>(a, "parameter", where));
    axis.lo = get<double>(a, "lo", where);
    axis.hi = get<double>(a, "hi", where);
    const auto count = get<std::int64_t>(a, "count", where);
    if (count < 0) {
        throw ValidationError("'" + where + ".count' must be non-negative");
    }
    axis.count = static_cast<std::size_t>(count);
    if (a.contains("spacing")) {
        axis.spacing = parse_spacing(get<std::string>(a, "spacing", where));
    }
    // User units: ns for t_L, GHz (ω/2π) for everything else.
    if (axis.parameter != SweepParameter::t_l) {
        axis.lo *= two_pi;
        axis.hi *= two_pi;
    }
    return axis;
}

inline DesignMode parse_design_mode(const std::string& s)
{
    if (s == "q") return DesignMode::q;
    if (s == "qmax") return DesignMode::qmax;
    if (s == "lorentz") return DesignMode::lorentz;
    if (s == "fano") return DesignMode::fano;
    if (s == "track") return DesignMode::track;
    throw ValidationError("unknown design mode '" + s + "'; valid: q, qmax, lorentz, fano, track");
}

inline OracleMode parse_oracle_mode(const std::string& s)
{
    if (s == "single") return OracleMode::single;
    if (s == "compare") return OracleMode::compare;
    if (s == "decay") return OracleMode::decay;
    throw ValidationError("unknown oracle mode '" + s + "'; valid: single, compare, decay");
}

}  // namespace detail

/// Parses a merged configuration document. Unknown keys are rejected so that
/// typos do not silently fall back to defaults.
[[nodiscard]] inline RunConfig parse_run_config(const Json& doc)
{
    using detail::read;
    detail::require_keys(doc, "config",
                         {"command", "params", "output", "spectrum", "fano", "design", "oracle",
                          "sweep"});
    RunConfig cfg;
    if (!doc.contains("command")) {
        throw ValidationError("no command given; expected one of spectrum, fano, design, oracle, sweep");
    }
    cfg.command = detail::get<std::string>(doc, "command", "config");
    if (std::find(command_names().begin(), command_names().end(), cfg.command) ==
        command_names().end()) {
        throw ValidationError("unknown command '" + cfg.command +
                              "'; expected one of spectrum, fano, design, oracle, sweep");
    }

    const Json params = doc.value("params", Json::object());
    detail::require_keys(params, "params",
                         {"f_e_GHz", "gamma_m_over_2pi_GHz", "gamma_s_over_2pi_GHz", "t_L_ns",
                          "length_um", "v_gs_um_per_ns"});
    for (const char* k : {"f_e_GHz", "gamma_m_over_2pi_GHz", "gamma_s_over_2pi_GHz"}) {
        if (!params.contains(k)) {
            throw ValidationError(std::string("params.") + k + " is required");
        }
    }
    cfg.params.f_e_ghz = detail::get<double>(params, "f_e_GHz", "params");
    cfg.params.gamma_m_over_2pi_ghz = detail::get<double>(params, "gamma_m_over_2pi_GHz", "params");
    cfg.params.gamma_s_over_2pi_ghz = detail::get<double>(params, "gamma_s_over_2pi_GHz", "params");
    const bool has_geometry = params.contains("length_um") || params.contains("v_gs_um_per_ns");
    if (params.contains("t_L_ns") && has_geometry) {
        throw ValidationError("give either params.t_L_ns or the IDT geometry, not both");
    }
    if (has_geometry) {
        Geometry g;
        g.length_um = detail::get<double>(params, "length_um", "params");
        g.v_gs_um_per_ns = detail::get<double>(params, "v_gs_um_per_ns", "params");
        cfg.params.t_l_ns = time_delay(g);
    } else if (params.contains("t_L_ns")) {
        cfg.params.t_l_ns = detail::get<double>(params, "t_L_ns", "params");
    } else {
        throw ValidationError("params.t_L_ns (or length_um and v_gs_um_per_ns) is required");
    }
    (void)cfg.system();  // validates

    const Json out = doc.value("output", Json::object());
    detail::require_keys(out, "output", {"csv", "json", "svg", "stdout_json"});
    read(out, "csv", "output", cfg.output.csv);
    read(out, "json", "output", cfg.output.json);
    read(out, "svg", "output", cfg.output.svg);
    read(out, "stdout_json", "output", cfg.output.stdout_json);

    const Json sp = doc.value("spectrum", Json::object());
    detail::require_keys(sp, "spectrum", {"f_min_GHz", "f_max_GHz", "points", "approx_n"});
    read(sp, "f_min_GHz", "spectrum", cfg.spectrum.f_min_ghz);
    read(sp, "f_max_GHz", "spectrum", cfg.spectrum.f_max_ghz);
    read(sp, "points", "spectrum", cfg.spectrum.points);
    read(sp, "approx_n", "spectrum", cfg.spectrum.approx_n);

    const Json fa = doc.value("fano", Json::object());
    detail::require_keys(fa, "fano", {"indices"});
    read(fa, "indices", "fano", cfg.fano.indices);

    const Json de = doc.value("design", Json::object());
    detail::require_keys(de, "design",
                         {"mode", "targets", "indices", "t_lo_ns", "t_hi_ns", "n_first", "n_last",
                          "q_tol", "x_rel_tol", "scan_intervals"});
    if (de.contains("mode")) {
        cfg.design.mode = detail::parse_design_mode(detail::get<std::string>(de, "mode", "design"));
    }
    read(de, "targets", "design", cfg.design.targets);
    read(de, "indices", "design", cfg.design.indices);
    read(de, "t_lo_ns", "design", cfg.design.t_lo_ns);
    read(de, "t_hi_ns", "design", cfg.design.t_hi_ns);
    read(de, "n_first", "design", cfg.design.n_first);
    read(de, "n_last", "design", cfg.design.n_last);
    read(de, "q_tol", "design", cfg.design.solver.q_tol);
    read(de, "x_rel_tol", "design", cfg.design.solver.x_rel_tol);
    read(de, "scan_intervals", "design", cfg.design.solver.scan_intervals);

    const Json orc = doc.value("oracle", Json::object());
    detail::require_keys(orc, "oracle",
                         {"mode", "pulse_center_GHz", "pulse_sigma", "n_modes", "band_halfwidth",
                          "dt", "t_final", "pulse_arrival", "taper", "integrator", "points",
                          "f_min_GHz", "f_max_GHz", "check_convergence", "comparison_csv"});
    if (orc.contains("mode")) {
        cfg.oracle.mode = detail::parse_oracle_mode(detail::get<std::string>(orc, "mode", "oracle"));
    }
    read(orc, "pulse_center_GHz", "oracle", cfg.oracle.pulse_center_ghz);
    read(orc, "pulse_sigma", "oracle", cfg.oracle.pulse_sigma);
    read(orc, "n_modes", "oracle", cfg.oracle.n_modes);
    read(orc, "band_halfwidth", "oracle", cfg.oracle.band_halfwidth);
    read(orc, "dt", "oracle", cfg.oracle.dt);
    read(orc, "t_final", "oracle", cfg.oracle.t_final);
    read(orc, "pulse_arrival", "oracle", cfg.oracle.pulse_arrival);
    read(orc, "taper", "oracle", cfg.oracle.taper);
    if (orc.contains("integrator")) {
        const auto name = detail::get<std::string>(orc, "integrator", "oracle");
        if (name == "split4") {
            cfg.oracle.integrator = Integrator::split4;
        } else if (name == "rk4") {
            cfg.oracle.integrator = Integrator::rk4;
        } else {
            throw ValidationError("unknown integrator '" + name + "'; valid: split4, rk4");
        }
    }
    read(orc, "points", "oracle", cfg.oracle.points);
    read(orc, "f_min_GHz", "oracle", cfg.oracle.f_min_ghz);
    read(orc, "f_max_GHz", "oracle", cfg.oracle.f_max_ghz);
    read(orc, "check_convergence", "oracle", cfg.oracle.check_convergence);
    read(orc, "comparison_csv", "oracle", cfg.oracle.comparison_csv);

    if (doc.contains("sweep")) {
        const Json& sw = doc.at("sweep");
        detail::require_keys(sw, "sweep",
                             {"axis1", "axis2", "quantity", "index_policy", "n", "probe_GHz"});
        if (!sw.contains("axis1")) {
            throw ValidationError("'sweep' needs 'axis1'");
        }
        SweepSpec& s = cfg.sweep.spec;
        s.axis1 = detail::parse_axis(sw.at("axis1"), "sweep.axis1");
        if (sw.contains("axis2") && !sw.at("axis2").is_null()) {
            s.axis2 = detail::parse_axis(sw.at("axis2"), "sweep.axis2");
        }
        if (sw.contains("quantity")) {
            s.quantity = parse_sweep_quantity(detail::get<std::string>(sw, "quantity", "sweep"));
        }
        if (sw.contains("index_policy")) {
            s.index_policy =
                parse_index_policy(detail::get<std::string>(sw, "index_policy", "sweep"));
        }
        if (sw.contains("n")) {
            s.fixed_n = detail::get<ResonanceIndex>(sw, "n", "sweep");
            if (!sw.contains("index_policy")) {
                s.index_policy = IndexPolicy::fixed;
            }
        }
        if (sw.contains("probe_GHz")) {
            s.probe_omega = two_pi * detail::get<double>(sw, "probe_GHz", "sweep");
        }
        s.validate();
        cfg.sweep.valid = true;
    }
    return cfg;
}

/// Deep merge: keys of `overlay` replace those of `base`, objects recurse.
inline void merge_into(Json& base, const Json& overlay)
{
    for (const auto& [key, value] : overlay.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object()) {
            merge_into(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

}  // namespace fanosaw::cli
