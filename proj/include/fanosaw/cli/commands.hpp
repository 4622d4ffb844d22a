#pragma once

// Command implementations behind the fanosaw executable. Each returns the
// one-line stdout summary plus the machine-readable JSON document; files are
// written only to the paths named in RunConfig::output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fanosaw/cli/config.hpp"
#include "fanosaw/design.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/io/csv.hpp"
#include "fanosaw/io/json.hpp"
#include "fanosaw/io/svg.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/oracle.hpp"
#include "fanosaw/spectra.hpp"
#include "fanosaw/sweep.hpp"

namespace fanosaw::cli {

struct CommandOutput {
    std::string summary;
    Json json;
    std::vector<std::string> written;
};

namespace detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline void emit(CommandOutput& out, const std::optional<std::string>& path,
                 const std::string& text)
{
    if (path) {
        io::write_text_file(*path, text);
        out.written.push_back(*path);
    }
}

inline std::string written_suffix(const CommandOutput& out)
{
    if (out.written.empty()) {
        return "";
    }
    std::string s = "; wrote";
    for (const auto& w : out.written) {
        s += " " + w;
    }
    return s;
}

inline void finish(CommandOutput& out, const RunConfig& cfg)
{
    if (cfg.output.json) {
        emit(out, cfg.output.json, out.json.dump(2) + "\n");
    }
    out.summary += written_suffix(out);
}

inline std::vector<ResonanceIndex> indices_or_nearest(const std::vector<ResonanceIndex>& given,
                                                      const SystemParams& p)
{
    if (!given.empty()) {
        for (ResonanceIndex n : given) {
            fanosaw::detail::require_index(n);
        }
        return given;
    }
    return {nearest_index(p)};
}

inline const char* palette(std::size_t i)
{
    static constexpr const char* colors[] = {"#d62728", "#2ca02c", "#9467bd",
                                             "#8c564b", "#e377c2", "#17becf"};
    return colors[i % std::size(colors)];
}

}  // namespace detail

[[nodiscard]] inline CommandOutput cmd_spectrum(const RunConfig& cfg)
{
    const SystemParams p = cfg.system();
    const double period_ghz = 1.0 / p.t_l;
    const double f_lo = cfg.spectrum.f_min_ghz.value_or(cfg.params.f_e_ghz - 2.0 * period_ghz);
    const double f_hi = cfg.spectrum.f_max_ghz.value_or(cfg.params.f_e_ghz + 2.0 * period_ghz);
    if (!(f_lo < f_hi)) {
        throw ValidationError("spectrum grid needs f_min_GHz < f_max_GHz");
    }
    const Spectrum s = spectrum_grid(p, two_pi * f_lo, two_pi * f_hi, cfg.spectrum.points);
    for (ResonanceIndex n : cfg.spectrum.approx_n) {
        fanosaw::detail::require_index(n);
    }

    double identity = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        identity = std::max(identity, std::abs(s.r_m[i] + s.t_m[i] + 2.0 * s.r_s[i] - 1.0));
    }

    CommandOutput out;
    out.json = Json{{"command", "spectrum"},
                    {"params", io::params_json(p)},
                    {"f_min_GHz", f_lo},
                    {"f_max_GHz", f_hi},
                    {"points", s.size()},
                    {"nearest_index", nearest_index(p)},
                    {"max_identity_error", identity},
                    {"approx_n", cfg.spectrum.approx_n}};
    detail::emit(out, cfg.output.csv, io::spectrum_csv(s).str());

    if (cfg.output.svg) {
        io::LinePlot plot;
        plot.title = "Scattering spectra, t_L = " + detail::num(p.t_l) + " ns";
        plot.x_label = "ω/2π (GHz)";
        plot.y_label = "probability";
        std::vector<double> f(s.size());
        std::transform(s.omega.begin(), s.omega.end(), f.begin(),
                       [](double w) { return w / two_pi; });
        plot.series.push_back({f, s.r_m, "R_m exact", "#1f77b4", false});
        plot.series.push_back({f, s.r_s, "R_s exact", "#ff7f0e", false});
        std::size_t colour = 0;
        for (ResonanceIndex n : cfg.spectrum.approx_n) {
            const FanoProfile prof = fano_descriptor(p, n);
            // Approximants only mean something within half a period of ω_n.
            const double half = std::numbers::pi / p.t_l;
            std::vector<double> rm(s.size()), rs(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                const bool near = std::abs(s.omega[i] - prof.omega_n) <= half;
                rm[i] = near ? lorentz_profile(prof, s.omega[i]) : std::nan("");
                rs[i] = near ? fano_profile(prof, s.omega[i]) : std::nan("");
            }
            const std::string tag = " approx n=" + std::to_string(n);
            plot.series.push_back({f, rm, "R_m" + tag, detail::palette(colour++), true});
            plot.series.push_back({f, rs, "R_s" + tag, detail::palette(colour++), true});
        }
        detail::emit(out, cfg.output.svg, io::render_svg(plot));
    }

    out.summary = "spectrum: " + std::to_string(s.size()) + " points over [" + detail::num(f_lo) +
                  ", " + detail::num(f_hi) + "] GHz, max |R_m+T_m+2R_s-1| = " +
                  detail::num(identity);
    detail::finish(out, cfg);
    return out;
}

[[nodiscard]] inline CommandOutput cmd_fano(const RunConfig& cfg)
{
    const SystemParams p = cfg.system();
    const auto indices = detail::indices_or_nearest(cfg.fano.indices, p);
    std::vector<FanoProfile> rows;
    Json arr = Json::array();
    for (ResonanceIndex n : indices) {
        rows.push_back(fano_descriptor(p, n));
        arr.push_back(io::fano_json(rows.back()));
    }
    CommandOutput out;
    out.json = Json{{"command", "fano"}, {"params", io::params_json(p)}, {"profiles", arr}};
    detail::emit(out, cfg.output.csv, io::fano_csv(rows).str());
    std::string qs;
    for (const auto& r : rows) {
        qs += (qs.empty() ? "" : ", ") + ("n=" + std::to_string(r.n) + " q=" + detail::num(r.q));
    }
    out.summary = "fano: " + qs;
    detail::finish(out, cfg);
    return out;
}

[[nodiscard]] inline CommandOutput cmd_design(const RunConfig& cfg)
{
    const SystemParams p = cfg.system();
    const DesignOptions& d = cfg.design;
    CommandOutput out;
    out.json = Json{{"command", "design"}, {"params", io::params_json(p)}};

    auto bracket_for = [&](ResonanceIndex n) {
        Bracket b = nearest_window(p.omega_e, n);
        b.lo = d.t_lo_ns.value_or(b.lo);
        b.hi = d.t_hi_ns.value_or(b.hi);
        return b;
    };

    if (d.mode == DesignMode::track) {
        if (!d.n_first || !d.n_last) {
            throw ValidationError("design mode 'track' needs n_first and n_last");
        }
        const auto track = fano_width_track(p, *d.n_first, *d.n_last, d.solver);
        Json arr = Json::array();
        for (const auto& t : track) {
            arr.push_back(Json{{"n", t.n},
                               {"t_L_ns", t.t_l},
                               {"q", t.q},
                               {"gamma_n_GHz", t.gamma_n / two_pi},
                               {"delta_omega_GHz", io::number_or_null(t.delta_omega / two_pi)},
                               {"unit_q", t.unit_q}});
        }
        out.json["mode"] = "track";
        out.json["track"] = arr;
        detail::emit(out, cfg.output.csv, io::track_csv(track).str());
        out.summary = "design track: " + std::to_string(track.size()) + " indices from n=" +
                      std::to_string(*d.n_first) + " to n=" + std::to_string(*d.n_last);
        detail::finish(out, cfg);
        return out;
    }

    std::vector<ResonanceIndex> indices = detail::indices_or_nearest(d.indices, p);
    std::vector<double> targets = d.targets;
    if (d.mode == DesignMode::q) {
        if (targets.empty()) {
            throw ValidationError("design mode 'q' needs at least one target");
        }
        if (indices.size() == 1 && targets.size() > 1) {
            indices.assign(targets.size(), indices.front());
        } else if (targets.size() == 1 && indices.size() > 1) {
            targets.assign(indices.size(), targets.front());
        } else if (targets.size() != indices.size()) {
            throw ValidationError("design targets and indices differ in length");
        }
    }

    std::vector<DesignResult> results;
    std::string mode_name;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const ResonanceIndex n = indices[i];
        switch (d.mode) {
        case DesignMode::q:
            mode_name = "q";
            results.push_back(solve_tl_for_q(p, n, targets[i], bracket_for(n), d.solver));
            break;
        case DesignMode::qmax:
            mode_name = "qmax";
            results.push_back(solve_tl_qmax(p, n, bracket_for(n), d.solver));
            break;
        case DesignMode::lorentz:
            mode_name = "lorentz";
            results.push_back(gamma_m_for_lorentz(p, n));
            break;
        case DesignMode::fano:
            mode_name = "fano";
            results.push_back(gamma_for_fano(p, n));
            break;
        case DesignMode::track: break;
        }
    }

    Json arr = Json::array();
    io::CsvTable table({"n", "target_q", "parameter", "solved_value", "achieved_q", "residual",
                        "branch"});
    std::string parts;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const DesignResult& r = results[i];
        Json j = io::design_json(r);
        if (d.mode == DesignMode::q) {
            j["target_q"] = targets[i];
        }
        arr.push_back(j);
        table.add_row({std::to_string(r.n),
                       d.mode == DesignMode::q ? io::format_number(targets[i]) : std::string{},
                       std::string(to_string(r.parameter_kind)), io::format_number(r.solved_value),
                       io::format_number(r.achieved_q), io::format_number(r.residual), r.branch});
        const bool is_rate = r.parameter_kind != DesignParameter::time_delay;
        parts += (parts.empty() ? "" : ", ") +
                 ("n=" + std::to_string(r.n) + " " + std::string(to_string(r.parameter_kind)) +
                  "=" + detail::num(is_rate ? r.solved_value / two_pi : r.solved_value) +
                  (is_rate ? " GHz" : " ns") + " q=" + detail::num(r.achieved_q));
    }
    out.json["mode"] = mode_name;
    out.json["results"] = arr;
    detail::emit(out, cfg.output.csv, table.str());
    out.summary = "design " + mode_name + ": " + parts;
    detail::finish(out, cfg);
    return out;
}

namespace detail {

inline OracleConfig apply_overrides(OracleConfig c, const OracleOptions& o)
{
    if (o.n_modes) c.n_modes_per_channel = *o.n_modes;
    if (o.band_halfwidth) c.band_halfwidth = *o.band_halfwidth;
    if (o.dt) c.dt = *o.dt;
    if (o.t_final) c.t_final = *o.t_final;
    if (o.pulse_arrival) c.pulse_arrival = *o.pulse_arrival;
    if (o.taper) c.taper_fraction = *o.taper;
    c.integrator = o.integrator;
    return c;
}

/// Same configuration with twice the modes and half the step.
inline OracleConfig refined(OracleConfig c)
{
    c.n_modes_per_channel *= 2;
    c.dt *= 0.5;
    return c;
}

/// Probe indices used for the convergence check: the five closest to ω_e
/// (where the lines are sharpest) and the two ends.
inline std::vector<std::size_t> convergence_subset(const std::vector<double>& omega, double omega_e)
{
    std::vector<std::size_t> idx(omega.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(omega[a] - omega_e) < std::abs(omega[b] - omega_e);
    });
    idx.resize(std::min<std::size_t>(5, idx.size()));
    if (!omega.empty()) {
        idx.push_back(0);
        idx.push_back(omega.size() - 1);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

}  // namespace detail

[[nodiscard]] inline CommandOutput cmd_oracle(const RunConfig& cfg)
{
    const SystemParams p = cfg.system();
    const OracleOptions& o = cfg.oracle;
    CommandOutput out;
    out.json = Json{{"command", "oracle"}, {"params", io::params_json(p)}};

    if (o.mode == OracleMode::decay) {
        const OracleConfig c = detail::apply_overrides(decay_config(p), o);
        const OracleResult r = evolve(c, p);
        const double rate = fit_decay_rate(r.times, r.e_pop);
        const double calibration = 2.0 * p.gamma_m;
        out.json["mode"] = "decay";
        out.json["config"] = io::oracle_config_json(c);
        out.json["result"] = io::oracle_json(r);
        out.json["fitted_rate_rad_per_ns"] = rate;
        out.json["two_gamma_m_rad_per_ns"] = calibration;
        out.json["rate_over_two_gamma_m"] = rate / calibration;
        detail::emit(out, cfg.output.csv, io::oracle_history_csv(r).str());
        out.summary = "oracle decay: fitted |e|^2 rate " + detail::num(rate) + " rad/ns = " +
                      detail::num(rate / calibration) + " x 2gamma_m, norm drift " +
                      detail::num(r.norm_drift);
        if (!r.atom_relaxed) {
            out.summary += " (warning: atom still excited)";
        }
        detail::finish(out, cfg);
        return out;
    }

    const double sigma = o.pulse_sigma.value_or(default_probe_sigma(p));

    if (o.mode == OracleMode::single) {
        const double centre = two_pi * o.pulse_center_ghz.value_or(cfg.params.f_e_ghz);
        const OracleConfig c = detail::apply_overrides(probe_config(p, centre, sigma), o);
        const OracleResult r = evolve(c, p);
        Json j = io::oracle_json(r);
        j["exact_R_m"] = reflect_microwave(p, centre);
        j["exact_R_s"] = scatter_saw(p, centre);
        j["exact_T_m"] = transmit_microwave(p, centre);
        out.json["mode"] = "single";
        out.json["config"] = io::oracle_config_json(c);
        out.json["result"] = j;
        detail::emit(out, cfg.output.csv, io::oracle_history_csv(r).str());
        out.summary = "oracle single: R_m " + detail::num(r.effective_r_m) + " (exact " +
                      detail::num(reflect_microwave(p, centre)) + "), R_s " +
                      detail::num(r.effective_r_s) + " (exact " +
                      detail::num(scatter_saw(p, centre)) + "), norm drift " +
                      detail::num(r.norm_drift);
        if (!r.atom_relaxed) {
            out.summary += " (warning: atom still excited)";
        }
        detail::finish(out, cfg);
        return out;
    }

    std::vector<double> omega;
    if (o.f_min_ghz || o.f_max_ghz) {
        if (!o.f_min_ghz || !o.f_max_ghz) {
            throw ValidationError("oracle comparison grid needs both f_min_GHz and f_max_GHz");
        }
        omega = uniform_grid(two_pi * *o.f_min_ghz, two_pi * *o.f_max_ghz, o.points);
    } else {
        omega = period_grid(p, o.points);
    }
    const OracleConfig c = detail::apply_overrides(probe_config(p, p.omega_e, sigma), o);
    const OracleComparison cmp = compare_with_closed_form(c, p, omega);

    Json summary{
        {"points", omega.size()},
        {"max_rel_deviation", cmp.max_rel_deviation},
        {"probability_floor", oracle_probability_floor},
        {"max_norm_drift", cmp.max_norm_drift},
        {"max_saw_asymmetry", cmp.max_saw_asymmetry},
        {"max_final_e_pop", cmp.max_final_e_pop},
    };
    Json warnings = Json::array();
    for (std::size_t i = 0; i < cmp.runs.size(); ++i) {
        for (const auto& w : cmp.runs[i].warnings) {
            warnings.push_back("probe " + std::to_string(i) + ": " + w);
        }
    }
    summary["warnings"] = warnings;

    std::string conv;
    if (o.check_convergence) {
        const auto subset = detail::convergence_subset(omega, p.omega_e);
        std::vector<double> sub;
        Spectrum coarse;
        for (std::size_t i : subset) {
            sub.push_back(omega[i]);
            coarse.omega.push_back(omega[i]);
            coarse.r_m.push_back(cmp.oracle.r_m[i]);
            coarse.r_s.push_back(cmp.oracle.r_s[i]);
            coarse.t_m.push_back(cmp.oracle.t_m[i]);
        }
        const Spectrum fine = oracle_spectrum(detail::refined(c), p, sub);
        const double change = max_relative_change(coarse, fine);
        summary["convergence_points"] = sub.size();
        summary["convergence_max_rel_change"] = change;
        conv = ", refinement change " + detail::num(change);
    }

    out.json["mode"] = "compare";
    out.json["config"] = io::oracle_config_json(c);
    out.json["comparison"] = summary;
    detail::emit(out, cfg.output.csv, io::oracle_comparison_csv(cmp.oracle, cmp.exact).str());
    if (cfg.output.svg) {
        io::LinePlot plot;
        plot.title = "Oracle vs closed form";
        plot.x_label = "ω/2π (GHz)";
        plot.y_label = "probability";
        std::vector<double> f(omega.size());
        std::transform(omega.begin(), omega.end(), f.begin(), [](double w) { return w / two_pi; });
        const Spectrum dense = spectrum_grid(p, omega.front(), omega.back(), 801);
        std::vector<double> fd(dense.size());
        std::transform(dense.omega.begin(), dense.omega.end(), fd.begin(),
                       [](double w) { return w / two_pi; });
        plot.series.push_back({fd, dense.r_m, "R_m closed form", "#1f77b4", false});
        plot.series.push_back({fd, dense.r_s, "R_s closed form", "#ff7f0e", false});
        plot.series.push_back({f, cmp.oracle.r_m, "R_m oracle", "#d62728", true});
        plot.series.push_back({f, cmp.oracle.r_s, "R_s oracle", "#2ca02c", true});
        detail::emit(out, cfg.output.svg, io::render_svg(plot));
    }
    out.summary = "oracle compare: " + std::to_string(omega.size()) +
                  " probes, max relative deviation " + detail::num(cmp.max_rel_deviation) +
                  ", norm drift " + detail::num(cmp.max_norm_drift) + conv;
    detail::finish(out, cfg);
    return out;
}

[[nodiscard]] inline CommandOutput cmd_sweep(const RunConfig& cfg)
{
    if (!cfg.sweep.valid) {
        throw ValidationError("sweep command needs a 'sweep' section with at least axis1");
    }
    const SystemParams p = cfg.system();
    const SweepTable t = run_sweep(p, cfg.sweep.spec);
    CommandOutput out;
    out.json = io::sweep_json(t);
    out.json["command"] = "sweep";
    if (!t.is_2d()) {
        Json ext = Json::array();
        for (const auto& e : extract_extrema(t)) {
            ext.push_back(Json{{"coordinate", e.coordinate},
                               {"value", e.value},
                               {"kind", std::string(to_string(e.kind))}});
        }
        out.json["extrema"] = ext;
    }
    detail::emit(out, cfg.output.csv, io::sweep_csv(t).str());

    if (cfg.output.svg) {
        const SweepSpec& s = t.spec;
        const auto user = [](SweepParameter a, const std::vector<double>& v) {
            std::vector<double> r(v.size());
            std::transform(v.begin(), v.end(), r.begin(),
                           [a](double x) { return io::axis_to_user(a, x); });
            return r;
        };
        std::vector<double> vals = t.values;
        if (io::quantity_is_rate(s.quantity)) {
            for (auto& v : vals) {
                v /= two_pi;
            }
        }
        if (!t.is_2d()) {
            io::LinePlot plot;
            plot.title = std::string(to_string(s.quantity)) + " vs " +
                         std::string(to_string(s.axis1.parameter));
            plot.x_label = io::axis_label(s.axis1.parameter);
            plot.y_label = io::quantity_label(s.quantity);
            plot.log_x = s.axis1.spacing == Spacing::log;
            plot.series.push_back({user(s.axis1.parameter, t.axis1), vals, "", "#1f77b4", false});
            detail::emit(out, cfg.output.svg, io::render_svg(plot));
        } else {
            // Rows of the image follow axis1 (vertical), columns axis2.
            io::HeatMap map;
            map.title = std::string(to_string(s.quantity)) + " over " +
                        std::string(to_string(s.axis2->parameter)) + " x " +
                        std::string(to_string(s.axis1.parameter));
            map.x_label = io::axis_label(s.axis2->parameter);
            map.y_label = io::axis_label(s.axis1.parameter);
            map.value_label = io::quantity_label(s.quantity);
            map.x = user(s.axis2->parameter, t.axis2);
            map.y = user(s.axis1.parameter, t.axis1);
            map.values = vals;
            map.log_x = s.axis2->spacing == Spacing::log;
            map.log_y = s.axis1.spacing == Spacing::log;
            detail::emit(out, cfg.output.svg, io::render_svg(map));
        }
    }

    std::size_t undefined = 0;
    for (double v : t.values) {
        undefined += std::isfinite(v) ? 0 : 1;
    }
    out.summary = "sweep " + std::string(to_string(t.spec.quantity)) + ": " +
                  std::to_string(t.values.size()) + " cells" +
                  (undefined ? " (" + std::to_string(undefined) + " undefined)" : "");
    detail::finish(out, cfg);
    return out;
}

[[nodiscard]] inline CommandOutput run_command(const RunConfig& cfg)
{
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "fano") return cmd_fano(cfg);
    if (cfg.command == "design") return cmd_design(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    throw ValidationError("unknown command '" + cfg.command + "'");
}

}  // namespace fanosaw::cli
