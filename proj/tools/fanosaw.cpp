// fanosaw: spectra, Fano descriptors, inverse design, oracle checks and
// parameter sweeps for a giant atom coupled to microwave and SAW waveguides.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fanosaw/cli/commands.hpp"
#include "fanosaw/cli/config.hpp"
#include "fanosaw/error.hpp"

namespace {

using fanosaw::cli::Json;

// Flag values land here; only flags actually given end up in the overlay.
struct Flags {
    std::string config_path;
    std::optional<double> f_e, gamma_m, gamma_s, t_l, length_um, v_gs;
    std::optional<std::string> csv, json, svg;
    bool stdout_json = false;

    std::optional<double> f_min, f_max;
    std::optional<std::size_t> points;
    std::vector<long long> approx_n;

    std::vector<long long> indices;

    std::optional<std::string> design_mode;
    std::vector<double> targets;
    std::optional<double> t_lo, t_hi, q_tol;
    std::optional<long long> n_first, n_last;

    std::optional<std::string> oracle_mode, integrator, comparison_csv;
    std::optional<double> pulse_center, pulse_sigma, band_halfwidth, dt, t_final, pulse_arrival,
        taper;
    std::optional<std::size_t> n_modes, oracle_points;
    bool check_convergence = false;

    std::optional<std::string> axis1, axis2, quantity, index_policy;
    std::optional<long long> sweep_n;
    std::optional<double> probe;
};

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v)
{
    if (v) {
        j[key] = *v;
    }
}

// "name:lo:hi:count[:spacing]"
Json parse_axis_flag(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() < 4 || parts.size() > 5) {
        throw fanosaw::ValidationError("axis '" + text + "' must look like name:lo:hi:count[:spacing]");
    }
    try {
        Json a{{"parameter", parts[0]},
               {"lo", std::stod(parts[1])},
               {"hi", std::stod(parts[2])},
               {"count", std::stoll(parts[3])}};
        if (parts.size() == 5) {
            a["spacing"] = parts[4];
        }
        return a;
    } catch (const std::logic_error&) {
        throw fanosaw::ValidationError("axis '" + text + "' has a non-numeric bound or count");
    }
}

void merge_into_obj(Json& root, const char* key, const Json& value)
{
    if (root.contains(key)) {
        fanosaw::cli::merge_into(root[key], value);
    } else {
        root[key] = value;
    }
}

Json overlay_from(const Flags& f, const std::string& command)
{
    Json o = Json::object();
    if (!command.empty()) {
        o["command"] = command;
    }
    Json params = Json::object();
    put(params, "f_e_GHz", f.f_e);
    put(params, "gamma_m_over_2pi_GHz", f.gamma_m);
    put(params, "gamma_s_over_2pi_GHz", f.gamma_s);
    put(params, "t_L_ns", f.t_l);
    put(params, "length_um", f.length_um);
    put(params, "v_gs_um_per_ns", f.v_gs);
    if (!params.empty()) o["params"] = params;

    Json out = Json::object();
    put(out, "csv", f.csv);
    put(out, "json", f.json);
    put(out, "svg", f.svg);
    if (f.stdout_json) out["stdout_json"] = true;
    if (!out.empty()) o["output"] = out;

    Json sp = Json::object();
    put(sp, "f_min_GHz", f.f_min);
    put(sp, "f_max_GHz", f.f_max);
    put(sp, "points", f.points);
    if (!f.approx_n.empty()) sp["approx_n"] = f.approx_n;
    if (!sp.empty()) o["spectrum"] = sp;

    if (!f.indices.empty()) {
        if (command == "design") {
            o["design"]["indices"] = f.indices;
        } else {
            o["fano"]["indices"] = f.indices;
        }
    }

    Json de = Json::object();
    put(de, "mode", f.design_mode);
    if (!f.targets.empty()) de["targets"] = f.targets;
    put(de, "t_lo_ns", f.t_lo);
    put(de, "t_hi_ns", f.t_hi);
    put(de, "q_tol", f.q_tol);
    put(de, "n_first", f.n_first);
    put(de, "n_last", f.n_last);
    if (!de.empty()) merge_into_obj(o, "design", de);

    Json orc = Json::object();
    put(orc, "mode", f.oracle_mode);
    put(orc, "integrator", f.integrator);
    put(orc, "comparison_csv", f.comparison_csv);
    put(orc, "pulse_center_GHz", f.pulse_center);
    put(orc, "pulse_sigma", f.pulse_sigma);
    put(orc, "band_halfwidth", f.band_halfwidth);
    put(orc, "dt", f.dt);
    put(orc, "t_final", f.t_final);
    put(orc, "pulse_arrival", f.pulse_arrival);
    put(orc, "taper", f.taper);
    put(orc, "n_modes", f.n_modes);
    put(orc, "points", f.oracle_points);
    if (f.check_convergence) orc["check_convergence"] = true;
    if (!orc.empty()) o["oracle"] = orc;

    Json sw = Json::object();
    if (f.axis1) sw["axis1"] = parse_axis_flag(*f.axis1);
    if (f.axis2) sw["axis2"] = parse_axis_flag(*f.axis2);
    put(sw, "quantity", f.quantity);
    put(sw, "index_policy", f.index_policy);
    put(sw, "n", f.sweep_n);
    put(sw, "probe_GHz", f.probe);
    if (!sw.empty()) o["sweep"] = sw;
    return o;
}

Json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw fanosaw::IoError("cannot read config file '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw fanosaw::ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Giant-atom microwave/SAW scattering: spectra, Fano descriptors, inverse design, "
                 "oracle verification and sweeps"};
    app.set_version_flag("--version", "fanosaw 1.0.0");
    app.fallthrough();  // global flags may follow the subcommand
    Flags f;

    app.add_option("-c,--config", f.config_path, "JSON run configuration");
    app.add_option("--f-e", f.f_e, "qubit frequency omega_e/2pi, GHz");
    app.add_option("--gamma-m", f.gamma_m, "microwave coupling gamma_m/2pi, GHz");
    app.add_option("--gamma-s", f.gamma_s, "acoustic coupling gamma_s/2pi, GHz");
    app.add_option("--t-l", f.t_l, "IDT time delay t_L, ns");
    app.add_option("--length-um", f.length_um, "IDT coupling-point separation, um");
    app.add_option("--v-gs", f.v_gs, "SAW group velocity, um/ns");
    app.add_option("--csv", f.csv, "CSV output path");
    app.add_option("--json", f.json, "JSON output path");
    app.add_option("--svg", f.svg, "SVG output path");
    app.add_flag("--stdout-json", f.stdout_json, "print the JSON document to stdout");

    auto* spectrum = app.add_subcommand("spectrum", "exact R_m, R_s, T_m on a frequency grid");
    spectrum->add_option("--f-min", f.f_min, "grid start, GHz");
    spectrum->add_option("--f-max", f.f_max, "grid end, GHz");
    spectrum->add_option("--points", f.points, "grid points");
    spectrum->add_option("--approx-n", f.approx_n, "overlay Taylor approximants for these n")
        ->delimiter(',');

    auto* fano = app.add_subcommand("fano", "Fano descriptors per resonance index");
    fano->add_option("--n", f.indices, "resonance indices (default: nearest to omega_e)")
        ->delimiter(',');

    auto* design = app.add_subcommand("design", "inverse design of t_L or coupling rates");
    design->add_option("--mode", f.design_mode, "q | qmax | lorentz | fano | track");
    design->add_option("--target", f.targets, "target q values")->delimiter(',');
    design->add_option("--n", f.indices, "resonance indices")->delimiter(',');
    design->add_option("--t-lo", f.t_lo, "bracket start, ns");
    design->add_option("--t-hi", f.t_hi, "bracket end, ns");
    design->add_option("--q-tol", f.q_tol, "q residual tolerance");
    design->add_option("--n-first", f.n_first, "first index of a track");
    design->add_option("--n-last", f.n_last, "last index of a track");

    auto* oracle = app.add_subcommand("oracle", "discretised-continuum time evolution");
    oracle->add_option("--mode", f.oracle_mode, "compare | single | decay");
    oracle->add_option("--pulse-center", f.pulse_center, "probe centre, GHz");
    oracle->add_option("--pulse-sigma", f.pulse_sigma, "probe spectral width, rad/ns");
    oracle->add_option("--n-modes", f.n_modes, "modes per channel");
    oracle->add_option("--band-halfwidth", f.band_halfwidth, "band half-width, rad/ns");
    oracle->add_option("--dt", f.dt, "time step, ns");
    oracle->add_option("--t-final", f.t_final, "evolution horizon, ns");
    oracle->add_option("--pulse-arrival", f.pulse_arrival, "wavepacket arrival time, ns");
    oracle->add_option("--taper", f.taper, "tapered fraction of the band edge");
    oracle->add_option("--integrator", f.integrator, "split4 | rk4");
    oracle->add_option("--points", f.oracle_points, "comparison probes");
    oracle->add_flag("--check-convergence", f.check_convergence,
                     "rerun central probes with doubled modes and halved dt");

    auto* sweep = app.add_subcommand("sweep", "1D/2D parameter sweeps");
    sweep->add_option("--axis1", f.axis1, "name:lo:hi:count[:linear|log]");
    sweep->add_option("--axis2", f.axis2, "name:lo:hi:count[:linear|log]");
    sweep->add_option("--quantity", f.quantity,
                      "q | gamma_n | delta_omega | i_m | d_s2 | r_m_at | r_s_at | regime");
    sweep->add_option("--index-policy", f.index_policy, "nearest | fixed");
    sweep->add_option("--n", f.sweep_n, "fixed resonance index");
    sweep->add_option("--probe", f.probe, "probe frequency for r_m_at/r_s_at, GHz");

    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(fanosaw::ExitCode::validation);
    }

    try {
        std::string command;
        for (const auto* sub : app.get_subcommands()) {
            command = sub->get_name();
        }
        Json doc = f.config_path.empty() ? Json::object() : load_config(f.config_path);
        if (!command.empty() && doc.contains("command") && doc["command"] != command) {
            throw fanosaw::ValidationError("config file command '" +
                                           doc["command"].get<std::string>() +
                                           "' conflicts with subcommand '" + command + "'");
        }
        fanosaw::cli::merge_into(doc, overlay_from(f, command));
        const auto cfg = fanosaw::cli::parse_run_config(doc);
        const auto out = fanosaw::cli::run_command(cfg);
        if (cfg.output.stdout_json) {
            std::cout << out.json.dump(2) << '\n';
        } else {
            std::cout << out.summary << '\n';
        }
        return 0;
    } catch (const fanosaw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed configuration: " << e.what() << '\n';
        return static_cast<int>(fanosaw::ExitCode::validation);
    }
}
