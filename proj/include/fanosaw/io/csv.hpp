#pragma once

// CSV emission: ',' delimiter, '.' decimal point, LF line endings, header row
// always present, 17 significant digits, empty field for undefined values.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fanosaw/design.hpp"
#include "fanosaw/error.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/oracle.hpp"
#include "fanosaw/spectra.hpp"
#include "fanosaw/sweep.hpp"

namespace fanosaw::io {

/// "%.17g" rendering; NaN and infinities become an empty field.
[[nodiscard]] inline std::string format_number(double v)
{
    if (!std::isfinite(v)) {
        return {};
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string format_number(std::optional<double> v)
{
    return v ? format_number(*v) : std::string{};
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row)
    {
        if (row.size() != header_.size()) {
            throw InternalConsistencyError("CSV row width does not match header");
        }
        rows_.push_back(std::move(row));
    }

    [[nodiscard]] std::size_t row_count() const noexcept { return rows_.size(); }

    void write(std::ostream& os) const
    {
        write_line(os, header_);
        for (const auto& r : rows_) {
            write_line(os, r);
        }
    }

    [[nodiscard]] std::string str() const
    {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                os << ',';
            }
            os << cells[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes text to `path` in binary mode (no newline translation).
inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

[[nodiscard]] inline double to_ghz(double rad_per_ns) noexcept { return rad_per_ns / two_pi; }

[[nodiscard]] inline CsvTable spectrum_csv(const Spectrum& s)
{
    CsvTable t({"omega_over_2pi_GHz", "R_m", "R_s", "T_m"});
    for (std::size_t i = 0; i < s.size(); ++i) {
        t.add_row({format_number(to_ghz(s.omega[i])), format_number(s.r_m[i]),
                   format_number(s.r_s[i]), format_number(s.t_m[i])});
    }
    return t;
}

/// Frequencies and widths are reported as ω/2π in GHz.
[[nodiscard]] inline CsvTable fano_csv(const std::vector<FanoProfile>& rows)
{
    CsvTable t({"n", "omega_n", "omega_eff", "gamma_n", "q", "i_m", "d_s2", "delta_omega"});
    for (const auto& f : rows) {
        t.add_row({std::to_string(f.n), format_number(to_ghz(f.omega_n)),
                   format_number(to_ghz(f.omega_eff)), format_number(to_ghz(f.gamma_n)),
                   format_number(f.q), format_number(f.i_m), format_number(f.d_s2),
                   f.delta_omega ? format_number(to_ghz(*f.delta_omega)) : std::string{}});
    }
    return t;
}

[[nodiscard]] inline CsvTable oracle_history_csv(const OracleResult& r)
{
    CsvTable t({"time_ns", "e_pop", "microwave_left", "microwave_right", "saw_left", "saw_right"});
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        const auto& c = r.channel_history[i];
        t.add_row({format_number(r.times[i]), format_number(r.e_pop[i]), format_number(c[0]),
                   format_number(c[1]), format_number(c[2]), format_number(c[3])});
    }
    return t;
}

[[nodiscard]] inline CsvTable oracle_comparison_csv(const Spectrum& oracle, const Spectrum& exact)
{
    if (oracle.size() != exact.size()) {
        throw InternalConsistencyError("oracle and closed-form spectra differ in length");
    }
    CsvTable t({"omega_over_2pi_GHz", "R_m_oracle", "R_m_exact", "R_s_oracle", "R_s_exact",
                "T_m_oracle", "T_m_exact"});
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        t.add_row({format_number(to_ghz(oracle.omega[i])), format_number(oracle.r_m[i]),
                   format_number(exact.r_m[i]), format_number(oracle.r_s[i]),
                   format_number(exact.r_s[i]), format_number(oracle.t_m[i]),
                   format_number(exact.t_m[i])});
    }
    return t;
}

/// Column label of a sweep axis in user units.
[[nodiscard]] inline std::string axis_label(SweepParameter p)
{
    switch (p) {
    case SweepParameter::t_l: return "t_L_ns";
    case SweepParameter::gamma_m: return "gamma_m_over_2pi_GHz";
    case SweepParameter::gamma_s: return "gamma_s_over_2pi_GHz";
    case SweepParameter::omega_e: return "omega_e_over_2pi_GHz";
    }
    return "axis";
}

[[nodiscard]] inline double axis_to_user(SweepParameter p, double v) noexcept
{
    return p == SweepParameter::t_l ? v : to_ghz(v);
}

[[nodiscard]] inline bool quantity_is_rate(SweepQuantity q) noexcept
{
    return q == SweepQuantity::gamma_n || q == SweepQuantity::delta_omega;
}

[[nodiscard]] inline std::string quantity_label(SweepQuantity q)
{
    std::string s(to_string(q));
    return quantity_is_rate(q) ? s + "_over_2pi_GHz" : s;
}

[[nodiscard]] inline std::string format_cell(SweepQuantity q, double v)
{
    if (q == SweepQuantity::regime && std::isfinite(v)) {
        return std::string(to_string(static_cast<Regime>(static_cast<int>(v))));
    }
    return format_number(quantity_is_rate(q) ? to_ghz(v) : v);
}

/// 1D: two columns. 2D: long format (axis1, axis2, value).
[[nodiscard]] inline CsvTable sweep_csv(const SweepTable& t)
{
    const SweepQuantity q = t.spec.quantity;
    const SweepParameter a1 = t.spec.axis1.parameter;
    if (!t.is_2d()) {
        CsvTable out({axis_label(a1), quantity_label(q)});
        for (std::size_t i = 0; i < t.axis1.size(); ++i) {
            out.add_row({format_number(axis_to_user(a1, t.axis1[i])), format_cell(q, t.at(i))});
        }
        return out;
    }
    const SweepParameter a2 = t.spec.axis2->parameter;
    CsvTable out({axis_label(a1), axis_label(a2), quantity_label(q)});
    for (std::size_t i = 0; i < t.axis1.size(); ++i) {
        for (std::size_t j = 0; j < t.axis2.size(); ++j) {
            out.add_row({format_number(axis_to_user(a1, t.axis1[i])),
                         format_number(axis_to_user(a2, t.axis2[j])), format_cell(q, t.at(i, j))});
        }
    }
    return out;
}

[[nodiscard]] inline CsvTable track_csv(const std::vector<TrackPoint>& track)
{
    CsvTable t({"n", "t_L_ns", "q", "gamma_n_over_2pi_GHz", "delta_omega_over_2pi_GHz", "unit_q"});
    for (const auto& p : track) {
        t.add_row({std::to_string(p.n), format_number(p.t_l), format_number(p.q),
                   format_number(to_ghz(p.gamma_n)), format_number(to_ghz(p.delta_omega)),
                   p.unit_q ? "1" : "0"});
    }
    return t;
}

}  // namespace fanosaw::io
