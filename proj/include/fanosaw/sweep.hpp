#pragma once

// Batch evaluation of resonance descriptors and spectra over 1D/2D grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fanosaw/design.hpp"
#include "fanosaw/error.hpp"
#include "fanosaw/fano.hpp"
#include "fanosaw/model.hpp"
#include "fanosaw/parallel.hpp"
#include "fanosaw/spectra.hpp"

namespace fanosaw {

enum class SweepParameter { t_l, gamma_m, gamma_s, omega_e };
enum class Spacing { linear, log };
enum class SweepQuantity { q, gamma_n, delta_omega, i_m, d_s2, r_m_at, r_s_at, regime };
enum class IndexPolicy { fixed, nearest };

inline constexpr std::array<std::string_view, 4> sweep_parameter_names{"t_L", "gamma_m", "gamma_s",
                                                                       "omega_e"};
inline constexpr std::array<std::string_view, 8> sweep_quantity_names{
    "q", "gamma_n", "delta_omega", "i_m", "d_s2", "r_m_at", "r_s_at", "regime"};

namespace detail {

inline std::string join_names(const auto& names)
{
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) {
            out += ", ";
        }
        out += n;
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline std::string_view to_string(SweepParameter p) noexcept
{
    return sweep_parameter_names[static_cast<std::size_t>(p)];
}

[[nodiscard]] inline std::string_view to_string(SweepQuantity q) noexcept
{
    return sweep_quantity_names[static_cast<std::size_t>(q)];
}

[[nodiscard]] inline std::string_view to_string(Spacing s) noexcept
{
    return s == Spacing::linear ? "linear" : "log";
}

[[nodiscard]] inline std::string_view to_string(IndexPolicy p) noexcept
{
    return p == IndexPolicy::fixed ? "fixed" : "nearest";
}

[[nodiscard]] inline SweepParameter parse_sweep_parameter(std::string_view s)
{
    for (std::size_t i = 0; i < sweep_parameter_names.size(); ++i) {
        if (s == sweep_parameter_names[i]) {
            return static_cast<SweepParameter>(i);
        }
    }
    throw ValidationError("unknown sweep parameter '" + std::string(s) +
                          "'; valid parameters: " + detail::join_names(sweep_parameter_names));
}

[[nodiscard]] inline SweepQuantity parse_sweep_quantity(std::string_view s)
{
    for (std::size_t i = 0; i < sweep_quantity_names.size(); ++i) {
        if (s == sweep_quantity_names[i]) {
            return static_cast<SweepQuantity>(i);
        }
    }
    throw ValidationError("unknown sweep quantity '" + std::string(s) +
                          "'; valid quantities: " + detail::join_names(sweep_quantity_names));
}

[[nodiscard]] inline Spacing parse_spacing(std::string_view s)
{
    if (s == "linear") {
        return Spacing::linear;
    }
    if (s == "log") {
        return Spacing::log;
    }
    throw ValidationError("unknown spacing '" + std::string(s) + "'; valid: linear, log");
}

[[nodiscard]] inline IndexPolicy parse_index_policy(std::string_view s)
{
    if (s == "fixed") {
        return IndexPolicy::fixed;
    }
    if (s == "nearest") {
        return IndexPolicy::nearest;
    }
    throw ValidationError("unknown index policy '" + std::string(s) + "'; valid: fixed, nearest");
}

/// Axis values are in internal units: ns for t_L, rad/ns otherwise.
struct SweepAxis {
    SweepParameter parameter = SweepParameter::t_l;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    Spacing spacing = Spacing::linear;

    void validate() const
    {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw ValidationError("sweep axis bounds must be finite");
        }
        if (!(lo < hi)) {
            throw ValidationError("sweep axis requires lo < hi");
        }
        if (count < 2) {
            throw ValidationError("sweep axis requires at least 2 points");
        }
        if (spacing == Spacing::log && lo <= 0.0) {
            throw ValidationError("log spacing requires lo > 0");
        }
    }

    [[nodiscard]] std::vector<double> values() const
    {
        validate();
        if (spacing == Spacing::linear) {
            return uniform_grid(lo, hi, count);
        }
        std::vector<double> v = uniform_grid(std::log(lo), std::log(hi), count);
        for (auto& x : v) {
            x = std::exp(x);
        }
        v.front() = lo;
        v.back() = hi;
        return v;
    }
};

struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    SweepQuantity quantity = SweepQuantity::q;
    IndexPolicy index_policy = IndexPolicy::nearest;
    ResonanceIndex fixed_n = 0;  // used with IndexPolicy::fixed
    /// Probe for r_m_at / r_s_at, rad/ns; defaults to the cell's ω_e.
    std::optional<double> probe_omega;

    void validate() const
    {
        axis1.validate();
        if (axis2) {
            axis2->validate();
            if (axis2->parameter == axis1.parameter) {
                throw ValidationError("sweep axes must vary different parameters");
            }
        }
        if (index_policy == IndexPolicy::fixed && fixed_n < 0) {
            throw ValidationError("resonance index n must be >= 0");
        }
        if (probe_omega) {
            detail::require_positive(*probe_omega, "probe_omega");
        }
    }
};

/// values[i * axis2.size() + j] holds cell (axis1[i], axis2[j]); 1D tables
/// have an empty axis2. Undefined cells hold NaN. Regime cells hold the
/// integer value of the Regime enum.
struct SweepTable {
    SweepSpec spec;
    SystemParams base;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> values;
    std::vector<ResonanceIndex> indices;  // resonance index used per cell

    [[nodiscard]] bool is_2d() const noexcept { return !axis2.empty(); }
    [[nodiscard]] std::size_t columns() const noexcept { return is_2d() ? axis2.size() : 1; }
    [[nodiscard]] double at(std::size_t i, std::size_t j = 0) const
    {
        return values.at(i * columns() + j);
    }
};

[[nodiscard]] inline SystemParams with_parameter(SystemParams p, SweepParameter which, double v)
{
    switch (which) {
    case SweepParameter::t_l: p.t_l = v; break;
    case SweepParameter::gamma_m: p.gamma_m = v; break;
    case SweepParameter::gamma_s: p.gamma_s = v; break;
    case SweepParameter::omega_e: p.omega_e = v; break;
    }
    return p;
}

/// Value of one quantity at one parameter point; NaN where undefined.
[[nodiscard]] inline double evaluate_quantity(const SystemParams& p, ResonanceIndex n,
                                              SweepQuantity q,
                                              std::optional<double> probe_omega = std::nullopt)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (q == SweepQuantity::r_m_at || q == SweepQuantity::r_s_at) {
        p.validate();
        const double w = probe_omega.value_or(p.omega_e);
        return q == SweepQuantity::r_m_at ? reflect_microwave(p, w) : scatter_saw(p, w);
    }
    const FanoProfile f = fano_descriptor(p, n);
    switch (q) {
    case SweepQuantity::q: return f.q;
    case SweepQuantity::gamma_n: return f.gamma_n;
    case SweepQuantity::delta_omega: return f.delta_omega.value_or(nan);
    case SweepQuantity::i_m: return f.i_m;
    case SweepQuantity::d_s2: return f.d_s2;
    case SweepQuantity::regime: return static_cast<double>(classify_q(f.q));
    default: return nan;
    }
}

[[nodiscard]] inline SweepTable run_sweep(const SystemParams& base, const SweepSpec& spec)
{
    spec.validate();
    SweepTable t;
    t.spec = spec;
    t.base = base;
    t.axis1 = spec.axis1.values();
    if (spec.axis2) {
        t.axis2 = spec.axis2->values();
    }
    const std::size_t cols = t.columns();
    const std::size_t cells = t.axis1.size() * cols;
    t.values.assign(cells, std::numeric_limits<double>::quiet_NaN());
    t.indices.assign(cells, 0);

    // Validate every grid point up front so errors do not depend on scheduling.
    std::vector<SystemParams> points(cells);
    for (std::size_t i = 0; i < t.axis1.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            SystemParams p = with_parameter(base, spec.axis1.parameter, t.axis1[i]);
            if (spec.axis2) {
                p = with_parameter(p, spec.axis2->parameter, t.axis2[j]);
            }
            p.validate();
            points[i * cols + j] = p;
        }
    }
    parallel_for(cells, [&](std::size_t c) {
        const SystemParams& p = points[c];
        const ResonanceIndex n =
            spec.index_policy == IndexPolicy::fixed ? spec.fixed_n : nearest_index(p);
        t.indices[c] = n;
        t.values[c] = evaluate_quantity(p, n, spec.quantity, spec.probe_omega);
    });
    return t;
}

enum class ExtremumKind { maximum, minimum };

[[nodiscard]] inline std::string_view to_string(ExtremumKind k) noexcept
{
    return k == ExtremumKind::maximum ? "max" : "min";
}

struct Extremum {
    double coordinate = 0.0;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::maximum;
};

/// Vertex of the parabola through three points with distinct abscissae.
[[nodiscard]] inline std::pair<double, double> parabola_vertex(double x0, double y0, double x1,
                                                               double y1, double x2, double y2)
{
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (a == 0.0) {
        return {x1, y1};
    }
    const double b = d01 - a * (x0 + x1);
    const double xv = -b / (2.0 * a);
    const double yv = y1 + (xv - x1) * (d01 + a * (xv - x0));
    return {xv, yv};
}

/// Interior strict local extrema of a 1D table, refined by a parabola through
/// each extremal sample and its neighbours. Cells next to undefined values are
/// skipped.
[[nodiscard]] inline std::vector<Extremum> extract_extrema(const std::vector<double>& x,
                                                           const std::vector<double>& y)
{
    if (x.size() != y.size()) {
        throw ValidationError("coordinate and value sequences differ in length");
    }
    if (x.size() < 3) {
        throw ValidationError("insufficient data: extrema need at least 3 points");
    }
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double a = y[i - 1];
        const double b = y[i];
        const double c = y[i + 1];
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
            continue;
        }
        const bool is_max = b > a && b > c;
        const bool is_min = b < a && b < c;
        if (!is_max && !is_min) {
            continue;
        }
        const auto [xv, yv] = parabola_vertex(x[i - 1], a, x[i], b, x[i + 1], c);
        out.push_back({xv, yv, is_max ? ExtremumKind::maximum : ExtremumKind::minimum});
    }
    return out;
}

[[nodiscard]] inline std::vector<Extremum> extract_extrema(const SweepTable& t)
{
    if (t.is_2d()) {
        throw ValidationError("extrema extraction needs a 1D table");
    }
    return extract_extrema(t.axis1, t.values);
}

}  // namespace fanosaw
