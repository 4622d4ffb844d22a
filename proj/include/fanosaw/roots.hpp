#pragma once

// Small bracketing root finder and extremum search used by the inverse-design
// solvers. Both operate on plain callables double -> double.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fanosaw::roots {

/// Bisection on [lo, hi] where f(lo) and f(hi) differ in sign, run until the
/// bracket is x_rel_tol * |x| wide.
template <class F>
[[nodiscard]] double bisect(F&& f, double lo, double hi, double x_rel_tol = 1e-15)
{
    double f_lo = f(lo);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f(hi) == 0.0) {
        return hi;
    }
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= x_rel_tol * std::abs(mid) || mid == lo || mid == hi) {
            break;
        }
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Sub-intervals [x_i, x_{i+1}] of a uniform scan on which f changes sign.
template <class F>
[[nodiscard]] std::vector<std::pair<double, double>> sign_changes(F&& f, double lo, double hi,
                                                                  std::size_t intervals)
{
    std::vector<std::pair<double, double>> out;
    const double step = (hi - lo) / static_cast<double>(intervals);
    double x_prev = lo;
    double f_prev = f(lo);
    for (std::size_t i = 1; i <= intervals; ++i) {
        const double x = i == intervals ? hi : lo + step * static_cast<double>(i);
        const double fx = f(x);
        if (f_prev == 0.0 || (fx != 0.0 && (fx < 0.0) != (f_prev < 0.0))) {
            out.emplace_back(x_prev, x);
        }
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0) {
        out.emplace_back(hi, hi);
    }
    return out;
}

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
[[nodiscard]] double golden_max(F&& f, double lo, double hi, double x_rel_tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_rel_tol * std::abs(0.5 * (a + b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace fanosaw::roots
