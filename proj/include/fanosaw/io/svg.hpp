#pragma once

// Self-contained SVG figures on a fixed 900x600 viewBox: line plots and heat
// maps (the raster is an embedded base64 PNG).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <png.h>

#include "fanosaw/error.hpp"

namespace fanosaw::io {

inline constexpr double svg_width = 900.0;
inline constexpr double svg_height = 600.0;

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    bool log_x = false;
};

struct HeatMap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string value_label;
    std::vector<double> x;       // column coordinates
    std::vector<double> y;       // row coordinates
    std::vector<double> values;  // values[row * x.size() + col]; NaN drawn grey
    bool log_x = false;
    bool log_y = false;
};

namespace detail {

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c; break;
        }
    }
    return out;
}

inline std::string fmt(double v, const char* spec = "%.2f")
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline std::string tick_text(double v)
{
    if (v == 0.0) {
        return "0";
    }
    return fmt(v, "%.6g");
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    [[nodiscard]] bool valid() const { return lo <= hi; }
    void pad_if_flat()
    {
        if (!valid()) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi - lo <= 1e-300 + 1e-12 * std::abs(hi)) {
            const double d = std::abs(hi) > 0.0 ? 0.05 * std::abs(hi) : 1.0;
            lo -= d;
            hi += d;
        }
    }
};

/// Roughly `target` round-valued ticks covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6)
{
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ticks;
}

inline std::vector<double> log_ticks(double lo, double hi)
{
    std::vector<double> ticks;
    for (double e = std::ceil(std::log10(lo) - 1e-9); e <= std::log10(hi) + 1e-9; e += 1.0) {
        ticks.push_back(std::pow(10.0, e));
    }
    if (ticks.size() < 2) {
        ticks = {lo, hi};
    }
    return ticks;
}

struct Frame {
    double left = 95.0;
    double right = 870.0;
    double top = 60.0;
    double bottom = 530.0;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool log_x = false, log_y = false;

    [[nodiscard]] double tx(double v) const { return log_x ? std::log10(v) : v; }
    [[nodiscard]] double ty(double v) const { return log_y ? std::log10(v) : v; }
    [[nodiscard]] double px(double v) const
    {
        return left + (tx(v) - tx(x_lo)) / (tx(x_hi) - tx(x_lo)) * (right - left);
    }
    [[nodiscard]] double py(double v) const
    {
        return bottom - (ty(v) - ty(y_lo)) / (ty(y_hi) - ty(y_lo)) * (bottom - top);
    }
};

inline void open_svg(std::ostringstream& os, const std::string& title)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 900 600\" width=\"900\" "
          "height=\"600\" font-family=\"sans-serif\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"900\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"450\" y=\"32\" text-anchor=\"middle\" font-size=\"18\">" << xml_escape(title)
       << "</text>\n";
}

inline void draw_axes(std::ostringstream& os, const Frame& f, const std::string& x_label,
                      const std::string& y_label)
{
    os << "<rect x=\"" << fmt(f.left) << "\" y=\"" << fmt(f.top) << "\" width=\""
       << fmt(f.right - f.left) << "\" height=\"" << fmt(f.bottom - f.top)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    const auto xt = f.log_x ? log_ticks(f.x_lo, f.x_hi) : nice_ticks(f.x_lo, f.x_hi);
    const auto yt = f.log_y ? log_ticks(f.y_lo, f.y_hi) : nice_ticks(f.y_lo, f.y_hi);
    for (double t : xt) {
        const double x = f.px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.bottom) << "\" x2=\"" << fmt(x)
           << "\" y2=\"" << fmt(f.bottom + 6) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(f.bottom + 22)
           << "\" text-anchor=\"middle\" font-size=\"13\">" << tick_text(t) << "</text>\n";
    }
    for (double t : yt) {
        const double y = f.py(t);
        os << "<line x1=\"" << fmt(f.left - 6) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(f.left)
           << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(f.left - 10) << "\" y=\"" << fmt(y + 4)
           << "\" text-anchor=\"end\" font-size=\"13\">" << tick_text(t) << "</text>\n";
    }
    os << "<text x=\"" << fmt(0.5 * (f.left + f.right)) << "\" y=\"" << fmt(f.bottom + 50)
       << "\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(x_label) << "</text>\n";
    const double cy = 0.5 * (f.top + f.bottom);
    os << "<text x=\"22\" y=\"" << fmt(cy) << "\" text-anchor=\"middle\" font-size=\"15\" "
       << "transform=\"rotate(-90 22 " << fmt(cy) << ")\">" << xml_escape(y_label) << "</text>\n";
}

// Perceptually ordered colour ramp (viridis control points).
inline std::array<std::uint8_t, 3> ramp(double t)
{
    static constexpr std::array<std::array<double, 3>, 6> stops{{
        {68, 1, 84}, {65, 68, 135}, {42, 120, 142}, {34, 168, 132}, {122, 209, 81}, {253, 231, 37},
    }};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double w = t - static_cast<double>(i);
    std::array<std::uint8_t, 3> c{};
    for (std::size_t k = 0; k < 3; ++k) {
        c[k] = static_cast<std::uint8_t>(std::lround(stops[i][k] * (1 - w) + stops[i + 1][k] * w));
    }
    return c;
}

inline std::string base64(const std::vector<unsigned char>& data)
{
    static constexpr char table[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < data.size(); i += 3) {
        const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += table[(v >> 6) & 63];
        out += table[v & 63];
    }
    if (i < data.size()) {
        std::uint32_t v = data[i] << 16;
        if (i + 1 < data.size()) {
            v |= data[i + 1] << 8;
        }
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += i + 1 < data.size() ? table[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

/// RGB8 image (row-major, top row first) encoded as PNG bytes.
inline std::vector<unsigned char> encode_png(const std::vector<std::uint8_t>& rgb,
                                             std::size_t width, std::size_t height)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) {
        throw IoError("PNG encoder initialisation failed");
    }
    png_infop info = png_create_info_struct(png);
    std::vector<unsigned char> out;
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(p));
            buf->insert(buf->end(), data, data + len);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < height; ++r) {
        png_write_row(png, const_cast<png_bytep>(rgb.data() + r * width * 3));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace detail

[[nodiscard]] inline std::string render_svg(const LinePlot& plot)
{
    using namespace detail;
    Range xr;
    Range yr;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (std::isfinite(s.y[i])) {
                xr.add(s.x[i]);
                yr.add(s.y[i]);
            }
        }
    }
    xr.pad_if_flat();
    yr.pad_if_flat();
    Frame f;
    f.log_x = plot.log_x && xr.lo > 0.0;
    f.x_lo = xr.lo;
    f.x_hi = xr.hi;
    const double pad = 0.04 * (yr.hi - yr.lo);
    f.y_lo = yr.lo - pad;
    f.y_hi = yr.hi + pad;

    std::ostringstream os;
    open_svg(os, plot.title);
    draw_axes(os, f, plot.x_label, plot.y_label);
    os << "<clipPath id=\"plot-area\"><rect x=\"" << fmt(f.left) << "\" y=\"" << fmt(f.top)
       << "\" width=\"" << fmt(f.right - f.left) << "\" height=\"" << fmt(f.bottom - f.top)
       << "\"/></clipPath>\n";
    for (const auto& s : plot.series) {
        // NaN samples split the curve.
        std::vector<std::string> segments(1);
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) {
                if (!segments.back().empty()) {
                    segments.emplace_back();
                }
                continue;
            }
            segments.back() += fmt(f.px(s.x[i])) + "," + fmt(f.py(s.y[i])) + " ";
        }
        for (const auto& pts : segments) {
            if (pts.empty()) {
                continue;
            }
            os << "<polyline clip-path=\"url(#plot-area)\" fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"" << (s.dashed ? "1.6" : "1.8") << "\"";
            if (s.dashed) {
                os << " stroke-dasharray=\"7,4\"";
            }
            os << " points=\"" << pts << "\"/>\n";
        }
    }
    double ly = f.top + 18;
    for (const auto& s : plot.series) {
        if (s.label.empty()) {
            continue;
        }
        os << "<line x1=\"" << fmt(f.right - 200) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
           << fmt(f.right - 170) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"7,4\"" : "") << "/>\n";
        os << "<text x=\"" << fmt(f.right - 162) << "\" y=\"" << fmt(ly)
           << "\" font-size=\"13\">" << xml_escape(s.label) << "</text>\n";
        ly += 18;
    }
    os << "</svg>\n";
    return os.str();
}

[[nodiscard]] inline std::string render_svg(const HeatMap& map)
{
    using namespace detail;
    const std::size_t nx = map.x.size();
    const std::size_t ny = map.y.size();
    if (nx < 2 || ny < 2 || map.values.size() != nx * ny) {
        throw ValidationError("heat map needs at least 2x2 cells and matching value count");
    }
    Range vr;
    for (double v : map.values) {
        vr.add(v);
    }
    vr.pad_if_flat();

    // One pixel per cell, top row = largest y.
    std::vector<std::uint8_t> rgb(nx * ny * 3);
    for (std::size_t r = 0; r < ny; ++r) {
        const std::size_t row = ny - 1 - r;
        for (std::size_t c = 0; c < nx; ++c) {
            const double v = map.values[row * nx + c];
            std::array<std::uint8_t, 3> col{160, 160, 160};
            if (std::isfinite(v)) {
                col = ramp((v - vr.lo) / (vr.hi - vr.lo));
            }
            std::copy(col.begin(), col.end(), rgb.begin() + static_cast<std::ptrdiff_t>((r * nx + c) * 3));
        }
    }
    const std::string png = base64(encode_png(rgb, nx, ny));

    Frame f;
    f.right = 760.0;
    f.log_x = map.log_x && map.x.front() > 0.0;
    f.log_y = map.log_y && map.y.front() > 0.0;
    f.x_lo = map.x.front();
    f.x_hi = map.x.back();
    f.y_lo = map.y.front();
    f.y_hi = map.y.back();

    std::ostringstream os;
    open_svg(os, map.title);
    os << "<image x=\"" << fmt(f.left) << "\" y=\"" << fmt(f.top) << "\" width=\""
       << fmt(f.right - f.left) << "\" height=\"" << fmt(f.bottom - f.top)
       << "\" preserveAspectRatio=\"none\" style=\"image-rendering:pixelated\" "
       << "href=\"data:image/png;base64," << png << "\"/>\n";
    draw_axes(os, f, map.x_label, map.y_label);

    // Colour bar.
    const double bx = 790.0;
    const double bw = 22.0;
    const int steps = 64;
    const double h = (f.bottom - f.top) / steps;
    for (int i = 0; i < steps; ++i) {
        const auto c = ramp((i + 0.5) / steps);
        os << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(f.bottom - (i + 1) * h) << "\" width=\""
           << fmt(bw) << "\" height=\"" << fmt(h + 0.5) << "\" fill=\"rgb(" << int(c[0]) << ","
           << int(c[1]) << "," << int(c[2]) << ")\"/>\n";
    }
    for (double t : nice_ticks(vr.lo, vr.hi, 5)) {
        const double y = f.bottom - (t - vr.lo) / (vr.hi - vr.lo) * (f.bottom - f.top);
        os << "<text x=\"" << fmt(bx + bw + 4) << "\" y=\"" << fmt(y + 4)
           << "\" font-size=\"12\">" << tick_text(t) << "</text>\n";
    }
    os << "<text x=\"" << fmt(bx + bw / 2) << "\" y=\"" << fmt(f.top - 10)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(map.value_label)
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace fanosaw::io
