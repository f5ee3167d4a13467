#pragma once

// Long-exposure style SVG rendering of marker traces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ropera/detail/text.hpp"
#include "ropera/error.hpp"
#include "ropera/kinesim.hpp"
#include "ropera/types.hpp"

namespace ropera {

enum class Plane { XY, XZ, YZ };

inline std::string_view to_string(Plane p) {
    switch (p) {
    case Plane::XY: return "XY";
    case Plane::XZ: return "XZ";
    case Plane::YZ: return "YZ";
    }
    return "XZ";
}

struct ExposurePass {
    double width_scale = 1.0;
    double opacity = 1.0;
};

struct RenderConfig {
    Plane plane = Plane::XZ;
    int width = 800;
    int height = 600;
    double margin = 24.0;
    double stroke_width = 2.0;
    // Palette entry names per marker; empty cycles through the palette.
    std::vector<std::string> marker_colors;
    // Stacked translucent strokes, widest first.
    std::vector<ExposurePass> passes = {{4.0, 0.12}, {2.0, 0.25}, {1.0, 0.8}};
    // Opacity contributed by each stacked sample where a marker dwells.
    double dwell_alpha = 0.02;
    Rgb background{0, 0, 0};
    std::string title;
};

namespace detail {

// Fixed-point text with `decimals` digits; rounding is done in integers so the
// output does not depend on printf.
inline std::string fixed(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    auto units = static_cast<std::int64_t>(std::llround(value * scale));
    bool negative = units < 0;
    std::uint64_t mag = negative ? static_cast<std::uint64_t>(-units) : static_cast<std::uint64_t>(units);
    std::uint64_t div = 1;
    for (int i = 0; i < decimals; ++i) {
        div *= 10;
    }
    std::string frac = std::to_string(mag % div);
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    std::string out = (negative && mag != 0) ? "-" : "";
    out += std::to_string(mag / div);
    if (decimals > 0) {
        out += "." + frac;
    }
    return out;
}

inline std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

inline std::string comment_safe(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
            c = ' ';
        }
        if (c == '-' && !out.empty() && out.back() == '-') {
            out.push_back(' ');
        }
        out.push_back(c);
    }
    if (!out.empty() && out.back() == '-') {
        out.push_back(' ');
    }
    return out;
}

inline Eigen::Vector2d project(const Eigen::Vector3d& p, Plane plane) {
    switch (plane) {
    case Plane::XY: return {p.x(), p.y()};
    case Plane::XZ: return {p.x(), p.z()};
    case Plane::YZ: return {p.y(), p.z()};
    }
    return {p.x(), p.z()};
}

inline std::string config_fingerprint(const Palette& palette, const RenderConfig& config) {
    std::string s = std::string(to_string(config.plane)) + ";" + std::to_string(config.width) + "x" +
                    std::to_string(config.height) + ";m=" + format_number(config.margin) +
                    ";w=" + format_number(config.stroke_width) + ";dwell=" + format_number(config.dwell_alpha) +
                    ";bg=" + config.background.hex() + ";passes=";
    for (const auto& p : config.passes) {
        s += format_number(p.width_scale) + "/" + format_number(p.opacity) + ",";
    }
    s += ";colors=";
    for (const auto& c : config.marker_colors) {
        s += c + ",";
    }
    s += ";palette=";
    for (const auto& c : palette) {
        s += c.name + "=" + c.color.hex() + ",";
    }
    return s;
}

} // namespace detail

// Canvas-space vertices (already rounded to 0.01 px) for every marker, as
// emitted by render(). Exposed for inspection and testing.
inline std::vector<std::vector<Eigen::Vector2d>> project_trace(const CartesianTrace& trace, const RenderConfig& config) {
    if (trace.positions.empty() || trace.marker_names.empty()) {
        throw Error(ErrorCode::EmptyTrace, "nothing to render");
    }
    if (config.width <= 0 || config.height <= 0 || config.margin < 0.0 ||
        2.0 * config.margin >= std::min(config.width, config.height)) {
        throw Error(ErrorCode::InvalidArgument, "canvas dimensions must be positive and exceed the margins");
    }
    const std::size_t markers = trace.marker_names.size();
    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (const auto& sample : trace.positions) {
        if (sample.size() != markers) {
            throw Error(ErrorCode::LengthMismatch, "trace sample has the wrong marker count");
        }
        for (const auto& p : sample) {
            Eigen::Vector2d q = detail::project(p, config.plane);
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
    }
    const double avail_w = config.width - 2.0 * config.margin;
    const double avail_h = config.height - 2.0 * config.margin;
    const Eigen::Vector2d span = hi - lo;
    double scale = std::numeric_limits<double>::infinity();
    if (span.x() > 0.0) scale = std::min(scale, avail_w / span.x());
    if (span.y() > 0.0) scale = std::min(scale, avail_h / span.y());
    if (!std::isfinite(scale)) scale = 1.0;
    const Eigen::Vector2d center = (lo + hi) / 2.0;

    std::vector<std::vector<Eigen::Vector2d>> out(markers);
    for (std::size_t m = 0; m < markers; ++m) {
        out[m].reserve(trace.positions.size());
        for (const auto& sample : trace.positions) {
            Eigen::Vector2d q = detail::project(sample[m], config.plane) - center;
            double x = config.width / 2.0 + q.x() * scale;
            double y = config.height / 2.0 - q.y() * scale;
            x = std::clamp(std::round(x * 100.0) / 100.0, 0.0, static_cast<double>(config.width));
            y = std::clamp(std::round(y * 100.0) / 100.0, 0.0, static_cast<double>(config.height));
            out[m].emplace_back(x, y);
        }
    }
    return out;
}

// Each marker becomes one polyline per exposure pass (every trace sample is a
// vertex). Runs of samples that project to the same pixel position add a
// point-like path whose opacity grows with the run length, so rests read
// brighter, as they would on a long exposure.
inline std::string render(const CartesianTrace& trace, const Palette& palette, const RenderConfig& config) {
    const Palette& colors = palette.empty() ? default_palette() : palette;
    auto vertices = project_trace(trace, config);
    using detail::fixed;

    const std::string w = std::to_string(config.width);
    const std::string h = std::to_string(config.height);
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
           "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(detail::config_fingerprint(colors, config))));
    svg += "<!-- ropera light painting\n";
    svg += "label: " + detail::comment_safe(config.title) + "\n";
    svg += "plane: " + std::string(to_string(config.plane)) + "\n";
    svg += "config-hash: " + std::string(hash) + "\n";
    svg += "samples: " + std::to_string(trace.positions.size()) + "\n";
    svg += "-->\n";
    svg += "<path d=\"M0 0H" + w + "V" + h + "H0Z\" fill=\"" + config.background.hex() + "\"/>\n";

    for (std::size_t m = 0; m < vertices.size(); ++m) {
        const Rgb* color = nullptr;
        if (m < config.marker_colors.size()) {
            color = find_color(colors, config.marker_colors[m]);
            if (!color) {
                throw Error(ErrorCode::InvalidArgument, "palette has no color '" + config.marker_colors[m] + "'");
            }
        } else {
            color = &colors[m % colors.size()].color;
        }
        svg += "<g id=\"marker-" + detail::xml_escape(trace.marker_names[m]) + "\" fill=\"none\" stroke=\"" +
               color->hex() + "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";

        std::string points;
        for (std::size_t k = 0; k < vertices[m].size(); ++k) {
            if (k) points += ' ';
            points += fixed(vertices[m][k].x(), 2) + "," + fixed(vertices[m][k].y(), 2);
        }
        for (const auto& pass : config.passes) {
            svg += "<polyline stroke-width=\"" + fixed(config.stroke_width * pass.width_scale, 2) +
                   "\" stroke-opacity=\"" + fixed(pass.opacity, 4) + "\" points=\"" + points + "\"/>\n";
        }

        const auto& vs = vertices[m];
        for (std::size_t k = 0; k < vs.size();) {
            std::size_t end = k + 1;
            while (end < vs.size() && vs[end] == vs[k]) {
                ++end;
            }
            std::size_t run = end - k;
            if (run >= 2) {
                double opacity = 1.0 - std::pow(1.0 - config.dwell_alpha, static_cast<double>(run));
                svg += "<path d=\"M" + fixed(vs[k].x(), 2) + " " + fixed(vs[k].y(), 2) + "h0\" stroke-width=\"" +
                       fixed(config.stroke_width * 3.0, 2) + "\" stroke-opacity=\"" + fixed(opacity, 4) + "\"/>\n";
            }
            k = end;
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace ropera
