#pragma once

// Minimal self-contained SVG renderings of sweep results.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace chaocav::cli::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
    double width = 760, height = 480;
    double left = 70, right = 150, top = 40, bottom = 60;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline void axes(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel) {
    os << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
       << "</text>\n";
    const double xa = f.py(f.y0), ya = f.px(f.x0);
    os << "<line x1=\"" << num(f.px(f.x0)) << "\" y1=\"" << num(xa) << "\" x2=\"" << num(f.px(f.x1)) << "\" y2=\""
       << num(xa) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(ya) << "\" y1=\"" << num(f.py(f.y0)) << "\" x2=\"" << num(ya) << "\" y2=\""
       << num(f.py(f.y1)) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
        os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(xa + 18) << "\" text-anchor=\"middle\" font-size=\"12\">"
           << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << num(ya - 8) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\" font-size=\"12\">"
           << tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << num(f.px(0.5 * (f.x0 + f.x1))) << "\" y=\"" << num(f.height - 15)
       << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num(f.py(0.5 * (f.y0 + f.y1))) << "\" text-anchor=\"middle\" font-size=\"14\" "
       << "transform=\"rotate(-90 18 " << num(f.py(0.5 * (f.y0 + f.y1))) << ")\">" << escape(ylabel) << "</text>\n";
}

inline std::string open_svg(const Frame& f) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
       << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\" font-family=\"sans-serif\">\n";
    return os.str();
}

// Blue (0) to yellow (1).
inline std::string color_for(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const auto r = static_cast<int>(std::lround(68 + v * (253 - 68)));
    const auto g = static_cast<int>(std::lround(1 + v * (231 - 1)));
    const auto b = static_cast<int>(std::lround(84 + v * (37 - 84)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

// Lines of y in [0, 1] against x, one per series, with a legend.
inline std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                              const std::string& ylabel) {
    detail::Frame f;
    double xmin = 0, xmax = 1;
    bool first = true;
    for (const auto& s : series)
        for (double x : s.x) {
            xmin = first ? x : std::min(xmin, x);
            xmax = first ? x : std::max(xmax, x);
            first = false;
        }
    f.x0 = xmin;
    f.x1 = xmax > xmin ? xmax : xmin + 1.0;

    std::ostringstream os;
    os << detail::open_svg(f);
    detail::axes(os, f, title, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = detail::palette[k % detail::palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << (i ? " " : "") << detail::num(f.px(s.x[i])) << "," << detail::num(f.py(std::clamp(s.y[i], 0.0, 1.0)));
        os << "\"/>\n";
        const double ly = f.top + 20 + 20.0 * static_cast<double>(k);
        const double lx = f.width - f.right + 15;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly << "\" stroke=\""
           << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << detail::escape(s.label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// Filled grid of values in [0, 1]; value(i, j) belongs to (xs[i], ys[j]).
template <class Value>
std::string heatmap(const std::vector<double>& xs, const std::vector<double>& ys, Value&& value,
                    const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    detail::Frame f;
    f.x0 = xs.front();
    f.x1 = xs.back() > xs.front() ? xs.back() : xs.front() + 1.0;
    f.y0 = ys.front();
    f.y1 = ys.back() > ys.front() ? ys.back() : ys.front() + 1.0;

    auto edge = [](const std::vector<double>& v, std::size_t i, bool upper) {
        if (v.size() == 1) return v[0] + (upper ? 0.5 : -0.5);
        if (upper) return i + 1 < v.size() ? 0.5 * (v[i] + v[i + 1]) : v[i] + 0.5 * (v[i] - v[i - 1]);
        return i > 0 ? 0.5 * (v[i - 1] + v[i]) : v[i] - 0.5 * (v[i + 1] - v[i]);
    };

    std::ostringstream os;
    os << detail::open_svg(f);
    detail::axes(os, f, title, xlabel, ylabel);
    os << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double xa = f.px(std::max(f.x0, edge(xs, i, false)));
        const double xb = f.px(std::min(f.x1, edge(xs, i, true)));
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double ya = f.py(std::min(f.y1, edge(ys, j, true)));
            const double yb = f.py(std::max(f.y0, edge(ys, j, false)));
            os << "<rect x=\"" << detail::num(xa) << "\" y=\"" << detail::num(ya) << "\" width=\""
               << detail::num(xb - xa) << "\" height=\"" << detail::num(yb - ya) << "\" fill=\""
               << detail::color_for(value(i, j)) << "\"/>\n";
        }
    }
    os << "</g>\n";
    // colour bar
    const double bx = f.width - f.right + 30;
    for (int k = 0; k < 50; ++k) {
        const double v0 = k / 50.0;
        os << "<rect x=\"" << bx << "\" y=\"" << detail::num(f.py(f.y0 + (f.y1 - f.y0) * (v0 + 0.02)))
           << "\" width=\"20\" height=\"" << detail::num((f.height - f.top - f.bottom) / 50.0 + 0.5) << "\" fill=\""
           << detail::color_for(v0 + 0.01) << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = k / 4.0;
        os << "<text x=\"" << bx + 26 << "\" y=\"" << detail::num(f.py(f.y0 + (f.y1 - f.y0) * v) + 4)
           << "\" font-size=\"12\">" << detail::tick_label(v) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace chaocav::cli::svg
