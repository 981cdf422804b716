#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "contour.hpp"
#include "domain.hpp"
#include "error.hpp"

namespace isoprofile::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f4e9c";
    std::string dash;  // stroke-dasharray, empty for solid
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

// Fixed 6-decimal coordinates keep the output byte-stable.
inline std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", std::abs(x) < 5e-7 ? 0.0 : x);
    return buf;
}

inline std::string tick_label(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", std::abs(x) < 1e-12 ? 0.0 : x);
    return buf;
}

inline double nice_step(double range) {
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

inline std::string header(double w, double h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
}

}  // namespace detail

/// Line plots side by side, each with its own axes and tick labels.
inline std::string render_panels(const std::vector<Panel>& panels) {
    if (panels.empty()) throw Error(ErrorKind::InvalidInput, "nothing to plot");
    const double pw = 480, ph = 360, ml = 64, mr = 20, mt = 36, mb = 52;
    std::ostringstream out;
    out << detail::header(pw * static_cast<double>(panels.size()), ph);
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const Panel& panel = panels[k];
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const Series& s : panel.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        if (!(x1 > x0)) throw Error(ErrorKind::InvalidInput, "plot \"" + panel.title + "\" has no data");
        y0 = std::min(y0, 0.0);
        if (!(y1 > y0)) y1 = y0 + 1.0;
        const double left = pw * static_cast<double>(k) + ml;
        const double width = pw - ml - mr, height = ph - mt - mb;
        auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * width; };
        auto sy = [&](double y) { return mt + height - (y - y0) / (y1 - y0) * height; };

        out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
        out << "<text x=\"" << detail::num(left + 0.5 * width) << "\" y=\"" << detail::num(mt - 14)
            << "\" text-anchor=\"middle\" font-size=\"13\">" << detail::escape(panel.title) << "</text>\n";
        out << "<rect x=\"" << detail::num(left) << "\" y=\"" << detail::num(mt) << "\" width=\"" << detail::num(width)
            << "\" height=\"" << detail::num(height) << "\" fill=\"none\" stroke=\"black\"/>\n";
        const double xs = detail::nice_step(x1 - x0);
        for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
            out << "<line x1=\"" << detail::num(sx(t)) << "\" y1=\"" << detail::num(mt + height) << "\" x2=\""
                << detail::num(sx(t)) << "\" y2=\"" << detail::num(mt + height + 5) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << detail::num(sx(t)) << "\" y=\"" << detail::num(mt + height + 18)
                << "\" text-anchor=\"middle\">" << detail::tick_label(t) << "</text>\n";
        }
        const double ys = detail::nice_step(y1 - y0);
        for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
            out << "<line x1=\"" << detail::num(left - 5) << "\" y1=\"" << detail::num(sy(t)) << "\" x2=\""
                << detail::num(left) << "\" y2=\"" << detail::num(sy(t)) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << detail::num(left - 8) << "\" y=\"" << detail::num(sy(t) + 4)
                << "\" text-anchor=\"end\">" << detail::tick_label(t) << "</text>\n";
        }
        out << "<text x=\"" << detail::num(left + 0.5 * width) << "\" y=\"" << detail::num(ph - 12)
            << "\" text-anchor=\"middle\">" << detail::escape(panel.x_label) << "</text>\n";
        out << "<text x=\"" << detail::num(left - 46) << "\" y=\"" << detail::num(mt + 0.5 * height)
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << detail::num(left - 46) << ' '
            << detail::num(mt + 0.5 * height) << ")\">" << detail::escape(panel.y_label) << "</text>\n";
        for (const Series& s : panel.series) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
            out << " points=\"";
            bool first = true;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out << (first ? "" : " ") << detail::num(sx(s.x[i])) << ',' << detail::num(sy(s.y[i]));
                first = false;
            }
            out << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

/// The domain outline with filled contours drawn over it (y up).
inline std::string render_contours(const JordanDomain& d, const std::vector<Polyline>& contours,
                                   const std::string& title = {}) {
    if (contours.empty()) throw Error(ErrorKind::InvalidInput, "no contours to draw");
    const BoundingBox box = d.bbox();
    const double span = std::max(box.width(), box.height());
    const double scale = 560.0 / span, margin = 30.0;
    const double w = box.width() * scale + 2 * margin, h = box.height() * scale + 2 * margin + 20;
    auto sx = [&](double x) { return margin + (x - box.min.x) * scale; };
    auto sy = [&](double y) { return h - margin - (y - box.min.y) * scale; };
    auto path = [&](const Polyline& line) {
        std::string s;
        for (std::size_t i = 0; i < line.size(); ++i)
            s += (i == 0 ? "M" : " L") + detail::num(sx(line[i].x)) + "," + detail::num(sy(line[i].y));
        return s + " Z";
    };
    std::ostringstream out;
    out << detail::header(w, h);
    if (!title.empty())
        out << "<text x=\"" << detail::num(0.5 * w) << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"13\">" << detail::escape(title) << "</text>\n";
    std::string all;
    for (const Polyline& line : contours) all += (all.empty() ? "" : " ") + path(line);
    out << "<path d=\"" << all << "\" fill=\"#9ec5f0\" fill-rule=\"evenodd\" stroke=\"#1f4e9c\" stroke-width=\"1.2\"/>\n";
    out << "<path d=\"" << path(Polyline(d.vertices().begin(), d.vertices().end())) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace isoprofile::svg
