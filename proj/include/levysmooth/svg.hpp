#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace levysmooth {

struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb2";
    std::vector<double> x, y;
};

struct SvgPlotOptions {
    int width = 720;
    int height = 480;
    bool log_x = false;
    bool log_y = false;
    std::string title;
    std::string annotation;  // rendered top-right (e.g. fitted slope)
};

// Standalone SVG line plot, no external renderer. Axes, ticks, legend and an
// optional annotation; series with empty data still produce a framed plot.
inline void write_svg_plot(const std::vector<SvgSeries>& series, const SvgPlotOptions& opt,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const double W = opt.width, H = opt.height;
    const double ml = 64, mr = 24, mt = 40, mb = 48;  // margins

    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (opt.log_x && !(s.x[i] > 0.0)) continue;
            if (opt.log_y && !(s.y[i] > 0.0)) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
            any = true;
        }
    if (!any) {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;

    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
        << H - mt - mb << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (!opt.title.empty())
        out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << opt.title << "</text>\n";
    if (!opt.annotation.empty())
        out << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 16
            << "\" text-anchor=\"end\" font-size=\"13\" fill=\"#333\">" << opt.annotation
            << "</text>\n";

    // ticks: 5 per axis in the transformed scale
    for (int i = 0; i <= 4; ++i) {
        double fx = x0 + (x1 - x0) * i / 4.0;
        double fy = y0 + (y1 - y0) * i / 4.0;
        double gx = ml + (W - ml - mr) * i / 4.0;
        double gy = H - mb - (H - mt - mb) * i / 4.0;
        double vx = opt.log_x ? std::pow(10.0, fx) : fx;
        double vy = opt.log_y ? std::pow(10.0, fy) : fy;
        char bx[32], by[32];
        std::snprintf(bx, sizeof(bx), "%.3g", vx);
        std::snprintf(by, sizeof(by), "%.3g", vy);
        out << "<line x1=\"" << gx << "\" y1=\"" << H - mb << "\" x2=\"" << gx << "\" y2=\""
            << H - mb + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << gx << "\" y=\"" << H - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << bx << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
            << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << by << "</text>\n";
    }

    int legend_row = 0;
    for (const auto& s : series) {
        if (!s.x.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (opt.log_x && !(s.x[i] > 0.0)) continue;
                if (opt.log_y && !(s.y[i] > 0.0)) continue;
                out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            }
            out << "\"/>\n";
        }
        if (!s.label.empty()) {
            double ly = mt + 16 + 16 * legend_row++;
            out << "<line x1=\"" << ml + 8 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 28
                << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << ml + 34 << "\" y=\"" << ly
                << "\" font-size=\"12\" fill=\"#333\">" << s.label << "</text>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace levysmooth
