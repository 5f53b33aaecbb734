// Copyright 2026 The steerhier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include "steerhier/tools/sweep.hpp"

namespace steer::tools {

namespace {

constexpr double kPanelWidth = 640.0;
constexpr double kPanelHeight = 360.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string series_name(const SweepRow &r) {
    if (r.criterion.ends_with("delta2") || r.criterion.ends_with("delta3")) {
        return r.criterion + ":" + std::to_string(r.order);
    }
    return r.criterion;
}

}  // namespace

std::string render_svg(const std::vector<SweepRow> &rows) {
    if (rows.empty()) throw std::invalid_argument("no data");

    // N -> series -> (mu, value), kept sorted for byte-stable output.
    std::map<int, std::map<std::string, std::vector<std::pair<double, double>>>> panels;
    std::map<std::string, std::size_t> colour;
    for (const auto &r : rows) {
        panels[r.n_atoms][series_name(r)].emplace_back(r.mu, r.value);
        colour.emplace(series_name(r), 0);
    }
    std::size_t next = 0;
    for (auto &[name, idx] : colour) idx = next++ % std::size(kPalette);

    const double height = kPanelHeight * static_cast<double>(panels.size());
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kPanelWidth) + "\" height=\"" +
                      num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    double y0 = 0.0;
    for (auto &[n, series] : panels) {
        double mu_lo = series.begin()->second.front().first, mu_hi = mu_lo;
        double v_lo = 0.0, v_hi = 0.0;  // keep the zero line inside the frame
        for (auto &[name, pts] : series) {
            std::sort(pts.begin(), pts.end());
            for (const auto &[mu, v] : pts) {
                mu_lo = std::min(mu_lo, mu);
                mu_hi = std::max(mu_hi, mu);
                v_lo = std::min(v_lo, v);
                v_hi = std::max(v_hi, v);
            }
        }
        if (mu_hi == mu_lo) mu_hi = mu_lo + 1.0;
        if (v_hi == v_lo) v_hi = v_lo + 1.0;

        const double left = kMarginLeft, right = kPanelWidth - kMarginRight;
        const double top = y0 + kMarginTop, bottom = y0 + kPanelHeight - kMarginBottom;
        auto px = [&](double mu) { return left + (mu - mu_lo) / (mu_hi - mu_lo) * (right - left); };
        auto py = [&](double v) { return bottom - (v - v_lo) / (v_hi - v_lo) * (bottom - top); };

        svg += "<g class=\"panel\" data-n=\"" + std::to_string(n) + "\">\n";
        svg += "<text x=\"" + num(left) + "\" y=\"" + num(y0 + 22.0) + "\" font-size=\"14\">N = " +
               std::to_string(n) + "</text>\n";
        svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) + "\" height=\"" +
               num(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
        svg += "<line class=\"zero\" x1=\"" + num(left) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" + num(right) +
               "\" y2=\"" + num(py(0.0)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
        // Tick labels at the ends of both axes.
        svg += "<text x=\"" + num(left) + "\" y=\"" + num(bottom + 16.0) + "\" text-anchor=\"middle\">" +
               label(mu_lo) + "</text>\n";
        svg += "<text x=\"" + num(right) + "\" y=\"" + num(bottom + 16.0) + "\" text-anchor=\"middle\">" +
               label(mu_hi) + "</text>\n";
        svg += "<text x=\"" + num(left - 6.0) + "\" y=\"" + num(bottom) + "\" text-anchor=\"end\">" + label(v_lo) +
               "</text>\n";
        svg += "<text x=\"" + num(left - 6.0) + "\" y=\"" + num(top + 10.0) + "\" text-anchor=\"end\">" +
               label(v_hi) + "</text>\n";
        svg += "<text x=\"" + num(0.5 * (left + right)) + "\" y=\"" + num(bottom + 36.0) +
               "\" text-anchor=\"middle\">μ</text>\n";
        svg += "<text x=\"" + num(18.0) + "\" y=\"" + num(0.5 * (top + bottom)) +
               "\" text-anchor=\"middle\">δ</text>\n";

        double legend_y = top + 12.0;
        for (const auto &[name, pts] : series) {
            const char *stroke = kPalette[colour.at(name)];
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i) svg += ' ';
                svg += num(px(pts[i].first)) + ',' + num(py(pts[i].second));
            }
            svg += "\"/>\n";
            svg += "<line x1=\"" + num(right + 12.0) + "\" y1=\"" + num(legend_y - 4.0) + "\" x2=\"" +
                   num(right + 32.0) + "\" y2=\"" + num(legend_y - 4.0) + "\" stroke=\"" + stroke +
                   "\" stroke-width=\"1.5\"/>\n";
            svg += "<text x=\"" + num(right + 38.0) + "\" y=\"" + num(legend_y) + "\">" + name + "</text>\n";
            legend_y += 16.0;
        }
        svg += "</g>\n";
        y0 += kPanelHeight;
    }
    svg += "</svg>\n";
    return svg;
}

void render_plot(const std::vector<SweepRow> &rows, const std::filesystem::path &plot_path) {
    write_atomically(plot_path, render_svg(rows));
}

}  // namespace steer::tools
