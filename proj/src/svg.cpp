#include "internal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mvos_hsi/errors.hpp"

namespace mvos_hsi::detail {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

} // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<double>& x, const std::vector<ChartSeries>& series) {
    if (x.empty() || series.empty())
        throw Error("line chart needs at least one x value and one series");

    double x_min = x.front(), x_max = x.back();
    for (double v : x) {
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
    }
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    for (const ChartSeries& s : series) {
        if (s.values.size() != x.size())
            throw Error("series '" + s.label + "' length does not match the x axis");
        for (double v : s.values) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (x_max == x_min)
        x_max = x_min + 1.0;
    if (y_max == y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    } else {
        const double pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }

    // Fixed geometry keeps output byte-identical for identical inputs.
    const double width = 880, height = 560;
    const double ml = 80, mr = 190, mt = 50, mb = 70;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - y_min) / (y_max - y_min) * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
           "viewBox=\"0 0 880 560\">\n";
    svg += "<rect width=\"880\" height=\"560\" fill=\"white\"/>\n";
    if (!title.empty())
        svg += "<text x=\"" + fmt(ml + pw / 2) +
               "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"18\">" +
               escape_xml(title) + "</text>\n";

    // Grid and ticks: 5 divisions per axis.
    for (int i = 0; i <= 5; ++i) {
        const double fx_ = x_min + (x_max - x_min) * i / 5.0;
        const double fy_ = y_min + (y_max - y_min) * i / 5.0;
        const double px = sx(fx_), py = sy(fy_);
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(ml + pw) +
               "\" y2=\"" + fmt(py) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(mt + ph + 22) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(fx_) + "</text>\n";
        svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(fy_) + "</text>\n";
    }

    // Axes frame.
    svg += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape_xml(x_label) + "</text>\n";
    svg += "<text x=\"22\" y=\"" + fmt(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 22 " +
           fmt(mt + ph / 2) + ")\">" + escape_xml(y_label) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % kPaletteSize];
        std::string points;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i)
                points += ' ';
            points += fmt(sx(x[i])) + "," + fmt(sy(series[si].values[i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";

        const double ly = mt + 14 + 20 * static_cast<double>(si);
        svg += "<line x1=\"" + fmt(ml + pw + 14) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
               fmt(ml + pw + 38) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(ml + pw + 44) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(series[si].label) + "</text>\n";
    }
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write chart file '" + path.string() + "'");
    out << svg;
    out.close();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

} // namespace mvos_hsi::detail
