#include "roadcov/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace roadcov {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Mapper {
    double lo = 0.0, hi = 1.0;
    double pix_lo = 0.0, pix_hi = 1.0;
    bool log_scale = false;

    double operator()(double v) const {
        const double a = log_scale ? std::log10(lo) : lo;
        const double b = log_scale ? std::log10(hi) : hi;
        const double x = log_scale ? std::log10(v) : v;
        const double t = (x - a) / (b - a);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

} // namespace

std::string render_line_chart(const ChartSpec& spec, const std::vector<ChartSeries>& series) {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                first = false;
            }
            x_lo = std::fmin(x_lo, s.x[i]);
            x_hi = std::fmax(x_hi, s.x[i]);
            y_lo = std::fmin(y_lo, s.y[i]);
            y_hi = std::fmax(y_hi, s.y[i]);
        }
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double ml = 62, mr = 16, mt = 34, mb = 46;
    Mapper mx{x_lo, x_hi, ml, spec.width - mr, spec.log_x};
    Mapper my{y_lo, y_hi, spec.height - mb, mt, false};

    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                  "width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  spec.width, spec.height, spec.width, spec.height);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  spec.width / 2, spec.title.c_str());
    out += buf;

    // Axes.
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                  num(ml).c_str(), num(spec.height - mb).c_str(),
                  num(spec.width - mr).c_str(), num(spec.height - mb).c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                  num(ml).c_str(), num(mt).c_str(), num(ml).c_str(),
                  num(spec.height - mb).c_str());
    out += buf;

    // Ticks.
    for (int i = 0; i <= 5; ++i) {
        const double ty = y_lo + (y_hi - y_lo) * i / 5.0;
        const double py = my(ty);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#cccccc\"/>"
                      "<text x=\"%s\" y=\"%s\" font-family=\"sans-serif\" font-size=\"10\" "
                      "text-anchor=\"end\">%s</text>\n",
                      num(ml).c_str(), num(py).c_str(), num(spec.width - mr).c_str(),
                      num(py).c_str(), num(ml - 6).c_str(), num(py + 3).c_str(),
                      num(ty).c_str());
        out += buf;
        double tx;
        if (spec.log_x) {
            const double la = std::log10(x_lo), lb = std::log10(x_hi);
            tx = std::pow(10.0, la + (lb - la) * i / 5.0);
        } else {
            tx = x_lo + (x_hi - x_lo) * i / 5.0;
        }
        const double px = mx(tx);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>"
                      "<text x=\"%s\" y=\"%s\" font-family=\"sans-serif\" font-size=\"10\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      num(px).c_str(), num(spec.height - mb).c_str(), num(px).c_str(),
                      num(spec.height - mb + 4).c_str(), num(px).c_str(),
                      num(spec.height - mb + 16).c_str(), num(tx).c_str());
        out += buf;
    }

    // Axis labels.
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  spec.width / 2, spec.height - 8, spec.x_label.c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"14\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 14 %d)\">%s</text>\n",
                  spec.height / 2, spec.height / 2, spec.y_label.c_str());
    out += buf;

    // Series.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string points;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!std::isfinite(series[s].y[i])) continue;
            points += num(mx(series[s].x[i])) + "," + num(my(series[s].y[i])) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        // Legend entry.
        const double ly = mt + 16.0 * static_cast<double>(s);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>"
                      "<text x=\"%s\" y=\"%s\" font-family=\"sans-serif\" "
                      "font-size=\"11\">%s</text>\n",
                      num(ml + 10).c_str(), num(ly).c_str(), num(ml + 34).c_str(),
                      num(ly).c_str(), color, num(ml + 40).c_str(), num(ly + 4).c_str(),
                      series[s].name.c_str());
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<ChartSeries>& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const std::string data = render_line_chart(spec, series);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

} // namespace roadcov
