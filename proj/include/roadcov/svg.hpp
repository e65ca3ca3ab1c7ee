#pragma once

#include <string>
#include <vector>

namespace roadcov {

// Minimal SVG 1.1 line chart: axes, ticks, legend, one polyline per series.
struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 760;
    int height = 420;
};

std::string render_line_chart(const ChartSpec& spec, const std::vector<ChartSeries>& series);
void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<ChartSeries>& series);

} // namespace roadcov
