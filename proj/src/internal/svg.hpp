#ifndef MVOS_HSI_INTERNAL_SVG_HPP
#define MVOS_HSI_INTERNAL_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace mvos_hsi::detail {

struct ChartSeries {
    std::string label;
    std::vector<double> values;
};

/// Render a deterministic multi-series line chart as a standalone SVG file.
/// Series are drawn in order with a fixed color palette and a legend.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<double>& x, const std::vector<ChartSeries>& series);

} // namespace mvos_hsi::detail

#endif
