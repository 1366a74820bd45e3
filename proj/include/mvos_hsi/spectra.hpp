#ifndef MVOS_HSI_SPECTRA_HPP
#define MVOS_HSI_SPECTRA_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi {

/// One extracted spectrum: y values per band plus the x axis they are
/// plotted against (wavelengths in nm when known, band indices otherwise).
struct Spectrum {
    std::vector<double> values;
    std::vector<double> x_axis;
    std::string label;
};

/// Spectrum at (floor(lines/2), floor(samples/2)).
Spectrum center_pixel_spectrum(const Hypercube& cube);

Spectrum pixel_spectrum(const Hypercube& cube, std::size_t row, std::size_t col);

/// Per-band mean over an inclusive rectangle.
Spectrum roi_mean_spectrum(const Hypercube& cube, std::size_t min_row, std::size_t min_col,
                           std::size_t max_row, std::size_t max_col);

struct PlotOptions {
    /// Overrides the x axis; cube wavelengths are used when absent.
    std::optional<std::vector<double>> wavelengths;
    std::string title;
    /// Chart path (.svg); the CSV sidecar swaps the extension. A default
    /// inside clipped_dir is chosen when empty.
    std::filesystem::path output;
    bool show = false; // accepted for API parity; a no-op in headless runs
};

struct PlotResult {
    std::filesystem::path chart;
    std::filesystem::path csv;
    std::vector<std::string> warnings;
};

/// Plot center-pixel spectra of `<stem>_leaf_<n>` for each requested leaf,
/// writing an SVG chart and a CSV sidecar (x column + one column per leaf).
PlotResult plot_leaf_center(const std::filesystem::path& clipped_dir, const std::string& stem,
                            const std::vector<int>& leaves, const PlotOptions& options = {});

/// Multi-sample comparison across (stem, leaf) items, one series per item,
/// in the given order.
PlotResult plot_leaf_multi(const std::filesystem::path& clipped_dir,
                           const std::vector<std::pair<std::string, int>>& items,
                           const PlotOptions& options = {});

/// Chart + CSV for a single pixel of one ENVI cube.
PlotResult plot_pixel(const std::filesystem::path& cube_path, std::size_t row, std::size_t col,
                      const PlotOptions& options = {});

} // namespace mvos_hsi

#endif
