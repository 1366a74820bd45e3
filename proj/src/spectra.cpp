#include "mvos_hsi/spectra.hpp"

#include <cstdio>
#include <fstream>

#include "mvos_hsi/envi.hpp"
#include "internal/svg.hpp"

namespace mvos_hsi {

namespace fs = std::filesystem;

namespace {

std::vector<double> default_axis(const Hypercube& cube) {
    if (cube.wavelengths())
        return *cube.wavelengths();
    std::vector<double> idx(cube.bands());
    for (std::size_t b = 0; b < idx.size(); ++b)
        idx[b] = static_cast<double>(b);
    return idx;
}

void write_csv(const fs::path& path, const std::vector<double>& x,
               const std::vector<Spectrum>& spectra) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write CSV file '" + path.string() + "'");
    out << "x";
    for (const Spectrum& s : spectra)
        out << ',' << s.label;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", x[i]);
        out << buf;
        for (const Spectrum& s : spectra) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.values[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
    out.close();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

struct AxisChoice {
    std::vector<double> x;
    bool is_wavelength = false;
};

/// Explicit wavelengths win, then the cube's own; length mismatches fall
/// back to band indices with a warning.
AxisChoice choose_axis(const PlotOptions& options, const Hypercube& first,
                       std::vector<std::string>& warnings) {
    const std::size_t bands = first.bands();
    if (options.wavelengths) {
        if (options.wavelengths->size() == bands)
            return {*options.wavelengths, true};
        warnings.push_back("wavelength vector length " +
                           std::to_string(options.wavelengths->size()) +
                           " does not match band count " + std::to_string(bands) +
                           "; using band indices");
    }
    if (first.wavelengths() && first.wavelengths()->size() == bands)
        return {*first.wavelengths(), true};
    std::vector<double> idx(bands);
    for (std::size_t b = 0; b < bands; ++b)
        idx[b] = static_cast<double>(b);
    return {idx, false};
}

PlotResult render(const fs::path& chart_path, const std::string& title,
                  const AxisChoice& axis, const std::vector<Spectrum>& spectra,
                  std::vector<std::string> warnings) {
    PlotResult result;
    result.chart = chart_path;
    result.csv = fs::path(chart_path).replace_extension(".csv");
    result.warnings = std::move(warnings);

    std::vector<detail::ChartSeries> series;
    series.reserve(spectra.size());
    for (const Spectrum& s : spectra)
        series.push_back({s.label, s.values});
    detail::write_line_chart(result.chart, title,
                             axis.is_wavelength ? "wavelength (nm)" : "band index",
                             "intensity", axis.x, series);
    write_csv(result.csv, axis.x, spectra);
    return result;
}

fs::path leaf_header(const fs::path& clipped_dir, const std::string& stem, int leaf) {
    return clipped_dir / (stem + "_leaf_" + std::to_string(leaf) + ".hdr");
}

} // namespace

Spectrum center_pixel_spectrum(const Hypercube& cube) {
    Spectrum s = pixel_spectrum(cube, cube.lines() / 2, cube.samples() / 2);
    s.label = cube.source_stem().empty() ? "center" : cube.source_stem();
    return s;
}

Spectrum pixel_spectrum(const Hypercube& cube, std::size_t row, std::size_t col) {
    if (row >= cube.lines() || col >= cube.samples())
        throw OutOfBounds("pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                          ") outside cube extent " + std::to_string(cube.lines()) + "x" +
                          std::to_string(cube.samples()));
    Spectrum s;
    s.values = cube.spectrum(row, col);
    s.x_axis = default_axis(cube);
    s.label = "(" + std::to_string(row) + "," + std::to_string(col) + ")";
    return s;
}

Spectrum roi_mean_spectrum(const Hypercube& cube, std::size_t min_row, std::size_t min_col,
                           std::size_t max_row, std::size_t max_col) {
    if (min_row > max_row || min_col > max_col)
        throw EmptyRoi("ROI rectangle is empty");
    if (max_row >= cube.lines() || max_col >= cube.samples())
        throw OutOfBounds("ROI (" + std::to_string(min_row) + "," + std::to_string(min_col) +
                          ")-(" + std::to_string(max_row) + "," + std::to_string(max_col) +
                          ") outside cube extent " + std::to_string(cube.lines()) + "x" +
                          std::to_string(cube.samples()));
    Spectrum s;
    s.values.assign(cube.bands(), 0.0);
    const double n = static_cast<double>((max_row - min_row + 1) * (max_col - min_col + 1));
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        double acc = 0.0;
        for (std::size_t r = min_row; r <= max_row; ++r)
            for (std::size_t c = min_col; c <= max_col; ++c)
                acc += cube.at(r, c, b);
        s.values[b] = acc / n;
    }
    s.x_axis = default_axis(cube);
    s.label = "roi";
    return s;
}

PlotResult plot_leaf_center(const fs::path& clipped_dir, const std::string& stem,
                            const std::vector<int>& leaves, const PlotOptions& options) {
    if (leaves.empty())
        throw EmptyRequest("no leaves requested");

    std::vector<Hypercube> cubes;
    cubes.reserve(leaves.size());
    for (int n : leaves) {
        fs::path hdr = leaf_header(clipped_dir, stem, n);
        if (!fs::exists(hdr))
            throw LeafNotFound("leaf file not found: '" + hdr.string() + "'");
        cubes.push_back(read_cube(hdr));
    }

    std::vector<std::string> warnings;
    AxisChoice axis = choose_axis(options, cubes.front(), warnings);
    std::vector<Spectrum> spectra;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (cubes[i].bands() != axis.x.size())
            throw ShapeMismatch("leaf " + std::to_string(leaves[i]) + " has " +
                                std::to_string(cubes[i].bands()) + " bands, expected " +
                                std::to_string(axis.x.size()));
        Spectrum s = center_pixel_spectrum(cubes[i]);
        s.label = stem + " leaf " + std::to_string(leaves[i]);
        spectra.push_back(std::move(s));
    }

    fs::path chart = options.output.empty()
                         ? clipped_dir / (stem + "_leaf_spectra.svg")
                         : options.output;
    const std::string title =
        options.title.empty() ? stem + " center-pixel spectra" : options.title;
    return render(chart, title, axis, spectra, std::move(warnings));
}

PlotResult plot_leaf_multi(const fs::path& clipped_dir,
                           const std::vector<std::pair<std::string, int>>& items,
                           const PlotOptions& options) {
    if (items.empty())
        throw EmptyRequest("no (stem, leaf) items requested");

    // Report every missing item at once rather than stopping at the first.
    std::string missing;
    for (const auto& [stem, leaf] : items) {
        fs::path hdr = leaf_header(clipped_dir, stem, leaf);
        if (!fs::exists(hdr))
            missing += (missing.empty() ? "" : ", ") + ("'" + hdr.string() + "'");
    }
    if (!missing.empty())
        throw LeafNotFound("leaf file(s) not found: " + missing);

    std::vector<Hypercube> cubes;
    cubes.reserve(items.size());
    for (const auto& [stem, leaf] : items)
        cubes.push_back(read_cube(leaf_header(clipped_dir, stem, leaf)));

    std::vector<std::string> warnings;
    AxisChoice axis = choose_axis(options, cubes.front(), warnings);
    std::vector<Spectrum> spectra;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (cubes[i].bands() != axis.x.size())
            throw ShapeMismatch("item " + items[i].first + ":" +
                                std::to_string(items[i].second) + " has " +
                                std::to_string(cubes[i].bands()) + " bands, expected " +
                                std::to_string(axis.x.size()));
        Spectrum s = center_pixel_spectrum(cubes[i]);
        s.label = items[i].first + " leaf " + std::to_string(items[i].second);
        spectra.push_back(std::move(s));
    }

    fs::path chart = options.output.empty() ? clipped_dir / "leaf_multi_spectra.svg"
                                            : options.output;
    const std::string title =
        options.title.empty() ? "Leaf spectra comparison" : options.title;
    return render(chart, title, axis, spectra, std::move(warnings));
}

PlotResult plot_pixel(const fs::path& cube_path, std::size_t row, std::size_t col,
                      const PlotOptions& options) {
    Hypercube cube = read_cube(cube_path);
    std::vector<std::string> warnings;
    AxisChoice axis = choose_axis(options, cube, warnings);
    Spectrum s = pixel_spectrum(cube, row, col);
    s.label = cube.source_stem() + " " + s.label;

    fs::path chart = options.output.empty()
                         ? fs::path(cube_path).replace_extension(".pixel.svg")
                         : options.output;
    const std::string title = options.title.empty() ? "Pixel spectrum" : options.title;
    return render(chart, title, axis, {s}, std::move(warnings));
}

} // namespace mvos_hsi
