#ifndef MVOS_HSI_SEGMENTATION_HPP
#define MVOS_HSI_SEGMENTATION_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvos_hsi/cube.hpp"
#include "mvos_hsi/indices.hpp"

namespace mvos_hsi {

struct Mask {
    std::size_t lines = 0;
    std::size_t samples = 0;
    std::vector<unsigned char> bits; // row-major

    Mask() = default;
    Mask(std::size_t l, std::size_t s) : lines(l), samples(s), bits(l * s, 0) {}

    bool at(std::size_t l, std::size_t s) const { return bits[l * samples + s] != 0; }
    void set(std::size_t l, std::size_t s, bool v) { bits[l * samples + s] = v ? 1 : 0; }
    std::size_t count() const;

    bool operator==(const Mask&) const = default;
};

enum class Connectivity { Four, Eight };
enum class MorphologyOp { None, OpenClose };

struct Region {
    int label = 0;
    std::size_t area = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    std::size_t min_row = 0, min_col = 0, max_row = 0, max_col = 0; // inclusive
};

/// Labeled connected components: labels[i] is 0 for background, 1..n for
/// components in row-major first-encounter order.
struct RegionSet {
    std::size_t lines = 0;
    std::size_t samples = 0;
    std::vector<int> labels;
    std::vector<Region> regions;

    int label_at(std::size_t l, std::size_t s) const { return labels[l * samples + s]; }
};

/// Boundary index (0..254) that splits a 256-bin histogram into bins [0..b]
/// and [b+1..255] with maximal between-class variance; ties take the lowest.
std::size_t otsu_bin_boundary(const std::vector<std::uint64_t>& histogram);

/// Otsu threshold over the valid pixels of an index image, computed on 256
/// equal-width bins spanning [min, max]. Throws DegenerateHistogram for a
/// constant image or fewer than 2 valid pixels.
double otsu_threshold(const IndexImage& img);

/// bit set iff the pixel is valid and value > t (strict).
Mask threshold_mask(const IndexImage& img, double t);

/// Binary opening then closing with a disk of the given radius
/// (out-of-bounds pixels count as background). MorphologyOp::None is identity.
Mask clean_mask(const Mask& mask, MorphologyOp op, std::size_t radius = 1);

RegionSet label_components(const Mask& mask, Connectivity connectivity = Connectivity::Eight);

/// Drop regions with area < min_area and relabel survivors 1..m in order.
RegionSet filter_min_area(const RegionSet& rs, std::size_t min_area);

enum class CropMode { Square, Tight };

struct CropResult {
    std::vector<Hypercube> crops; // one per region, in label order
    std::vector<std::string> warnings;
};

/// Cut one sub-cube per region: tight bounding boxes, or fixed-size squares
/// centered on the centroid and shifted inward to stay in bounds. A square
/// larger than the cube collapses to the full extent of that dimension.
CropResult crop_regions(const Hypercube& cube, const RegionSet& rs, CropMode mode,
                        std::size_t square_size = 30);

enum class ThresholdMode { Auto, Manual };

struct ClipParams {
    ThresholdMode threshold_mode = ThresholdMode::Auto;
    double manual_threshold = 0.0;
    std::size_t min_area = 100;
    CropMode crop_mode = CropMode::Square;
    std::size_t crop_size = 30;
    MorphologyOp morphology = MorphologyOp::OpenClose;
    std::size_t morphology_radius = 1;
    Connectivity connectivity = Connectivity::Eight;
};

struct ClipJob {
    std::filesystem::path folder;
    IndexKind index = IndexKind::NDVI;
    BandSelection selection;
    /// Used when a cube's header carries no wavelength vector.
    std::optional<std::vector<double>> external_wavelengths;
    ClipParams params;
    /// Defaults to `<folder>/clipped_hypercubes`.
    std::filesystem::path output_dir;
    unsigned jobs = 0; // 0 = hardware concurrency
};

struct ClipReport {
    struct Entry {
        std::string input;
        std::string status; // "ok", "no regions", "skipped", or "error"
        std::optional<double> threshold;
        std::size_t leaf_count = 0;
        std::vector<std::string> outputs;
        std::string error;
        std::vector<std::string> warnings;
    };
    std::vector<Entry> entries;
    std::filesystem::path output_dir;

    bool all_ok() const;
};

/// Index -> threshold -> clean -> label -> area filter -> crop each ENVI cube
/// in the folder, writing per-leaf pairs `<stem>_leaf_<n>.hdr/.img`.
ClipReport clip_folder(const ClipJob& job);

} // namespace mvos_hsi

#endif
