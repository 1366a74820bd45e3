#ifndef MVOS_HSI_AUGMENTATION_HPP
#define MVOS_HSI_AUGMENTATION_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi {

enum class Interpolation { Nearest, Bilinear };

/// Declarative description of the random geometric variants to generate.
struct AugmentationSpec {
    std::size_t num_aug = 3;
    bool flip = false;
    double rotate_lo_deg = -10.0, rotate_hi_deg = 10.0;
    double shear_lo_deg = -16.0, shear_hi_deg = 16.0;
    std::optional<std::uint64_t> seed;
    Interpolation interpolation = Interpolation::Bilinear;
    double fill_value = 0.0;
};

/// Inverse mapping from output pixel coordinates to source coordinates:
///   src_row = m[0][0]*row + m[0][1]*col + m[0][2]
///   src_col = m[1][0]*row + m[1][1]*col + m[1][2]
struct AffineTransform {
    double m[2][3] = {{1, 0, 0}, {0, 1, 0}};
};

/// The random quantities behind one sampled transform, kept for logging and
/// replay.
struct DrawRecord {
    bool flip_horizontal = false;
    bool flip_vertical = false;
    double rotation_deg = 0.0;
    double shear_deg = 0.0;
};

/// Deterministic RNG for augmentation draws. The uniform/coin helpers are
/// fixed here (rather than std::uniform_real_distribution) so that a seed
/// reproduces identical draws on every platform.
class AugmentRng {
public:
    explicit AugmentRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next();
    double uniform(double lo, double hi);
    bool coin();

private:
    std::uint64_t state_;
};

/// Stream seed for one input file, derived from the base seed and file stem
/// so per-file work parallelizes without coupling the streams.
std::uint64_t stream_seed(std::uint64_t base_seed, const std::string& stem);

/// Compose flip -> rotate -> shear about the image center for the given
/// spatial dims. Shear acts along the sample (horizontal) axis.
AffineTransform make_transform(const DrawRecord& draw, std::size_t lines, std::size_t samples);

/// Draw (flip_h, flip_v, rotation, shear) in that order from the RNG and
/// compose the transform.
std::pair<AffineTransform, DrawRecord> sample_transform(const AugmentationSpec& spec,
                                                        std::size_t lines, std::size_t samples,
                                                        AugmentRng& rng);

/// Resample every band with the same inverse mapping; output dims equal
/// input dims, out-of-bounds samples take fill_value.
Hypercube apply_transform(const Hypercube& cube, const AffineTransform& t,
                          Interpolation interpolation, double fill_value = 0.0);

struct AugmentReport {
    struct Entry {
        std::string input;
        std::string status; // "ok" or "error"
        std::vector<std::string> outputs;
        std::vector<DrawRecord> draws;
        std::string error;
    };
    std::vector<Entry> entries;
    std::uint64_t seed_used = 0;

    bool all_ok() const;
};

/// Write num_aug randomized variants of every ENVI cube in the folder as
/// `<stem>_aug<k>.hdr/.img` (default output_dir: the input folder).
AugmentReport augment_folder(const std::filesystem::path& folder, const AugmentationSpec& spec,
                             const std::filesystem::path& output_dir = {}, unsigned jobs = 0);

} // namespace mvos_hsi

#endif
