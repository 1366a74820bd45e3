#ifndef MVOS_HSI_TESTS_ORACLES_HPP
#define MVOS_HSI_TESTS_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "mvos_hsi/augmentation.hpp"
#include "mvos_hsi/cube.hpp"
#include "mvos_hsi/segmentation.hpp"

// Independent reference implementations used to freeze expected values.
// These deliberately avoid the library's accumulation strategies.
namespace mvos_hsi::testing {

/// Naive per-group averaging over a flat band-sequential buffer.
Hypercube naive_spectral_bin(const Hypercube& cube, std::size_t k);

/// Naive per-block averaging over a flat band-sequential buffer.
Hypercube naive_spatial_bin(const Hypercube& cube, std::size_t k);

/// Exhaustive between-class-variance argmax; class stats recomputed from
/// scratch for every candidate boundary.
std::size_t bruteforce_otsu_boundary(const std::vector<std::uint64_t>& histogram);

struct OracleRegion {
    std::size_t area = 0;
    std::size_t min_row = 0, min_col = 0, max_row = 0, max_col = 0;
};

/// Queue-based flood fill labeling, scanning row-major.
std::vector<OracleRegion> flood_fill_regions(const Mask& mask, bool eight_connected);

/// Resample a single band with the given inverse map; plain scalar loops.
std::vector<double> reference_warp_band(const std::vector<double>& band, std::size_t lines,
                                        std::size_t samples, const AffineTransform& t,
                                        Interpolation interpolation, double fill);

} // namespace mvos_hsi::testing

#endif
