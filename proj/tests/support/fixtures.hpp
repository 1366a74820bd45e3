#ifndef MVOS_HSI_TESTS_FIXTURES_HPP
#define MVOS_HSI_TESTS_FIXTURES_HPP

#include <filesystem>
#include <random>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi::testing {

/// Rectangular "leaf" painted into a synthetic acquisition.
struct BlobSpec {
    std::size_t row0, col0, rows, cols;
};

/// Raw acquisition with plant-like spectra inside the blobs: high NIR over
/// low red, on a flat background, all offset by `dark_level`. Wavelengths
/// span 500..800 nm evenly.
Hypercube make_blob_cube(std::size_t lines, std::size_t samples, std::size_t bands,
                         const std::vector<BlobSpec>& blobs, double dark_level,
                         bool with_wavelengths);

std::vector<double> fixture_wavelengths(std::size_t bands);

/// On-disk dataset mirroring the intended folder layout: Dark_R/Dark_F,
/// H_P1_V4_B_R/_F (with header wavelengths), a suffixless H_P1_V4_B cube
/// (without header wavelengths), and wavelengths.mat. Each sample carries
/// three 12x12 blobs.
void write_fixture_dataset(const std::filesystem::path& dir);

/// Uniformly random cube; values in [lo, hi).
Hypercube random_cube(std::mt19937_64& rng, std::size_t lines, std::size_t samples,
                      std::size_t bands, double lo = 0.0, double hi = 1000.0);

} // namespace mvos_hsi::testing

#endif
