#include "fixtures.hpp"

#include "mvos_hsi/envi.hpp"
#include "mvos_hsi/mat5.hpp"

namespace mvos_hsi::testing {

namespace fs = std::filesystem;

std::vector<double> fixture_wavelengths(std::size_t bands) {
    std::vector<double> wl(bands);
    for (std::size_t b = 0; b < bands; ++b)
        wl[b] = bands == 1 ? 500.0
                           : 500.0 + 300.0 * static_cast<double>(b) /
                                         static_cast<double>(bands - 1);
    return wl;
}

Hypercube make_blob_cube(std::size_t lines, std::size_t samples, std::size_t bands,
                         const std::vector<BlobSpec>& blobs, double dark_level,
                         bool with_wavelengths) {
    const std::vector<double> wl = fixture_wavelengths(bands);
    Hypercube cube(lines, samples, bands);
    for (std::size_t b = 0; b < bands; ++b) {
        // Plant-like profile: strong NIR, red dip; background is flat.
        double blob_level;
        if (wl[b] >= 740.0)
            blob_level = 800.0;
        else if (wl[b] >= 650.0 && wl[b] < 700.0)
            blob_level = 100.0;
        else
            blob_level = 300.0;
        for (std::size_t l = 0; l < lines; ++l)
            for (std::size_t s = 0; s < samples; ++s)
                cube.at(l, s, b) = dark_level + 50.0;
        for (const BlobSpec& blob : blobs)
            for (std::size_t l = blob.row0; l < blob.row0 + blob.rows; ++l)
                for (std::size_t s = blob.col0; s < blob.col0 + blob.cols; ++s)
                    cube.at(l, s, b) = dark_level + blob_level;
    }
    if (with_wavelengths)
        cube.set_wavelengths(wl);
    return cube;
}

void write_fixture_dataset(const fs::path& dir) {
    fs::create_directories(dir);
    const std::size_t L = 64, S = 64, B = 16;
    const double dark_level = 100.0;
    const std::vector<BlobSpec> blobs{{8, 8, 12, 12}, {8, 40, 12, 12}, {40, 8, 12, 12}};

    Hypercube dark(L, S, B);
    for (double& v : dark.data())
        v = dark_level;
    dark.set_wavelengths(fixture_wavelengths(B));
    write_cube(dark, dir / "Dark_R", Interleave::BIL, EnviDataType::Float32);
    write_cube(dark, dir / "Dark_F", Interleave::BIL, EnviDataType::Float32);

    Hypercube sample = make_blob_cube(L, S, B, blobs, dark_level, true);
    write_cube(sample, dir / "H_P1_V4_B_R", Interleave::BIP, EnviDataType::Float32);
    write_cube(sample, dir / "H_P1_V4_B_F", Interleave::BSQ, EnviDataType::Float32);

    Hypercube bare = make_blob_cube(L, S, B, blobs, dark_level, false);
    write_cube(bare, dir / "H_P1_V4_B", Interleave::BSQ, EnviDataType::Float32);

    write_mat(dir / "wavelengths.mat",
              {MatArray("wavelength", {B}, fixture_wavelengths(B))});
}

Hypercube random_cube(std::mt19937_64& rng, std::size_t lines, std::size_t samples,
                      std::size_t bands, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Hypercube cube(lines, samples, bands);
    for (double& v : cube.data())
        v = dist(rng);
    return cube;
}

} // namespace mvos_hsi::testing
