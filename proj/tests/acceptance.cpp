// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exits non-zero if any fail.
//
// The CLI parity criterion shells out to the mvos-hsi binary named by the
// MVOS_HSI_CLI environment variable (set by ctest).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "mvos_hsi/augmentation.hpp"
#include "mvos_hsi/calibration.hpp"
#include "mvos_hsi/envi.hpp"
#include "mvos_hsi/indices.hpp"
#include "mvos_hsi/mat5.hpp"
#include "mvos_hsi/segmentation.hpp"
#include "mvos_hsi/spectra.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace mvos_hsi;
using mvos_hsi::testing::TempDir;

namespace {

struct Criterion {
    int checks = 0;
    int failures = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& message) {
        ++checks;
        if (!ok) {
            ++failures;
            if (first_failure.empty())
                first_failure = message;
        }
    }
};

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// Relative path -> file bytes for every regular file under root.
std::vector<std::pair<std::string, std::string>> tree_bytes(const std::filesystem::path& root) {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root))
        if (e.is_regular_file())
            entries.emplace_back(std::filesystem::relative(e.path(), root).string(),
                                 slurp(e.path()));
    std::sort(entries.begin(), entries.end());
    return entries;
}

// ---------------------------------------------------------------- criterion 1

void criterion_format_round_trips(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    TempDir dir("acc1");
    std::mt19937_64 rng(1001);

    const EnviDataType types[] = {EnviDataType::UInt8,   EnviDataType::Int16,
                                  EnviDataType::Int32,   EnviDataType::Float32,
                                  EnviDataType::Float64, EnviDataType::UInt16,
                                  EnviDataType::UInt32};
    const Interleave interleaves[] = {Interleave::BSQ, Interleave::BIL, Interleave::BIP};
    const ByteOrder orders[] = {ByteOrder::Little, ByteOrder::Big};

    std::uniform_int_distribution<std::size_t> spatial(1, 16), band_count(1, 32);
    std::uniform_int_distribution<int> u8(0, 255);
    std::uniform_int_distribution<int> i16(-32768, 32767);
    std::uniform_int_distribution<long> i32(-2147483648L, 2147483647L);
    std::uniform_int_distribution<long> u16(0, 65535);
    std::uniform_int_distribution<long long> u32(0, 4294967295LL);
    std::uniform_real_distribution<float> f32(-1e6f, 1e6f);
    std::uniform_real_distribution<double> f64(-1e9, 1e9);

    for (int iter = 0; iter < 200; ++iter) {
        const EnviDataType dt = types[iter % 7];
        const Interleave il = interleaves[(iter / 7) % 3];
        const ByteOrder bo = orders[(iter / 21) % 2];

        Hypercube cube(spatial(rng), spatial(rng), band_count(rng));
        for (double& v : cube.data()) {
            switch (dt) {
                case EnviDataType::UInt8: v = u8(rng); break;
                case EnviDataType::Int16: v = i16(rng); break;
                case EnviDataType::Int32: v = static_cast<double>(i32(rng)); break;
                case EnviDataType::UInt16: v = static_cast<double>(u16(rng)); break;
                case EnviDataType::UInt32: v = static_cast<double>(u32(rng)); break;
                case EnviDataType::Float32: v = static_cast<double>(f32(rng)); break;
                case EnviDataType::Float64: v = f64(rng); break;
            }
        }
        if (iter % 3 == 0)
            cube.set_wavelengths(mvos_hsi::testing::fixture_wavelengths(cube.bands()));

        const auto base = dir / ("c" + std::to_string(iter));
        write_cube(cube, base, il, dt, {.byte_order = bo});
        Hypercube back = read_cube(base);
        c.expect(back == cube, "cube round-trip mismatch at iteration " + std::to_string(iter));
    }

    // Header round-trips preserve every key, including unknown vendor fields.
    for (int iter = 0; iter < 50; ++iter) {
        EnviHeader h;
        h.samples = 1 + rng() % 100;
        h.lines = 1 + rng() % 100;
        h.bands = 1 + rng() % 50;
        h.interleave = interleaves[rng() % 3];
        h.data_type = types[rng() % 7];
        h.byte_order = orders[rng() % 2];
        h.header_offset = rng() % 1000;
        if (rng() % 2)
            h.description = "synthetic header " + std::to_string(iter);
        if (rng() % 2) {
            std::vector<double> wl(h.bands);
            for (std::size_t b = 0; b < wl.size(); ++b)
                wl[b] = 400.0 + 0.37 * static_cast<double>(b) + 0.001 * (rng() % 97);
            h.wavelengths = wl;
        }
        const int extras = rng() % 4;
        for (int e = 0; e < extras; ++e)
            h.extra_fields.emplace_back("vendor key " + std::to_string(e),
                                        "value " + std::to_string(rng() % 1000));
        c.expect(parse_header(serialize_header(h)) == h,
                 "header round-trip mismatch at iteration " + std::to_string(iter));
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s exceeds 30s");
}

// ---------------------------------------------------------------- criterion 2

void criterion_mat_round_trips(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    TempDir dir("acc2");
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> ndims(1, 3), dim(1, 8);
    std::uniform_real_distribution<double> value(-1e9, 1e9);

    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::size_t> dims(ndims(rng));
        std::size_t n = 1;
        for (auto& d : dims) {
            d = dim(rng);
            n *= d;
        }
        std::vector<double> values(n);
        for (double& v : values)
            v = value(rng);
        MatArray arr("var_" + std::to_string(iter), dims, values);
        const auto path = dir / ("m" + std::to_string(iter) + ".mat");
        write_mat(path, {arr});
        MatArray back = read_mat_array(path, arr.name);
        c.expect(back.dims == arr.dims && back.values == arr.values,
                 "MAT round-trip mismatch at iteration " + std::to_string(iter));
    }

    // Compressed fixture from a reference implementation (scipy.io.savemat).
    const auto fixture = std::filesystem::path(MVOS_HSI_TEST_DATA_DIR) / "scipy_compressed.mat";
    MatArray cube = read_mat_array(fixture, "cube_slice");
    c.expect(cube.dims == std::vector<std::size_t>{2, 3} &&
                 cube.values == std::vector<double>{1.5, 4.0, -2.25, 5.5, 3.0, -6.75},
             "compressed reference fixture parsed incorrectly");
    MatArray counts = read_mat_array(fixture, "counts");
    c.expect(counts.values == std::vector<double>{1.0, -2.0, 300.0, 4.0},
             "compressed int16 payload widened incorrectly");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
}

// ---------------------------------------------------------------- criterion 3

void criterion_calibration_math(Criterion& c) {
    std::mt19937_64 rng(1003);

    Hypercube raw(5, 4, 3), dark(5, 4, 3), white(5, 4, 3);
    for (double& v : raw.data())
        v = 55.0;
    for (double& v : dark.data())
        v = 10.0;
    for (double& v : white.data())
        v = 100.0;

    Hypercube zeros = subtract_dark(raw, raw);
    bool all_zero = true;
    for (double v : zeros.data())
        all_zero = all_zero && v == 0.0;
    c.expect(all_zero, "raw==dark did not produce a zero cube");

    auto refl = reflectance(raw, dark, white);
    bool all_half = true;
    for (double v : refl.cube.data())
        all_half = all_half && std::abs(v - 0.5) <= 1e-12;
    c.expect(all_half, "reflectance(55,10,100) != 0.5");

    bool rejected = false;
    try {
        spectral_bin(raw, 0);
    } catch (const InvalidBinFactor&) {
        rejected = true;
    }
    c.expect(rejected, "spectral_bin(k=0) was not rejected");
    rejected = false;
    try {
        spatial_bin(raw, 0);
    } catch (const InvalidBinFactor&) {
        rejected = true;
    }
    c.expect(rejected, "spatial_bin(k=0) was not rejected");
    rejected = false;
    try {
        BinningParams(0, 1);
    } catch (const InvalidBinFactor&) {
        rejected = true;
    }
    c.expect(rejected, "BinningParams(0,...) was not rejected");

    std::uniform_int_distribution<std::size_t> dim(1, 12), kdist(1, 4);
    for (int iter = 0; iter < 50; ++iter) {
        Hypercube cube = mvos_hsi::testing::random_cube(rng, dim(rng), dim(rng), dim(rng));
        const std::size_t ks = std::min(kdist(rng), cube.bands());
        const std::size_t kp = std::min(kdist(rng), std::min(cube.lines(), cube.samples()));
        Hypercube got_s = spectral_bin(cube, ks);
        Hypercube ref_s = mvos_hsi::testing::naive_spectral_bin(cube, ks);
        Hypercube got_p = spatial_bin(cube, kp);
        Hypercube ref_p = mvos_hsi::testing::naive_spatial_bin(cube, kp);
        bool ok = got_s.size() == ref_s.size() && got_p.size() == ref_p.size();
        for (std::size_t i = 0; ok && i < got_s.size(); ++i)
            ok = close(got_s.data()[i], ref_s.data()[i], 1e-12);
        for (std::size_t i = 0; ok && i < got_p.size(); ++i)
            ok = close(got_p.data()[i], ref_p.data()[i], 1e-12);
        c.expect(ok, "binning oracle mismatch at iteration " + std::to_string(iter));
    }
}

// ---------------------------------------------------------------- criterion 4

void criterion_index_correctness(Criterion& c) {
    std::mt19937_64 rng(1004);
    const BandSelection sel = BandSelection::by_index(0, 1, 2, 3);

    for (int iter = 0; iter < 50; ++iter) {
        Hypercube cube = mvos_hsi::testing::random_cube(rng, 6, 5, 4, 0.05, 1.5);
        IndexImage ndvi = compute_index(cube, IndexKind::NDVI, sel);
        IndexImage gci = compute_index(cube, IndexKind::GCI, sel);
        IndexImage cire = compute_index(cube, IndexKind::CIRedEdge, sel);

        bool formulas_ok = true;
        for (std::size_t l = 0; l < cube.lines(); ++l) {
            for (std::size_t s = 0; s < cube.samples(); ++s) {
                const double red = cube.at(l, s, 0), green = cube.at(l, s, 1);
                const double red_edge = cube.at(l, s, 2), nir = cube.at(l, s, 3);
                formulas_ok = formulas_ok &&
                              close(ndvi.value_at(l, s), (nir - red) / (nir + red), 1e-12) &&
                              close(gci.value_at(l, s), nir / green - 1.0, 1e-12) &&
                              close(cire.value_at(l, s), nir / red_edge - 1.0, 1e-12);
            }
        }
        c.expect(formulas_ok, "index formula mismatch at iteration " + std::to_string(iter));

        IndexImage swapped = compute_index(cube, IndexKind::NDVI,
                                           BandSelection::by_index(3, 1, 2, 0));
        bool antisym = true;
        for (std::size_t i = 0; i < ndvi.values.size(); ++i)
            if (ndvi.valid[i])
                antisym = antisym && close(ndvi.values[i], -swapped.values[i], 1e-12);
        c.expect(antisym, "NDVI antisymmetry failed at iteration " + std::to_string(iter));

        Hypercube scaled = cube;
        const double factor = 0.5 + static_cast<double>(iter % 9);
        for (double& v : scaled.data())
            v *= factor;
        bool invariant = true;
        for (IndexKind kind : {IndexKind::NDVI, IndexKind::GCI, IndexKind::CIRedEdge}) {
            IndexImage a = compute_index(cube, kind, sel);
            IndexImage b = compute_index(scaled, kind, sel);
            for (std::size_t i = 0; i < a.values.size(); ++i)
                if (a.valid[i] && b.valid[i])
                    invariant = invariant && close(a.values[i], b.values[i], 1e-9);
        }
        c.expect(invariant, "scale invariance failed at iteration " + std::to_string(iter));
    }
}

// ---------------------------------------------------------------- criterion 5

void criterion_otsu_oracle(Criterion& c) {
    std::mt19937_64 rng(1005);
    std::uniform_int_distribution<std::uint64_t> count(0, 1000);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::uint64_t> hist(256, 0);
        if (iter % 3 == 0) {
            for (auto& h : hist)
                h = count(rng);
        } else if (iter % 3 == 1) {
            for (int k = 0; k < 10; ++k)
                hist[rng() % 256] += count(rng);
        } else {
            for (int k = 0; k < 5000; ++k) {
                const int center = (k % 2) ? 50 + static_cast<int>(rng() % 30)
                                           : 180 + static_cast<int>(rng() % 30);
                ++hist[static_cast<std::size_t>(center)];
            }
        }
        bool empty = true;
        for (auto h : hist)
            empty = empty && h == 0;
        if (empty)
            hist[7] = 3;
        c.expect(otsu_bin_boundary(hist) == mvos_hsi::testing::bruteforce_otsu_boundary(hist),
                 "otsu boundary mismatch at iteration " + std::to_string(iter));
    }
}

// ---------------------------------------------------------------- criterion 6

void criterion_components_oracle(Criterion& c) {
    std::mt19937_64 rng(1006);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t L = 1 + rng() % 16, S = 1 + rng() % 16;
        Mask mask(L, S);
        const int density = 2 + static_cast<int>(rng() % 3);
        for (std::size_t i = 0; i < mask.bits.size(); ++i)
            mask.bits[i] = (rng() % static_cast<unsigned>(density)) == 0 ? 1 : 0;

        for (bool eight : {false, true}) {
            RegionSet rs =
                label_components(mask, eight ? Connectivity::Eight : Connectivity::Four);
            auto oracle = mvos_hsi::testing::flood_fill_regions(mask, eight);
            bool ok = rs.regions.size() == oracle.size();
            for (std::size_t i = 0; ok && i < oracle.size(); ++i)
                ok = rs.regions[i].area == oracle[i].area &&
                     rs.regions[i].min_row == oracle[i].min_row &&
                     rs.regions[i].max_row == oracle[i].max_row &&
                     rs.regions[i].min_col == oracle[i].min_col &&
                     rs.regions[i].max_col == oracle[i].max_col;
            c.expect(ok, "labeling mismatch at iteration " + std::to_string(iter) +
                             (eight ? " (eight)" : " (four)"));
        }
    }
}

// ---------------------------------------------------------------- criterion 7

void criterion_end_to_end_clipping(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    TempDir dir("acc7");

    Hypercube scene = mvos_hsi::testing::make_blob_cube(
        64, 64, 8, {{6, 6, 14, 14}, {40, 36, 13, 15}, {28, 30, 2, 2}}, 0.0, true);
    write_cube(scene, dir / "scene", Interleave::BSQ, EnviDataType::Float32);

    ClipJob job;
    job.folder = dir.path();
    job.index = IndexKind::NDVI;
    job.params.min_area = 100;
    job.params.crop_mode = CropMode::Square;
    job.params.crop_size = 30;
    ClipReport square_report = clip_folder(job);

    c.expect(square_report.entries.size() == 1 && square_report.entries[0].status == "ok",
             "clip run did not succeed");
    c.expect(square_report.entries[0].leaf_count == 2,
             "expected exactly 2 leaves, got " +
                 std::to_string(square_report.entries[0].leaf_count));
    c.expect(std::filesystem::exists(square_report.output_dir / "scene_leaf_1.hdr") &&
                 std::filesystem::exists(square_report.output_dir / "scene_leaf_2.hdr") &&
                 !std::filesystem::exists(square_report.output_dir / "scene_leaf_3.hdr"),
             "unexpected leaf file set");
    for (int n = 1; n <= 2; ++n) {
        Hypercube leaf =
            read_cube(square_report.output_dir / ("scene_leaf_" + std::to_string(n)));
        c.expect(leaf.lines() == 30 && leaf.samples() == 30 && leaf.bands() == scene.bands(),
                 "square crop has wrong dims");
    }

    // Tight crops re-embed exactly at their bounding boxes.
    TempDir tight_dir("acc7t");
    job.params.crop_mode = CropMode::Tight;
    job.output_dir = tight_dir.path();
    clip_folder(job);

    IndexImage index = compute_index(scene, IndexKind::NDVI);
    Mask mask = clean_mask(threshold_mask(index, otsu_threshold(index)),
                           MorphologyOp::OpenClose, 1);
    RegionSet regions = filter_min_area(label_components(mask), 100);
    bool reembed_ok = regions.regions.size() == 2;
    for (std::size_t n = 0; reembed_ok && n < regions.regions.size(); ++n) {
        Hypercube leaf = read_cube(tight_dir / ("scene_leaf_" + std::to_string(n + 1)));
        const Region& r = regions.regions[n];
        reembed_ok = leaf.lines() == r.max_row - r.min_row + 1 &&
                     leaf.samples() == r.max_col - r.min_col + 1;
        for (std::size_t b = 0; reembed_ok && b < leaf.bands(); ++b)
            for (std::size_t l = 0; reembed_ok && l < leaf.lines(); ++l)
                for (std::size_t s = 0; s < leaf.samples(); ++s)
                    if (leaf.at(l, s, b) !=
                        static_cast<double>(static_cast<float>(
                            scene.at(r.min_row + l, r.min_col + s, b)))) {
                        reembed_ok = false;
                        break;
                    }
    }
    c.expect(reembed_ok, "tight crops do not re-embed exactly");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
}

// ---------------------------------------------------------------- criterion 8

void criterion_augmentation_invariants(Criterion& c) {
    std::mt19937_64 rng(1008);
    Hypercube cube = mvos_hsi::testing::random_cube(rng, 8, 8, 5, 0.5, 2.0);

    // Forced flips: involution and exact spectrum permutation under nearest.
    for (int combo = 1; combo < 4; ++combo) {
        DrawRecord draw;
        draw.flip_horizontal = combo & 1;
        draw.flip_vertical = combo & 2;
        AffineTransform t = make_transform(draw, cube.lines(), cube.samples());
        Hypercube once = apply_transform(cube, t, Interpolation::Nearest);
        Hypercube twice = apply_transform(once, t, Interpolation::Nearest);
        c.expect(twice == cube, "flip involution failed for combo " + std::to_string(combo));

        bool permutation_ok = true;
        for (std::size_t r = 0; r < cube.lines(); ++r)
            for (std::size_t s = 0; s < cube.samples(); ++s) {
                const std::size_t sr = draw.flip_vertical ? cube.lines() - 1 - r : r;
                const std::size_t sc = draw.flip_horizontal ? cube.samples() - 1 - s : s;
                permutation_ok =
                    permutation_ok && once.spectrum(r, s) == cube.spectrum(sr, sc);
            }
        c.expect(permutation_ok, "flip did not permute spectra exactly");
    }

    // Bilinear: every output spectrum is a band-independent convex
    // combination of at most 4 source spectra; matches the reference
    // per-band resampler.
    AugmentationSpec spec;
    spec.flip = true;
    AugmentRng arng(31337);
    for (int iter = 0; iter < 10; ++iter) {
        auto [t, draw] = sample_transform(spec, cube.lines(), cube.samples(), arng);
        Hypercube out = apply_transform(cube, t, Interpolation::Bilinear, 0.0);

        bool reference_ok = true;
        for (std::size_t b = 0; b < cube.bands(); ++b) {
            std::vector<double> band(cube.lines() * cube.samples());
            for (std::size_t l = 0; l < cube.lines(); ++l)
                for (std::size_t s = 0; s < cube.samples(); ++s)
                    band[l * cube.samples() + s] = cube.at(l, s, b);
            auto ref = mvos_hsi::testing::reference_warp_band(
                band, cube.lines(), cube.samples(), t, Interpolation::Bilinear, 0.0);
            for (std::size_t l = 0; l < cube.lines(); ++l)
                for (std::size_t s = 0; s < cube.samples(); ++s)
                    reference_ok = reference_ok &&
                                   close(out.at(l, s, b), ref[l * cube.samples() + s], 1e-12);
        }
        c.expect(reference_ok, "bilinear output disagrees with the reference resampler");

        bool convex_ok = true;
        for (std::size_t r = 0; r < cube.lines() && convex_ok; ++r) {
            for (std::size_t s = 0; s < cube.samples() && convex_ok; ++s) {
                const double sr = t.m[0][0] * static_cast<double>(r) +
                                  t.m[0][1] * static_cast<double>(s) + t.m[0][2];
                const double sc = t.m[1][0] * static_cast<double>(r) +
                                  t.m[1][1] * static_cast<double>(s) + t.m[1][2];
                const double fr = std::floor(sr), fc = std::floor(sc);
                const double dr = sr - fr, dc = sc - fc;
                const double weights[4] = {(1 - dr) * (1 - dc), (1 - dr) * dc, dr * (1 - dc),
                                           dr * dc};
                double wsum = 0.0;
                for (double w : weights) {
                    convex_ok = convex_ok && w >= -1e-15;
                    wsum += w;
                }
                convex_ok = convex_ok && std::abs(wsum - 1.0) <= 1e-12;
                // Reconstruct each band from the same 4 sources and weights.
                const long r0 = static_cast<long>(fr), c0 = static_cast<long>(fc);
                auto src = [&](long rr, long cc, std::size_t b) {
                    if (rr < 0 || cc < 0 || rr >= static_cast<long>(cube.lines()) ||
                        cc >= static_cast<long>(cube.samples()))
                        return 0.0;
                    return cube.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc),
                                   b);
                };
                for (std::size_t b = 0; b < cube.bands() && convex_ok; ++b) {
                    const double expected =
                        weights[0] * src(r0, c0, b) + weights[1] * src(r0, c0 + 1, b) +
                        weights[2] * src(r0 + 1, c0, b) + weights[3] * src(r0 + 1, c0 + 1, b);
                    convex_ok = convex_ok && close(out.at(r, s, b), expected, 1e-12);
                }
            }
        }
        c.expect(convex_ok, "output spectra are not band-independent convex combinations");
    }

    // Fixed seed: byte-identical outputs across two runs.
    TempDir src_dir("acc8src");
    write_cube(cube, src_dir / "leaf", Interleave::BSQ, EnviDataType::Float64);
    AugmentationSpec folder_spec;
    folder_spec.num_aug = 3;
    folder_spec.flip = true;
    folder_spec.seed = 424242;
    TempDir out1("acc8a"), out2("acc8b");
    augment_folder(src_dir.path(), folder_spec, out1.path());
    augment_folder(src_dir.path(), folder_spec, out2.path());
    c.expect(tree_bytes(out1.path()) == tree_bytes(out2.path()),
             "seeded augmentation runs differ");
}

// ---------------------------------------------------------------- criterion 9

int run_cli(const std::string& cli, const std::string& args, std::string* output = nullptr) {
    static int counter = 0;
    const auto capture = std::filesystem::temp_directory_path() /
                         ("mvos_hsi_acc_out_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    const std::string cmd = cli + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output)
        *output = slurp(capture);
    std::filesystem::remove(capture);
    return WEXITSTATUS(status);
}

void criterion_cli_parity(Criterion& c) {
    const char* cli_env = std::getenv("MVOS_HSI_CLI");
    c.expect(cli_env != nullptr, "MVOS_HSI_CLI is not set");
    if (!cli_env)
        return;
    const std::string cli = cli_env;

    TempDir dir("acc9");
    mvos_hsi::testing::write_fixture_dataset(dir.path());
    const std::string folder = dir.path().string();

    // calibration folder --folder ... --dark ... --k 3 --spatial 3
    int rc = run_cli(cli, "calibration folder --folder " + folder + " --dark " + folder +
                              "/Dark --k 3 --spatial 3");
    c.expect(rc == 0, "calibration invocation exited " + std::to_string(rc));
    c.expect(std::filesystem::exists(dir / "H_P1_V4_B_R.mat") &&
                 std::filesystem::exists(dir / "H_P1_V4_B_F.mat"),
             "calibration .mat outputs missing");

    // clipping folder --index ndvi --wavelengths-mat ... --threshold-mode auto
    //                 --crop-mode square --crop-size 30
    rc = run_cli(cli, "clipping folder --folder " + folder + " --index ndvi "
                          "--wavelengths-mat " + folder + "/wavelengths.mat "
                          "--threshold-mode auto --crop-mode square --crop-size 30");
    c.expect(rc == 0, "clipping invocation exited " + std::to_string(rc));
    const auto clipped = dir / "clipped_hypercubes";
    c.expect(std::filesystem::exists(clipped / "H_P1_V4_B_leaf_1.hdr") &&
                 std::filesystem::exists(clipped / "H_P1_V4_B_leaf_3.img"),
             "clipped ENVI pairs missing");

    // augmentation folder --num 3 --flip --rotate -10 10 --shear -16 16
    rc = run_cli(cli, "augmentation folder --folder " + clipped.string() +
                          " --num 3 --flip --rotate -10 10 --shear -16 16");
    c.expect(rc == 0, "augmentation invocation exited " + std::to_string(rc));
    c.expect(std::filesystem::exists(clipped / "H_P1_V4_B_leaf_1_aug1.hdr") &&
                 std::filesystem::exists(clipped / "H_P1_V4_B_leaf_2_aug3.img"),
             "_aug<k> pairs missing");

    // plotting leaf --stem H_P1_V4_B --leaf 1 3 --wavelengths-mat ...
    rc = run_cli(cli, "plotting leaf --clipped-dir " + clipped.string() +
                          " --stem H_P1_V4_B --leaf 1 3 --wavelengths-mat " + folder +
                          "/wavelengths.mat");
    c.expect(rc == 0, "plotting invocation exited " + std::to_string(rc));
    c.expect(std::filesystem::exists(clipped / "H_P1_V4_B_leaf_spectra.svg") &&
                 std::filesystem::exists(clipped / "H_P1_V4_B_leaf_spectra.csv"),
             "chart/CSV outputs missing");

    // --threshold-mode manual without --threshold must exit 2.
    std::string out;
    rc = run_cli(cli, "clipping folder --folder " + folder +
                          " --index ndvi --threshold-mode manual", &out);
    c.expect(rc == 2, "manual mode without --threshold exited " + std::to_string(rc));
}

// --------------------------------------------------------------- criterion 10

void criterion_determinism(Criterion& c) {
    auto run_pipeline = [&](const std::filesystem::path& root) {
        mvos_hsi::testing::write_fixture_dataset(root);

        CalibrationJob cal;
        cal.folder = root;
        cal.dark_base = root / "Dark";
        cal.params = BinningParams(3, 3);
        calibrate_folder(cal);

        ClipJob clip;
        clip.folder = root;
        clip.index = IndexKind::NDVI;
        clip.external_wavelengths = mvos_hsi::testing::fixture_wavelengths(16);
        clip_folder(clip);

        AugmentationSpec aug;
        aug.num_aug = 3;
        aug.flip = true;
        aug.seed = 99;
        augment_folder(root / "clipped_hypercubes", aug);

        plot_leaf_center(root / "clipped_hypercubes", "H_P1_V4_B", {1, 2, 3});
    };

    TempDir run1("acc10a"), run2("acc10b");
    run_pipeline(run1.path());
    run_pipeline(run2.path());
    c.expect(tree_bytes(run1.path()) == tree_bytes(run2.path()),
             "pipeline artifacts differ between runs");
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<void(Criterion&)> fn;
    };
    const std::vector<Entry> criteria{
        {"format round-trips (ENVI cubes and headers)", criterion_format_round_trips},
        {"MAT round-trips and compressed reference fixture", criterion_mat_round_trips},
        {"calibration math (dark, reflectance, binning oracle)", criterion_calibration_math},
        {"index correctness (formulas, antisymmetry, scale invariance)",
         criterion_index_correctness},
        {"otsu equals exhaustive between-class-variance argmax", criterion_otsu_oracle},
        {"component labeling matches flood-fill oracle", criterion_components_oracle},
        {"end-to-end clipping on a synthetic scene", criterion_end_to_end_clipping},
        {"augmentation invariants (flips, convexity, seeding)",
         criterion_augmentation_invariants},
        {"CLI parity with the documented invocations", criterion_cli_parity},
        {"pipeline determinism across identical runs", criterion_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        try {
            criteria[i].fn(c);
        } catch (const std::exception& ex) {
            c.expect(false, std::string("unhandled exception: ") + ex.what());
        }
        const bool ok = c.failures == 0;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": "
                  << criteria[i].name << " (" << (c.checks - c.failures) << "/" << c.checks
                  << " checks)";
        if (!ok)
            std::cout << " -- " << c.first_failure;
        std::cout << '\n';
        failed += ok ? 0 : 1;
    }
    if (failed) {
        std::cout << failed << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
