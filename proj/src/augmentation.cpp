#include "mvos_hsi/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mvos_hsi/envi.hpp"
#include "internal/parallel.hpp"

namespace mvos_hsi {

namespace fs = std::filesystem;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t AugmentRng::next() {
    // xorshift64* : small, fast, and stable across platforms.
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dULL;
}

double AugmentRng::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

bool AugmentRng::coin() {
    return (next() >> 63) != 0;
}

std::uint64_t stream_seed(std::uint64_t base_seed, const std::string& stem) {
    return splitmix64(base_seed ^ fnv1a64(stem));
}

AffineTransform make_transform(const DrawRecord& draw, std::size_t lines, std::size_t samples) {
    const double cy = (static_cast<double>(lines) - 1.0) / 2.0;
    const double cx = (static_cast<double>(samples) - 1.0) / 2.0;
    const double theta = draw.rotation_deg * kDegToRad;
    const double shear_k = std::tan(draw.shear_deg * kDegToRad);
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double fx = draw.flip_horizontal ? -1.0 : 1.0;
    const double fy = draw.flip_vertical ? -1.0 : 1.0;

    // Forward order is flip, then rotate, then shear (x-axis), all about the
    // center; the stored matrix is the inverse map output -> source.
    AffineTransform t;
    t.m[0][0] = fy * (cos_t + sin_t * shear_k);
    t.m[0][1] = fy * (-sin_t);
    t.m[0][2] = cy - t.m[0][0] * cy - t.m[0][1] * cx;
    t.m[1][0] = fx * (sin_t - cos_t * shear_k);
    t.m[1][1] = fx * cos_t;
    t.m[1][2] = cx - t.m[1][0] * cy - t.m[1][1] * cx;
    return t;
}

std::pair<AffineTransform, DrawRecord> sample_transform(const AugmentationSpec& spec,
                                                        std::size_t lines, std::size_t samples,
                                                        AugmentRng& rng) {
    DrawRecord draw;
    if (spec.flip) {
        draw.flip_horizontal = rng.coin();
        draw.flip_vertical = rng.coin();
    }
    draw.rotation_deg = rng.uniform(spec.rotate_lo_deg, spec.rotate_hi_deg);
    draw.shear_deg = rng.uniform(spec.shear_lo_deg, spec.shear_hi_deg);
    return {make_transform(draw, lines, samples), draw};
}

Hypercube apply_transform(const Hypercube& cube, const AffineTransform& t,
                          Interpolation interpolation, double fill_value) {
    const std::size_t lines = cube.lines();
    const std::size_t samples = cube.samples();
    const std::size_t bands = cube.bands();
    Hypercube out(lines, samples, bands, {}, cube.wavelengths(), cube.source_stem());

    const long max_r = static_cast<long>(lines) - 1;
    const long max_c = static_cast<long>(samples) - 1;

    for (std::size_t r = 0; r < lines; ++r) {
        for (std::size_t c = 0; c < samples; ++c) {
            const double fr = static_cast<double>(r);
            const double fc = static_cast<double>(c);
            const double src_r = t.m[0][0] * fr + t.m[0][1] * fc + t.m[0][2];
            const double src_c = t.m[1][0] * fr + t.m[1][1] * fc + t.m[1][2];

            if (interpolation == Interpolation::Nearest) {
                const long ri = std::lround(src_r);
                const long ci = std::lround(src_c);
                if (ri < 0 || ci < 0 || ri > max_r || ci > max_c) {
                    for (std::size_t b = 0; b < bands; ++b)
                        out.at(r, c, b) = fill_value;
                } else {
                    for (std::size_t b = 0; b < bands; ++b)
                        out.at(r, c, b) = cube.at(static_cast<std::size_t>(ri),
                                                  static_cast<std::size_t>(ci), b);
                }
                continue;
            }

            // Bilinear: weights are shared by all bands so each output
            // spectrum is one convex combination of <= 4 source spectra.
            const double floor_r = std::floor(src_r);
            const double floor_c = std::floor(src_c);
            const long r0 = static_cast<long>(floor_r);
            const long c0 = static_cast<long>(floor_c);
            const double dr = src_r - floor_r;
            const double dc = src_c - floor_c;
            const double w00 = (1.0 - dr) * (1.0 - dc);
            const double w01 = (1.0 - dr) * dc;
            const double w10 = dr * (1.0 - dc);
            const double w11 = dr * dc;

            const bool in00 = r0 >= 0 && c0 >= 0 && r0 <= max_r && c0 <= max_c;
            const bool in01 = r0 >= 0 && c0 + 1 >= 0 && r0 <= max_r && c0 + 1 <= max_c;
            const bool in10 = r0 + 1 >= 0 && c0 >= 0 && r0 + 1 <= max_r && c0 <= max_c;
            const bool in11 = r0 + 1 >= 0 && c0 + 1 >= 0 && r0 + 1 <= max_r && c0 + 1 <= max_c;

            for (std::size_t b = 0; b < bands; ++b) {
                const double v00 =
                    in00 ? cube.at(static_cast<std::size_t>(r0), static_cast<std::size_t>(c0), b)
                         : fill_value;
                const double v01 = in01 ? cube.at(static_cast<std::size_t>(r0),
                                                  static_cast<std::size_t>(c0 + 1), b)
                                        : fill_value;
                const double v10 = in10 ? cube.at(static_cast<std::size_t>(r0 + 1),
                                                  static_cast<std::size_t>(c0), b)
                                        : fill_value;
                const double v11 = in11 ? cube.at(static_cast<std::size_t>(r0 + 1),
                                                  static_cast<std::size_t>(c0 + 1), b)
                                        : fill_value;
                out.at(r, c, b) = w00 * v00 + w01 * v01 + w10 * v10 + w11 * v11;
            }
        }
    }
    return out;
}

bool AugmentReport::all_ok() const {
    return std::none_of(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.status == "error"; });
}

AugmentReport augment_folder(const fs::path& folder, const AugmentationSpec& spec,
                             const fs::path& output_dir, unsigned jobs) {
    std::error_code ec;
    if (!fs::is_directory(folder, ec))
        throw IoError("'" + folder.string() + "' is not a directory");

    std::vector<fs::path> headers;
    for (const auto& entry : fs::directory_iterator(folder))
        if (entry.is_regular_file() && entry.path().extension() == ".hdr" &&
            has_companion_binary(entry.path()))
            headers.push_back(entry.path());
    std::sort(headers.begin(), headers.end());
    if (headers.empty())
        throw NoInputsFound("no ENVI .hdr/.img pairs found in '" + folder.string() + "'");

    AugmentReport report;
    report.seed_used = spec.seed ? *spec.seed : std::random_device{}();
    const fs::path outdir = output_dir.empty() ? folder : output_dir;
    fs::create_directories(outdir);

    report.entries.resize(headers.size());
    detail::parallel_for(headers.size(), jobs, [&](std::size_t i) {
        AugmentReport::Entry& entry = report.entries[i];
        entry.input = headers[i].string();
        try {
            Hypercube cube = read_cube(headers[i]);
            const std::string stem = cube.source_stem();
            AugmentRng rng(stream_seed(report.seed_used, stem));
            for (std::size_t k = 1; k <= spec.num_aug; ++k) {
                auto [transform, draw] = sample_transform(spec, cube.lines(), cube.samples(), rng);
                Hypercube variant =
                    apply_transform(cube, transform, spec.interpolation, spec.fill_value);
                fs::path base = outdir / (stem + "_aug" + std::to_string(k));
                EnviPaths paths =
                    write_cube(variant, base, Interleave::BSQ, EnviDataType::Float64);
                entry.outputs.push_back(paths.hdr.string());
                entry.outputs.push_back(paths.img.string());
                entry.draws.push_back(draw);
            }
            entry.status = "ok";
        } catch (const std::exception& ex) {
            entry.status = "error";
            entry.error = ex.what();
        }
    });
    return report;
}

} // namespace mvos_hsi
