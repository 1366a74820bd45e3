#include "mvos_hsi/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvos_hsi/envi.hpp"
#include "internal/parallel.hpp"

namespace mvos_hsi {

namespace fs = std::filesystem;

std::size_t Mask::count() const {
    std::size_t n = 0;
    for (unsigned char b : bits)
        n += b != 0;
    return n;
}

std::size_t otsu_bin_boundary(const std::vector<std::uint64_t>& histogram) {
    const std::size_t bins = histogram.size();
    if (bins < 2)
        throw DegenerateHistogram("histogram needs at least 2 bins");

    std::uint64_t total = 0, total_weighted = 0;
    for (std::size_t i = 0; i < bins; ++i) {
        total += histogram[i];
        total_weighted += histogram[i] * i;
    }
    if (total == 0)
        throw DegenerateHistogram("histogram is empty");

    // Scan every boundary, carrying class-0 count/sum incrementally.
    // sigma = w0*w1*(mu0-mu1)^2 evaluated from exact integer tallies.
    std::uint64_t n0 = 0, s0 = 0;
    double best_sigma = -1.0;
    std::size_t best_boundary = 0;
    bool any = false;
    for (std::size_t b = 0; b + 1 < bins; ++b) {
        n0 += histogram[b];
        s0 += histogram[b] * b;
        const std::uint64_t n1 = total - n0;
        const std::uint64_t s1 = total_weighted - s0;
        double sigma = 0.0;
        if (n0 > 0 && n1 > 0) {
            const double w0 = static_cast<double>(n0) / static_cast<double>(total);
            const double w1 = static_cast<double>(n1) / static_cast<double>(total);
            const double mu0 = static_cast<double>(s0) / static_cast<double>(n0);
            const double mu1 = static_cast<double>(s1) / static_cast<double>(n1);
            sigma = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        }
        if (!any || sigma > best_sigma) { // strict: ties keep the lowest boundary
            best_sigma = sigma;
            best_boundary = b;
            any = true;
        }
    }
    return best_boundary;
}

double otsu_threshold(const IndexImage& img) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t n_valid = 0;
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        if (!img.valid[i])
            continue;
        ++n_valid;
        lo = std::min(lo, img.values[i]);
        hi = std::max(hi, img.values[i]);
    }
    if (n_valid < 2)
        throw DegenerateHistogram("index image has fewer than 2 valid pixels");
    if (lo == hi)
        throw DegenerateHistogram("index image is constant over valid pixels");

    constexpr std::size_t kBins = 256;
    std::vector<std::uint64_t> histogram(kBins, 0);
    const double scale = static_cast<double>(kBins) / (hi - lo);
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        if (!img.valid[i])
            continue;
        auto bin = static_cast<std::size_t>((img.values[i] - lo) * scale);
        if (bin >= kBins)
            bin = kBins - 1;
        ++histogram[bin];
    }
    const std::size_t boundary = otsu_bin_boundary(histogram);
    return lo + static_cast<double>(boundary + 1) * (hi - lo) / static_cast<double>(kBins);
}

Mask threshold_mask(const IndexImage& img, double t) {
    Mask m(img.lines, img.samples);
    for (std::size_t i = 0; i < img.values.size(); ++i)
        m.bits[i] = (img.valid[i] != 0 && img.values[i] > t) ? 1 : 0;
    return m;
}

namespace {

std::vector<std::pair<int, int>> disk_offsets(std::size_t radius) {
    std::vector<std::pair<int, int>> offsets;
    const int r = static_cast<int>(radius);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dy * dy + dx * dx <= r * r)
                offsets.emplace_back(dy, dx);
    return offsets;
}

Mask erode(const Mask& m, const std::vector<std::pair<int, int>>& se) {
    Mask out(m.lines, m.samples);
    for (std::size_t l = 0; l < m.lines; ++l) {
        for (std::size_t s = 0; s < m.samples; ++s) {
            bool all = true;
            for (auto [dy, dx] : se) {
                const long r = static_cast<long>(l) + dy;
                const long c = static_cast<long>(s) + dx;
                if (r < 0 || c < 0 || r >= static_cast<long>(m.lines) ||
                    c >= static_cast<long>(m.samples) ||
                    !m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) {
                    all = false;
                    break;
                }
            }
            out.set(l, s, all);
        }
    }
    return out;
}

Mask dilate(const Mask& m, const std::vector<std::pair<int, int>>& se) {
    Mask out(m.lines, m.samples);
    for (std::size_t l = 0; l < m.lines; ++l) {
        for (std::size_t s = 0; s < m.samples; ++s) {
            bool some = false;
            for (auto [dy, dx] : se) {
                const long r = static_cast<long>(l) + dy;
                const long c = static_cast<long>(s) + dx;
                if (r >= 0 && c >= 0 && r < static_cast<long>(m.lines) &&
                    c < static_cast<long>(m.samples) &&
                    m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) {
                    some = true;
                    break;
                }
            }
            out.set(l, s, some);
        }
    }
    return out;
}

} // namespace

Mask clean_mask(const Mask& mask, MorphologyOp op, std::size_t radius) {
    if (op == MorphologyOp::None)
        return mask;
    const auto se = disk_offsets(radius);
    Mask opened = dilate(erode(mask, se), se);
    return erode(dilate(opened, se), se);
}

RegionSet label_components(const Mask& mask, Connectivity connectivity) {
    static constexpr int kNeigh4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr int kNeigh8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                          {0, 1},   {1, -1}, {1, 0}, {1, 1}};
    const int n_neigh = connectivity == Connectivity::Four ? 4 : 8;
    const auto* neigh = connectivity == Connectivity::Four ? kNeigh4 : kNeigh8;

    RegionSet rs;
    rs.lines = mask.lines;
    rs.samples = mask.samples;
    rs.labels.assign(mask.lines * mask.samples, 0);

    std::vector<std::size_t> stack;
    int next_label = 0;
    for (std::size_t l = 0; l < mask.lines; ++l) {
        for (std::size_t s = 0; s < mask.samples; ++s) {
            const std::size_t start = l * mask.samples + s;
            if (!mask.bits[start] || rs.labels[start] != 0)
                continue;
            ++next_label;
            Region region;
            region.label = next_label;
            region.min_row = region.max_row = l;
            region.min_col = region.max_col = s;
            double sum_r = 0.0, sum_c = 0.0;

            rs.labels[start] = next_label;
            stack.assign(1, start);
            while (!stack.empty()) {
                const std::size_t idx = stack.back();
                stack.pop_back();
                const std::size_t pr = idx / mask.samples;
                const std::size_t pc = idx % mask.samples;
                ++region.area;
                sum_r += static_cast<double>(pr);
                sum_c += static_cast<double>(pc);
                region.min_row = std::min(region.min_row, pr);
                region.max_row = std::max(region.max_row, pr);
                region.min_col = std::min(region.min_col, pc);
                region.max_col = std::max(region.max_col, pc);
                for (int k = 0; k < n_neigh; ++k) {
                    const long nr = static_cast<long>(pr) + neigh[k][0];
                    const long nc = static_cast<long>(pc) + neigh[k][1];
                    if (nr < 0 || nc < 0 || nr >= static_cast<long>(mask.lines) ||
                        nc >= static_cast<long>(mask.samples))
                        continue;
                    const std::size_t nidx =
                        static_cast<std::size_t>(nr) * mask.samples + static_cast<std::size_t>(nc);
                    if (mask.bits[nidx] && rs.labels[nidx] == 0) {
                        rs.labels[nidx] = next_label;
                        stack.push_back(nidx);
                    }
                }
            }
            region.centroid_row = sum_r / static_cast<double>(region.area);
            region.centroid_col = sum_c / static_cast<double>(region.area);
            rs.regions.push_back(region);
        }
    }
    return rs;
}

RegionSet filter_min_area(const RegionSet& rs, std::size_t min_area) {
    RegionSet out;
    out.lines = rs.lines;
    out.samples = rs.samples;
    out.labels.assign(rs.labels.size(), 0);

    std::vector<int> remap(rs.regions.size() + 1, 0);
    int next = 0;
    for (const Region& r : rs.regions) {
        if (r.area < min_area)
            continue;
        Region kept = r;
        kept.label = ++next;
        remap[static_cast<std::size_t>(r.label)] = kept.label;
        out.regions.push_back(kept);
    }
    for (std::size_t i = 0; i < rs.labels.size(); ++i)
        if (rs.labels[i] > 0)
            out.labels[i] = remap[static_cast<std::size_t>(rs.labels[i])];
    return out;
}

CropResult crop_regions(const Hypercube& cube, const RegionSet& rs, CropMode mode,
                        std::size_t square_size) {
    CropResult result;
    result.crops.reserve(rs.regions.size());

    auto window = [&](double centroid, std::size_t extent, std::size_t size,
                      const char* axis) -> std::pair<std::size_t, std::size_t> {
        if (size > extent) {
            result.warnings.push_back("crop size " + std::to_string(size) + " exceeds cube " +
                                      axis + " extent " + std::to_string(extent) +
                                      "; using the full extent");
            return {0, extent};
        }
        long start = std::lround(centroid) - static_cast<long>(size / 2);
        if (start < 0)
            start = 0;
        if (start + static_cast<long>(size) > static_cast<long>(extent))
            start = static_cast<long>(extent) - static_cast<long>(size);
        return {static_cast<std::size_t>(start), size};
    };

    for (const Region& region : rs.regions) {
        std::size_t r0, c0, nr, nc;
        if (mode == CropMode::Tight) {
            r0 = region.min_row;
            c0 = region.min_col;
            nr = region.max_row - region.min_row + 1;
            nc = region.max_col - region.min_col + 1;
        } else {
            auto [wr, wnr] = window(region.centroid_row, cube.lines(), square_size, "line");
            auto [wc, wnc] = window(region.centroid_col, cube.samples(), square_size, "sample");
            r0 = wr;
            c0 = wc;
            nr = wnr;
            nc = wnc;
        }
        Hypercube crop(nr, nc, cube.bands(), {}, cube.wavelengths(), cube.source_stem());
        for (std::size_t b = 0; b < cube.bands(); ++b)
            for (std::size_t l = 0; l < nr; ++l)
                for (std::size_t s = 0; s < nc; ++s)
                    crop.at(l, s, b) = cube.at(r0 + l, c0 + s, b);
        result.crops.push_back(std::move(crop));
    }
    return result;
}

bool ClipReport::all_ok() const {
    return std::none_of(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.status == "error"; });
}

namespace {

std::vector<fs::path> list_envi_headers(const fs::path& folder,
                                        std::vector<std::string>* skipped) {
    std::error_code ec;
    if (!fs::is_directory(folder, ec))
        throw IoError("'" + folder.string() + "' is not a directory");
    std::vector<fs::path> headers;
    for (const auto& entry : fs::directory_iterator(folder)) {
        if (!entry.is_regular_file())
            continue;
        if (entry.path().extension() != ".hdr")
            continue;
        if (has_companion_binary(entry.path()))
            headers.push_back(entry.path());
        else if (skipped)
            skipped->push_back(entry.path().filename().string());
    }
    std::sort(headers.begin(), headers.end());
    return headers;
}

} // namespace

ClipReport clip_folder(const ClipJob& job) {
    std::vector<std::string> skipped;
    std::vector<fs::path> headers = list_envi_headers(job.folder, &skipped);
    if (headers.empty())
        throw NoInputsFound("no ENVI .hdr/.img pairs found in '" + job.folder.string() + "'");

    ClipReport report;
    report.output_dir =
        job.output_dir.empty() ? job.folder / "clipped_hypercubes" : job.output_dir;
    fs::create_directories(report.output_dir);

    report.entries.resize(headers.size() + skipped.size());
    for (std::size_t i = 0; i < skipped.size(); ++i) {
        auto& e = report.entries[headers.size() + i];
        e.input = skipped[i];
        e.status = "skipped";
        e.warnings.push_back("header has no companion binary");
    }

    detail::parallel_for(headers.size(), job.jobs, [&](std::size_t i) {
        ClipReport::Entry& entry = report.entries[i];
        entry.input = headers[i].string();
        try {
            Hypercube cube = read_cube(headers[i]);
            if (!cube.wavelengths() && job.external_wavelengths) {
                if (job.external_wavelengths->size() == cube.bands())
                    cube.set_wavelengths(job.external_wavelengths);
                else
                    entry.warnings.push_back(
                        "external wavelength vector length " +
                        std::to_string(job.external_wavelengths->size()) +
                        " does not match band count " + std::to_string(cube.bands()) +
                        "; ignored");
            }

            IndexImage index = compute_index(cube, job.index, job.selection);

            double threshold;
            if (job.params.threshold_mode == ThresholdMode::Manual) {
                threshold = job.params.manual_threshold;
            } else {
                try {
                    threshold = otsu_threshold(index);
                } catch (const DegenerateHistogram&) {
                    // Nothing separable from background in this cube.
                    entry.status = "no regions";
                    return;
                }
            }
            entry.threshold = threshold;

            Mask mask = clean_mask(threshold_mask(index, threshold), job.params.morphology,
                                   job.params.morphology_radius);
            RegionSet regions =
                filter_min_area(label_components(mask, job.params.connectivity),
                                job.params.min_area);
            if (regions.regions.empty()) {
                entry.status = "no regions";
                return;
            }

            CropResult crops =
                crop_regions(cube, regions, job.params.crop_mode, job.params.crop_size);
            entry.warnings.insert(entry.warnings.end(), crops.warnings.begin(),
                                  crops.warnings.end());
            const std::string stem = cube.source_stem();
            for (std::size_t n = 0; n < crops.crops.size(); ++n) {
                fs::path base = report.output_dir / (stem + "_leaf_" + std::to_string(n + 1));
                EnviPaths paths = write_cube(crops.crops[n], base, Interleave::BSQ,
                                             EnviDataType::Float64);
                entry.outputs.push_back(paths.hdr.string());
                entry.outputs.push_back(paths.img.string());
            }
            entry.leaf_count = crops.crops.size();
            entry.status = "ok";
        } catch (const std::exception& ex) {
            entry.status = "error";
            entry.error = ex.what();
        }
    });
    return report;
}

} // namespace mvos_hsi
