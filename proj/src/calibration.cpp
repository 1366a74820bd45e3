#include "mvos_hsi/calibration.hpp"

#include <algorithm>
#include <map>

#include "mvos_hsi/envi.hpp"
#include "mvos_hsi/mat5.hpp"
#include "internal/parallel.hpp"

namespace mvos_hsi {

namespace fs = std::filesystem;

const char* channel_suffix(Channel ch) {
    return ch == Channel::R ? "_R" : "_F";
}

std::vector<DiscoveredPair> discover_pairs(const fs::path& folder, const fs::path& dark_base,
                                           std::vector<std::string>* skipped) {
    std::error_code ec;
    if (!fs::is_directory(folder, ec))
        throw IoError("'" + folder.string() + "' is not a directory");

    std::error_code cec;
    const fs::path dark_canonical = fs::weakly_canonical(dark_base, cec);
    std::vector<DiscoveredPair> pairs;
    for (const auto& entry : fs::directory_iterator(folder)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".hdr")
            continue;
        const std::string stem_full = entry.path().stem().string(); // e.g. "A_R"
        Channel channel;
        if (stem_full.size() > 2 && stem_full.ends_with("_R"))
            channel = Channel::R;
        else if (stem_full.size() > 2 && stem_full.ends_with("_F"))
            channel = Channel::F;
        else {
            if (skipped)
                skipped->push_back(entry.path().filename().string() +
                                   " (no _R/_F suffix)");
            continue;
        }
        const std::string stem = stem_full.substr(0, stem_full.size() - 2);
        const fs::path entry_base =
            fs::weakly_canonical(entry.path().parent_path(), cec) / stem;
        if (entry_base == dark_canonical)
            continue;
        if (!has_companion_binary(entry.path())) {
            if (skipped)
                skipped->push_back(entry.path().filename().string() +
                                   " (no companion binary)");
            continue;
        }
        pairs.push_back({stem, channel, entry.path()});
    }
    std::sort(pairs.begin(), pairs.end(), [](const DiscoveredPair& a, const DiscoveredPair& b) {
        if (a.stem != b.stem)
            return a.stem < b.stem;
        return static_cast<int>(a.channel) < static_cast<int>(b.channel);
    });
    return pairs;
}

bool CalibrationReport::all_ok() const {
    return std::none_of(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.status == "error"; });
}

CalibrationReport calibrate_folder(const CalibrationJob& job) {
    std::vector<std::string> skipped;
    std::vector<DiscoveredPair> pairs = discover_pairs(job.folder, job.dark_base, &skipped);
    if (pairs.empty())
        throw NoInputsFound("no calibratable *_R/*_F ENVI pairs found in '" +
                            job.folder.string() + "'");

    // Load each needed dark reference once, up front; a missing dark pair is
    // a job misconfiguration, not a per-file failure.
    std::map<Channel, Hypercube> darks;
    for (const DiscoveredPair& p : pairs) {
        if (darks.count(p.channel))
            continue;
        fs::path dark_hdr = job.dark_base;
        dark_hdr += channel_suffix(p.channel);
        dark_hdr += ".hdr";
        if (!fs::exists(dark_hdr) || !has_companion_binary(dark_hdr))
            throw DarkMissing("dark reference pair not found: expected '" + dark_hdr.string() +
                              "' with a companion binary");
        darks.emplace(p.channel, read_cube(dark_hdr));
    }

    const fs::path outdir = job.output_dir.empty() ? job.folder : job.output_dir;
    fs::create_directories(outdir);

    CalibrationReport report;
    report.entries.resize(pairs.size() + skipped.size());
    for (std::size_t i = 0; i < skipped.size(); ++i) {
        auto& e = report.entries[pairs.size() + i];
        e.input = skipped[i];
        e.status = "skipped";
        e.warnings.push_back("skipped: " + skipped[i]);
    }

    detail::parallel_for(pairs.size(), job.jobs, [&](std::size_t i) {
        const DiscoveredPair& p = pairs[i];
        CalibrationReport::Entry& entry = report.entries[i];
        entry.stem = p.stem;
        entry.channel = p.channel;
        entry.input = p.header.string();
        try {
            Hypercube raw = read_cube(p.header);
            const Hypercube& dark = darks.at(p.channel);
            Hypercube calibrated = subtract_dark(raw, dark);
            calibrated = spectral_bin(calibrated, job.params.spectral_k);
            calibrated = spatial_bin(calibrated, job.params.spatial_k);

            std::vector<MatArray> arrays;
            arrays.emplace_back(
                "cube",
                std::vector<std::size_t>{calibrated.lines(), calibrated.samples(),
                                         calibrated.bands()},
                // Column-major over (line, sample, band): line fastest.
                [&] {
                    std::vector<double> cm(calibrated.size());
                    std::size_t idx = 0;
                    for (std::size_t b = 0; b < calibrated.bands(); ++b)
                        for (std::size_t s = 0; s < calibrated.samples(); ++s)
                            for (std::size_t l = 0; l < calibrated.lines(); ++l)
                                cm[idx++] = calibrated.at(l, s, b);
                    return cm;
                }());
            if (calibrated.wavelengths())
                arrays.emplace_back("wavelength",
                                    std::vector<std::size_t>{calibrated.wavelengths()->size()},
                                    *calibrated.wavelengths());

            fs::path out = outdir / (p.stem + channel_suffix(p.channel) + ".mat");
            write_mat(out, arrays);
            entry.output = out.string();
            entry.status = "ok";
        } catch (const std::exception& ex) {
            entry.status = "error";
            entry.error = ex.what();
        }
    });
    return report;
}

} // namespace mvos_hsi
