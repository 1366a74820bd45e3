#ifndef MVOS_HSI_CALIBRATION_HPP
#define MVOS_HSI_CALIBRATION_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi {

enum class Channel { R, F };

const char* channel_suffix(Channel ch); // "_R" / "_F"

struct DiscoveredPair {
    std::string stem;    // filename without the _R/_F suffix
    Channel channel = Channel::R;
    std::filesystem::path header; // <folder>/<stem>_<channel>.hdr
};

/// Every `<stem>_R.hdr` / `<stem>_F.hdr` in the folder with a companion
/// binary, excluding the dark reference itself. Sorted by stem, R before F.
/// Headers without a companion land in `skipped` when provided.
std::vector<DiscoveredPair> discover_pairs(const std::filesystem::path& folder,
                                           const std::filesystem::path& dark_base,
                                           std::vector<std::string>* skipped = nullptr);

struct CalibrationJob {
    std::filesystem::path folder;
    /// Path prefix of the dark acquisition, e.g. `<folder>/Dark` for
    /// `Dark_R.hdr` / `Dark_F.hdr`.
    std::filesystem::path dark_base;
    BinningParams params{3, 3};
    /// Defaults to `folder`.
    std::filesystem::path output_dir;
    unsigned jobs = 0; // 0 = hardware concurrency
};

struct CalibrationReport {
    struct Entry {
        std::string stem;
        Channel channel = Channel::R;
        std::string input;
        std::string status; // "ok", "skipped", or "error"
        std::string output; // .mat path on success
        std::string error;
        std::vector<std::string> warnings;
    };
    std::vector<Entry> entries;

    bool all_ok() const;
};

/// Dark-subtract, bin, and save every discovered sample as
/// `<stem>_R.mat` / `<stem>_F.mat` holding variables `cube` and (when
/// wavelengths are known) `wavelength`. Per-file failures are recorded and
/// the batch continues.
CalibrationReport calibrate_folder(const CalibrationJob& job);

} // namespace mvos_hsi

#endif
