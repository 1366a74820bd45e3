#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mvos_hsi/augmentation.hpp"
#include "mvos_hsi/calibration.hpp"
#include "mvos_hsi/segmentation.hpp"
#include "mvos_hsi/spectra.hpp"
#include "mvos_hsi/wavelengths.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileFailures = 1;
constexpr int kExitUsage = 2;

void write_report(const std::string& path, const json& report) {
    if (path.empty())
        return;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "error: cannot write report file '" << path << "'\n";
        return;
    }
    out << report.dump(2) << '\n';
}

// ---------------------------------------------------------------- calibration

struct CalibrationArgs {
    std::string folder;
    std::string dark;
    int spectral_k = 3;
    int spatial_k = 3;
    std::string outdir;
    unsigned jobs = 0;
    std::string report_path;
};

int run_calibration(const CalibrationArgs& args) {
    mvos_hsi::CalibrationJob job;
    job.folder = args.folder;
    job.dark_base = args.dark;
    job.params = mvos_hsi::BinningParams(static_cast<std::size_t>(args.spectral_k),
                                         static_cast<std::size_t>(args.spatial_k));
    if (!args.outdir.empty())
        job.output_dir = args.outdir;
    job.jobs = args.jobs;

    mvos_hsi::CalibrationReport report;
    try {
        report = mvos_hsi::calibrate_folder(job);
    } catch (const std::exception& ex) {
        std::cerr << "error: calibration: " << ex.what() << '\n';
        return kExitFileFailures;
    }

    json j{{"stage", "calibration"}, {"inputs", json::array()}};
    for (const auto& e : report.entries) {
        std::cout << '[' << e.status << "] " << e.input;
        if (!e.output.empty())
            std::cout << " -> " << e.output;
        if (!e.error.empty())
            std::cout << ": " << e.error;
        std::cout << '\n';
        json entry{{"path", e.input}, {"status", e.status}};
        entry["outputs"] = e.output.empty() ? json::array() : json::array({e.output});
        if (!e.error.empty())
            entry["error"] = e.error;
        j["inputs"].push_back(std::move(entry));
    }
    write_report(args.report_path, j);
    return report.all_ok() ? kExitOk : kExitFileFailures;
}

// ------------------------------------------------------------------- clipping

struct ClippingArgs {
    std::string folder;
    std::string index;
    std::string wavelengths_mat;
    std::string wavelengths_csv;
    std::vector<int> bands;
    std::string threshold_mode = "auto";
    double threshold = 0.0;
    bool threshold_given = false;
    int min_area = 100;
    std::string crop_mode = "square";
    int crop_size = 30;
    std::string morphology = "open-close";
    int connectivity = 8;
    std::string outdir;
    unsigned jobs = 0;
    std::string report_path;
};

int run_clipping(const ClippingArgs& args) {
    mvos_hsi::ClipJob job;
    job.folder = args.folder;

    auto kind = mvos_hsi::index_kind_from_token(args.index);
    if (!kind) {
        std::cerr << "error: --index must be ndvi, gci, or cire (got '" << args.index << "')\n";
        return kExitUsage;
    }
    job.index = *kind;

    if (!args.bands.empty()) {
        job.selection = mvos_hsi::BandSelection::by_index(
            static_cast<std::size_t>(args.bands[0]), static_cast<std::size_t>(args.bands[1]),
            static_cast<std::size_t>(args.bands[2]), static_cast<std::size_t>(args.bands[3]));
    }
    try {
        if (!args.wavelengths_mat.empty())
            job.external_wavelengths = mvos_hsi::load_wavelengths(args.wavelengths_mat);
        else if (!args.wavelengths_csv.empty())
            job.external_wavelengths = mvos_hsi::load_wavelengths(args.wavelengths_csv);
    } catch (const std::exception& ex) {
        std::cerr << "error: clipping: " << ex.what() << '\n';
        return kExitFileFailures;
    }

    if (args.threshold_mode == "manual") {
        job.params.threshold_mode = mvos_hsi::ThresholdMode::Manual;
        job.params.manual_threshold = args.threshold;
    }
    job.params.min_area = static_cast<std::size_t>(args.min_area);
    job.params.crop_mode =
        args.crop_mode == "tight" ? mvos_hsi::CropMode::Tight : mvos_hsi::CropMode::Square;
    job.params.crop_size = static_cast<std::size_t>(args.crop_size);
    job.params.morphology = args.morphology == "none" ? mvos_hsi::MorphologyOp::None
                                                      : mvos_hsi::MorphologyOp::OpenClose;
    job.params.connectivity = args.connectivity == 4 ? mvos_hsi::Connectivity::Four
                                                     : mvos_hsi::Connectivity::Eight;
    if (!args.outdir.empty())
        job.output_dir = args.outdir;
    job.jobs = args.jobs;

    mvos_hsi::ClipReport report;
    try {
        report = mvos_hsi::clip_folder(job);
    } catch (const std::exception& ex) {
        std::cerr << "error: clipping: " << ex.what() << '\n';
        return kExitFileFailures;
    }

    json j{{"stage", "clipping"}, {"inputs", json::array()}};
    for (const auto& e : report.entries) {
        std::cout << '[' << e.status << "] " << e.input;
        if (e.status == "ok")
            std::cout << ": " << e.leaf_count << " leaf file(s)";
        if (!e.error.empty())
            std::cout << ": " << e.error;
        std::cout << '\n';
        for (const std::string& w : e.warnings)
            std::cout << "  warning: " << w << '\n';
        json entry{{"path", e.input},
                   {"status", e.status},
                   {"outputs", e.outputs},
                   {"leaf_count", e.leaf_count}};
        if (e.threshold)
            entry["threshold"] = *e.threshold;
        if (!e.error.empty())
            entry["error"] = e.error;
        j["inputs"].push_back(std::move(entry));
    }
    write_report(args.report_path, j);
    return report.all_ok() ? kExitOk : kExitFileFailures;
}

// --------------------------------------------------------------- augmentation

struct AugmentationArgs {
    std::string folder;
    int num = 3;
    bool flip = false;
    std::vector<double> rotate{-10.0, 10.0};
    std::vector<double> shear{-16.0, 16.0};
    unsigned long long seed = 0;
    bool seed_given = false;
    std::string interp = "bilinear";
    std::string outdir;
    unsigned jobs = 0;
    std::string report_path;
};

int run_augmentation(const AugmentationArgs& args) {
    if (args.rotate[0] > args.rotate[1] || args.shear[0] > args.shear[1]) {
        std::cerr << "error: range low bound exceeds high bound\n";
        return kExitUsage;
    }
    mvos_hsi::AugmentationSpec spec;
    spec.num_aug = static_cast<std::size_t>(args.num);
    spec.flip = args.flip;
    spec.rotate_lo_deg = args.rotate[0];
    spec.rotate_hi_deg = args.rotate[1];
    spec.shear_lo_deg = args.shear[0];
    spec.shear_hi_deg = args.shear[1];
    if (args.seed_given)
        spec.seed = args.seed;
    spec.interpolation = args.interp == "nearest" ? mvos_hsi::Interpolation::Nearest
                                                  : mvos_hsi::Interpolation::Bilinear;

    mvos_hsi::AugmentReport report;
    try {
        report = mvos_hsi::augment_folder(
            args.folder, spec, args.outdir.empty() ? fs::path{} : fs::path(args.outdir),
            args.jobs);
    } catch (const std::exception& ex) {
        std::cerr << "error: augmentation: " << ex.what() << '\n';
        return kExitFileFailures;
    }

    json j{{"stage", "augmentation"}, {"seed", report.seed_used}, {"inputs", json::array()}};
    for (const auto& e : report.entries) {
        std::cout << '[' << e.status << "] " << e.input;
        if (e.status == "ok")
            std::cout << ": " << e.draws.size() << " variant(s)";
        if (!e.error.empty())
            std::cout << ": " << e.error;
        std::cout << '\n';
        json draws = json::array();
        for (const auto& d : e.draws)
            draws.push_back({{"flip_horizontal", d.flip_horizontal},
                             {"flip_vertical", d.flip_vertical},
                             {"rotation_deg", d.rotation_deg},
                             {"shear_deg", d.shear_deg}});
        json entry{{"path", e.input},
                   {"status", e.status},
                   {"outputs", e.outputs},
                   {"draws", std::move(draws)}};
        if (!e.error.empty())
            entry["error"] = e.error;
        j["inputs"].push_back(std::move(entry));
    }
    write_report(args.report_path, j);
    return report.all_ok() ? kExitOk : kExitFileFailures;
}

// ------------------------------------------------------------------- plotting

struct PlotArgs {
    std::string clipped_dir;
    std::string stem;
    std::vector<int> leaves;
    std::vector<std::string> items;
    std::string wavelengths_mat;
    std::string title;
    std::string out;
    bool show = false;
    std::string report_path;
};

int finish_plot(const mvos_hsi::PlotResult& result, const std::string& report_path) {
    for (const std::string& w : result.warnings)
        std::cout << "warning: " << w << '\n';
    std::cout << "chart: " << result.chart.string() << '\n';
    std::cout << "csv:   " << result.csv.string() << '\n';
    json j{{"stage", "plotting"},
           {"inputs", json::array({json{{"path", result.chart.string()},
                                        {"status", "ok"},
                                        {"outputs", json::array({result.chart.string(),
                                                                 result.csv.string()})}}})}};
    write_report(report_path, j);
    return kExitOk;
}

int run_plot_leaf(const PlotArgs& args) {
    mvos_hsi::PlotOptions options;
    options.title = args.title;
    options.show = args.show;
    if (!args.out.empty())
        options.output = args.out;
    try {
        if (!args.wavelengths_mat.empty())
            options.wavelengths = mvos_hsi::load_wavelengths(args.wavelengths_mat);
        auto result =
            mvos_hsi::plot_leaf_center(args.clipped_dir, args.stem, args.leaves, options);
        return finish_plot(result, args.report_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: plotting: " << ex.what() << '\n';
        return kExitFileFailures;
    }
}

int run_plot_multi(const PlotArgs& args) {
    std::vector<std::pair<std::string, int>> items;
    for (const std::string& item : args.items) {
        auto colon = item.rfind(':');
        int leaf = 0;
        bool ok = colon != std::string::npos && colon > 0 && colon + 1 < item.size();
        if (ok) {
            try {
                leaf = std::stoi(item.substr(colon + 1));
            } catch (...) {
                ok = false;
            }
        }
        if (!ok) {
            std::cerr << "error: --item expects STEM:LEAF, got '" << item << "'\n";
            return kExitUsage;
        }
        items.emplace_back(item.substr(0, colon), leaf);
    }

    mvos_hsi::PlotOptions options;
    options.title = args.title;
    options.show = args.show;
    if (!args.out.empty())
        options.output = args.out;
    try {
        if (!args.wavelengths_mat.empty())
            options.wavelengths = mvos_hsi::load_wavelengths(args.wavelengths_mat);
        auto result = mvos_hsi::plot_leaf_multi(args.clipped_dir, items, options);
        return finish_plot(result, args.report_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: plotting: " << ex.what() << '\n';
        return kExitFileFailures;
    }
}

struct PixelArgs {
    std::string cube;
    int row = 0;
    int col = 0;
    std::string wavelengths_mat;
    std::string title;
    std::string out;
};

int run_plot_pixel(const PixelArgs& args) {
    mvos_hsi::PlotOptions options;
    options.title = args.title;
    if (!args.out.empty())
        options.output = args.out;
    try {
        if (!args.wavelengths_mat.empty())
            options.wavelengths = mvos_hsi::load_wavelengths(args.wavelengths_mat);
        auto result = mvos_hsi::plot_pixel(args.cube, static_cast<std::size_t>(args.row),
                                           static_cast<std::size_t>(args.col), options);
        return finish_plot(result, {});
    } catch (const std::exception& ex) {
        std::cerr << "error: plotting: " << ex.what() << '\n';
        return kExitFileFailures;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leaf-level hyperspectral preprocessing: calibration, clipping, "
                 "augmentation, and spectral plotting over ENVI folders"};
    app.require_subcommand(1);

    // --- calibration folder ---
    CalibrationArgs cal;
    auto* calibration = app.add_subcommand("calibration", "Dark-correct and bin raw cubes");
    calibration->require_subcommand(1);
    auto* cal_folder =
        calibration->add_subcommand("folder", "Calibrate every *_R/*_F ENVI pair in a folder");
    cal_folder->add_option("--folder", cal.folder, "Folder of raw ENVI pairs")->required();
    cal_folder->add_option("--dark", cal.dark, "Dark reference base path, e.g. <folder>/Dark")
        ->required();
    cal_folder->add_option("--k", cal.spectral_k, "Spectral bin factor")
        ->default_val(3)
        ->check(CLI::PositiveNumber);
    cal_folder->add_option("--spatial", cal.spatial_k, "Spatial bin factor")
        ->default_val(3)
        ->check(CLI::PositiveNumber);
    cal_folder->add_option("--outdir", cal.outdir, "Output folder (default: input folder)");
    cal_folder->add_option("--jobs", cal.jobs, "Parallel workers (default: logical cores)");
    cal_folder->add_option("--report", cal.report_path, "Write a JSON report to this path");

    // --- clipping folder ---
    ClippingArgs clip;
    auto* clipping = app.add_subcommand("clipping", "Detect and clip leaves to per-leaf cubes");
    clipping->require_subcommand(1);
    auto* clip_folder_cmd = clipping->add_subcommand("folder", "Clip every ENVI cube in a folder");
    clip_folder_cmd->add_option("--folder", clip.folder, "Folder of ENVI cubes")->required();
    clip_folder_cmd->add_option("--index", clip.index, "Vegetation index: ndvi, gci, or cire")
        ->required();
    auto* wl_mat = clip_folder_cmd->add_option("--wavelengths-mat", clip.wavelengths_mat,
                                               "Wavelength vector (.mat)");
    auto* wl_csv = clip_folder_cmd->add_option("--wavelengths-csv", clip.wavelengths_csv,
                                               "Wavelength vector (.csv)");
    wl_mat->excludes(wl_csv);
    clip_folder_cmd
        ->add_option("--bands", clip.bands,
                     "Explicit band indices red,green,red-edge,nir (bypasses wavelengths)")
        ->delimiter(',')
        ->expected(4);
    clip_folder_cmd->add_option("--threshold-mode", clip.threshold_mode, "auto (Otsu) or manual")
        ->default_val("auto")
        ->check(CLI::IsMember({"auto", "manual"}));
    auto* threshold_opt =
        clip_folder_cmd->add_option("--threshold", clip.threshold, "Manual threshold value");
    clip_folder_cmd->add_option("--min-area", clip.min_area, "Minimum region area in pixels")
        ->default_val(100)
        ->check(CLI::NonNegativeNumber);
    clip_folder_cmd->add_option("--crop-mode", clip.crop_mode, "square or tight")
        ->default_val("square")
        ->check(CLI::IsMember({"square", "tight"}));
    clip_folder_cmd->add_option("--crop-size", clip.crop_size, "Square crop side in pixels")
        ->default_val(30)
        ->check(CLI::PositiveNumber);
    clip_folder_cmd->add_option("--morphology", clip.morphology,
                                "Mask cleanup: open-close or none")
        ->default_val("open-close")
        ->check(CLI::IsMember({"open-close", "none"}));
    clip_folder_cmd
        ->add_option("--connectivity", clip.connectivity, "Component connectivity: 4 or 8")
        ->default_val(8)
        ->check(CLI::IsMember({4, 8}));
    clip_folder_cmd->add_option("--outdir", clip.outdir,
                                "Output folder (default: <folder>/clipped_hypercubes)");
    clip_folder_cmd->add_option("--jobs", clip.jobs, "Parallel workers (default: logical cores)");
    clip_folder_cmd->add_option("--report", clip.report_path, "Write a JSON report to this path");

    // --- augmentation folder ---
    AugmentationArgs aug;
    auto* augmentation =
        app.add_subcommand("augmentation", "Generate randomized geometric variants");
    augmentation->require_subcommand(1);
    auto* aug_folder =
        augmentation->add_subcommand("folder", "Augment every ENVI cube in a folder");
    aug_folder->add_option("--folder", aug.folder, "Folder of clipped leaf cubes")->required();
    aug_folder->add_option("--num", aug.num, "Variants per input")
        ->default_val(3)
        ->check(CLI::PositiveNumber);
    aug_folder->add_flag("--flip", aug.flip, "Enable random horizontal/vertical flips");
    aug_folder->add_option("--rotate", aug.rotate, "Rotation range in degrees: LO HI")
        ->expected(2);
    aug_folder->add_option("--shear", aug.shear, "Shear range in degrees: LO HI")->expected(2);
    auto* seed_opt = aug_folder->add_option("--seed", aug.seed, "RNG seed for reproducible runs");
    aug_folder->add_option("--interp", aug.interp, "Resampling: bilinear or nearest")
        ->default_val("bilinear")
        ->check(CLI::IsMember({"bilinear", "nearest"}));
    aug_folder->add_option("--outdir", aug.outdir, "Output folder (default: input folder)");
    aug_folder->add_option("--jobs", aug.jobs, "Parallel workers (default: logical cores)");
    aug_folder->add_option("--report", aug.report_path, "Write a JSON report to this path");

    // --- plotting ---
    PlotArgs plot;
    auto* plotting = app.add_subcommand("plotting", "Spectral diagnostics and charts");
    plotting->require_subcommand(1);
    auto* plot_leaf = plotting->add_subcommand("leaf", "Center-pixel spectra of clipped leaves");
    plot_leaf->add_option("--clipped-dir", plot.clipped_dir, "Folder of clipped leaf cubes")
        ->required();
    plot_leaf->add_option("--stem", plot.stem, "Sample stem, e.g. H_P1_V4_B")->required();
    plot_leaf->add_option("--leaf", plot.leaves, "Leaf number(s), 1-based")
        ->required()
        ->expected(-1);
    plot_leaf->add_option("--wavelengths-mat", plot.wavelengths_mat, "Wavelength vector (.mat)");
    plot_leaf->add_option("--title", plot.title, "Chart title");
    plot_leaf->add_option("--out", plot.out, "Chart output path (.svg)");
    plot_leaf->add_flag("--show", plot.show, "No-op in headless runs");
    plot_leaf->add_option("--report", plot.report_path, "Write a JSON report to this path");

    PlotArgs multi;
    auto* plot_multi = plotting->add_subcommand("leaf-multi", "Compare spectra across samples");
    plot_multi->add_option("--clipped-dir", multi.clipped_dir, "Folder of clipped leaf cubes")
        ->required();
    plot_multi->add_option("--item", multi.items, "STEM:LEAF (repeatable)")->required();
    plot_multi->add_option("--wavelengths-mat", multi.wavelengths_mat,
                           "Wavelength vector (.mat)");
    plot_multi->add_option("--title", multi.title, "Chart title");
    plot_multi->add_option("--out", multi.out, "Chart output path (.svg)");
    plot_multi->add_flag("--show", multi.show, "No-op in headless runs");
    plot_multi->add_option("--report", multi.report_path, "Write a JSON report to this path");

    PixelArgs pixel;
    auto* plot_pixel_cmd = plotting->add_subcommand("pixel", "Spectrum of a single pixel");
    plot_pixel_cmd->add_option("--cube", pixel.cube, "ENVI header (or base) path")->required();
    plot_pixel_cmd->add_option("--row", pixel.row, "Pixel row (line)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    plot_pixel_cmd->add_option("--col", pixel.col, "Pixel column (sample)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    plot_pixel_cmd->add_option("--wavelengths-mat", pixel.wavelengths_mat,
                               "Wavelength vector (.mat)");
    plot_pixel_cmd->add_option("--title", pixel.title, "Chart title");
    plot_pixel_cmd->add_option("--out", pixel.out, "Chart output path (.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (clip_folder_cmd->parsed()) {
        if (clip.threshold_mode == "manual" && threshold_opt->count() == 0) {
            std::cerr << "error: --threshold-mode manual requires --threshold\n";
            return kExitUsage;
        }
        return run_clipping(clip);
    }
    if (cal_folder->parsed())
        return run_calibration(cal);
    if (aug_folder->parsed()) {
        aug.seed_given = seed_opt->count() > 0;
        return run_augmentation(aug);
    }
    if (plot_leaf->parsed())
        return run_plot_leaf(plot);
    if (plot_multi->parsed())
        return run_plot_multi(multi);
    if (plot_pixel_cmd->parsed())
        return run_plot_pixel(pixel);
    return kExitUsage;
}
