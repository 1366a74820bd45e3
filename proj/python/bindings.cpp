#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mvos_hsi/augmentation.hpp"
#include "mvos_hsi/calibration.hpp"
#include "mvos_hsi/envi.hpp"
#include "mvos_hsi/indices.hpp"
#include "mvos_hsi/mat5.hpp"
#include "mvos_hsi/segmentation.hpp"
#include "mvos_hsi/spectra.hpp"
#include "mvos_hsi/wavelengths.hpp"

namespace py = pybind11;
using namespace mvos_hsi;

namespace {

py::array_t<double> cube_to_array(const Hypercube& cube) {
    py::array_t<double> out({cube.lines(), cube.samples(), cube.bands()});
    auto view = out.mutable_unchecked<3>();
    for (std::size_t l = 0; l < cube.lines(); ++l)
        for (std::size_t s = 0; s < cube.samples(); ++s)
            for (std::size_t b = 0; b < cube.bands(); ++b)
                view(l, s, b) = cube.at(l, s, b);
    return out;
}

Hypercube array_to_cube(const py::array& array,
                        const std::optional<std::vector<double>>& wavelengths) {
    auto arr = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(array);
    if (!arr || arr.ndim() != 3)
        throw Error("expected a 3-D array shaped (lines, samples, bands)");
    const auto view = arr.unchecked<3>();
    Hypercube cube(static_cast<std::size_t>(arr.shape(0)),
                   static_cast<std::size_t>(arr.shape(1)),
                   static_cast<std::size_t>(arr.shape(2)));
    for (py::ssize_t l = 0; l < arr.shape(0); ++l)
        for (py::ssize_t s = 0; s < arr.shape(1); ++s)
            for (py::ssize_t b = 0; b < arr.shape(2); ++b)
                cube.at(static_cast<std::size_t>(l), static_cast<std::size_t>(s),
                        static_cast<std::size_t>(b)) = view(l, s, b);
    if (wavelengths)
        cube.set_wavelengths(wavelengths);
    return cube;
}

Interleave interleave_arg(const std::string& token) {
    auto il = interleave_from_token(token);
    if (!il)
        throw Error("interleave must be bsq, bil, or bip, got '" + token + "'");
    return *il;
}

EnviDataType data_type_arg(const std::string& name) {
    if (name == "uint8") return EnviDataType::UInt8;
    if (name == "int16") return EnviDataType::Int16;
    if (name == "int32") return EnviDataType::Int32;
    if (name == "float32") return EnviDataType::Float32;
    if (name == "float64") return EnviDataType::Float64;
    if (name == "uint16") return EnviDataType::UInt16;
    if (name == "uint32") return EnviDataType::UInt32;
    throw Error("unsupported data type '" + name + "'");
}

IndexKind index_arg(const std::string& token) {
    auto kind = index_kind_from_token(token);
    if (!kind)
        throw Error("index must be ndvi, gci, or cire, got '" + token + "'");
    return *kind;
}

std::optional<std::vector<double>> optional_wavelengths(const py::object& wavelengths_mat) {
    if (wavelengths_mat.is_none())
        return std::nullopt;
    return load_wavelengths(py::cast<std::filesystem::path>(wavelengths_mat));
}

py::dict calibration_report_to_dict(const CalibrationReport& report) {
    py::list inputs;
    for (const auto& e : report.entries) {
        py::dict d;
        d["stem"] = e.stem;
        d["channel"] = channel_suffix(e.channel) + 1; // "R" / "F"
        d["path"] = e.input;
        d["status"] = e.status;
        d["output"] = e.output;
        if (!e.error.empty())
            d["error"] = e.error;
        inputs.append(std::move(d));
    }
    py::dict out;
    out["stage"] = "calibration";
    out["inputs"] = std::move(inputs);
    out["ok"] = report.all_ok();
    return out;
}

py::dict clip_report_to_dict(const ClipReport& report) {
    py::list inputs;
    for (const auto& e : report.entries) {
        py::dict d;
        d["path"] = e.input;
        d["status"] = e.status;
        d["leaf_count"] = e.leaf_count;
        d["outputs"] = e.outputs;
        if (e.threshold)
            d["threshold"] = *e.threshold;
        if (!e.error.empty())
            d["error"] = e.error;
        if (!e.warnings.empty())
            d["warnings"] = e.warnings;
        inputs.append(std::move(d));
    }
    py::dict out;
    out["stage"] = "clipping";
    out["output_dir"] = report.output_dir.string();
    out["inputs"] = std::move(inputs);
    out["ok"] = report.all_ok();
    return out;
}

py::dict augment_report_to_dict(const AugmentReport& report) {
    py::list inputs;
    for (const auto& e : report.entries) {
        py::dict d;
        d["path"] = e.input;
        d["status"] = e.status;
        d["outputs"] = e.outputs;
        py::list draws;
        for (const auto& dr : e.draws) {
            py::dict rec;
            rec["flip_horizontal"] = dr.flip_horizontal;
            rec["flip_vertical"] = dr.flip_vertical;
            rec["rotation_deg"] = dr.rotation_deg;
            rec["shear_deg"] = dr.shear_deg;
            draws.append(std::move(rec));
        }
        d["draws"] = std::move(draws);
        if (!e.error.empty())
            d["error"] = e.error;
        inputs.append(std::move(d));
    }
    py::dict out;
    out["stage"] = "augmentation";
    out["seed"] = report.seed_used;
    out["inputs"] = std::move(inputs);
    out["ok"] = report.all_ok();
    return out;
}

py::dict plot_result_to_dict(const PlotResult& result) {
    py::dict out;
    out["chart"] = result.chart.string();
    out["csv"] = result.csv.string();
    out["warnings"] = result.warnings;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Leaf-level hyperspectral preprocessing: ENVI I/O, calibration, "
              "leaf clipping, augmentation, and spectral plotting";

    // ---- folder pipelines -------------------------------------------------
    m.def(
        "calibrate_folder",
        [](const std::filesystem::path& folder, const std::filesystem::path& dark_base,
           std::size_t spectral_bin, std::size_t spatial_bin, const py::object& output_dir,
           unsigned jobs) {
            CalibrationJob job;
            job.folder = folder;
            job.dark_base = dark_base;
            job.params = BinningParams(spectral_bin, spatial_bin);
            if (!output_dir.is_none())
                job.output_dir = py::cast<std::filesystem::path>(output_dir);
            job.jobs = jobs;
            return calibration_report_to_dict(calibrate_folder(job));
        },
        py::arg("folder"), py::arg("dark_base"), py::arg("spectral_bin") = 3,
        py::arg("spatial_bin") = 3, py::arg("output_dir") = py::none(), py::arg("jobs") = 0,
        "Dark-correct and bin every *_R/*_F ENVI pair in the folder, writing "
        "<stem>_R.mat / <stem>_F.mat outputs.");

    m.def(
        "clip_folder",
        [](const std::filesystem::path& folder, const std::string& index,
           const py::object& wavelengths_mat, const py::object& wavelengths_csv,
           const py::object& bands, const std::string& threshold_mode,
           const py::object& threshold, std::size_t min_area, const std::string& crop_mode,
           std::size_t crop_size, const std::string& morphology, int connectivity,
           const py::object& output_dir, unsigned jobs) {
            ClipJob job;
            job.folder = folder;
            job.index = index_arg(index);
            if (!bands.is_none()) {
                auto b = py::cast<std::vector<std::size_t>>(bands);
                if (b.size() != 4)
                    throw Error("bands must be (red, green, red_edge, nir)");
                job.selection = BandSelection::by_index(b[0], b[1], b[2], b[3]);
            }
            if (!wavelengths_mat.is_none())
                job.external_wavelengths = optional_wavelengths(wavelengths_mat);
            else if (!wavelengths_csv.is_none())
                job.external_wavelengths = optional_wavelengths(wavelengths_csv);
            if (threshold_mode == "manual") {
                if (threshold.is_none())
                    throw Error("threshold_mode='manual' requires a threshold value");
                job.params.threshold_mode = ThresholdMode::Manual;
                job.params.manual_threshold = py::cast<double>(threshold);
            } else if (threshold_mode != "auto") {
                throw Error("threshold_mode must be 'auto' or 'manual'");
            }
            job.params.min_area = min_area;
            job.params.crop_mode =
                crop_mode == "tight" ? CropMode::Tight : CropMode::Square;
            job.params.crop_size = crop_size;
            job.params.morphology =
                morphology == "none" ? MorphologyOp::None : MorphologyOp::OpenClose;
            job.params.connectivity =
                connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
            if (!output_dir.is_none())
                job.output_dir = py::cast<std::filesystem::path>(output_dir);
            job.jobs = jobs;
            return clip_report_to_dict(clip_folder(job));
        },
        py::arg("folder"), py::arg("index") = "ndvi",
        py::arg("wavelengths_mat") = py::none(), py::arg("wavelengths_csv") = py::none(),
        py::arg("bands") = py::none(), py::arg("threshold_mode") = "auto",
        py::arg("threshold") = py::none(), py::arg("min_area") = 100,
        py::arg("crop_mode") = "square", py::arg("crop_size") = 30,
        py::arg("morphology") = "open-close", py::arg("connectivity") = 8,
        py::arg("output_dir") = py::none(), py::arg("jobs") = 0,
        "Detect leaves by vegetation index and write per-leaf ENVI pairs into "
        "<folder>/clipped_hypercubes (or output_dir).");

    m.def(
        "augment_folder",
        [](const std::filesystem::path& folder, std::size_t num_aug, bool flip,
           std::pair<double, double> rotate, std::pair<double, double> shear,
           const py::object& seed, const std::string& interpolation, double fill_value,
           const py::object& output_dir, unsigned jobs) {
            AugmentationSpec spec;
            spec.num_aug = num_aug;
            spec.flip = flip;
            spec.rotate_lo_deg = rotate.first;
            spec.rotate_hi_deg = rotate.second;
            spec.shear_lo_deg = shear.first;
            spec.shear_hi_deg = shear.second;
            if (!seed.is_none())
                spec.seed = py::cast<std::uint64_t>(seed);
            spec.interpolation = interpolation == "nearest" ? Interpolation::Nearest
                                                            : Interpolation::Bilinear;
            spec.fill_value = fill_value;
            std::filesystem::path outdir;
            if (!output_dir.is_none())
                outdir = py::cast<std::filesystem::path>(output_dir);
            return augment_report_to_dict(augment_folder(folder, spec, outdir, jobs));
        },
        py::arg("folder"), py::arg("num_aug") = 3, py::arg("flip") = false,
        py::arg("rotate") = std::pair<double, double>{-10.0, 10.0},
        py::arg("shear") = std::pair<double, double>{-16.0, 16.0},
        py::arg("seed") = py::none(), py::arg("interpolation") = "bilinear",
        py::arg("fill_value") = 0.0, py::arg("output_dir") = py::none(), py::arg("jobs") = 0,
        "Write num_aug randomized geometric variants of every cube in the "
        "folder as <stem>_aug<k> ENVI pairs.");

    // ---- plotting ----------------------------------------------------------
    m.def(
        "plot_leaf_center",
        [](const std::filesystem::path& clipped_dir, const std::string& stem,
           const std::vector<int>& leaves, const py::object& wavelengths_mat,
           const std::string& title, const py::object& output, bool show) {
            PlotOptions options;
            options.wavelengths = optional_wavelengths(wavelengths_mat);
            options.title = title;
            options.show = show;
            if (!output.is_none())
                options.output = py::cast<std::filesystem::path>(output);
            return plot_result_to_dict(plot_leaf_center(clipped_dir, stem, leaves, options));
        },
        py::arg("clipped_dir"), py::arg("stem"), py::arg("leaves"),
        py::arg("wavelengths_mat") = py::none(), py::arg("title") = "",
        py::arg("output") = py::none(), py::arg("show") = false,
        "Chart + CSV of center-pixel spectra for <stem>_leaf_<n> cubes.");

    m.def(
        "plot_leaf_multi",
        [](const std::filesystem::path& clipped_dir,
           const std::vector<std::pair<std::string, int>>& items,
           const py::object& wavelengths_mat, const std::string& title,
           const py::object& output) {
            PlotOptions options;
            options.wavelengths = optional_wavelengths(wavelengths_mat);
            options.title = title;
            if (!output.is_none())
                options.output = py::cast<std::filesystem::path>(output);
            return plot_result_to_dict(plot_leaf_multi(clipped_dir, items, options));
        },
        py::arg("clipped_dir"), py::arg("items"), py::arg("wavelengths_mat") = py::none(),
        py::arg("title") = "", py::arg("output") = py::none(),
        "Comparison chart across (stem, leaf) items.");

    m.def(
        "plot_pixel",
        [](const std::filesystem::path& cube_path, std::size_t row, std::size_t col,
           const py::object& wavelengths_mat, const std::string& title,
           const py::object& output) {
            PlotOptions options;
            options.wavelengths = optional_wavelengths(wavelengths_mat);
            options.title = title;
            if (!output.is_none())
                options.output = py::cast<std::filesystem::path>(output);
            return plot_result_to_dict(plot_pixel(cube_path, row, col, options));
        },
        py::arg("cube"), py::arg("row"), py::arg("col"),
        py::arg("wavelengths_mat") = py::none(), py::arg("title") = "",
        py::arg("output") = py::none(), "Chart + CSV for one pixel's spectrum.");

    // ---- cube and file primitives ------------------------------------------
    m.def(
        "read_cube",
        [](const std::filesystem::path& path) {
            Hypercube cube = read_cube(path);
            py::object wl = py::none();
            if (cube.wavelengths())
                wl = py::cast(*cube.wavelengths());
            return py::make_tuple(cube_to_array(cube), wl);
        },
        py::arg("path"),
        "Read an ENVI .hdr/.img pair; returns (array[lines, samples, bands], "
        "wavelengths or None).");

    m.def(
        "write_cube",
        [](const py::array& array, const std::filesystem::path& base_path,
           const std::string& interleave, const std::string& data_type,
           const py::object& wavelengths, const std::string& byte_order, bool allow_clip) {
            std::optional<std::vector<double>> wl;
            if (!wavelengths.is_none())
                wl = py::cast<std::vector<double>>(wavelengths);
            Hypercube cube = array_to_cube(array, wl);
            EnviWriteOptions options;
            options.byte_order = byte_order == "big" ? ByteOrder::Big : ByteOrder::Little;
            options.allow_clip = allow_clip;
            EnviPaths paths = write_cube(cube, base_path, interleave_arg(interleave),
                                         data_type_arg(data_type), options);
            return py::make_tuple(paths.hdr.string(), paths.img.string());
        },
        py::arg("array"), py::arg("base_path"), py::arg("interleave") = "bsq",
        py::arg("data_type") = "float64", py::arg("wavelengths") = py::none(),
        py::arg("byte_order") = "little", py::arg("allow_clip") = false,
        "Write an (lines, samples, bands) array as an ENVI .hdr/.img pair.");

    m.def(
        "compute_index",
        [](const py::array& array, const std::string& index, const py::object& wavelengths,
           const py::object& bands) {
            std::optional<std::vector<double>> wl;
            if (!wavelengths.is_none())
                wl = py::cast<std::vector<double>>(wavelengths);
            Hypercube cube = array_to_cube(array, wl);
            BandSelection sel;
            if (!bands.is_none()) {
                auto b = py::cast<std::vector<std::size_t>>(bands);
                if (b.size() != 4)
                    throw Error("bands must be (red, green, red_edge, nir)");
                sel = BandSelection::by_index(b[0], b[1], b[2], b[3]);
            }
            IndexImage img = compute_index(cube, index_arg(index), sel);
            py::array_t<double> values({img.lines, img.samples});
            py::array_t<bool> valid({img.lines, img.samples});
            auto v = values.mutable_unchecked<2>();
            auto ok = valid.mutable_unchecked<2>();
            for (std::size_t l = 0; l < img.lines; ++l)
                for (std::size_t s = 0; s < img.samples; ++s) {
                    v(l, s) = img.value_at(l, s);
                    ok(l, s) = img.valid_at(l, s);
                }
            return py::make_tuple(values, valid);
        },
        py::arg("array"), py::arg("index") = "ndvi", py::arg("wavelengths") = py::none(),
        py::arg("bands") = py::none(),
        "Per-pixel vegetation index; returns (values, valid) maps.");

    m.def(
        "subtract_dark",
        [](const py::array& raw, const py::array& dark) {
            return cube_to_array(
                subtract_dark(array_to_cube(raw, {}), array_to_cube(dark, {})));
        },
        py::arg("raw"), py::arg("dark"),
        "Dark-corrected cube max(raw - dark, 0); shapes must match.");

    m.def(
        "reflectance",
        [](const py::array& raw, const py::array& dark, const py::array& white,
           double epsilon) {
            auto result = reflectance(array_to_cube(raw, {}), array_to_cube(dark, {}),
                                      array_to_cube(white, {}), epsilon);
            return py::make_tuple(cube_to_array(result.cube), result.invalid_count);
        },
        py::arg("raw"), py::arg("dark"), py::arg("white"), py::arg("epsilon") = 1e-9,
        "Full reflectance (raw-dark)/(white-dark); returns (cube, invalid_count).");

    m.def(
        "spectral_bin",
        [](const py::array& array, std::size_t k) {
            return cube_to_array(spectral_bin(array_to_cube(array, {}), k));
        },
        py::arg("array"), py::arg("k"), "Average every k adjacent bands.");

    m.def(
        "spatial_bin",
        [](const py::array& array, std::size_t k) {
            return cube_to_array(spatial_bin(array_to_cube(array, {}), k));
        },
        py::arg("array"), py::arg("k"), "Average k x k pixel blocks per band.");

    m.def("load_wavelengths", &load_wavelengths, py::arg("path"),
          "Load a wavelength vector from .mat or one-column .csv.");

    m.def(
        "read_mat",
        [](const std::filesystem::path& path, const std::string& name) {
            MatArray arr = read_mat_array(path, name);
            py::array_t<double> out(arr.dims);
            // MAT payloads are column-major; numpy default is row-major.
            std::vector<std::size_t> strides(arr.dims.size());
            std::size_t stride = sizeof(double);
            for (std::size_t d = 0; d < arr.dims.size(); ++d) {
                strides[d] = stride;
                stride *= arr.dims[d];
            }
            return py::array_t<double>(arr.dims, strides, arr.values.data());
        },
        py::arg("path"), py::arg("name"), "Read a numeric variable from a MAT-5 file.");

    m.def(
        "write_mat",
        [](const std::filesystem::path& path, const py::dict& arrays) {
            std::vector<MatArray> out;
            for (auto item : arrays) {
                auto name = py::cast<std::string>(item.first);
                auto arr = py::array_t<double, py::array::f_style | py::array::forcecast>::
                    ensure(py::cast<py::array>(item.second));
                std::vector<std::size_t> dims(arr.ndim());
                std::size_t n = 1;
                for (py::ssize_t d = 0; d < arr.ndim(); ++d) {
                    dims[static_cast<std::size_t>(d)] =
                        static_cast<std::size_t>(arr.shape(d));
                    n *= dims[static_cast<std::size_t>(d)];
                }
                std::vector<double> values(arr.data(), arr.data() + n);
                out.emplace_back(name, std::move(dims), std::move(values));
            }
            write_mat(path, out);
        },
        py::arg("path"), py::arg("arrays"),
        "Write named numeric arrays to an uncompressed MAT-5 file.");

    m.attr("__version__") = "0.2.1";
}
