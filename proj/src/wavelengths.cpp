#include "mvos_hsi/wavelengths.hpp"

#include <cmath>
#include <fstream>

#include "mvos_hsi/mat5.hpp"
#include "internal/text_util.hpp"

namespace mvos_hsi {

namespace {

std::vector<double> load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open wavelength CSV '" + path.string() + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty())
            continue;
        auto v = detail::parse_double(t);
        if (!v) {
            if (first_content_line) {
                first_content_line = false; // header row
                continue;
            }
            throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                             ": expected a number, got '" + std::string(t) + "'");
        }
        first_content_line = false;
        values.push_back(*v);
    }
    return values;
}

std::vector<double> load_mat(const std::filesystem::path& path) {
    MatArray arr;
    try {
        arr = read_mat_array(path, "wavelength");
    } catch (const VariableNotFound&) {
        auto names = mat_variable_names(path);
        if (names.size() != 1)
            throw;
        arr = read_mat_array(path, names.front());
    }
    return arr.values;
}

} // namespace

std::vector<double> load_wavelengths(const std::filesystem::path& path) {
    std::string ext = detail::to_lower(path.extension().string());
    std::vector<double> values;
    if (ext == ".mat")
        values = load_mat(path);
    else if (ext == ".csv")
        values = load_csv(path);
    else
        throw ParseError("wavelength file '" + path.string() +
                         "' must have a .mat or .csv extension");

    if (values.empty())
        throw ParseError("wavelength file '" + path.string() + "' holds no values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw NotMonotonic("wavelength entry " + std::to_string(i) + " is not finite");
        if (i > 0 && values[i] <= values[i - 1])
            throw NotMonotonic("wavelengths must be strictly increasing (entry " +
                               std::to_string(i) + ": " + detail::format_double(values[i]) +
                               " <= " + detail::format_double(values[i - 1]) + ")");
    }
    return values;
}

} // namespace mvos_hsi
