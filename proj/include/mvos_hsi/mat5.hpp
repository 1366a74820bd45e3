#ifndef MVOS_HSI_MAT5_HPP
#define MVOS_HSI_MAT5_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mvos_hsi/errors.hpp"

namespace mvos_hsi {

/// A real numeric array destined for (or loaded from) a Level-5 MAT-file.
/// Values are stored column-major: element (i,j,k) sits at i + j*d0 + k*d0*d1.
/// A one-dimensional dims vector [n] is canonicalized to [n,1] (MAT arrays
/// always carry at least two dimensions).
struct MatArray {
    std::string name;
    std::vector<std::size_t> dims;
    std::vector<double> values;

    MatArray() = default;
    MatArray(std::string name, std::vector<std::size_t> dims, std::vector<double> values);
};

/// True when `name` is a valid MAT variable name (letter first, then
/// letters/digits/underscores).
bool is_valid_mat_name(const std::string& name);

/// Names of the top-level variables in the file, in file order.
std::vector<std::string> mat_variable_names(const std::filesystem::path& path);

/// Read the named variable. Double, single, and integer classes are widened
/// to double; zlib-compressed elements are inflated transparently.
MatArray read_mat_array(const std::filesystem::path& path, const std::string& name);

/// Write an uncompressed Level-5 file holding the given arrays (all payloads
/// as miDOUBLE). Names must be unique and valid.
void write_mat(const std::filesystem::path& path, const std::vector<MatArray>& arrays);

} // namespace mvos_hsi

#endif
