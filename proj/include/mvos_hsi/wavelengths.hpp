#ifndef MVOS_HSI_WAVELENGTHS_HPP
#define MVOS_HSI_WAVELENGTHS_HPP

#include <filesystem>
#include <vector>

#include "mvos_hsi/errors.hpp"

namespace mvos_hsi {

/// Load a wavelength vector (nm) from a `.mat` file (variable `wavelength`,
/// falling back to the sole variable when the file holds exactly one) or a
/// one-column CSV (a non-numeric first line is treated as a header).
/// The result must be finite and strictly increasing.
std::vector<double> load_wavelengths(const std::filesystem::path& path);

} // namespace mvos_hsi

#endif
