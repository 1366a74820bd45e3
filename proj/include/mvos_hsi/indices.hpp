#ifndef MVOS_HSI_INDICES_HPP
#define MVOS_HSI_INDICES_HPP

#include <optional>
#include <string>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi {

enum class IndexKind { NDVI, GCI, CIRedEdge };

const char* index_kind_name(IndexKind kind);
std::optional<IndexKind> index_kind_from_token(const std::string& token);

/// How to resolve the spectral bands an index needs. Wavelength mode picks
/// the nearest band for each target; index mode uses explicit band numbers.
struct BandSelection {
    enum class Mode { ByWavelength, ByIndex };
    Mode mode = Mode::ByWavelength;

    // Targets for wavelength mode (nm). Defaults follow common usage in the
    // vegetation-index literature and are overridable.
    double red_nm = 670.0;
    double green_nm = 550.0;
    double red_edge_nm = 717.0;
    double nir_nm = 800.0;

    // Explicit bands for index mode.
    std::size_t red_band = 0;
    std::size_t green_band = 0;
    std::size_t red_edge_band = 0;
    std::size_t nir_band = 0;

    static BandSelection by_wavelength() { return {}; }
    static BandSelection by_index(std::size_t red, std::size_t green, std::size_t red_edge,
                                  std::size_t nir);
};

/// Band indices actually used for one index computation.
struct ResolvedBands {
    std::size_t numerator_band = 0; // NIR
    std::size_t denominator_band = 0; // red / green / red-edge depending on kind
    std::optional<double> numerator_nm;
    std::optional<double> denominator_nm;
};

/// Per-pixel vegetation-index map plus validity mask. Pixels whose
/// denominator fell inside the guard carry value 0 and valid=false.
struct IndexImage {
    std::size_t lines = 0;
    std::size_t samples = 0;
    std::vector<double> values;  // row-major, lines x samples
    std::vector<unsigned char> valid;
    IndexKind kind = IndexKind::NDVI;
    ResolvedBands bands_used;

    double value_at(std::size_t l, std::size_t s) const { return values[l * samples + s]; }
    bool valid_at(std::size_t l, std::size_t s) const { return valid[l * samples + s] != 0; }
};

/// Compute NDVI = (nir-red)/(nir+red), GCI = nir/green - 1, or
/// CI-RedEdge = nir/red_edge - 1 over every pixel. Denominators with
/// |d| <= guard_epsilon yield value 0 and valid=false.
IndexImage compute_index(const Hypercube& cube, IndexKind kind,
                         const BandSelection& sel = {}, double guard_epsilon = 1e-9);

} // namespace mvos_hsi

#endif
