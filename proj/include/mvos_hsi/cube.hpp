#ifndef MVOS_HSI_CUBE_HPP
#define MVOS_HSI_CUBE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mvos_hsi/errors.hpp"

namespace mvos_hsi {

/// 3D hyperspectral volume indexed (line, sample, band).
///
/// Values are stored band-sequentially (one full spatial plane per band)
/// regardless of the interleave of the file they came from. All values are
/// 64-bit reals; integer sources are widened losslessly on load.
class Hypercube {
public:
    Hypercube() = default;

    Hypercube(std::size_t lines, std::size_t samples, std::size_t bands,
              std::vector<double> data = {},
              std::optional<std::vector<double>> wavelengths = std::nullopt,
              std::string source_stem = {});

    std::size_t lines() const { return lines_; }
    std::size_t samples() const { return samples_; }
    std::size_t bands() const { return bands_; }
    std::size_t size() const { return data_.size(); }

    double at(std::size_t line, std::size_t sample, std::size_t band) const {
        return data_[band * lines_ * samples_ + line * samples_ + sample];
    }
    double& at(std::size_t line, std::size_t sample, std::size_t band) {
        return data_[band * lines_ * samples_ + line * samples_ + sample];
    }

    /// Band-sequential backing store: offset = b*lines*samples + l*samples + s.
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    const std::optional<std::vector<double>>& wavelengths() const { return wavelengths_; }
    void set_wavelengths(std::optional<std::vector<double>> w);

    /// File stem the cube was loaded from; used to name derived outputs.
    const std::string& source_stem() const { return source_stem_; }
    void set_source_stem(std::string stem) { source_stem_ = std::move(stem); }

    /// Per-pixel spectrum, length = bands.
    std::vector<double> spectrum(std::size_t line, std::size_t sample) const;

    /// Equality over dims, data, and wavelengths (source_stem excluded).
    bool operator==(const Hypercube& other) const;

private:
    std::size_t lines_ = 0, samples_ = 0, bands_ = 0;
    std::vector<double> data_;
    std::optional<std::vector<double>> wavelengths_;
    std::string source_stem_;
};

/// Binning factors; constructing with a zero factor throws InvalidBinFactor.
struct BinningParams {
    std::size_t spectral_k = 1;
    std::size_t spatial_k = 1;

    BinningParams() = default;
    BinningParams(std::size_t spectral, std::size_t spatial);
};

/// output = max(raw - dark, 0), elementwise. Shapes must match.
Hypercube subtract_dark(const Hypercube& raw, const Hypercube& dark);

struct ReflectanceResult {
    Hypercube cube;
    /// Pixels (per band element) where white - dark <= epsilon, forced to 0.
    std::size_t invalid_count = 0;
};

/// Full reflectance (raw - dark) / (white - dark) with a denominator guard.
ReflectanceResult reflectance(const Hypercube& raw, const Hypercube& dark,
                              const Hypercube& white, double epsilon = 1e-9);

/// Average every k adjacent bands; trailing bands that do not fill a whole
/// group are dropped. Wavelengths, when present, are binned the same way.
Hypercube spectral_bin(const Hypercube& cube, std::size_t k);

/// Average k x k pixel blocks per band; trailing rows/columns are dropped.
Hypercube spatial_bin(const Hypercube& cube, std::size_t k);

/// Index of the wavelength closest to target_nm; ties break to the lower index.
std::size_t band_at_wavelength(const std::vector<double>& wavelengths, double target_nm);

} // namespace mvos_hsi

#endif
