#include "mvos_hsi/cube.hpp"

#include <cmath>
#include <cstdlib>

namespace mvos_hsi {

Hypercube::Hypercube(std::size_t lines, std::size_t samples, std::size_t bands,
                     std::vector<double> data,
                     std::optional<std::vector<double>> wavelengths,
                     std::string source_stem)
    : lines_(lines), samples_(samples), bands_(bands),
      data_(std::move(data)), source_stem_(std::move(source_stem)) {
    if (lines_ == 0 || samples_ == 0 || bands_ == 0)
        throw Error("Hypercube dimensions must all be >= 1");
    if (data_.empty())
        data_.assign(lines_ * samples_ * bands_, 0.0);
    if (data_.size() != lines_ * samples_ * bands_)
        throw Error("Hypercube data length does not match dimensions");
    set_wavelengths(std::move(wavelengths));
}

void Hypercube::set_wavelengths(std::optional<std::vector<double>> w) {
    if (w) {
        if (w->size() != bands_)
            throw Error("wavelength vector length " + std::to_string(w->size()) +
                        " does not match band count " + std::to_string(bands_));
        for (double v : *w)
            if (!std::isfinite(v))
                throw Error("wavelength vector contains a non-finite value");
    }
    wavelengths_ = std::move(w);
}

std::vector<double> Hypercube::spectrum(std::size_t line, std::size_t sample) const {
    std::vector<double> s(bands_);
    for (std::size_t b = 0; b < bands_; ++b)
        s[b] = at(line, sample, b);
    return s;
}

bool Hypercube::operator==(const Hypercube& other) const {
    return lines_ == other.lines_ && samples_ == other.samples_ &&
           bands_ == other.bands_ && data_ == other.data_ &&
           wavelengths_ == other.wavelengths_;
}

BinningParams::BinningParams(std::size_t spectral, std::size_t spatial)
    : spectral_k(spectral), spatial_k(spatial) {
    if (spectral_k == 0)
        throw InvalidBinFactor("spectral bin factor must be >= 1, got 0");
    if (spatial_k == 0)
        throw InvalidBinFactor("spatial bin factor must be >= 1, got 0");
}

static void require_same_shape(const Hypercube& a, const Hypercube& b, const char* what) {
    if (a.lines() != b.lines() || a.samples() != b.samples() || a.bands() != b.bands())
        throw ShapeMismatch(std::string(what) + ": shapes differ (" +
                            std::to_string(a.lines()) + "x" + std::to_string(a.samples()) + "x" +
                            std::to_string(a.bands()) + " vs " +
                            std::to_string(b.lines()) + "x" + std::to_string(b.samples()) + "x" +
                            std::to_string(b.bands()) + ")");
}

Hypercube subtract_dark(const Hypercube& raw, const Hypercube& dark) {
    require_same_shape(raw, dark, "subtract_dark");
    std::vector<double> out(raw.size());
    const auto& r = raw.data();
    const auto& d = dark.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        double v = r[i] - d[i];
        out[i] = v > 0.0 ? v : 0.0; // negative radiance is sensor noise
    }
    return Hypercube(raw.lines(), raw.samples(), raw.bands(), std::move(out),
                     raw.wavelengths(), raw.source_stem());
}

ReflectanceResult reflectance(const Hypercube& raw, const Hypercube& dark,
                              const Hypercube& white, double epsilon) {
    require_same_shape(raw, dark, "reflectance raw/dark");
    require_same_shape(raw, white, "reflectance raw/white");
    std::vector<double> out(raw.size());
    std::size_t invalid = 0;
    const auto& r = raw.data();
    const auto& d = dark.data();
    const auto& w = white.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        double denom = w[i] - d[i];
        if (denom <= epsilon) {
            out[i] = 0.0;
            ++invalid;
        } else {
            out[i] = (r[i] - d[i]) / denom;
        }
    }
    Hypercube cube(raw.lines(), raw.samples(), raw.bands(), std::move(out),
                   raw.wavelengths(), raw.source_stem());
    return {std::move(cube), invalid};
}

Hypercube spectral_bin(const Hypercube& cube, std::size_t k) {
    if (k == 0)
        throw InvalidBinFactor("spectral bin factor must be >= 1, got 0");
    const std::size_t groups = cube.bands() / k;
    if (groups == 0)
        throw EmptyResult("spectral bin factor " + std::to_string(k) +
                          " exceeds band count " + std::to_string(cube.bands()));
    if (k == 1)
        return cube;

    Hypercube out(cube.lines(), cube.samples(), groups);
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t l = 0; l < cube.lines(); ++l) {
            for (std::size_t s = 0; s < cube.samples(); ++s) {
                double acc = 0.0;
                for (std::size_t j = 0; j < k; ++j)
                    acc += cube.at(l, s, g * k + j);
                out.at(l, s, g) = acc / static_cast<double>(k);
            }
        }
    }
    if (cube.wavelengths()) {
        std::vector<double> wl(groups);
        for (std::size_t g = 0; g < groups; ++g) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                acc += (*cube.wavelengths())[g * k + j];
            wl[g] = acc / static_cast<double>(k);
        }
        out.set_wavelengths(std::move(wl));
    }
    out.set_source_stem(cube.source_stem());
    return out;
}

Hypercube spatial_bin(const Hypercube& cube, std::size_t k) {
    if (k == 0)
        throw InvalidBinFactor("spatial bin factor must be >= 1, got 0");
    const std::size_t out_lines = cube.lines() / k;
    const std::size_t out_samples = cube.samples() / k;
    if (out_lines == 0 || out_samples == 0)
        throw EmptyResult("spatial bin factor " + std::to_string(k) +
                          " exceeds spatial extent " + std::to_string(cube.lines()) +
                          "x" + std::to_string(cube.samples()));
    if (k == 1)
        return cube;

    Hypercube out(out_lines, out_samples, cube.bands(), {}, cube.wavelengths(),
                  cube.source_stem());
    const double norm = 1.0 / static_cast<double>(k * k);
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        for (std::size_t ol = 0; ol < out_lines; ++ol) {
            for (std::size_t os = 0; os < out_samples; ++os) {
                double acc = 0.0;
                for (std::size_t dl = 0; dl < k; ++dl)
                    for (std::size_t ds = 0; ds < k; ++ds)
                        acc += cube.at(ol * k + dl, os * k + ds, b);
                out.at(ol, os, b) = acc * norm;
            }
        }
    }
    return out;
}

std::size_t band_at_wavelength(const std::vector<double>& wavelengths, double target_nm) {
    if (wavelengths.empty())
        throw Error("band_at_wavelength: empty wavelength vector");
    std::size_t best = 0;
    double best_dist = std::abs(wavelengths[0] - target_nm);
    for (std::size_t i = 1; i < wavelengths.size(); ++i) {
        double dist = std::abs(wavelengths[i] - target_nm);
        if (dist < best_dist) { // strict: ties keep the lower index
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

} // namespace mvos_hsi
