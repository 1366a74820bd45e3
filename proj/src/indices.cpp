#include "mvos_hsi/indices.hpp"

#include <cmath>

#include "internal/text_util.hpp"

namespace mvos_hsi {

const char* index_kind_name(IndexKind kind) {
    switch (kind) {
        case IndexKind::NDVI: return "ndvi";
        case IndexKind::GCI: return "gci";
        case IndexKind::CIRedEdge: return "cire";
    }
    return "ndvi";
}

std::optional<IndexKind> index_kind_from_token(const std::string& token) {
    std::string t = detail::to_lower(detail::trim(token));
    if (t == "ndvi") return IndexKind::NDVI;
    if (t == "gci") return IndexKind::GCI;
    if (t == "cire" || t == "ci-rededge" || t == "cirededge") return IndexKind::CIRedEdge;
    return std::nullopt;
}

BandSelection BandSelection::by_index(std::size_t red, std::size_t green,
                                      std::size_t red_edge, std::size_t nir) {
    BandSelection sel;
    sel.mode = Mode::ByIndex;
    sel.red_band = red;
    sel.green_band = green;
    sel.red_edge_band = red_edge;
    sel.nir_band = nir;
    return sel;
}

namespace {

ResolvedBands resolve(const Hypercube& cube, IndexKind kind, const BandSelection& sel) {
    ResolvedBands rb;
    double denom_nm = 0.0;
    std::size_t denom_band = 0;
    switch (kind) {
        case IndexKind::NDVI:
            denom_nm = sel.red_nm;
            denom_band = sel.red_band;
            break;
        case IndexKind::GCI:
            denom_nm = sel.green_nm;
            denom_band = sel.green_band;
            break;
        case IndexKind::CIRedEdge:
            denom_nm = sel.red_edge_nm;
            denom_band = sel.red_edge_band;
            break;
    }

    if (sel.mode == BandSelection::Mode::ByWavelength) {
        if (!cube.wavelengths())
            throw WavelengthsUnavailable(
                "cube has no wavelength vector; supply one or select bands by index");
        const auto& wl = *cube.wavelengths();
        rb.numerator_band = band_at_wavelength(wl, sel.nir_nm);
        rb.denominator_band = band_at_wavelength(wl, denom_nm);
        rb.numerator_nm = wl[rb.numerator_band];
        rb.denominator_nm = wl[rb.denominator_band];
    } else {
        rb.numerator_band = sel.nir_band;
        rb.denominator_band = denom_band;
        if (rb.numerator_band >= cube.bands() || rb.denominator_band >= cube.bands())
            throw BandOutOfRange("band selection (" + std::to_string(rb.denominator_band) +
                                 ", " + std::to_string(rb.numerator_band) +
                                 ") exceeds band count " + std::to_string(cube.bands()));
        if (cube.wavelengths()) {
            rb.numerator_nm = (*cube.wavelengths())[rb.numerator_band];
            rb.denominator_nm = (*cube.wavelengths())[rb.denominator_band];
        }
    }
    if (rb.numerator_band == rb.denominator_band)
        throw BandConflict(std::string("the NIR band and the ") + index_kind_name(kind) +
                           " reference band resolved to the same band " +
                           std::to_string(rb.numerator_band));
    return rb;
}

} // namespace

IndexImage compute_index(const Hypercube& cube, IndexKind kind, const BandSelection& sel,
                         double guard_epsilon) {
    ResolvedBands rb = resolve(cube, kind, sel);

    IndexImage img;
    img.lines = cube.lines();
    img.samples = cube.samples();
    img.kind = kind;
    img.bands_used = rb;
    img.values.assign(img.lines * img.samples, 0.0);
    img.valid.assign(img.lines * img.samples, 0);

    for (std::size_t l = 0; l < img.lines; ++l) {
        for (std::size_t s = 0; s < img.samples; ++s) {
            const double nir = cube.at(l, s, rb.numerator_band);
            const double ref = cube.at(l, s, rb.denominator_band);
            const double denom = (kind == IndexKind::NDVI) ? nir + ref : ref;
            const std::size_t i = l * img.samples + s;
            if (std::abs(denom) <= guard_epsilon) {
                img.values[i] = 0.0;
                img.valid[i] = 0;
            } else {
                const double value =
                    (kind == IndexKind::NDVI) ? (nir - ref) / denom : nir / denom - 1.0;
                if (std::isfinite(value)) {
                    img.values[i] = value;
                    img.valid[i] = 1;
                } else {
                    img.values[i] = 0.0;
                    img.valid[i] = 0;
                }
            }
        }
    }
    return img;
}

} // namespace mvos_hsi
