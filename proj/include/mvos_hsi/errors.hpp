#ifndef MVOS_HSI_ERRORS_HPP
#define MVOS_HSI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mvos_hsi {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- ENVI header / cube I/O ---
struct NotEnviHeader : Error { using Error::Error; };
struct MissingRequiredKey : Error { using Error::Error; };
struct MalformedValue : Error { using Error::Error; };
struct FileSizeMismatch : Error { using Error::Error; };
struct UnrepresentableValue : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// --- MAT-file I/O ---
struct BadMagic : Error { using Error::Error; };
struct VariableNotFound : Error { using Error::Error; };
struct UnsupportedClass : Error { using Error::Error; };
struct DuplicateName : Error { using Error::Error; };

// --- Cube math ---
struct ShapeMismatch : Error { using Error::Error; };
struct InvalidBinFactor : Error { using Error::Error; };
struct EmptyResult : Error { using Error::Error; };

// --- Indices ---
struct WavelengthsUnavailable : Error { using Error::Error; };
struct BandOutOfRange : Error { using Error::Error; };
struct BandConflict : Error { using Error::Error; };

// --- Segmentation ---
struct DegenerateHistogram : Error { using Error::Error; };

// --- Folder pipelines ---
struct NoInputsFound : Error { using Error::Error; };
struct DarkMissing : Error { using Error::Error; };

// --- Spectra / plotting ---
struct OutOfBounds : Error { using Error::Error; };
struct EmptyRoi : Error { using Error::Error; };
struct LeafNotFound : Error { using Error::Error; };
struct EmptyRequest : Error { using Error::Error; };

// --- Wavelength tables ---
struct NotMonotonic : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace mvos_hsi

#endif
