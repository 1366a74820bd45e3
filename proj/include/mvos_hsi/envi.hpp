#ifndef MVOS_HSI_ENVI_HPP
#define MVOS_HSI_ENVI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvos_hsi/cube.hpp"

namespace mvos_hsi {

enum class Interleave { BSQ, BIL, BIP };
enum class ByteOrder { Little = 0, Big = 1 };

/// ENVI numeric type codes. Only the codes below are supported; any other
/// code in a header is a parse error.
enum class EnviDataType : int {
    UInt8 = 1,
    Int16 = 2,
    Int32 = 3,
    Float32 = 4,
    Float64 = 5,
    UInt16 = 12,
    UInt32 = 13,
};

std::size_t bytes_per_element(EnviDataType type);
std::optional<EnviDataType> envi_data_type_from_code(int code);
std::optional<Interleave> interleave_from_token(const std::string& token);
const char* interleave_token(Interleave il);

/// Parsed `.hdr` metadata. Unrecognized keys are kept verbatim, in order,
/// and re-emitted on serialization so vendor fields survive a round-trip.
struct EnviHeader {
    std::size_t samples = 0;
    std::size_t lines = 0;
    std::size_t bands = 0;
    Interleave interleave = Interleave::BSQ;
    EnviDataType data_type = EnviDataType::Float64;
    ByteOrder byte_order = ByteOrder::Little;
    std::uint64_t header_offset = 0;
    std::optional<std::vector<double>> wavelengths;
    std::optional<std::string> description;
    std::vector<std::pair<std::string, std::string>> extra_fields;

    bool operator==(const EnviHeader&) const = default;
};

/// Parse the text of a `.hdr` file. The first non-blank line must be `ENVI`.
EnviHeader parse_header(const std::string& text);

/// Render a header back to `.hdr` text; parse_header(serialize_header(h)) == h.
std::string serialize_header(const EnviHeader& header);

/// Read `<base>.hdr` plus its companion binary (`<base>.img`, falling back to
/// an extensionless `<base>`). Accepts either the base path or the .hdr path.
Hypercube read_cube(const std::filesystem::path& header_path);

struct EnviWriteOptions {
    ByteOrder byte_order = ByteOrder::Little;
    /// Permit lossy narrowing: values are clamped/rounded into the target
    /// type's range instead of raising UnrepresentableValue.
    bool allow_clip = false;
};

struct EnviPaths {
    std::filesystem::path hdr;
    std::filesystem::path img;
};

/// Write `<base>.hdr` / `<base>.img` in the requested interleave and type.
EnviPaths write_cube(const Hypercube& cube, const std::filesystem::path& base_path,
                     Interleave interleave = Interleave::BSQ,
                     EnviDataType data_type = EnviDataType::Float64,
                     const EnviWriteOptions& options = {});

/// True when `<base>.hdr` has a readable companion binary.
bool has_companion_binary(const std::filesystem::path& header_path);

} // namespace mvos_hsi

#endif
