#include "mvos_hsi/envi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "internal/text_util.hpp"

namespace mvos_hsi {

namespace fs = std::filesystem;
using detail::format_double;
using detail::normalize_key;
using detail::parse_double;
using detail::parse_integer;
using detail::trim;

std::size_t bytes_per_element(EnviDataType type) {
    switch (type) {
        case EnviDataType::UInt8: return 1;
        case EnviDataType::Int16: return 2;
        case EnviDataType::UInt16: return 2;
        case EnviDataType::Int32: return 4;
        case EnviDataType::UInt32: return 4;
        case EnviDataType::Float32: return 4;
        case EnviDataType::Float64: return 8;
    }
    return 0;
}

std::optional<EnviDataType> envi_data_type_from_code(int code) {
    switch (code) {
        case 1: return EnviDataType::UInt8;
        case 2: return EnviDataType::Int16;
        case 3: return EnviDataType::Int32;
        case 4: return EnviDataType::Float32;
        case 5: return EnviDataType::Float64;
        case 12: return EnviDataType::UInt16;
        case 13: return EnviDataType::UInt32;
        default: return std::nullopt;
    }
}

std::optional<Interleave> interleave_from_token(const std::string& token) {
    std::string t = detail::to_lower(trim(token));
    if (t == "bsq") return Interleave::BSQ;
    if (t == "bil") return Interleave::BIL;
    if (t == "bip") return Interleave::BIP;
    return std::nullopt;
}

const char* interleave_token(Interleave il) {
    switch (il) {
        case Interleave::BSQ: return "bsq";
        case Interleave::BIL: return "bil";
        case Interleave::BIP: return "bip";
    }
    return "bsq";
}

namespace {

std::vector<double> parse_brace_list(const std::string& raw, const std::string& key) {
    auto open = raw.find('{');
    auto close = raw.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw MalformedValue(key + ": expected a brace-delimited list, got '" + raw + "'");
    std::vector<double> values;
    std::string body = raw.substr(open + 1, close - open - 1);
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto comma = body.find(',', pos);
        std::string_view item(body.data() + pos,
                              (comma == std::string::npos ? body.size() : comma) - pos);
        auto t = trim(item);
        if (!t.empty()) {
            auto v = parse_double(t);
            if (!v)
                throw MalformedValue(key + ": non-numeric list entry '" + std::string(t) + "'");
            values.push_back(*v);
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return values;
}

std::size_t parse_positive(const std::string& value, const std::string& key) {
    auto v = parse_integer(value);
    if (!v || *v < 1)
        throw MalformedValue(key + " must be a positive integer, got '" + value + "'");
    return static_cast<std::size_t>(*v);
}

} // namespace

EnviHeader parse_header(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    // Magic check: first non-blank line must be exactly "ENVI".
    bool magic_seen = false;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty())
            continue;
        if (t == "ENVI") {
            magic_seen = true;
        }
        break;
    }
    if (!magic_seen)
        throw NotEnviHeader("missing 'ENVI' magic on the first non-blank line");

    EnviHeader h;
    bool have_samples = false, have_lines = false, have_bands = false;
    bool have_dtype = false, have_interleave = false;

    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            continue; // stray line; the format has no comments, skip it
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        // Brace-delimited values may span lines; join until the closing brace.
        if (value.find('{') != std::string::npos && value.find('}') == std::string::npos) {
            std::string cont;
            while (std::getline(in, cont)) {
                value += ' ';
                value += std::string(trim(cont));
                if (cont.find('}') != std::string::npos)
                    break;
            }
            if (value.find('}') == std::string::npos)
                throw MalformedValue(key + ": unterminated brace value");
        }
        if (key.empty())
            continue;

        const std::string norm = normalize_key(key);
        if (norm == "samples") {
            h.samples = parse_positive(value, "samples");
            have_samples = true;
        } else if (norm == "lines") {
            h.lines = parse_positive(value, "lines");
            have_lines = true;
        } else if (norm == "bands") {
            h.bands = parse_positive(value, "bands");
            have_bands = true;
        } else if (norm == "data type") {
            auto code = parse_integer(value);
            if (!code)
                throw MalformedValue("data type must be an integer code, got '" + value + "'");
            auto dt = envi_data_type_from_code(static_cast<int>(*code));
            if (!dt)
                throw MalformedValue("unsupported data type code " + value +
                                     " (supported: 1,2,3,4,5,12,13)");
            h.data_type = *dt;
            have_dtype = true;
        } else if (norm == "interleave") {
            auto il = interleave_from_token(value);
            if (!il)
                throw MalformedValue("interleave must be bsq, bil, or bip, got '" + value + "'");
            h.interleave = *il;
            have_interleave = true;
        } else if (norm == "byte order") {
            auto v = parse_integer(value);
            if (!v || (*v != 0 && *v != 1))
                throw MalformedValue("byte order must be 0 or 1, got '" + value + "'");
            h.byte_order = (*v == 0) ? ByteOrder::Little : ByteOrder::Big;
        } else if (norm == "header offset") {
            auto v = parse_integer(value);
            if (!v || *v < 0)
                throw MalformedValue("header offset must be a non-negative integer, got '" +
                                     value + "'");
            h.header_offset = static_cast<std::uint64_t>(*v);
        } else if (norm == "wavelength") {
            h.wavelengths = parse_brace_list(value, "wavelength");
        } else if (norm == "description") {
            auto open = value.find('{');
            auto close = value.rfind('}');
            if (open != std::string::npos && close != std::string::npos && close > open)
                h.description = std::string(trim(value.substr(open + 1, close - open - 1)));
            else
                h.description = value;
        } else {
            h.extra_fields.emplace_back(key, value);
        }
    }

    std::string missing;
    if (!have_samples) missing += " samples";
    if (!have_lines) missing += " lines";
    if (!have_bands) missing += " bands";
    if (!have_dtype) missing += " 'data type'";
    if (!have_interleave) missing += " interleave";
    if (!missing.empty())
        throw MissingRequiredKey("header is missing required key(s):" + missing);

    if (h.wavelengths && h.wavelengths->size() != h.bands)
        throw MalformedValue("wavelength list has " + std::to_string(h.wavelengths->size()) +
                             " entries but bands = " + std::to_string(h.bands));
    if (h.wavelengths)
        for (double w : *h.wavelengths)
            if (!std::isfinite(w))
                throw MalformedValue("wavelength list contains a non-finite value");
    return h;
}

std::string serialize_header(const EnviHeader& header) {
    std::string out = "ENVI\n";
    if (header.description)
        out += "description = { " + *header.description + " }\n";
    out += "samples = " + std::to_string(header.samples) + "\n";
    out += "lines = " + std::to_string(header.lines) + "\n";
    out += "bands = " + std::to_string(header.bands) + "\n";
    out += "header offset = " + std::to_string(header.header_offset) + "\n";
    out += "data type = " + std::to_string(static_cast<int>(header.data_type)) + "\n";
    out += "interleave = " + std::string(interleave_token(header.interleave)) + "\n";
    out += "byte order = " + std::to_string(static_cast<int>(header.byte_order)) + "\n";
    if (header.wavelengths) {
        out += "wavelength = { ";
        for (std::size_t i = 0; i < header.wavelengths->size(); ++i) {
            if (i)
                out += ", ";
            out += format_double((*header.wavelengths)[i]);
        }
        out += " }\n";
    }
    for (const auto& [key, value] : header.extra_fields)
        out += key + " = " + value + "\n";
    return out;
}

namespace {

fs::path strip_known_extension(const fs::path& p) {
    auto ext = detail::to_lower(p.extension().string());
    if (ext == ".hdr" || ext == ".img")
        return fs::path(p).replace_extension();
    return p;
}

fs::path locate_companion(const fs::path& base) {
    fs::path img = base;
    img += ".img";
    std::error_code ec;
    if (fs::is_regular_file(img, ec))
        return img;
    if (fs::is_regular_file(base, ec))
        return base;
    throw IoError("companion binary not found for '" + base.string() + "' (tried '" +
                  img.string() + "' and the extensionless base)");
}

constexpr bool native_little = (std::endian::native == std::endian::little);

void swap_bytes(unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n / 2; ++i)
        std::swap(p[i], p[n - 1 - i]);
}

template <typename T>
double decode_element(const unsigned char* src, bool swap) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, src, sizeof(T));
    if (swap)
        swap_bytes(buf, sizeof(T));
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return static_cast<double>(value);
}

double decode_at(const unsigned char* src, EnviDataType type, bool swap) {
    switch (type) {
        case EnviDataType::UInt8: return decode_element<std::uint8_t>(src, swap);
        case EnviDataType::Int16: return decode_element<std::int16_t>(src, swap);
        case EnviDataType::Int32: return decode_element<std::int32_t>(src, swap);
        case EnviDataType::Float32: return decode_element<float>(src, swap);
        case EnviDataType::Float64: return decode_element<double>(src, swap);
        case EnviDataType::UInt16: return decode_element<std::uint16_t>(src, swap);
        case EnviDataType::UInt32: return decode_element<std::uint32_t>(src, swap);
    }
    return 0.0;
}

template <typename T>
T narrow_integer(double v, bool allow_clip) {
    const double lo = static_cast<double>(std::numeric_limits<T>::min());
    const double hi = static_cast<double>(std::numeric_limits<T>::max());
    if (!allow_clip) {
        if (!std::isfinite(v) || v < lo || v > hi || std::trunc(v) != v)
            throw UnrepresentableValue("value " + format_double(v) +
                                       " is not representable in the requested integer type");
        return static_cast<T>(v);
    }
    if (!std::isfinite(v))
        return 0;
    double r = std::nearbyint(v);
    if (r < lo) r = lo;
    if (r > hi) r = hi;
    return static_cast<T>(r);
}

float narrow_float32(double v, bool allow_clip) {
    float f = static_cast<float>(v);
    if (static_cast<double>(f) == v)
        return f;
    if (!allow_clip)
        throw UnrepresentableValue("value " + format_double(v) +
                                   " is not exactly representable as float32");
    if (std::isinf(f))
        f = std::signbit(f) ? -std::numeric_limits<float>::max()
                            : std::numeric_limits<float>::max();
    return f;
}

void encode_at(unsigned char* dst, double v, EnviDataType type, bool swap, bool allow_clip) {
    unsigned char buf[8];
    std::size_t n = bytes_per_element(type);
    switch (type) {
        case EnviDataType::UInt8: {
            auto x = narrow_integer<std::uint8_t>(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::Int16: {
            auto x = narrow_integer<std::int16_t>(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::Int32: {
            auto x = narrow_integer<std::int32_t>(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::UInt16: {
            auto x = narrow_integer<std::uint16_t>(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::UInt32: {
            auto x = narrow_integer<std::uint32_t>(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::Float32: {
            float x = narrow_float32(v, allow_clip);
            std::memcpy(buf, &x, n);
            break;
        }
        case EnviDataType::Float64: {
            std::memcpy(buf, &v, n);
            break;
        }
    }
    if (swap)
        swap_bytes(buf, n);
    std::memcpy(dst, buf, n);
}

/// Offset (in elements) of (line, sample, band) within a file of the given
/// interleave.
std::size_t file_index(Interleave il, std::size_t l, std::size_t s, std::size_t b,
                       std::size_t lines, std::size_t samples, std::size_t bands) {
    switch (il) {
        case Interleave::BSQ: return (b * lines + l) * samples + s;
        case Interleave::BIL: return (l * bands + b) * samples + s;
        case Interleave::BIP: return (l * samples + s) * bands + b;
    }
    return 0;
}

} // namespace

bool has_companion_binary(const std::filesystem::path& header_path) {
    fs::path base = strip_known_extension(header_path);
    fs::path img = base;
    img += ".img";
    std::error_code ec;
    return fs::is_regular_file(img, ec) || fs::is_regular_file(base, ec);
}

Hypercube read_cube(const fs::path& header_path) {
    fs::path base = strip_known_extension(header_path);
    fs::path hdr = base;
    hdr += ".hdr";

    std::ifstream hdr_in(hdr, std::ios::binary);
    if (!hdr_in)
        throw IoError("cannot open header file '" + hdr.string() + "'");
    std::stringstream ss;
    ss << hdr_in.rdbuf();
    EnviHeader header = parse_header(ss.str());

    fs::path img = locate_companion(base);
    std::error_code ec;
    const std::uint64_t file_size = fs::file_size(img, ec);
    if (ec)
        throw IoError("cannot stat '" + img.string() + "': " + ec.message());

    const std::size_t bpe = bytes_per_element(header.data_type);
    const std::uint64_t count =
        static_cast<std::uint64_t>(header.lines) * header.samples * header.bands;
    const std::uint64_t expected = header.header_offset + count * bpe;
    if (file_size != expected)
        throw FileSizeMismatch("'" + img.string() + "' is " + std::to_string(file_size) +
                               " bytes, expected " + std::to_string(expected) + " (offset " +
                               std::to_string(header.header_offset) + " + " +
                               std::to_string(count) + " x " + std::to_string(bpe) + " bytes)");

    std::ifstream in(img, std::ios::binary);
    if (!in)
        throw IoError("cannot open binary file '" + img.string() + "'");
    in.seekg(static_cast<std::streamoff>(header.header_offset));
    std::vector<unsigned char> bytes(count * bpe);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in)
        throw IoError("short read from '" + img.string() + "'");

    const bool swap = (header.byte_order == ByteOrder::Little) != native_little;
    Hypercube cube(header.lines, header.samples, header.bands);
    for (std::size_t b = 0; b < header.bands; ++b) {
        for (std::size_t l = 0; l < header.lines; ++l) {
            for (std::size_t s = 0; s < header.samples; ++s) {
                std::size_t fi = file_index(header.interleave, l, s, b, header.lines,
                                            header.samples, header.bands);
                double v = decode_at(bytes.data() + fi * bpe, header.data_type, swap);
                if (!std::isfinite(v))
                    throw MalformedValue(
                        "non-finite value at (line " + std::to_string(l) + ", sample " +
                        std::to_string(s) + ", band " + std::to_string(b) + "), byte offset " +
                        std::to_string(header.header_offset + fi * bpe) + " in '" +
                        img.string() + "'");
                cube.at(l, s, b) = v;
            }
        }
    }
    cube.set_wavelengths(header.wavelengths);
    cube.set_source_stem(base.filename().string());
    return cube;
}

EnviPaths write_cube(const Hypercube& cube, const fs::path& base_path, Interleave interleave,
                     EnviDataType data_type, const EnviWriteOptions& options) {
    EnviHeader header;
    header.samples = cube.samples();
    header.lines = cube.lines();
    header.bands = cube.bands();
    header.interleave = interleave;
    header.data_type = data_type;
    header.byte_order = options.byte_order;
    header.wavelengths = cube.wavelengths();

    const std::size_t bpe = bytes_per_element(data_type);
    const bool swap = (options.byte_order == ByteOrder::Little) != native_little;
    std::vector<unsigned char> bytes(cube.size() * bpe);
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        for (std::size_t l = 0; l < cube.lines(); ++l) {
            for (std::size_t s = 0; s < cube.samples(); ++s) {
                std::size_t fi = file_index(interleave, l, s, b, cube.lines(), cube.samples(),
                                            cube.bands());
                encode_at(bytes.data() + fi * bpe, cube.at(l, s, b), data_type, swap,
                          options.allow_clip);
            }
        }
    }

    fs::path base = strip_known_extension(base_path);
    EnviPaths paths;
    paths.hdr = base;
    paths.hdr += ".hdr";
    paths.img = base;
    paths.img += ".img";

    std::ofstream hdr_out(paths.hdr, std::ios::binary | std::ios::trunc);
    if (!hdr_out)
        throw IoError("cannot write header file '" + paths.hdr.string() + "'");
    hdr_out << serialize_header(header);
    hdr_out.close();
    if (!hdr_out)
        throw IoError("failed writing '" + paths.hdr.string() + "'");

    std::ofstream img_out(paths.img, std::ios::binary | std::ios::trunc);
    if (!img_out)
        throw IoError("cannot write binary file '" + paths.img.string() + "'");
    img_out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    img_out.close();
    if (!img_out)
        throw IoError("failed writing '" + paths.img.string() + "'");
    return paths;
}

} // namespace mvos_hsi
