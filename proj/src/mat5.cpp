#include "mvos_hsi/mat5.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace mvos_hsi {

namespace fs = std::filesystem;

namespace {

// MAT-file data element type tags.
enum MiType : std::uint32_t {
    miINT8 = 1,
    miUINT8 = 2,
    miINT16 = 3,
    miUINT16 = 4,
    miINT32 = 5,
    miUINT32 = 6,
    miSINGLE = 7,
    miDOUBLE = 9,
    miINT64 = 12,
    miUINT64 = 13,
    miMATRIX = 14,
    miCOMPRESSED = 15,
};

// Array class codes inside the array-flags subelement.
enum MxClass : std::uint32_t {
    mxCELL = 1,
    mxSTRUCT = 2,
    mxOBJECT = 3,
    mxCHAR = 4,
    mxSPARSE = 5,
    mxDOUBLE = 6,
    mxSINGLE = 7,
    mxINT8 = 8,
    mxUINT8 = 9,
    mxINT16 = 10,
    mxUINT16 = 11,
    mxINT32 = 12,
    mxUINT32 = 13,
    mxINT64 = 14,
    mxUINT64 = 15,
};

constexpr bool native_little = (std::endian::native == std::endian::little);

struct Cursor {
    const unsigned char* data;
    std::size_t size;
    std::size_t pos = 0;
    bool swap = false;

    bool at_end() const { return pos >= size; }

    void require(std::size_t n, const char* what) const {
        if (pos + n > size)
            throw BadMagic(std::string("truncated MAT data while reading ") + what);
    }

    std::uint32_t read_u32() {
        require(4, "a 32-bit word");
        std::uint32_t v;
        std::memcpy(&v, data + pos, 4);
        pos += 4;
        if (swap) {
            unsigned char* p = reinterpret_cast<unsigned char*>(&v);
            std::swap(p[0], p[3]);
            std::swap(p[1], p[2]);
        }
        return v;
    }
};

template <typename T>
T load_scalar(const unsigned char* src, bool swap) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, src, sizeof(T));
    if (swap)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
            std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::size_t mi_element_size(std::uint32_t type) {
    switch (type) {
        case miINT8:
        case miUINT8: return 1;
        case miINT16:
        case miUINT16: return 2;
        case miINT32:
        case miUINT32:
        case miSINGLE: return 4;
        case miDOUBLE:
        case miINT64:
        case miUINT64: return 8;
        default: return 0;
    }
}

std::vector<double> widen_payload(std::uint32_t type, const unsigned char* p,
                                  std::size_t nbytes, bool swap) {
    const std::size_t es = mi_element_size(type);
    if (es == 0)
        throw UnsupportedClass("unsupported numeric payload type " + std::to_string(type));
    const std::size_t n = nbytes / es;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* src = p + i * es;
        switch (type) {
            case miINT8: out[i] = static_cast<double>(load_scalar<std::int8_t>(src, swap)); break;
            case miUINT8: out[i] = static_cast<double>(load_scalar<std::uint8_t>(src, swap)); break;
            case miINT16: out[i] = static_cast<double>(load_scalar<std::int16_t>(src, swap)); break;
            case miUINT16: out[i] = static_cast<double>(load_scalar<std::uint16_t>(src, swap)); break;
            case miINT32: out[i] = static_cast<double>(load_scalar<std::int32_t>(src, swap)); break;
            case miUINT32: out[i] = static_cast<double>(load_scalar<std::uint32_t>(src, swap)); break;
            case miSINGLE: out[i] = static_cast<double>(load_scalar<float>(src, swap)); break;
            case miDOUBLE: out[i] = load_scalar<double>(src, swap); break;
            case miINT64: out[i] = static_cast<double>(load_scalar<std::int64_t>(src, swap)); break;
            case miUINT64: out[i] = static_cast<double>(load_scalar<std::uint64_t>(src, swap)); break;
        }
    }
    return out;
}

struct SubElement {
    std::uint32_t type = 0;
    const unsigned char* payload = nullptr;
    std::size_t nbytes = 0;
};

/// Reads one tag+payload at the cursor, handling the packed small-element
/// form (payload <= 4 bytes shares the 8-byte tag word).
SubElement read_sub_element(Cursor& c) {
    SubElement e;
    std::uint32_t first = c.read_u32();
    if ((first >> 16) != 0) {
        e.type = first & 0xFFFF;
        e.nbytes = first >> 16;
        c.require(4, "small element payload");
        e.payload = c.data + c.pos;
        c.pos += 4;
        return e;
    }
    e.type = first;
    e.nbytes = c.read_u32();
    if (e.type == miCOMPRESSED) {
        // Compressed elements are not 8-aligned; consume the exact byte count.
        c.require(e.nbytes, "compressed payload");
        e.payload = c.data + c.pos;
        c.pos += e.nbytes;
        return e;
    }
    c.require(e.nbytes, "element payload");
    e.payload = c.data + c.pos;
    c.pos += (e.nbytes + 7) & ~std::size_t{7};
    if (c.pos > c.size)
        c.pos = c.size; // final element may omit trailing pad
    return e;
}

std::vector<unsigned char> zlib_inflate(const unsigned char* src, std::size_t n) {
    std::vector<unsigned char> out;
    out.resize(n * 4 + 64);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK)
        throw IoError("zlib inflateInit failed");
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = static_cast<uInt>(n);
    std::size_t written = 0;
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        if (written == out.size())
            out.resize(out.size() * 2);
        zs.next_out = out.data() + written;
        zs.avail_out = static_cast<uInt>(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw BadMagic("corrupt zlib stream in compressed MAT element");
        }
        written = zs.total_out;
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

struct ParsedMatrix {
    std::string name;
    std::uint32_t mat_class = 0;
    bool is_complex = false;
    std::vector<std::size_t> dims;
    std::vector<double> values;
};

ParsedMatrix parse_matrix(const unsigned char* payload, std::size_t nbytes, bool swap) {
    Cursor c{payload, nbytes, 0, swap};
    ParsedMatrix m;

    SubElement flags = read_sub_element(c);
    if (flags.type != miUINT32 || flags.nbytes < 8)
        throw BadMagic("malformed array-flags subelement");
    std::uint32_t flags_word = load_scalar<std::uint32_t>(flags.payload, swap);
    m.mat_class = flags_word & 0xFF;
    m.is_complex = (flags_word >> 11) & 1;

    SubElement dims = read_sub_element(c);
    if (dims.type != miINT32)
        throw BadMagic("malformed dimensions subelement");
    const std::size_t ndims = dims.nbytes / 4;
    for (std::size_t i = 0; i < ndims; ++i) {
        std::int32_t d = load_scalar<std::int32_t>(dims.payload + i * 4, swap);
        if (d < 0)
            throw BadMagic("negative dimension in MAT array");
        m.dims.push_back(static_cast<std::size_t>(d));
    }

    SubElement name = read_sub_element(c);
    if (name.type != miINT8)
        throw BadMagic("malformed array-name subelement");
    m.name.assign(reinterpret_cast<const char*>(name.payload), name.nbytes);

    switch (m.mat_class) {
        case mxDOUBLE:
        case mxSINGLE:
        case mxINT8:
        case mxUINT8:
        case mxINT16:
        case mxUINT16:
        case mxINT32:
        case mxUINT32:
        case mxINT64:
        case mxUINT64:
            break;
        case mxCELL:
            throw UnsupportedClass("variable '" + m.name + "' is a cell array");
        case mxSTRUCT:
        case mxOBJECT:
            throw UnsupportedClass("variable '" + m.name + "' is a struct/object");
        case mxCHAR:
            throw UnsupportedClass("variable '" + m.name + "' is a char array");
        case mxSPARSE:
            throw UnsupportedClass("variable '" + m.name + "' is sparse");
        default:
            throw UnsupportedClass("variable '" + m.name + "' has unknown class " +
                                   std::to_string(m.mat_class));
    }
    if (m.is_complex)
        throw UnsupportedClass("variable '" + m.name + "' is complex");

    SubElement real = read_sub_element(c);
    m.values = widen_payload(real.type, real.payload, real.nbytes, swap);

    std::size_t expected = 1;
    for (std::size_t d : m.dims)
        expected *= d;
    if (m.values.size() != expected)
        throw BadMagic("variable '" + m.name + "' payload length " +
                       std::to_string(m.values.size()) + " does not match dims product " +
                       std::to_string(expected));
    return m;
}

struct MatFile {
    std::vector<unsigned char> bytes;
    bool swap = false;
};

MatFile load_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open MAT file '" + path.string() + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 128)
        throw BadMagic("'" + path.string() + "' is shorter than the 128-byte MAT-5 header");

    const unsigned char e0 = bytes[126], e1 = bytes[127];
    bool file_little;
    if (e0 == 'I' && e1 == 'M')
        file_little = true;
    else if (e0 == 'M' && e1 == 'I')
        file_little = false;
    else
        throw BadMagic("'" + path.string() + "' has an invalid endian indicator");
    return {std::move(bytes), file_little != native_little};
}

template <typename Fn>
void for_each_matrix(const MatFile& file, Fn&& fn) {
    Cursor c{file.bytes.data(), file.bytes.size(), 128, file.swap};
    while (c.size - c.pos >= 8) {
        // Tolerate all-zero padding words between top-level elements.
        bool padding = true;
        for (std::size_t i = 0; i < 8; ++i)
            padding = padding && file.bytes[c.pos + i] == 0;
        if (padding) {
            c.pos += 8;
            continue;
        }
        SubElement e = read_sub_element(c);
        if (e.type == miCOMPRESSED) {
            std::vector<unsigned char> inflated = zlib_inflate(e.payload, e.nbytes);
            Cursor ic{inflated.data(), inflated.size(), 0, file.swap};
            SubElement inner = read_sub_element(ic);
            if (inner.type == miMATRIX)
                fn(parse_matrix(inner.payload, inner.nbytes, file.swap));
        } else if (e.type == miMATRIX) {
            fn(parse_matrix(e.payload, e.nbytes, file.swap));
        }
        // Other top-level element types are skipped.
    }
}

} // namespace

MatArray::MatArray(std::string name_, std::vector<std::size_t> dims_,
                   std::vector<double> values_)
    : name(std::move(name_)), dims(std::move(dims_)), values(std::move(values_)) {
    if (dims.empty())
        throw Error("MatArray dims must be non-empty");
    if (dims.size() == 1)
        dims.push_back(1);
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d == 0)
            throw Error("MatArray dims must be positive");
        n *= d;
    }
    if (values.size() != n)
        throw Error("MatArray has " + std::to_string(values.size()) +
                    " values but dims imply " + std::to_string(n));
    if (!is_valid_mat_name(name))
        throw Error("'" + name + "' is not a valid MAT variable name");
}

bool is_valid_mat_name(const std::string& name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        return false;
    for (char ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

std::vector<std::string> mat_variable_names(const fs::path& path) {
    MatFile file = load_file(path);
    std::vector<std::string> names;
    for_each_matrix(file, [&](ParsedMatrix m) { names.push_back(std::move(m.name)); });
    return names;
}

MatArray read_mat_array(const fs::path& path, const std::string& name) {
    MatFile file = load_file(path);
    MatArray found;
    bool hit = false;
    std::vector<std::string> names;
    for_each_matrix(file, [&](ParsedMatrix m) {
        names.push_back(m.name);
        if (!hit && m.name == name) {
            found = MatArray(m.name, std::move(m.dims), std::move(m.values));
            hit = true;
        }
    });
    if (!hit) {
        std::string listing;
        for (std::size_t i = 0; i < names.size(); ++i)
            listing += (i ? ", " : "") + names[i];
        throw VariableNotFound("variable '" + name + "' not found in '" + path.string() +
                               "' (present: [" + listing + "])");
    }
    return found;
}

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void put_f64(std::vector<unsigned char>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xFF));
}

void pad_to_8(std::vector<unsigned char>& out) {
    while (out.size() % 8 != 0)
        out.push_back(0);
}

/// Append a full (non-small) element: tag, payload, zero padding to 8 bytes.
void put_element(std::vector<unsigned char>& out, std::uint32_t type,
                 const std::vector<unsigned char>& payload) {
    put_u32(out, type);
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    pad_to_8(out);
}

} // namespace

void write_mat(const fs::path& path, const std::vector<MatArray>& arrays) {
    if (arrays.empty())
        throw Error("write_mat requires at least one array");
    for (std::size_t i = 0; i < arrays.size(); ++i)
        for (std::size_t j = i + 1; j < arrays.size(); ++j)
            if (arrays[i].name == arrays[j].name)
                throw DuplicateName("duplicate MAT variable name '" + arrays[i].name + "'");

    std::vector<unsigned char> out;
    out.reserve(256);

    // 128-byte header: descriptive text, zeroed subsystem offset,
    // version 0x0100, endian tag (bytes "IM" = little-endian payload).
    std::string text = "MATLAB 5.0 MAT-file, created by mvos_hsi";
    text.resize(116, ' ');
    out.insert(out.end(), text.begin(), text.end());
    for (int i = 0; i < 8; ++i)
        out.push_back(0);
    out.push_back(0x00);
    out.push_back(0x01);
    out.push_back('I');
    out.push_back('M');

    for (const MatArray& a : arrays) {
        std::vector<unsigned char> body;

        std::vector<unsigned char> flags;
        put_u32(flags, mxDOUBLE);
        put_u32(flags, 0);
        put_element(body, miUINT32, flags);

        std::vector<unsigned char> dims;
        for (std::size_t d : a.dims)
            put_u32(dims, static_cast<std::uint32_t>(d));
        put_element(body, miINT32, dims);

        std::vector<unsigned char> name(a.name.begin(), a.name.end());
        put_element(body, miINT8, name);

        std::vector<unsigned char> real;
        real.reserve(a.values.size() * 8);
        for (double v : a.values)
            put_f64(real, v);
        put_element(body, miDOUBLE, real);

        put_element(out, miMATRIX, body);
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot write MAT file '" + path.string() + "'");
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    os.close();
    if (!os)
        throw IoError("failed writing '" + path.string() + "'");
}

} // namespace mvos_hsi
