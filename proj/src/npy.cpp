#include "rffhsi/npy.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "rffhsi/io.hpp"

namespace rffhsi {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

struct Descr {
    char kind = 0;       // 'f' or 'i'
    int item_size = 0;
};

// Parses the python dict literal in an NPY v1.0 header. Only the three
// standard keys are expected; anything else in the value positions fails.
struct Header {
    Descr descr;
    bool fortran_order = false;
    std::vector<std::size_t> shape;
};

std::string find_value(const std::string& header, const std::string& key) {
    const auto key_pos = header.find("'" + key + "'");
    if (key_pos == std::string::npos) throw_format("npy header missing key '" + key + "'");
    auto pos = header.find(':', key_pos);
    if (pos == std::string::npos) throw_format("npy header malformed near '" + key + "'");
    ++pos;
    while (pos < header.size() && header[pos] == ' ') ++pos;
    return header.substr(pos);
}

Header parse_header(const std::string& text) {
    Header header;

    std::string descr = find_value(text, "descr");
    if (descr.empty() || descr[0] != '\'') throw_format("npy descr is not a string");
    const auto end = descr.find('\'', 1);
    if (end == std::string::npos) throw_format("npy descr is not terminated");
    const std::string dtype = descr.substr(1, end - 1);
    if (dtype.size() < 3) throw_format("unsupported npy descriptor '" + dtype + "'");
    const char byte_order = dtype[0];
    const char kind = dtype[1];
    const int item_size = std::atoi(dtype.c_str() + 2);
    const bool single_byte = item_size == 1;
    if (byte_order == '>' || (byte_order != '<' && byte_order != '|') ||
        (byte_order == '|' && !single_byte))
        throw_format("unsupported npy byte order in descriptor '" + dtype + "'");
    if (kind == 'f') {
        if (item_size != 4 && item_size != 8)
            throw_format("unsupported npy float width in descriptor '" + dtype + "'");
    } else if (kind == 'i') {
        if (item_size != 1 && item_size != 2 && item_size != 4)
            throw_format("unsupported npy integer width in descriptor '" + dtype + "'");
    } else {
        throw_format("unsupported npy descriptor '" + dtype +
                     "' (only little-endian f4/f8 and i1/i2/i4 are accepted)");
    }
    header.descr = {kind, item_size};

    const std::string order = find_value(text, "fortran_order");
    if (order.rfind("True", 0) == 0)
        throw_format("Fortran-order npy files are not supported; re-save in C order");
    if (order.rfind("False", 0) != 0) throw_format("npy fortran_order flag malformed");

    std::string shape = find_value(text, "shape");
    if (shape.empty() || shape[0] != '(') throw_format("npy shape is not a tuple");
    const auto close = shape.find(')');
    if (close == std::string::npos) throw_format("npy shape is not terminated");
    std::string numbers = shape.substr(1, close - 1);
    std::size_t pos = 0;
    while (pos < numbers.size()) {
        while (pos < numbers.size() && (numbers[pos] == ' ' || numbers[pos] == ',')) ++pos;
        if (pos >= numbers.size()) break;
        std::size_t digits = 0;
        const unsigned long long value = std::stoull(numbers.substr(pos), &digits);
        header.shape.push_back(static_cast<std::size_t>(value));
        pos += digits;
    }
    if (header.shape.empty()) throw_format("0-dimensional npy arrays are not supported");
    return header;
}

}  // namespace

NpyArray load_array(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw_io("cannot open '" + path + "' for reading");

    char magic[8];
    if (!file.read(magic, 8)) throw_format("'" + path + "' is too short to be an npy file");
    if (std::memcmp(magic, kMagic, 6) != 0)
        throw_format("'" + path + "' does not start with the npy magic bytes");
    if (magic[6] != 1 || magic[7] != 0)
        throw_format("'" + path + "' uses npy version " + std::to_string(magic[6]) + "." +
                     std::to_string(magic[7]) + "; only 1.0 is supported");

    unsigned char len_bytes[2];
    if (!file.read(reinterpret_cast<char*>(len_bytes), 2))
        throw_format("'" + path + "' truncated in the header length");
    const std::size_t header_len =
        static_cast<std::size_t>(len_bytes[0]) | (static_cast<std::size_t>(len_bytes[1]) << 8);
    std::string header_text(header_len, '\0');
    if (!file.read(header_text.data(), static_cast<std::streamsize>(header_len)))
        throw_format("'" + path + "' truncated in the header");

    Header header;
    try {
        header = parse_header(header_text);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw_format("'" + path + "' has a malformed npy header: " + e.what());
    }

    std::size_t count = 1;
    for (std::size_t dim : header.shape) count *= dim;

    NpyArray array;
    array.shape = header.shape;
    array.data.resize(count);
    const std::size_t payload = count * static_cast<std::size_t>(header.descr.item_size);
    std::vector<char> raw(payload);
    if (!file.read(raw.data(), static_cast<std::streamsize>(payload)))
        throw_format("'" + path + "' truncated in the data section");

    const char* src = raw.data();
    switch (header.descr.kind) {
        case 'f':
            if (header.descr.item_size == 8) {
                std::memcpy(array.data.data(), src, payload);
            } else {
                for (std::size_t i = 0; i < count; ++i) {
                    float v;
                    std::memcpy(&v, src + i * 4, 4);
                    array.data[i] = static_cast<double>(v);
                }
            }
            break;
        case 'i':
            for (std::size_t i = 0; i < count; ++i) {
                std::int64_t v = 0;
                if (header.descr.item_size == 1) {
                    std::int8_t t;
                    std::memcpy(&t, src + i, 1);
                    v = t;
                } else if (header.descr.item_size == 2) {
                    std::int16_t t;
                    std::memcpy(&t, src + i * 2, 2);
                    v = t;
                } else {
                    std::int32_t t;
                    std::memcpy(&t, src + i * 4, 4);
                    v = t;
                }
                array.data[i] = static_cast<double>(v);
            }
            break;
    }
    return array;
}

namespace {

std::string make_header(const std::string& dtype, const std::vector<std::size_t>& shape) {
    std::string dict = "{'descr': '" + dtype + "', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        dict += std::to_string(shape[i]);
        if (i + 1 < shape.size()) dict += ", ";
    }
    if (shape.size() == 1) dict += ",";
    dict += "), }";
    // Pad so magic + version + length + dict is a multiple of 64, dict
    // ending in a newline.
    const std::size_t unpadded = 10 + dict.size() + 1;
    const std::size_t padding = (64 - unpadded % 64) % 64;
    dict.append(padding, ' ');
    dict += '\n';

    std::string header(kMagic, 6);
    header += '\x01';
    header += '\0';
    const std::size_t len = dict.size();
    header += static_cast<char>(len & 0xff);
    header += static_cast<char>((len >> 8) & 0xff);
    header += dict;
    return header;
}

void write_npy(const std::string& path, const std::string& dtype,
               const std::vector<std::size_t>& shape, const char* payload,
               std::size_t payload_bytes) {
    std::size_t count = 1;
    for (std::size_t dim : shape) count *= dim;
    if (shape.empty()) throw_usage("cannot save a 0-dimensional array");

    std::string contents = make_header(dtype, shape);
    contents.append(payload, payload_bytes);
    write_file_atomic(path, contents);
    (void)count;
}

}  // namespace

void save_array(const std::string& path, const std::vector<std::size_t>& shape,
                const std::vector<double>& data) {
    std::size_t count = 1;
    for (std::size_t dim : shape) count *= dim;
    if (count != data.size())
        throw_dimension("shape does not match data size " + std::to_string(data.size()));
    write_npy(path, "<f8", shape, reinterpret_cast<const char*>(data.data()),
              data.size() * sizeof(double));
}

void save_array_int(const std::string& path, const std::vector<std::size_t>& shape,
                    const std::vector<std::int32_t>& data) {
    std::size_t count = 1;
    for (std::size_t dim : shape) count *= dim;
    if (count != data.size())
        throw_dimension("shape does not match data size " + std::to_string(data.size()));
    write_npy(path, "<i4", shape, reinterpret_cast<const char*>(data.data()),
              data.size() * sizeof(std::int32_t));
}

void save_matrix(const std::string& path, const Matrix& m) {
    std::vector<double> row_major(static_cast<std::size_t>(m.size()));
    for (std::int64_t r = 0; r < m.rows(); ++r)
        for (std::int64_t c = 0; c < m.cols(); ++c)
            row_major[static_cast<std::size_t>(r) * static_cast<std::size_t>(m.cols()) +
                      static_cast<std::size_t>(c)] = m(r, c);
    save_array(path, {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
               row_major);
}

Matrix load_matrix(const std::string& path) {
    const NpyArray array = load_array(path);
    if (array.ndim() != 2)
        throw_dimension("'" + path + "' holds a " + std::to_string(array.ndim()) +
                        "-d array; expected 2-d");
    Matrix m(static_cast<std::int64_t>(array.shape[0]), static_cast<std::int64_t>(array.shape[1]));
    for (std::int64_t r = 0; r < m.rows(); ++r)
        for (std::int64_t c = 0; c < m.cols(); ++c)
            m(r, c) = array.data[static_cast<std::size_t>(r) * array.shape[1] +
                                 static_cast<std::size_t>(c)];
    return m;
}

}  // namespace rffhsi
