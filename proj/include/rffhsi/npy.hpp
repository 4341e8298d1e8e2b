#ifndef RFFHSI_NPY_HPP
#define RFFHSI_NPY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rffhsi/types.hpp"

namespace rffhsi {

// A loaded NPY array with values widened to doubles.
struct NpyArray {
    std::vector<std::size_t> shape;
    std::vector<double> data;  // C-order

    std::size_t size() const { return data.size(); }
    std::size_t ndim() const { return shape.size(); }
};

// Reads an NPY v1.0 file. Accepted descriptors: little-endian f4/f8 and
// i1/i2/i4 (plus the '|' prefix for single-byte types). Fortran-order files
// are rejected.
NpyArray load_array(const std::string& path);

// Writes a C-order '<f8' NPY v1.0 file (atomically: temp + rename).
void save_array(const std::string& path, const std::vector<std::size_t>& shape,
                const std::vector<double>& data);

// Writes a C-order '<i4' NPY v1.0 file.
void save_array_int(const std::string& path, const std::vector<std::size_t>& shape,
                    const std::vector<std::int32_t>& data);

// (d x N) matrix saved with shape (d, N); row-major serialization.
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

}  // namespace rffhsi

#endif
