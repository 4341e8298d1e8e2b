#ifndef RFFHSI_IO_HPP
#define RFFHSI_IO_HPP

#include <string>
#include <vector>

#include "rffhsi/eval.hpp"
#include "rffhsi/hsi.hpp"

namespace rffhsi {

// Integer grid, one CSV row per image row; 0 = background. Errors name the
// offending row (1-based).
struct LabelGrid {
    int rows = 0;
    int cols = 0;
    std::vector<int> values;  // row-major
};

LabelGrid load_labels_csv(const std::string& path);

// Loads a cube from an NPY file: 3-D (rows, cols, bands) or 2-D (bands, N)
// treated as a 1 x N image. Labels, when given, must match rows x cols.
HsiCube load_cube(const std::string& data_path, const std::string& labels_path = "");

// Binary PPM (P6).
void save_ppm(const std::string& path, const Image& image);

// Writes a whole file atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace rffhsi

#endif
