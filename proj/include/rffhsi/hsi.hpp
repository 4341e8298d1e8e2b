#ifndef RFFHSI_HSI_HPP
#define RFFHSI_HSI_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rffhsi/types.hpp"

namespace rffhsi {

// A hyperspectral cube: rows x cols pixels, `bands` reflectance values per
// pixel, stored pixel-major (value index = (r*cols + c)*bands + b) so a
// C-order (rows, cols, bands) array maps onto it directly.
// `labels`, when present, has one class id per pixel; 0 = background.
struct HsiCube {
    int rows = 0;
    int cols = 0;
    int bands = 0;
    std::vector<double> values;
    std::vector<int> labels;

    std::int64_t pixel_count() const { return static_cast<std::int64_t>(rows) * cols; }
    bool has_labels() const { return !labels.empty(); }

    // Checks shape consistency, finiteness, and label ids >= 0.
    void validate() const;
};

// Train/test index lists into a flattened cube (or any sample matrix).
struct DatasetSplit {
    std::vector<std::int64_t> train_indices;
    std::vector<std::int64_t> test_indices;
    std::uint64_t seed = 0;
};

// Reorders a cube into the d x N pixels-as-columns matrix; column j is pixel
// (j / cols, j % cols). Returns the per-pixel labels in the same order
// (empty if the cube has none).
std::pair<Matrix, std::vector<int>> flatten_cube(const HsiCube& cube);

// Inverse of flatten_cube.
HsiCube unflatten_cube(const Matrix& samples, int rows, int cols,
                       const std::vector<int>& labels = {});

// Draws exactly `per_class` training pixels per class uniformly without
// replacement; the rest of the labeled pixels become the test set.
// Background (0) pixels appear on neither side. Errors if any class has
// fewer than per_class + 1 labeled pixels.
DatasetSplit stratified_split(const std::vector<int>& labels, int per_class, std::uint64_t seed);

// Per-class sample counts over labels 1..C; background ignored. counts[c-1]
// is the number of pixels with label c.
std::vector<std::int64_t> class_counts(const std::vector<int>& labels);

// Selects columns of a sample matrix by index.
Matrix take_columns(const Matrix& x, const std::vector<std::int64_t>& indices);

// Selects entries of a label array by index and wraps them as a LabelVector.
LabelVector take_labels(const std::vector<int>& labels, const std::vector<std::int64_t>& indices);

}  // namespace rffhsi

#endif
