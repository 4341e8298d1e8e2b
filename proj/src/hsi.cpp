#include "rffhsi/hsi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rffhsi {

void HsiCube::validate() const {
    if (rows < 1 || cols < 1 || bands < 1)
        throw_dimension("cube dimensions must be positive, got " + std::to_string(rows) + "x" +
                        std::to_string(cols) + "x" + std::to_string(bands));
    const auto expected = static_cast<std::size_t>(pixel_count()) * static_cast<std::size_t>(bands);
    if (values.size() != expected)
        throw_dimension("cube has " + std::to_string(values.size()) + " values, expected " +
                        std::to_string(expected));
    for (double v : values)
        if (!std::isfinite(v)) throw_format("cube contains a non-finite value");
    if (!labels.empty()) {
        if (labels.size() != static_cast<std::size_t>(pixel_count()))
            throw_dimension("label grid size does not match pixel count");
        for (int id : labels)
            if (id < 0) throw_format("label ids must be >= 0, got " + std::to_string(id));
    }
}

std::pair<Matrix, std::vector<int>> flatten_cube(const HsiCube& cube) {
    cube.validate();
    const std::int64_t n = cube.pixel_count();
    Matrix samples(cube.bands, n);
    for (std::int64_t j = 0; j < n; ++j)
        for (int b = 0; b < cube.bands; ++b)
            samples(b, j) = cube.values[static_cast<std::size_t>(j) * cube.bands + b];
    return {std::move(samples), cube.labels};
}

HsiCube unflatten_cube(const Matrix& samples, int rows, int cols, const std::vector<int>& labels) {
    if (static_cast<std::int64_t>(rows) * cols != samples.cols())
        throw_dimension("rows*cols = " + std::to_string(static_cast<std::int64_t>(rows) * cols) +
                        " does not match sample count " + std::to_string(samples.cols()));
    HsiCube cube;
    cube.rows = rows;
    cube.cols = cols;
    cube.bands = static_cast<int>(samples.rows());
    cube.values.resize(static_cast<std::size_t>(samples.size()));
    for (std::int64_t j = 0; j < samples.cols(); ++j)
        for (int b = 0; b < cube.bands; ++b)
            cube.values[static_cast<std::size_t>(j) * cube.bands + b] = samples(b, j);
    cube.labels = labels;
    cube.validate();
    return cube;
}

namespace {

// Fisher-Yates with explicit draws; std::shuffle's sequence is not pinned.
void shuffle_indices(std::vector<std::int64_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

}  // namespace

DatasetSplit stratified_split(const std::vector<int>& labels, int per_class, std::uint64_t seed) {
    if (per_class < 1) throw_usage("per-class training count must be >= 1");
    int num_classes = 0;
    for (int id : labels) {
        if (id < 0) throw_format("label ids must be >= 0");
        num_classes = std::max(num_classes, id);
    }
    if (num_classes < 1) throw_usage("no labeled pixels to split");

    std::vector<std::vector<std::int64_t>> by_class(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 0) by_class[static_cast<std::size_t>(labels[i] - 1)].push_back(static_cast<std::int64_t>(i));

    DatasetSplit split;
    split.seed = seed;
    auto rng = make_rng(mix_seed(seed, 0));
    for (int c = 0; c < num_classes; ++c) {
        auto& idx = by_class[static_cast<std::size_t>(c)];
        if (static_cast<int>(idx.size()) < per_class + 1)
            throw_usage("class " + std::to_string(c + 1) + " has only " +
                        std::to_string(idx.size()) + " labeled samples; needs at least " +
                        std::to_string(per_class + 1));
        shuffle_indices(idx, rng);
        split.train_indices.insert(split.train_indices.end(), idx.begin(), idx.begin() + per_class);
        split.test_indices.insert(split.test_indices.end(), idx.begin() + per_class, idx.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

std::vector<std::int64_t> class_counts(const std::vector<int>& labels) {
    int num_classes = 0;
    for (int id : labels) {
        if (id < 0) throw_format("label ids must be >= 0");
        num_classes = std::max(num_classes, id);
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (int id : labels)
        if (id > 0) ++counts[static_cast<std::size_t>(id - 1)];
    return counts;
}

Matrix take_columns(const Matrix& x, const std::vector<std::int64_t>& indices) {
    Matrix out(x.rows(), static_cast<std::int64_t>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::int64_t src = indices[j];
        if (src < 0 || src >= x.cols())
            throw_dimension("column index " + std::to_string(src) + " out of range");
        out.col(static_cast<std::int64_t>(j)) = x.col(src);
    }
    return out;
}

LabelVector take_labels(const std::vector<int>& labels, const std::vector<std::int64_t>& indices) {
    std::vector<int> picked;
    picked.reserve(indices.size());
    for (std::int64_t i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= labels.size())
            throw_dimension("label index " + std::to_string(i) + " out of range");
        picked.push_back(labels[static_cast<std::size_t>(i)]);
    }
    return make_label_vector(std::move(picked));
}

}  // namespace rffhsi
