#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "rffhsi/hsi.hpp"
#include "support/synthetic.hpp"

using namespace rffhsi;

namespace {

HsiCube small_cube() {
    // 2x2 pixels, 3 bands; pixel (r, c) has spectrum {10*(2r+c), +1, +2}.
    HsiCube cube;
    cube.rows = 2;
    cube.cols = 2;
    cube.bands = 3;
    for (int p = 0; p < 4; ++p)
        for (int b = 0; b < 3; ++b) cube.values.push_back(10.0 * p + b);
    cube.labels = {1, 0, 2, 1};
    return cube;
}

}  // namespace

TEST_CASE("flatten_cube maps pixels to columns in row-major order") {
    const HsiCube cube = small_cube();
    const auto [samples, labels] = flatten_cube(cube);
    CHECK(samples.rows() == 3);
    CHECK(samples.cols() == 4);
    // pixel (0,0) becomes column 0
    CHECK(samples(0, 0) == 0.0);
    CHECK(samples(1, 0) == 1.0);
    CHECK(samples(2, 0) == 2.0);
    // pixel (1,0) is column 2 = 1*cols + 0
    CHECK(samples(0, 2) == 20.0);
    CHECK(labels == std::vector<int>{1, 0, 2, 1});
}

TEST_CASE("flatten then unflatten reproduces the cube bit-exactly") {
    HsiCube cube;
    cube.rows = 5;
    cube.cols = 7;
    cube.bands = 11;
    const Matrix values = testing::gaussian_matrix(11, 35, 99);
    cube.values.assign(values.size(), 0.0);
    for (int j = 0; j < 35; ++j)
        for (int b = 0; b < 11; ++b) cube.values[static_cast<std::size_t>(j) * 11 + b] = values(b, j);
    cube.labels.assign(35, 1);
    cube.labels[3] = 0;

    const auto [samples, labels] = flatten_cube(cube);
    const HsiCube back = unflatten_cube(samples, cube.rows, cube.cols, labels);
    CHECK(back.rows == cube.rows);
    CHECK(back.cols == cube.cols);
    CHECK(back.bands == cube.bands);
    CHECK(back.values == cube.values);
    CHECK(back.labels == cube.labels);
}

TEST_CASE("flatten_cube handles a Salinas-sized cube") {
    HsiCube cube;
    cube.rows = 512;
    cube.cols = 217;
    cube.bands = 204;
    cube.values.assign(static_cast<std::size_t>(512) * 217 * 204, 0.25);
    const auto [samples, labels] = flatten_cube(cube);
    CHECK(samples.rows() == 204);
    CHECK(samples.cols() == 111104);
    CHECK(labels.empty());
}

TEST_CASE("cube validation rejects non-finite values and bad shapes") {
    HsiCube cube = small_cube();
    cube.values[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cube.validate(), Error);

    HsiCube wrong = small_cube();
    wrong.values.pop_back();
    CHECK_THROWS_AS(wrong.validate(), Error);
}

TEST_CASE("stratified_split draws exactly per_class per class") {
    std::vector<int> labels;
    for (int i = 0; i < 2009; ++i) labels.push_back(1);
    for (int i = 0; i < 500; ++i) labels.push_back(2);
    for (int i = 0; i < 100; ++i) labels.push_back(0);  // background stays out

    const DatasetSplit split = stratified_split(labels, 100, 7);
    CHECK(split.train_indices.size() == 200);
    CHECK(split.test_indices.size() == 2009 - 100 + 500 - 100);

    std::int64_t class1_train = 0;
    for (std::int64_t idx : split.train_indices)
        if (labels[static_cast<std::size_t>(idx)] == 1) ++class1_train;
    CHECK(class1_train == 100);

    std::set<std::int64_t> train(split.train_indices.begin(), split.train_indices.end());
    for (std::int64_t idx : split.test_indices) CHECK(train.count(idx) == 0);
    for (std::int64_t idx : split.train_indices)
        CHECK(labels[static_cast<std::size_t>(idx)] != 0);
}

TEST_CASE("stratified_split needs at least one test sample per class") {
    std::vector<int> labels(50, 1);
    CHECK_THROWS_AS(stratified_split(labels, 50, 0), Error);
    CHECK_NOTHROW(stratified_split(labels, 49, 0));
}

TEST_CASE("stratified_split is deterministic per seed") {
    std::vector<int> labels;
    for (int i = 0; i < 300; ++i) labels.push_back(1 + i % 3);

    const DatasetSplit a = stratified_split(labels, 20, 42);
    const DatasetSplit b = stratified_split(labels, 20, 42);
    const DatasetSplit c = stratified_split(labels, 20, 43);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);
    CHECK(a.train_indices != c.train_indices);
}

TEST_CASE("class_counts tallies labeled pixels only") {
    CHECK(class_counts({1, 1, 1, 1, 1}) == std::vector<std::int64_t>{5});
    CHECK(class_counts({0, 1, 2, 2, 0}) == std::vector<std::int64_t>{1, 2});

    std::vector<std::int64_t> counts = class_counts({1, 2, 3, 2, 0});
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    CHECK(total == 4);
}

TEST_CASE("take_columns and take_labels select consistently") {
    const Matrix x = testing::gaussian_matrix(4, 10, 1);
    const std::vector<int> labels = {1, 2, 1, 2, 1, 2, 1, 2, 1, 2};
    const std::vector<std::int64_t> picks = {0, 3, 8};
    const Matrix sub = take_columns(x, picks);
    CHECK(sub.cols() == 3);
    CHECK(sub.col(1) == x.col(3));
    const LabelVector sublabels = take_labels(labels, picks);
    CHECK(sublabels.ids == std::vector<int>{1, 2, 1});
    CHECK(sublabels.num_classes == 2);
}

TEST_CASE("make_label_vector validates contiguous class coverage") {
    CHECK(make_label_vector({1, 2, 3}).num_classes == 3);
    CHECK_THROWS_AS(make_label_vector({1, 3}), Error);  // class 2 missing
    CHECK_THROWS_AS(make_label_vector({0, 1}), Error);  // background not allowed here
    CHECK_THROWS_AS(make_label_vector({}), Error);
}
