#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "rffhsi/classify.hpp"
#include "rffhsi/hsi.hpp"
#include "rffhsi/model_io.hpp"
#include "rffhsi/reducer.hpp"
#include "support/synthetic.hpp"
#include "support/temp.hpp"

using namespace rffhsi;

TEST_CASE("fit dispatches to the right stage structure") {
    const auto [x, ids] = testing::gaussian_blobs(12, 3, 80, 2.0, 1);
    const LabelVector labels = make_label_vector(ids);

    SUBCASE("rffica defaults to D = 2d") {
        ReducerSpec spec;
        spec.method = ReducerMethod::rffica;
        spec.components = 5;
        spec.seed = 3;
        const ReducerModel model = fit_reducer(spec, x);
        REQUIRE(model.rff.has_value());
        CHECK(model.rff->feature_count() == 24);
        CHECK(model.ica.has_value());
        CHECK_FALSE(model.lda.has_value());
        CHECK(model.sigma_used > 0.0);
        CHECK(reducer_transform(model, x).rows() == 5);
    }

    SUBCASE("kica uses the requested landmark budget") {
        ReducerSpec spec;
        spec.method = ReducerMethod::kica;
        spec.components = 4;
        spec.landmarks = 50;
        spec.seed = 3;
        const ReducerModel model = fit_reducer(spec, x);
        REQUIRE(model.landmarks.has_value());
        CHECK(model.landmarks->count() == 50);
        CHECK_FALSE(model.kernel_centered);  // ica whitening centers anyway
        CHECK(model.ica.has_value());
    }

    SUBCASE("gda centers the kernel map by default") {
        ReducerSpec spec;
        spec.method = ReducerMethod::gda;
        spec.components = 2;
        spec.landmarks = 50;
        const ReducerModel model = fit_reducer(spec, x, &labels);
        CHECK(model.kernel_centered);
        CHECK(model.lda.has_value());
    }

    SUBCASE("lda rejects q = C") {
        ReducerSpec spec;
        spec.method = ReducerMethod::lda;
        spec.components = 3;  // C = 3 so cap is 2
        CHECK_THROWS_AS(fit_reducer(spec, x, &labels), Error);
    }

    SUBCASE("supervised methods require labels") {
        ReducerSpec spec;
        spec.method = ReducerMethod::rfflda;
        spec.components = 2;
        CHECK_THROWS_AS(fit_reducer(spec, x, nullptr), Error);
    }
}

TEST_CASE("ica transform equals W(X - mean)") {
    const Matrix x = testing::gaussian_matrix(6, 3000, 5);
    ReducerSpec spec;
    spec.method = ReducerMethod::ica;
    spec.components = 4;
    const ReducerModel model = fit_reducer(spec, x);
    const Matrix direct =
        model.ica->unmixing * (x.colwise() - model.ica->whitening.mean);
    CHECK((reducer_transform(model, x) - direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("transform of an empty matrix keeps the component count") {
    const Matrix x = testing::gaussian_matrix(5, 200, 6);
    ReducerSpec spec;
    spec.method = ReducerMethod::ica;
    spec.components = 3;
    const ReducerModel model = fit_reducer(spec, x);
    const Matrix empty = reducer_transform(model, Matrix(5, 0));
    CHECK(empty.rows() == 3);
    CHECK(empty.cols() == 0);
}

TEST_CASE("rfflda separates concentric circles where linear lda cannot") {
    const auto [x, ids] = testing::concentric_circles(500, 0.1, 9);

    ReducerSpec rfflda;
    rfflda.method = ReducerMethod::rfflda;
    rfflda.components = 1;
    rfflda.rff_features = 256;
    rfflda.seed = 1;

    ReducerSpec lda = rfflda;
    lda.method = ReducerMethod::lda;

    double rfflda_accuracy = 0.0, lda_accuracy = 0.0;
    const int seeds = 3;
    for (int s = 0; s < seeds; ++s) {
        const DatasetSplit split = stratified_split(ids, 100, static_cast<std::uint64_t>(s));
        const Matrix train_x = take_columns(x, split.train_indices);
        const Matrix test_x = take_columns(x, split.test_indices);
        const LabelVector train_labels = take_labels(ids, split.train_indices);
        const LabelVector test_labels = take_labels(ids, split.test_indices);

        auto knn_accuracy = [&](ReducerSpec spec) {
            spec.seed = static_cast<std::uint64_t>(s);
            const ReducerModel model = fit_reducer(spec, train_x, &train_labels);
            const std::vector<int> pred =
                knn_predict(reducer_transform(model, train_x), train_labels,
                            reducer_transform(model, test_x), 1);
            std::int64_t correct = 0;
            for (std::size_t i = 0; i < pred.size(); ++i)
                if (pred[i] == test_labels.ids[i]) ++correct;
            return 100.0 * static_cast<double>(correct) / static_cast<double>(pred.size());
        };
        rfflda_accuracy += knn_accuracy(rfflda);
        lda_accuracy += knn_accuracy(lda);
    }
    rfflda_accuracy /= seeds;
    lda_accuracy /= seeds;
    CHECK(rfflda_accuracy >= 95.0);
    CHECK(lda_accuracy <= 65.0);
}

TEST_CASE("transform after fit reproduces the fit-time features byte-for-byte") {
    const auto [x, ids] = testing::gaussian_blobs(10, 3, 200, 2.0, 13);
    const LabelVector labels = make_label_vector(ids);

    for (ReducerMethod method : {ReducerMethod::rffica, ReducerMethod::gda}) {
        ReducerSpec spec;
        spec.method = method;
        spec.components = 2;
        spec.landmarks = 64;
        spec.seed = 21;
        const ReducerModel model = is_supervised(method) ? fit_reducer(spec, x, &labels)
                                                          : fit_reducer(spec, x);
        // the fit path and the transform path must not skew: stage-1 maps are
        // reapplied, so projecting a 500-column subset twice is bit-identical
        const Matrix subset = x.leftCols(std::min<std::int64_t>(500, x.cols()));
        const Matrix once = reducer_transform(model, subset);
        const Matrix twice = reducer_transform(model, subset);
        CHECK(std::memcmp(once.data(), twice.data(),
                          sizeof(double) * static_cast<std::size_t>(once.size())) == 0);
    }
}

TEST_CASE("row counts never exceed the component caps") {
    const auto [x, ids] = testing::gaussian_blobs(9, 4, 60, 2.0, 17);
    const LabelVector labels = make_label_vector(ids);

    for (ReducerMethod method : {ReducerMethod::ica, ReducerMethod::kica, ReducerMethod::rffica,
                                 ReducerMethod::lda, ReducerMethod::gda, ReducerMethod::rfflda}) {
        ReducerSpec spec;
        spec.method = method;
        spec.components = is_supervised(method) ? 3 : 6;  // C-1 = 3
        spec.landmarks = 40;
        spec.rff_features = 32;
        spec.seed = 2;
        const ReducerModel model = is_supervised(method) ? fit_reducer(spec, x, &labels)
                                                          : fit_reducer(spec, x);
        const Matrix projected = reducer_transform(model, x);
        CHECK(projected.rows() == spec.components);
        CHECK(projected.cols() == x.cols());
    }
}

TEST_CASE("save/load round trip transforms bit-identically") {
    const auto [x, ids] = testing::gaussian_blobs(8, 3, 100, 2.0, 23);
    const LabelVector labels = make_label_vector(ids);
    const testing::TempDir dir;

    for (ReducerMethod method : {ReducerMethod::ica, ReducerMethod::rffica, ReducerMethod::kica,
                                 ReducerMethod::lda, ReducerMethod::rfflda, ReducerMethod::gda}) {
        ReducerSpec spec;
        spec.method = method;
        spec.components = 2;
        spec.landmarks = 32;
        spec.seed = 9;
        const ReducerModel model = is_supervised(method) ? fit_reducer(spec, x, &labels)
                                                          : fit_reducer(spec, x);
        const Matrix before = reducer_transform(model, x);

        const std::string path = dir.file(to_string(method) + ".bin");
        save_reducer(path, model);
        const ReducerModel loaded = load_reducer(path);
        const Matrix after = reducer_transform(loaded, x);

        REQUIRE(after.rows() == before.rows());
        CHECK(std::memcmp(before.data(), after.data(),
                          sizeof(double) * static_cast<std::size_t>(before.size())) == 0);

        // a second save of the loaded model writes identical bytes
        const std::string path2 = dir.file(to_string(method) + "_again.bin");
        save_reducer(path2, loaded);
        std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
        const std::string bytes1((std::istreambuf_iterator<char>(f1)),
                                 std::istreambuf_iterator<char>());
        const std::string bytes2((std::istreambuf_iterator<char>(f2)),
                                 std::istreambuf_iterator<char>());
        CHECK(bytes1 == bytes2);
    }
}

TEST_CASE("approximation gap of identical specs is exactly zero") {
    const auto [x, ids] = testing::gaussian_blobs(6, 3, 150, 2.5, 31);
    ReducerSpec spec;
    spec.method = ReducerMethod::rffica;
    spec.components = 3;
    spec.seed = 4;
    const GapResult gap = approximation_gap(x, ids, spec, spec, 40, 11, 1);
    CHECK(gap.gap() == 0.0);
    CHECK(gap.rff_accuracy > 0.0);
}

TEST_CASE("rfflda vs gda gap stays small on circles") {
    const auto [x, ids] = testing::concentric_circles(250, 0.1, 77);

    ReducerSpec rfflda;
    rfflda.method = ReducerMethod::rfflda;
    rfflda.components = 1;
    rfflda.rff_features = 1024;

    ReducerSpec gda = rfflda;
    gda.method = ReducerMethod::gda;
    gda.landmarks = 200;

    double gap_sum = 0.0;
    const int seeds = 5;
    for (int s = 0; s < seeds; ++s) {
        ReducerSpec a = rfflda, b = gda;
        a.seed = b.seed = static_cast<std::uint64_t>(s);
        gap_sum += approximation_gap(x, ids, a, b, 80, static_cast<std::uint64_t>(s), 1).gap();
    }
    CHECK(std::abs(gap_sum / seeds) <= 5.0);
}
