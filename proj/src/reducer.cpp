#include "rffhsi/reducer.hpp"

#include <chrono>

#include "rffhsi/classify.hpp"
#include "rffhsi/hsi.hpp"

namespace rffhsi {

ReducerMethod reducer_method_from_string(const std::string& name) {
    if (name == "ica") return ReducerMethod::ica;
    if (name == "kica") return ReducerMethod::kica;
    if (name == "rffica") return ReducerMethod::rffica;
    if (name == "lda") return ReducerMethod::lda;
    if (name == "gda") return ReducerMethod::gda;
    if (name == "rfflda") return ReducerMethod::rfflda;
    throw_usage("unknown method '" + name + "' (expected ica|kica|rffica|lda|gda|rfflda)");
}

std::string to_string(ReducerMethod method) {
    switch (method) {
        case ReducerMethod::ica: return "ica";
        case ReducerMethod::kica: return "kica";
        case ReducerMethod::rffica: return "rffica";
        case ReducerMethod::lda: return "lda";
        case ReducerMethod::gda: return "gda";
        case ReducerMethod::rfflda: return "rfflda";
    }
    return "unknown";
}

bool is_supervised(ReducerMethod method) {
    return method == ReducerMethod::lda || method == ReducerMethod::gda ||
           method == ReducerMethod::rfflda;
}

namespace {

bool uses_rff(ReducerMethod m) {
    return m == ReducerMethod::rffica || m == ReducerMethod::rfflda;
}

bool uses_landmarks(ReducerMethod m) {
    return m == ReducerMethod::kica || m == ReducerMethod::gda;
}

bool is_ica_family(ReducerMethod m) {
    return m == ReducerMethod::ica || m == ReducerMethod::kica || m == ReducerMethod::rffica;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ReducerModel fit_reducer(const ReducerSpec& spec, const Matrix& x, const LabelVector* labels) {
    if (spec.components < 1) throw_usage("component count must be >= 1");
    if (x.cols() < 1) throw_dimension("cannot fit on an empty sample matrix");
    if (is_supervised(spec.method)) {
        if (labels == nullptr) throw_usage(to_string(spec.method) + " requires labels at fit time");
        check_same_length(x, *labels);
    }

    const auto start = std::chrono::steady_clock::now();
    ReducerModel model;
    model.spec = spec;
    model.input_dim = static_cast<int>(x.rows());

    // One sigma per fit, shared by the rff and landmark stages.
    if (uses_rff(spec.method) || uses_landmarks(spec.method)) {
        if (spec.sigma) {
            if (!(*spec.sigma > 0.0)) throw_usage("sigma override must be positive");
            model.sigma_used = *spec.sigma;
        } else {
            const auto sigma_start = std::chrono::steady_clock::now();
            model.sigma_used =
                estimate_bandwidth(x, spec.max_pairs, spec.seed, spec.bandwidth_rule);
            model.sigma_seconds = seconds_since(sigma_start);
        }
        model.kernel.gamma = gamma_from_sigma(model.sigma_used);
    }

    Matrix stage1;
    const Matrix* features = &x;
    if (uses_rff(spec.method)) {
        const int d = static_cast<int>(x.rows());
        const int feature_count = spec.rff_features > 0 ? spec.rff_features : 2 * d;
        model.rff = sample_rff_map(d, feature_count, model.sigma_used, spec.seed);
        stage1 = apply_rff(*model.rff, x);
        features = &stage1;
    } else if (uses_landmarks(spec.method)) {
        model.landmarks = select_landmarks(x, spec.landmarks, spec.seed, model.kernel);
        model.kernel_centered = spec.centered_kernel == KernelCentering::automatic
                                    ? spec.method == ReducerMethod::gda
                                    : spec.centered_kernel == KernelCentering::on;
        stage1 = kernel_feature_map(x, *model.landmarks, model.kernel, model.kernel_centered);
        features = &stage1;
    }

    if (is_ica_family(spec.method)) {
        if (spec.components > features->rows())
            throw_usage("component count " + std::to_string(spec.components) +
                        " exceeds feature dimension " + std::to_string(features->rows()));
        auto [whitened, whitening] = center_whiten(*features, spec.components);
        model.ica = fastica_fit(whitened, whitening, spec.nonlinearity, spec.ica_tol,
                                spec.ica_max_iter, spec.seed);
    } else {
        const ScatterPair scatter = compute_scatter(*features, *labels);
        model.lda = solve_lda(scatter, spec.components, spec.lda_ridge);
    }
    model.fit_seconds = seconds_since(start);
    return model;
}

Matrix reducer_transform(const ReducerModel& model, const Matrix& x) {
    if (x.rows() != model.input_dim)
        throw_dimension("input dimension " + std::to_string(x.rows()) +
                        " does not match fitted dimension " + std::to_string(model.input_dim));
    const Matrix* features = &x;
    Matrix stage1;
    if (model.rff) {
        stage1 = apply_rff(*model.rff, x);
        features = &stage1;
    } else if (model.landmarks) {
        stage1 = kernel_feature_map(x, *model.landmarks, model.kernel, model.kernel_centered);
        features = &stage1;
    }
    if (model.ica) return ica_transform(*model.ica, *features);
    if (model.lda) return lda_transform(*model.lda, *features);
    throw_numeric("reducer model has no fitted projection stage");
}

GapResult approximation_gap(const Matrix& x, const std::vector<int>& labels,
                            const ReducerSpec& rff_spec, const ReducerSpec& kernel_spec,
                            int per_class, std::uint64_t split_seed, int knn_k) {
    if (rff_spec.components != kernel_spec.components)
        throw_usage("approximation gap needs matched component counts");
    const DatasetSplit split = stratified_split(labels, per_class, split_seed);
    const Matrix train_x = take_columns(x, split.train_indices);
    const Matrix test_x = take_columns(x, split.test_indices);
    const LabelVector train_labels = take_labels(labels, split.train_indices);
    const LabelVector test_labels = take_labels(labels, split.test_indices);

    auto accuracy_of = [&](const ReducerSpec& spec) {
        const ReducerModel model = is_supervised(spec.method)
                                       ? fit_reducer(spec, train_x, &train_labels)
                                       : fit_reducer(spec, x, nullptr);
        const Matrix train_features = reducer_transform(model, train_x);
        const Matrix test_features = reducer_transform(model, test_x);
        const std::vector<int> pred = knn_predict(train_features, train_labels, test_features, knn_k);
        std::int64_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == test_labels.ids[i]) ++correct;
        return 100.0 * static_cast<double>(correct) / static_cast<double>(pred.size());
    };

    GapResult result;
    result.rff_accuracy = accuracy_of(rff_spec);
    result.kernel_accuracy = accuracy_of(kernel_spec);
    return result;
}

}  // namespace rffhsi
