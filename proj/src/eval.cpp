#include "rffhsi/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rffhsi {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ScoreResult score(const std::vector<int>& predictions, const LabelVector& truth) {
    if (predictions.size() != truth.ids.size())
        throw_dimension("prediction count " + std::to_string(predictions.size()) +
                        " does not match truth count " + std::to_string(truth.ids.size()));
    if (predictions.empty()) throw_dimension("cannot score an empty prediction set");

    const int num_classes = truth.num_classes;
    ScoreResult result;
    result.confusion.counts =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(num_classes, num_classes);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int t = truth.ids[i];
        const int p = predictions[i];
        if (p < 1 || p > num_classes)
            throw_format("prediction " + std::to_string(p) + " outside 1.." +
                         std::to_string(num_classes));
        ++result.confusion.counts(t - 1, p - 1);
    }

    const auto total = result.confusion.total();
    result.overall = 100.0 * static_cast<double>(result.confusion.counts.trace()) /
                     static_cast<double>(total);
    result.per_class.resize(static_cast<std::size_t>(num_classes));
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        const auto row_sum = result.confusion.counts.row(c).sum();
        result.per_class[static_cast<std::size_t>(c)] =
            100.0 * static_cast<double>(result.confusion.counts(c, c)) /
            static_cast<double>(row_sum);
        sum += result.per_class[static_cast<std::size_t>(c)];
    }
    result.average = sum / static_cast<double>(num_classes);
    return result;
}

SingleRun run_protocol_once(const Matrix& x, const std::vector<int>& labels,
                            const ProtocolSpec& spec, std::uint64_t split_seed) {
    const DatasetSplit split = stratified_split(labels, spec.per_class, split_seed);
    const Matrix train_x = take_columns(x, split.train_indices);
    const Matrix test_x = take_columns(x, split.test_indices);
    const LabelVector train_labels = take_labels(labels, split.train_indices);
    const LabelVector test_labels = take_labels(labels, split.test_indices);

    SingleRun run;
    run.result.split_seed = split_seed;

    ReducerSpec reducer_spec = spec.reducer;
    reducer_spec.seed = split_seed;
    const bool supervised = is_supervised(reducer_spec.method);
    bool fit_on_train = supervised;
    if (spec.fit_scope == ProtocolSpec::FitScope::all) fit_on_train = false;
    if (spec.fit_scope == ProtocolSpec::FitScope::train) fit_on_train = true;
    if (supervised && !fit_on_train)
        throw_usage("supervised reducers fit on the training pixels; --fit-scope all is invalid");

    run.reducer = fit_on_train ? fit_reducer(reducer_spec, train_x, &train_labels)
                               : fit_reducer(reducer_spec, x, nullptr);
    run.reducer.fit_scope = fit_on_train ? "train" : "all";
    run.result.sigma_used = run.reducer.sigma_used;
    run.result.fit_seconds = run.reducer.fit_seconds;
    run.result.sigma_seconds = run.reducer.sigma_seconds;

    const auto classify_start = std::chrono::steady_clock::now();
    const Matrix train_features = reducer_transform(run.reducer, train_x);
    const Matrix test_features = reducer_transform(run.reducer, test_x);

    std::vector<int> predictions;
    switch (spec.classifier.kind) {
        case ClassifierSpec::Kind::svm_grid: {
            const auto& costs = spec.classifier.cost_grid.empty() ? default_cost_grid()
                                                                  : spec.classifier.cost_grid;
            const auto& gammas = spec.classifier.gamma_grid.empty() ? default_gamma_grid()
                                                                    : spec.classifier.gamma_grid;
            const GridSearchResult grid =
                grid_search_cv(train_features, train_labels, costs, gammas,
                               spec.classifier.folds, split_seed, spec.classifier.svm_options);
            run.result.best_cost = grid.best_cost;
            run.result.best_gamma = grid.best_gamma;
            run.svm = svm_train_multiclass(train_features, train_labels, grid.best_cost,
                                           KernelParams{grid.best_gamma},
                                           spec.classifier.svm_options);
            predictions = svm_predict(run.svm, test_features);
            break;
        }
        case ClassifierSpec::Kind::svm: {
            run.result.best_cost = spec.classifier.cost;
            run.result.best_gamma = spec.classifier.gamma;
            run.svm = svm_train_multiclass(train_features, train_labels, spec.classifier.cost,
                                           KernelParams{spec.classifier.gamma},
                                           spec.classifier.svm_options);
            predictions = svm_predict(run.svm, test_features);
            break;
        }
        case ClassifierSpec::Kind::knn: {
            run.train_features = train_features;
            run.knn_train_labels = train_labels.ids;
            predictions = knn_predict(train_features, train_labels, test_features,
                                      spec.classifier.knn_k);
            break;
        }
    }
    run.result.classify_seconds = seconds_since(classify_start);
    run.result.scores = score(predictions, test_labels);
    return run;
}

EvalReport run_protocol(const HsiCube& cube, const ProtocolSpec& spec) {
    if (spec.runs < 1) throw_usage("runs must be >= 1");
    auto [x, labels] = flatten_cube(cube);
    if (labels.empty()) throw_usage("the protocol needs ground-truth labels");

    EvalReport report;
    for (int r = 0; r < spec.runs; ++r) {
        SingleRun run = run_protocol_once(x, labels, spec, spec.seed + static_cast<std::uint64_t>(r));
        report.runs.push_back(std::move(run.result));
    }

    const auto num_runs = static_cast<double>(report.runs.size());
    const std::size_t num_classes = report.runs.front().scores.per_class.size();
    report.per_class.assign(num_classes, 0.0);
    for (const auto& run : report.runs) {
        report.overall_accuracy += run.scores.overall;
        report.fit_seconds += run.fit_seconds;
        report.classify_seconds += run.classify_seconds;
        for (std::size_t c = 0; c < num_classes; ++c)
            report.per_class[c] += run.scores.per_class[c];
    }
    report.overall_accuracy /= num_runs;
    report.fit_seconds /= num_runs;
    report.classify_seconds /= num_runs;
    double sum = 0.0;
    for (auto& v : report.per_class) {
        v /= num_runs;
        sum += v;
    }
    report.average_accuracy = sum / static_cast<double>(num_classes);
    return report;
}

const std::vector<Rgb>& default_palette() {
    static const std::vector<Rgb> palette = {
        Rgb{0, 0, 0},        // background
        Rgb{140, 67, 46},    Rgb{0, 0, 255},      Rgb{255, 100, 0},   Rgb{0, 255, 123},
        Rgb{164, 75, 155},   Rgb{101, 174, 255},  Rgb{118, 254, 172}, Rgb{60, 91, 112},
        Rgb{255, 255, 0},    Rgb{255, 255, 125},  Rgb{255, 0, 255},   Rgb{100, 0, 255},
        Rgb{0, 172, 254},    Rgb{0, 255, 0},      Rgb{171, 175, 80},  Rgb{101, 193, 60},
    };
    return palette;
}

Image render_map(const HsiCube& cube, const std::vector<int>& predictions,
                 const std::vector<Rgb>& palette) {
    if (predictions.size() != static_cast<std::size_t>(cube.pixel_count()))
        throw_dimension("prediction vector must cover every pixel");
    int max_label = 0;
    for (int p : predictions) {
        if (p < 0) throw_format("negative class id in prediction vector");
        max_label = std::max(max_label, p);
    }
    if (static_cast<std::size_t>(max_label) + 1 > palette.size())
        throw_usage("palette has " + std::to_string(palette.size()) + " colors but class " +
                    std::to_string(max_label) + " is present");

    Image image;
    image.width = cube.cols;
    image.height = cube.rows;
    image.rgb.resize(static_cast<std::size_t>(cube.pixel_count()) * 3);
    for (std::size_t p = 0; p < predictions.size(); ++p) {
        const Rgb& color = palette[static_cast<std::size_t>(predictions[p])];
        image.rgb[p * 3 + 0] = color[0];
        image.rgb[p * 3 + 1] = color[1];
        image.rgb[p * 3 + 2] = color[2];
    }
    return image;
}

TimingTable benchmark_timing(const Matrix& x, const LabelVector* labels,
                             const std::vector<ReducerMethod>& methods,
                             const std::vector<int>& component_counts,
                             const ReducerSpec& base_spec, int repeats) {
    if (repeats < 1) throw_usage("repeats must be >= 1");
    TimingTable table;
    table.methods = methods;
    table.components = component_counts;
    for (ReducerMethod method : methods) {
        for (int components : component_counts) {
            ReducerSpec spec = base_spec;
            spec.method = method;
            spec.components = components;
            std::vector<double> fit_times, sigma_times;
            for (int r = 0; r < repeats; ++r) {
                const ReducerModel model =
                    fit_reducer(spec, x, is_supervised(method) ? labels : nullptr);
                fit_times.push_back(model.fit_seconds);
                sigma_times.push_back(model.sigma_seconds);
            }
            TimingCell cell;
            cell.method = method;
            cell.components = components;
            cell.fit_seconds = median_of(fit_times);
            cell.sigma_seconds = median_of(sigma_times);
            table.cells.push_back(cell);
        }
    }
    return table;
}

std::vector<CurvePoint> sweep_rff_features(const HsiCube& cube, const ProtocolSpec& spec,
                                           const std::vector<int>& feature_counts) {
    if (feature_counts.empty()) throw_usage("feature-count list must be nonempty");
    std::vector<CurvePoint> curve;
    for (int count : feature_counts) {
        ProtocolSpec point_spec = spec;
        point_spec.reducer.rff_features = count;
        const EvalReport report = run_protocol(cube, point_spec);
        curve.push_back({static_cast<double>(count), report.overall_accuracy});
    }
    return curve;
}

std::vector<CurvePoint> sweep_bandwidth(const HsiCube& cube, const ProtocolSpec& spec,
                                        const std::vector<double>& sigmas) {
    if (sigmas.empty()) throw_usage("sigma list must be nonempty");
    std::vector<CurvePoint> curve;
    for (double sigma : sigmas) {
        if (!(sigma > 0.0)) throw_usage("swept sigma values must be positive");
        ProtocolSpec point_spec = spec;
        point_spec.reducer.sigma = sigma;
        const EvalReport report = run_protocol(cube, point_spec);
        curve.push_back({sigma, report.overall_accuracy});
    }
    return curve;
}

}  // namespace rffhsi
