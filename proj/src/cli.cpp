#include "rffhsi/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rffhsi/eval.hpp"
#include "rffhsi/io.hpp"
#include "rffhsi/model_io.hpp"
#include "rffhsi/npy.hpp"
#include "rffhsi/threading.hpp"

namespace rffhsi {

namespace {

std::string format_double(double value, const char* fmt = "%.6f") {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), fmt, value);
    return buffer;
}

// Everything a pipeline invocation needs, validated before any compute.
struct RunConfig {
    std::string data_path;
    std::string labels_path;
    std::string out_dir;
    ReducerSpec reducer;
    ClassifierSpec classifier;
    int per_class = 100;
    int runs = 5;
    std::uint64_t seed = 0;
    std::string fit_scope = "auto";

    void validate(bool need_data, bool need_labels) const {
        namespace fs = std::filesystem;
        if (need_data && !fs::exists(data_path))
            throw_io("data file '" + data_path + "' does not exist");
        if (need_labels && labels_path.empty())
            throw_usage("this command requires --labels");
        if (!labels_path.empty() && !fs::exists(labels_path))
            throw_io("labels file '" + labels_path + "' does not exist");
        if (reducer.components < 1) throw_usage("--components must be >= 1");
        if (reducer.landmarks < 2) throw_usage("--landmarks must be >= 2");
        if (reducer.rff_features < 0) throw_usage("--rff-features must be >= 0");
        if (reducer.max_pairs < 1) throw_usage("--max-pairs must be >= 1");
        if (per_class < 1) throw_usage("--per-class must be >= 1");
        if (runs < 1) throw_usage("--runs must be >= 1");
        if (classifier.folds < 2) throw_usage("--folds must be >= 2");
        if (classifier.knn_k < 1) throw_usage("--knn-k must be >= 1");
        if (reducer.sigma && !(*reducer.sigma > 0.0)) throw_usage("--sigma must be positive");
        if (fit_scope != "auto" && fit_scope != "all" && fit_scope != "train" &&
            fit_scope != "labeled")
            throw_usage("--fit-scope must be auto, all, train, or labeled");
    }
};

std::vector<double> grid_from_exponents(const std::vector<int>& exponents) {
    std::vector<double> grid;
    for (int e : exponents) grid.push_back(std::ldexp(1.0, e));
    return grid;
}

struct CommonFlags {
    std::string method = "rffica";
    double sigma = 0.0;
    int threads = 0;
    std::string bandwidth_rule = "mean-squared";
    std::string centered_kernel = "auto";
    std::string nonlinearity = "logcosh";
    std::vector<int> cost_exponents;
    std::vector<int> gamma_exponents;
    std::string classifier_kind = "svm-grid";
};

void add_reducer_flags(CLI::App* cmd, RunConfig& config, CommonFlags& flags,
                       bool with_components = true) {
    cmd->add_option("--method", flags.method, "ica|kica|rffica|lda|gda|rfflda")
        ->default_val(flags.method);
    if (with_components)
        cmd->add_option("--components", config.reducer.components,
                        "Number of extracted components")
            ->default_val(config.reducer.components);
    cmd->add_option("--rff-features", config.reducer.rff_features,
                    "RFF feature count D (0 = 2*bands)");
    cmd->add_option("--landmarks", config.reducer.landmarks, "Landmark count for kica/gda")
        ->default_val(config.reducer.landmarks);
    cmd->add_option("--sigma", flags.sigma, "Bandwidth override (0 = estimate from data)");
    cmd->add_option("--bandwidth-rule", flags.bandwidth_rule,
                    "mean-squared | mean pairwise distance");
    cmd->add_option("--max-pairs", config.reducer.max_pairs,
                    "Pair budget for bandwidth estimation")
        ->default_val(config.reducer.max_pairs);
    cmd->add_option("--centered-kernel", flags.centered_kernel, "auto|on|off");
    cmd->add_option("--nonlinearity", flags.nonlinearity, "logcosh|cube");
    cmd->add_option("--ica-tol", config.reducer.ica_tol, "FastICA convergence tolerance");
    cmd->add_option("--ica-max-iter", config.reducer.ica_max_iter, "FastICA iteration cap");
    cmd->add_option("--lda-ridge", config.reducer.lda_ridge, "LDA ridge coefficient");
}

void add_classifier_flags(CLI::App* cmd, RunConfig& config, CommonFlags& flags) {
    cmd->add_option("--classifier", flags.classifier_kind, "svm-grid|svm|knn");
    cmd->add_option("--cost-exp", flags.cost_exponents, "Cost grid exponents (C = 2^a)")
        ->delimiter(',');
    cmd->add_option("--gamma-exp", flags.gamma_exponents, "Gamma grid exponents (gamma = 2^b)")
        ->delimiter(',');
    cmd->add_option("--folds", config.classifier.folds, "Cross-validation folds")
        ->default_val(config.classifier.folds);
    cmd->add_option("--svm-cost", config.classifier.cost, "Fixed cost for --classifier svm");
    cmd->add_option("--svm-gamma", config.classifier.gamma, "Fixed gamma for --classifier svm");
    cmd->add_option("--knn-k", config.classifier.knn_k, "Neighbors for --classifier knn");
    cmd->add_option("--svm-cache-mb", config.classifier.svm_options.cache_mb,
                    "Kernel row cache budget (MiB)");
}

void resolve_flags(RunConfig& config, const CommonFlags& flags) {
    config.reducer.method = reducer_method_from_string(flags.method);
    if (flags.sigma != 0.0) config.reducer.sigma = flags.sigma;
    if (flags.bandwidth_rule == "mean-squared")
        config.reducer.bandwidth_rule = BandwidthRule::mean_squared_distance;
    else if (flags.bandwidth_rule == "mean")
        config.reducer.bandwidth_rule = BandwidthRule::mean_distance;
    else
        throw_usage("--bandwidth-rule must be mean-squared or mean");
    if (flags.centered_kernel == "auto")
        config.reducer.centered_kernel = KernelCentering::automatic;
    else if (flags.centered_kernel == "on")
        config.reducer.centered_kernel = KernelCentering::on;
    else if (flags.centered_kernel == "off")
        config.reducer.centered_kernel = KernelCentering::off;
    else
        throw_usage("--centered-kernel must be auto, on, or off");
    if (flags.nonlinearity == "logcosh")
        config.reducer.nonlinearity = IcaNonlinearity::logcosh;
    else if (flags.nonlinearity == "cube")
        config.reducer.nonlinearity = IcaNonlinearity::cube;
    else
        throw_usage("--nonlinearity must be logcosh or cube");
    if (!flags.cost_exponents.empty())
        config.classifier.cost_grid = grid_from_exponents(flags.cost_exponents);
    if (!flags.gamma_exponents.empty())
        config.classifier.gamma_grid = grid_from_exponents(flags.gamma_exponents);
    if (flags.classifier_kind == "svm-grid")
        config.classifier.kind = ClassifierSpec::Kind::svm_grid;
    else if (flags.classifier_kind == "svm")
        config.classifier.kind = ClassifierSpec::Kind::svm;
    else if (flags.classifier_kind == "knn")
        config.classifier.kind = ClassifierSpec::Kind::knn;
    else
        throw_usage("--classifier must be svm-grid, svm, or knn");
    if (flags.threads < 0) throw_usage("--threads must be >= 0");
    set_worker_threads(flags.threads);
}

ProtocolSpec::FitScope protocol_scope(const std::string& scope) {
    if (scope == "all") return ProtocolSpec::FitScope::all;
    if (scope == "train" || scope == "labeled") return ProtocolSpec::FitScope::train;
    return ProtocolSpec::FitScope::automatic;
}

// ---------------------------------------------------------------- reduce --

int run_reduce(RunConfig& config, const CommonFlags& flags, const std::string& out_model,
               const std::string& out_features) {
    resolve_flags(config, flags);
    const bool supervised = is_supervised(config.reducer.method);
    config.validate(true, supervised);
    if (out_model.empty() && out_features.empty())
        throw_usage("reduce needs --out-model and/or --out-features");

    const HsiCube cube = load_cube(config.data_path, config.labels_path);
    auto [x, labels] = flatten_cube(cube);
    config.reducer.seed = config.seed;

    ReducerModel model;
    if (supervised || config.fit_scope == "labeled" || config.fit_scope == "train") {
        if (labels.empty()) throw_usage("--fit-scope labeled requires --labels");
        std::vector<std::int64_t> labeled;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] > 0) labeled.push_back(static_cast<std::int64_t>(i));
        if (labeled.empty()) throw_usage("no labeled pixels found");
        const Matrix fit_x = take_columns(x, labeled);
        const LabelVector fit_labels = take_labels(labels, labeled);
        model = fit_reducer(config.reducer, fit_x, supervised ? &fit_labels : nullptr);
        model.fit_scope = "labeled";
    } else {
        model = fit_reducer(config.reducer, x, nullptr);
        model.fit_scope = "all";
    }

    if (!out_model.empty()) save_reducer(out_model, model);
    if (!out_features.empty()) save_matrix(out_features, reducer_transform(model, x));

    std::cout << "method=" << to_string(config.reducer.method)
              << " components=" << config.reducer.components << " pixels=" << x.cols()
              << " bands=" << x.rows();
    if (model.sigma_used > 0.0) std::cout << " sigma=" << format_double(model.sigma_used, "%.9g");
    std::cout << " fit_seconds=" << format_double(model.fit_seconds, "%.3f") << "\n";
    return 0;
}

// -------------------------------------------------------------- classify --

int run_classify(RunConfig& config, const CommonFlags& flags, const std::string& features_path,
                 const std::string& out_predictions, const std::string& out_model) {
    resolve_flags(config, flags);
    namespace fs = std::filesystem;
    if (!fs::exists(features_path)) throw_io("features file '" + features_path + "' does not exist");
    config.data_path = features_path;
    config.validate(false, true);

    const Matrix features = load_matrix(features_path);
    const LabelGrid grid = load_labels_csv(config.labels_path);
    if (static_cast<std::int64_t>(grid.values.size()) != features.cols())
        throw_dimension("label grid covers " + std::to_string(grid.values.size()) +
                        " pixels but features have " + std::to_string(features.cols()) +
                        " columns");

    const DatasetSplit split = stratified_split(grid.values, config.per_class, config.seed);
    const Matrix train_x = take_columns(features, split.train_indices);
    const LabelVector train_labels = take_labels(grid.values, split.train_indices);

    double cost = config.classifier.cost;
    double gamma = config.classifier.gamma;
    if (config.classifier.kind == ClassifierSpec::Kind::svm_grid) {
        const auto& costs = config.classifier.cost_grid.empty() ? default_cost_grid()
                                                                : config.classifier.cost_grid;
        const auto& gammas = config.classifier.gamma_grid.empty() ? default_gamma_grid()
                                                                  : config.classifier.gamma_grid;
        const GridSearchResult result =
            grid_search_cv(train_x, train_labels, costs, gammas, config.classifier.folds,
                           config.seed, config.classifier.svm_options);
        cost = result.best_cost;
        gamma = result.best_gamma;
        std::cout << "best_cost=" << format_double(cost, "%.9g")
                  << " best_gamma=" << format_double(gamma, "%.9g") << " cv_accuracy="
                  << format_double(result.cv_accuracy.maxCoeff(), "%.4f") << "\n";
    }

    std::vector<int> predictions;
    if (config.classifier.kind == ClassifierSpec::Kind::knn) {
        predictions = knn_predict(train_x, train_labels, features, config.classifier.knn_k);
    } else {
        const SvmMulticlassModel svm = svm_train_multiclass(
            train_x, train_labels, cost, KernelParams{gamma}, config.classifier.svm_options);
        predictions = svm_predict(svm, features);
        if (!out_model.empty()) save_svm(out_model, svm);
    }

    const LabelVector test_labels = take_labels(grid.values, split.test_indices);
    std::vector<int> test_pred;
    for (std::int64_t idx : split.test_indices)
        test_pred.push_back(predictions[static_cast<std::size_t>(idx)]);
    const ScoreResult result = score(test_pred, test_labels);
    std::cout << "test_overall=" << format_double(result.overall, "%.4f")
              << " test_average=" << format_double(result.average, "%.4f") << "\n";

    if (!out_predictions.empty()) {
        std::vector<std::int32_t> out(predictions.begin(), predictions.end());
        save_array_int(out_predictions, {out.size()}, out);
    }
    return 0;
}

// -------------------------------------------------------------- evaluate --

std::string report_csv_text(const EvalReport& report) {
    std::ostringstream out;
    const std::size_t num_classes = report.per_class.size();
    out << "run,seed,overall,average,best_cost,best_gamma";
    for (std::size_t c = 1; c <= num_classes; ++c) out << ",class_" << c;
    out << "\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r) {
        const RunResult& run = report.runs[r];
        out << (r + 1) << "," << run.split_seed << "," << format_double(run.scores.overall, "%.4f")
            << "," << format_double(run.scores.average, "%.4f");
        if (run.best_cost > 0.0)
            out << "," << format_double(run.best_cost, "%.9g") << ","
                << format_double(run.best_gamma, "%.9g");
        else
            out << ",,";
        for (double v : run.scores.per_class) out << "," << format_double(v, "%.4f");
        out << "\n";
    }
    out << "mean,," << format_double(report.overall_accuracy, "%.4f") << ","
        << format_double(report.average_accuracy, "%.4f") << ",,";
    for (double v : report.per_class) out << "," << format_double(v, "%.4f");
    out << "\n";
    return out.str();
}

std::string report_table_text(const EvalReport& report, const RunConfig& config) {
    std::ostringstream out;
    out << "method: " << to_string(config.reducer.method)
        << "  components: " << config.reducer.components << "  per-class: " << config.per_class
        << "  runs: " << config.runs << "  seed: " << config.seed << "\n\n";

    char line[256];
    std::snprintf(line, sizeof(line), "%-10s", "class");
    out << line;
    for (std::size_t r = 1; r <= report.runs.size(); ++r) {
        std::snprintf(line, sizeof(line), "%10s", ("run" + std::to_string(r)).c_str());
        out << line;
    }
    out << "      mean\n";
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        std::snprintf(line, sizeof(line), "%-10zu", c + 1);
        out << line;
        for (const RunResult& run : report.runs) {
            std::snprintf(line, sizeof(line), "%10.2f", run.scores.per_class[c]);
            out << line;
        }
        std::snprintf(line, sizeof(line), "%10.2f\n", report.per_class[c]);
        out << line;
    }
    out << "\n";
    std::snprintf(line, sizeof(line), "%-10s", "overall");
    out << line;
    for (const RunResult& run : report.runs) {
        std::snprintf(line, sizeof(line), "%10.2f", run.scores.overall);
        out << line;
    }
    std::snprintf(line, sizeof(line), "%10.2f\n", report.overall_accuracy);
    out << line;
    std::snprintf(line, sizeof(line), "%-10s", "average");
    out << line;
    for (const RunResult& run : report.runs) {
        std::snprintf(line, sizeof(line), "%10.2f", run.scores.average);
        out << line;
    }
    std::snprintf(line, sizeof(line), "%10.2f\n", report.average_accuracy);
    out << line;
    return out.str();
}

int run_evaluate(RunConfig& config, const CommonFlags& flags) {
    resolve_flags(config, flags);
    config.validate(true, true);
    if (config.out_dir.empty()) throw_usage("evaluate needs --out-dir");
    std::filesystem::create_directories(config.out_dir);

    const HsiCube cube = load_cube(config.data_path, config.labels_path);
    auto [x, labels] = flatten_cube(cube);

    ProtocolSpec spec;
    spec.reducer = config.reducer;
    spec.classifier = config.classifier;
    spec.per_class = config.per_class;
    spec.runs = config.runs;
    spec.seed = config.seed;
    spec.fit_scope = protocol_scope(config.fit_scope);

    EvalReport report;
    std::optional<SingleRun> first_run;
    for (int r = 0; r < config.runs; ++r) {
        SingleRun run = run_protocol_once(x, labels, spec, config.seed + static_cast<std::uint64_t>(r));
        report.runs.push_back(run.result);
        if (r == 0) first_run = std::move(run);
    }
    const auto num_runs = static_cast<double>(report.runs.size());
    const std::size_t num_classes = report.runs.front().scores.per_class.size();
    report.per_class.assign(num_classes, 0.0);
    for (const auto& run : report.runs) {
        report.overall_accuracy += run.scores.overall;
        report.fit_seconds += run.fit_seconds;
        report.classify_seconds += run.classify_seconds;
        for (std::size_t c = 0; c < num_classes; ++c) report.per_class[c] += run.scores.per_class[c];
    }
    report.overall_accuracy /= num_runs;
    report.fit_seconds /= num_runs;
    report.classify_seconds /= num_runs;
    double per_class_sum = 0.0;
    for (auto& v : report.per_class) {
        v /= num_runs;
        per_class_sum += v;
    }
    report.average_accuracy = per_class_sum / static_cast<double>(num_classes);

    const std::filesystem::path dir(config.out_dir);
    write_file_atomic((dir / "report.csv").string(), report_csv_text(report));
    write_file_atomic((dir / "report.txt").string(), report_table_text(report, config));

    // Summed confusion counts across runs.
    {
        std::ostringstream out;
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> sum =
            Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(
                static_cast<std::int64_t>(num_classes), static_cast<std::int64_t>(num_classes));
        for (const auto& run : report.runs) sum += run.scores.confusion.counts;
        for (std::int64_t r = 0; r < sum.rows(); ++r) {
            for (std::int64_t c = 0; c < sum.cols(); ++c) {
                out << sum(r, c);
                out << (c + 1 < sum.cols() ? "," : "\n");
            }
        }
        write_file_atomic((dir / "confusion.csv").string(), out.str());
    }

    save_reducer((dir / "model.bin").string(), first_run->reducer);

    // Classification map over every pixel, from the first run's pipeline.
    {
        const Matrix all_features = reducer_transform(first_run->reducer, x);
        std::vector<int> predictions;
        if (spec.classifier.kind == ClassifierSpec::Kind::knn) {
            predictions = knn_predict(first_run->train_features,
                                      make_label_vector(first_run->knn_train_labels), all_features,
                                      spec.classifier.knn_k);
        } else {
            predictions = svm_predict(first_run->svm, all_features);
        }
        save_ppm((dir / "map.ppm").string(), render_map(cube, predictions, default_palette()));
    }

    // Wall-clock timings live apart from the deterministic outputs.
    {
        std::ostringstream out;
        out << "run,fit_seconds,sigma_seconds,classify_seconds\n";
        for (std::size_t r = 0; r < report.runs.size(); ++r)
            out << (r + 1) << "," << format_double(report.runs[r].fit_seconds, "%.6f") << ","
                << format_double(report.runs[r].sigma_seconds, "%.6f") << ","
                << format_double(report.runs[r].classify_seconds, "%.6f") << "\n";
        write_file_atomic((dir / "timings.csv").string(), out.str());
    }

    std::cout << "overall=" << format_double(report.overall_accuracy, "%.4f")
              << " average=" << format_double(report.average_accuracy, "%.4f") << " runs="
              << config.runs << "\n";
    return 0;
}

// ------------------------------------------------------------- benchmark --

int run_benchmark(RunConfig& config, const CommonFlags& flags, const std::string& methods_csv,
                  const std::vector<int>& components, int repeats, const std::string& out_path,
                  const std::string& out_sigma_path) {
    resolve_flags(config, flags);
    config.validate(true, false);
    if (components.empty()) throw_usage("benchmark needs --components");
    if (out_path.empty()) throw_usage("benchmark needs --out");

    std::vector<ReducerMethod> methods;
    std::stringstream stream(methods_csv);
    std::string token;
    while (std::getline(stream, token, ','))
        if (!token.empty()) methods.push_back(reducer_method_from_string(token));
    if (methods.empty()) throw_usage("benchmark needs --methods");

    const HsiCube cube = load_cube(config.data_path, config.labels_path);
    auto [x, labels] = flatten_cube(cube);
    config.reducer.seed = config.seed;

    std::optional<LabelVector> label_vector;
    bool any_supervised = false;
    for (ReducerMethod m : methods) any_supervised |= is_supervised(m);
    Matrix fit_x = x;
    if (any_supervised) {
        if (labels.empty()) throw_usage("supervised methods in --methods require --labels");
        std::vector<std::int64_t> labeled;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] > 0) labeled.push_back(static_cast<std::int64_t>(i));
        fit_x = take_columns(x, labeled);
        label_vector = take_labels(labels, labeled);
    }

    const TimingTable table = benchmark_timing(
        fit_x, label_vector ? &*label_vector : nullptr, methods, components, config.reducer, repeats);

    auto table_csv = [&](bool sigma) {
        std::ostringstream out;
        out << "method";
        for (int k : components) out << "," << k;
        out << "\n";
        std::size_t cell = 0;
        for (ReducerMethod method : methods) {
            out << to_string(method);
            for (std::size_t i = 0; i < components.size(); ++i, ++cell)
                out << ","
                    << format_double(sigma ? table.cells[cell].sigma_seconds
                                           : table.cells[cell].fit_seconds,
                                     "%.4f");
            out << "\n";
        }
        return out.str();
    };
    write_file_atomic(out_path, table_csv(false));
    if (!out_sigma_path.empty()) write_file_atomic(out_sigma_path, table_csv(true));
    std::cout << "benchmarked " << methods.size() << " methods x " << components.size()
              << " component counts (median of " << repeats << ")\n";
    return 0;
}

// ---------------------------------------------------------------- sweeps --

int run_sweep(RunConfig& config, const CommonFlags& flags, const std::vector<int>& d_list,
              const std::vector<double>& sigma_list, const std::string& out_path) {
    resolve_flags(config, flags);
    config.validate(true, true);
    if (out_path.empty()) throw_usage("sweep needs --out");

    const HsiCube cube = load_cube(config.data_path, config.labels_path);
    ProtocolSpec spec;
    spec.reducer = config.reducer;
    spec.classifier = config.classifier;
    spec.per_class = config.per_class;
    spec.runs = config.runs;
    spec.seed = config.seed;
    spec.fit_scope = protocol_scope(config.fit_scope);

    std::vector<CurvePoint> curve;
    std::string header;
    if (!d_list.empty()) {
        curve = sweep_rff_features(cube, spec, d_list);
        header = "rff_features,overall_accuracy\n";
    } else {
        curve = sweep_bandwidth(cube, spec, sigma_list);
        header = "sigma,overall_accuracy\n";
    }

    std::ostringstream out;
    out << header;
    for (const CurvePoint& point : curve)
        out << format_double(point.value, "%.9g") << "," << format_double(point.overall, "%.4f")
            << "\n";
    write_file_atomic(out_path, out.str());
    std::cout << "swept " << curve.size() << " settings\n";
    return 0;
}

// --------------------------------------------------------------- inspect --

int run_inspect(const std::string& model_path) {
    const ModelContainer container = load_container(model_path);
    std::cout << "method: " << container.method << "\n";
    std::cout << "metadata: " << nlohmann::json::parse(container.metadata_json).dump(2) << "\n";
    std::cout << "sections:\n";
    for (const auto& section : container.sections) {
        std::cout << "  " << section.name << "  "
                  << (section.dtype == ArraySection::DType::f64 ? "f64" : "i64") << "  (";
        for (std::size_t i = 0; i < section.shape.size(); ++i) {
            std::cout << section.shape[i];
            if (i + 1 < section.shape.size()) std::cout << ", ";
        }
        std::cout << ")\n";
    }
    return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Random-Fourier-feature dimensionality reduction for hyperspectral images"};
    app.require_subcommand(1);

    RunConfig config;
    CommonFlags flags;

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Fit a reducer and export model/features");
    std::string out_model, out_features;
    reduce->add_option("--data", config.data_path, "Cube NPY: (rows, cols, bands) or (bands, N)")
        ->required();
    reduce->add_option("--labels", config.labels_path, "Ground-truth CSV grid");
    add_reducer_flags(reduce, config, flags);
    reduce->add_option("--seed", config.seed, "Random seed");
    reduce->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    reduce->add_option("--fit-scope", config.fit_scope, "auto|all|labeled");
    reduce->add_option("--out-model", out_model, "Model container path");
    reduce->add_option("--out-features", out_features, "Reduced features NPY path");

    // classify
    auto* classify = app.add_subcommand("classify", "Grid-search, train an SVM, predict");
    std::string features_path, out_predictions, out_svm;
    classify->add_option("--features", features_path, "Feature matrix NPY (components, N)")
        ->required();
    classify->add_option("--labels", config.labels_path, "Ground-truth CSV grid")->required();
    classify->add_option("--per-class", config.per_class, "Training samples per class")
        ->default_val(config.per_class);
    add_classifier_flags(classify, config, flags);
    classify->add_option("--seed", config.seed, "Random seed");
    classify->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    classify->add_option("--out-predictions", out_predictions, "Predicted labels NPY path");
    classify->add_option("--out-model", out_svm, "SVM container path");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Full repeated-run protocol with reports");
    evaluate->add_option("--data", config.data_path, "Cube NPY")->required();
    evaluate->add_option("--labels", config.labels_path, "Ground-truth CSV grid")->required();
    add_reducer_flags(evaluate, config, flags);
    add_classifier_flags(evaluate, config, flags);
    evaluate->add_option("--per-class", config.per_class, "Training samples per class")
        ->default_val(config.per_class);
    evaluate->add_option("--runs", config.runs, "Repetitions")->default_val(config.runs);
    evaluate->add_option("--seed", config.seed, "Random seed");
    evaluate->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    evaluate->add_option("--fit-scope", config.fit_scope, "auto|all|train");
    evaluate->add_option("--out-dir", config.out_dir, "Report directory")->required();

    // benchmark
    auto* benchmark = app.add_subcommand("benchmark", "Reducer fit-time table");
    std::string methods_csv = "ica,kica,rffica";
    std::vector<int> bench_components;
    int repeats = 3;
    std::string bench_out, bench_sigma_out;
    benchmark->add_option("--data", config.data_path, "Cube NPY")->required();
    benchmark->add_option("--labels", config.labels_path, "Ground-truth CSV grid");
    benchmark->add_option("--methods", methods_csv, "Comma list of methods");
    benchmark->add_option("--components", bench_components, "Comma list of component counts")
        ->delimiter(',')
        ->required();
    add_reducer_flags(benchmark, config, flags, /*with_components=*/false);
    benchmark->add_option("--repeats", repeats, "Median over this many fits");
    benchmark->add_option("--seed", config.seed, "Random seed");
    benchmark->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    benchmark->add_option("--out", bench_out, "Timing CSV path")->required();
    benchmark->add_option("--out-sigma", bench_sigma_out, "Bandwidth-time CSV path");

    // sweep-d / sweep-sigma
    auto* sweep_d = app.add_subcommand("sweep-d", "Accuracy vs RFF feature count");
    std::vector<int> d_list;
    std::string sweep_out;
    sweep_d->add_option("--data", config.data_path, "Cube NPY")->required();
    sweep_d->add_option("--labels", config.labels_path, "Ground-truth CSV grid")->required();
    add_reducer_flags(sweep_d, config, flags);
    add_classifier_flags(sweep_d, config, flags);
    sweep_d->add_option("--d-list", d_list, "RFF feature counts")->delimiter(',')->required();
    sweep_d->add_option("--per-class", config.per_class)->default_val(config.per_class);
    sweep_d->add_option("--runs", config.runs)->default_val(config.runs);
    sweep_d->add_option("--seed", config.seed, "Random seed");
    sweep_d->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    sweep_d->add_option("--out", sweep_out, "Curve CSV path")->required();

    auto* sweep_sigma = app.add_subcommand("sweep-sigma", "Accuracy vs bandwidth");
    std::vector<double> sigma_list;
    sweep_sigma->add_option("--data", config.data_path, "Cube NPY")->required();
    sweep_sigma->add_option("--labels", config.labels_path, "Ground-truth CSV grid")->required();
    add_reducer_flags(sweep_sigma, config, flags);
    add_classifier_flags(sweep_sigma, config, flags);
    sweep_sigma->add_option("--sigma-list", sigma_list, "Bandwidth values")
        ->delimiter(',')
        ->required();
    sweep_sigma->add_option("--per-class", config.per_class)->default_val(config.per_class);
    sweep_sigma->add_option("--runs", config.runs)->default_val(config.runs);
    sweep_sigma->add_option("--seed", config.seed, "Random seed");
    sweep_sigma->add_option("--threads", flags.threads, "Worker thread bound (0 = hardware)");
    sweep_sigma->add_option("--out", sweep_out, "Curve CSV path")->required();

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Print model container metadata");
    std::string model_path;
    inspect->add_option("model", model_path, "Model container path")->required();

    std::vector<const char*> argv;
    argv.push_back("rffhsi");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        std::cerr << app.help();
        return 2;
    }

    try {
        if (reduce->parsed()) return run_reduce(config, flags, out_model, out_features);
        if (classify->parsed())
            return run_classify(config, flags, features_path, out_predictions, out_svm);
        if (evaluate->parsed()) return run_evaluate(config, flags);
        if (benchmark->parsed())
            return run_benchmark(config, flags, methods_csv, bench_components, repeats, bench_out,
                                 bench_sigma_out);
        if (sweep_d->parsed()) return run_sweep(config, flags, d_list, {}, sweep_out);
        if (sweep_sigma->parsed()) return run_sweep(config, flags, {}, sigma_list, sweep_out);
        if (inspect->parsed()) return run_inspect(model_path);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.category()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace rffhsi
