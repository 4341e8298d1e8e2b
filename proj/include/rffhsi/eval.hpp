#ifndef RFFHSI_EVAL_HPP
#define RFFHSI_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rffhsi/classify.hpp"
#include "rffhsi/hsi.hpp"
#include "rffhsi/reducer.hpp"

namespace rffhsi {

// Rows are truth classes, columns predictions (1..C each).
struct ConfusionMatrix {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

    int num_classes() const { return static_cast<int>(counts.rows()); }
    std::int64_t total() const { return counts.sum(); }
};

struct ScoreResult {
    ConfusionMatrix confusion;
    double overall = 0.0;             // 100 * trace / total
    std::vector<double> per_class;    // 100 * diag / row sum
    double average = 0.0;             // mean of per_class
};

ScoreResult score(const std::vector<int>& predictions, const LabelVector& truth);

// Downstream classifier used by the experimental protocol.
struct ClassifierSpec {
    enum class Kind { svm_grid, svm, knn };
    Kind kind = Kind::svm_grid;
    std::vector<double> cost_grid;   // svm_grid; empty -> paper defaults
    std::vector<double> gamma_grid;  // svm_grid; empty -> paper defaults
    int folds = 5;
    double cost = 1.0;    // svm (fixed parameters)
    double gamma = 1.0;   // svm
    int knn_k = 1;        // knn
    SvmTrainOptions svm_options;
};

struct ProtocolSpec {
    ReducerSpec reducer;
    ClassifierSpec classifier;
    int per_class = 100;
    int runs = 5;
    std::uint64_t seed = 0;
    // auto: unsupervised reducers fit on all pixels, supervised on the
    // training pixels. Recorded in the fitted model.
    enum class FitScope { automatic, all, train };
    FitScope fit_scope = FitScope::automatic;
};

struct RunResult {
    std::uint64_t split_seed = 0;
    ScoreResult scores;
    double sigma_used = 0.0;
    double fit_seconds = 0.0;
    double sigma_seconds = 0.0;
    double classify_seconds = 0.0;
    double best_cost = 0.0;   // svm_grid only
    double best_gamma = 0.0;  // svm_grid only
};

struct EvalReport {
    std::vector<RunResult> runs;
    double overall_accuracy = 0.0;        // mean across runs
    std::vector<double> per_class;        // mean across runs, per class
    double average_accuracy = 0.0;        // mean of per_class
    double fit_seconds = 0.0;             // mean across runs
    double classify_seconds = 0.0;        // mean across runs
};

EvalReport run_protocol(const HsiCube& cube, const ProtocolSpec& spec);

// One repetition of the protocol on a prepared sample matrix; also returns
// the fitted pipeline and final classifier so callers can reuse them.
struct SingleRun {
    RunResult result;
    ReducerModel reducer;
    SvmMulticlassModel svm;        // svm kinds only
    std::vector<int> knn_train_labels;  // knn kind: training labels
    Matrix train_features;              // knn kind: reduced training pixels
};

SingleRun run_protocol_once(const Matrix& x, const std::vector<int>& labels,
                            const ProtocolSpec& spec, std::uint64_t split_seed);

using Rgb = std::array<unsigned char, 3>;

struct Image {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> rgb;  // 3 * width * height, row-major
};

// 17 entries: black background + 16 class colors.
const std::vector<Rgb>& default_palette();

// One flat color per class over every pixel; label 0 renders black. The
// prediction vector must cover all rows*cols pixels in row-major order.
Image render_map(const HsiCube& cube, const std::vector<int>& predictions,
                 const std::vector<Rgb>& palette);

struct TimingCell {
    ReducerMethod method;
    int components = 0;
    double fit_seconds = 0.0;    // median over repeats
    double sigma_seconds = 0.0;  // median over repeats
};

struct TimingTable {
    std::vector<ReducerMethod> methods;
    std::vector<int> components;
    std::vector<TimingCell> cells;  // methods-major order
};

// Fits every (method, components) cell `repeats` times on identical data and
// seed and records the median wall-clock fit time.
TimingTable benchmark_timing(const Matrix& x, const LabelVector* labels,
                             const std::vector<ReducerMethod>& methods,
                             const std::vector<int>& component_counts,
                             const ReducerSpec& base_spec, int repeats = 3);

struct CurvePoint {
    double value = 0.0;     // swept parameter (D or sigma)
    double overall = 0.0;   // mean overall accuracy
};

std::vector<CurvePoint> sweep_rff_features(const HsiCube& cube, const ProtocolSpec& spec,
                                           const std::vector<int>& feature_counts);

std::vector<CurvePoint> sweep_bandwidth(const HsiCube& cube, const ProtocolSpec& spec,
                                        const std::vector<double>& sigmas);

}  // namespace rffhsi

#endif
