#ifndef RFFHSI_REDUCER_HPP
#define RFFHSI_REDUCER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "rffhsi/fastica.hpp"
#include "rffhsi/kernel.hpp"
#include "rffhsi/lda.hpp"
#include "rffhsi/rff.hpp"

namespace rffhsi {

enum class ReducerMethod { ica, kica, rffica, lda, gda, rfflda };

ReducerMethod reducer_method_from_string(const std::string& name);
std::string to_string(ReducerMethod method);
bool is_supervised(ReducerMethod method);

// Which kernel-centering behaviour to use for the landmark map. `automatic`
// resolves to on for gda and off for kica (ICA centers during whitening).
enum class KernelCentering { automatic, on, off };

struct ReducerSpec {
    ReducerMethod method = ReducerMethod::ica;
    int components = 10;
    int rff_features = 0;  // 0 -> 2 * d
    int landmarks = 2000;
    std::optional<double> sigma;  // override; otherwise estimated from the fit data
    std::uint64_t seed = 0;
    KernelCentering centered_kernel = KernelCentering::automatic;
    BandwidthRule bandwidth_rule = BandwidthRule::mean_squared_distance;
    std::int64_t max_pairs = kDefaultMaxPairs;
    IcaNonlinearity nonlinearity = IcaNonlinearity::logcosh;
    double ica_tol = kIcaDefaultTol;
    int ica_max_iter = kIcaDefaultMaxIter;
    double lda_ridge = kLdaDefaultRidge;
};

// A fitted dimensionality-reduction pipeline: optional feature-expansion
// stage followed by an ICA or LDA projection.
struct ReducerModel {
    ReducerSpec spec;
    std::optional<RffMap> rff;             // rffica / rfflda
    std::optional<LandmarkSet> landmarks;  // kica / gda
    KernelParams kernel{0.0};
    bool kernel_centered = false;
    std::optional<IcaModel> ica;   // ica family
    std::optional<LdaModel> lda;   // lda family
    double sigma_used = 0.0;       // 0 for the linear methods
    double sigma_seconds = 0.0;    // bandwidth estimation share of fit time
    double fit_seconds = 0.0;
    int input_dim = 0;
    std::string fit_scope;  // "all" or "train"; informational

    int components() const { return spec.components; }
};

// Fits the pipeline named by the spec. Labels are required for the LDA
// family and ignored by the ICA family. sigma is estimated from `x` unless
// the spec overrides it; derived seeds come from spec.seed via fixed offsets.
ReducerModel fit_reducer(const ReducerSpec& spec, const Matrix& x,
                         const LabelVector* labels = nullptr);

// Applies stage 1 (if any) then the fitted projection; components x N output.
Matrix reducer_transform(const ReducerModel& model, const Matrix& x);

// Fits the rff-method and kernel-method specs on the same train split and
// reports downstream 1-NN (k = knn_k) test accuracies for both.
struct GapResult {
    double rff_accuracy = 0.0;
    double kernel_accuracy = 0.0;
    double gap() const { return rff_accuracy - kernel_accuracy; }
};

GapResult approximation_gap(const Matrix& x, const std::vector<int>& labels,
                            const ReducerSpec& rff_spec, const ReducerSpec& kernel_spec,
                            int per_class, std::uint64_t split_seed, int knn_k);

}  // namespace rffhsi

#endif
