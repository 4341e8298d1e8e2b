#ifndef RFFHSI_CLASSIFY_HPP
#define RFFHSI_CLASSIFY_HPP

#include <cstdint>
#include <vector>

#include "rffhsi/kernel.hpp"
#include "rffhsi/types.hpp"

namespace rffhsi {

// Soft-margin RBF SVM for one class pair, trained by SMO.
// Decision(x) = sum_k dual_coeffs[k] * K(sv_k, x) + bias; positive values
// vote for class_a (class_a < class_b).
struct SvmBinaryModel {
    Matrix support_vectors;  // d x n_sv
    Vector dual_coeffs;      // alpha_i * y_i
    std::vector<std::int64_t> sv_indices;  // positions in the training set
    double bias = 0.0;
    KernelParams kernel;
    int class_a = 0;
    int class_b = 0;
    bool converged = true;

    double decision(const Vector& x) const;
};

struct SvmTrainOptions {
    double tol = 1e-3;
    std::int64_t max_passes = 1'000'000;  // pair updates before giving up
    std::size_t cache_mb = 256;           // kernel row cache budget
};

SvmBinaryModel svm_train_binary(const Matrix& x, const std::vector<int>& y_pm1,
                                double cost, const KernelParams& kernel,
                                const SvmTrainOptions& options = {});

struct SvmMulticlassModel {
    std::vector<SvmBinaryModel> models;  // C*(C-1)/2, pairs (a, b) with a < b
    int num_classes = 0;
    KernelParams kernel;
};

SvmMulticlassModel svm_train_multiclass(const Matrix& x, const LabelVector& labels,
                                        double cost, const KernelParams& kernel,
                                        const SvmTrainOptions& options = {});

// One-vs-one majority vote; ties broken by summed decision values, then by
// the lowest class id.
std::vector<int> svm_predict(const SvmMulticlassModel& model, const Matrix& x);

struct GridSearchResult {
    double best_cost = 0.0;
    double best_gamma = 0.0;
    Matrix cv_accuracy;  // costs x gammas, mean fold accuracy per cell
    std::vector<double> costs;
    std::vector<double> gammas;
    int folds = 5;
};

// The paper's SVM hyperparameter grids: C = 2^a for a in -5..15 and
// gamma = 2^b for b in {-15,-13,...,-1,1,3,4,5}.
std::vector<double> default_cost_grid();
std::vector<double> default_gamma_grid();

// Stratified k-fold cross validation over the full cost x gamma grid.
// Ties prefer the smallest cost, then the smallest gamma.
GridSearchResult grid_search_cv(const Matrix& x, const LabelVector& labels,
                                const std::vector<double>& cost_grid,
                                const std::vector<double>& gamma_grid, int folds,
                                std::uint64_t seed, const SvmTrainOptions& options = {});

// Euclidean k-NN majority vote; ties prefer the smallest class id.
std::vector<int> knn_predict(const Matrix& train_x, const LabelVector& train_labels,
                             const Matrix& test_x, int k);

// Largest per-point violation of the soft-margin KKT conditions; used to
// check trained binary models.
double svm_kkt_residual(const SvmBinaryModel& model, const Matrix& x,
                        const std::vector<int>& y_pm1, double cost);

// Dual objective sum(alpha) - 1/2 sum alpha_i alpha_j y_i y_j K_ij; only the
// support vectors contribute.
double svm_dual_objective(const SvmBinaryModel& model);

}  // namespace rffhsi

#endif
