#ifndef RFFHSI_LDA_HPP
#define RFFHSI_LDA_HPP

#include <vector>

#include "rffhsi/types.hpp"

namespace rffhsi {

struct ScatterPair {
    Matrix within;    // d x d, S_w
    Matrix between;   // d x d, S_b (rank <= C - 1)
    Matrix class_means;  // d x C
    Vector global_mean;  // d
    std::vector<std::int64_t> class_counts;  // C

    int num_classes() const { return static_cast<int>(class_counts.size()); }
};

struct LdaModel {
    Matrix projection;  // d x q, unit-norm columns
    Vector eigenvalues;  // q, descending
    double ridge_used = 0.0;
    bool degenerate = false;  // all eigenvalues below 1e-10

    int input_dim() const { return static_cast<int>(projection.rows()); }
    int components() const { return static_cast<int>(projection.cols()); }
};

ScatterPair compute_scatter(const Matrix& x, const LabelVector& labels);

inline constexpr double kLdaDefaultRidge = 1e-6;

// Top-q generalized eigenvectors of (S_b, S_w + ridge * trace(S_w)/d * I),
// columns unit-normalized, eigenvalues descending. q must be in [1, C-1].
LdaModel solve_lda(const ScatterPair& scatter, int q, double ridge = kLdaDefaultRidge);

// f_j = G^T x_j.
Matrix lda_transform(const LdaModel& model, const Matrix& x);

}  // namespace rffhsi

#endif
