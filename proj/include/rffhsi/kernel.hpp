#ifndef RFFHSI_KERNEL_HPP
#define RFFHSI_KERNEL_HPP

#include <cstdint>
#include <vector>

#include "rffhsi/types.hpp"

namespace rffhsi {

struct KernelParams {
    double gamma = 1.0;  // K(x, y) = exp(-gamma * ||x - y||^2)
};

// Landmark spectra for the empirical kernel map, with the Gram-block means
// needed for kernel centering. Immutable after construction.
struct LandmarkSet {
    Matrix points;  // d x m
    std::vector<std::int64_t> source_indices;
    std::uint64_t seed = 0;
    Vector gram_mean;            // m, row means of the landmark Gram block
    double gram_total_mean = 0;  // grand mean of the landmark Gram block

    int dim() const { return static_cast<int>(points.rows()); }
    int count() const { return static_cast<int>(points.cols()); }
};

double rbf_kernel(const Vector& x, const Vector& y, const KernelParams& params);

// Full Gram matrix K(cols of a, cols of b).
Matrix rbf_gram(const Matrix& a, const Matrix& b, const KernelParams& params);

// Draws m distinct columns uniformly without replacement (in sampled order,
// so m = N yields a permutation) and precomputes the centering statistics.
LandmarkSet select_landmarks(const Matrix& x, int m, std::uint64_t seed,
                             const KernelParams& params);

// Empirical kernel map: entry (i, j) = K(landmark_i, x_j). With `centered`
// the features are shifted to zero mean in feature space with respect to the
// landmark distribution (the usual double-centering correction).
Matrix kernel_feature_map(const Matrix& x, const LandmarkSet& landmarks,
                          const KernelParams& params, bool centered);

}  // namespace rffhsi

#endif
