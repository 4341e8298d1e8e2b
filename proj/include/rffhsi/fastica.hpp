#ifndef RFFHSI_FASTICA_HPP
#define RFFHSI_FASTICA_HPP

#include <cstdint>
#include <utility>

#include "rffhsi/types.hpp"

namespace rffhsi {

// Centering + PCA whitening transform. projection * cov(X - mean) *
// projection^T = I_n (1/N covariance convention).
struct WhiteningModel {
    Vector mean;             // d
    Matrix projection;       // n x d
    Matrix back_projection;  // d x n
    int retained = 0;
};

enum class IcaNonlinearity { logcosh, cube };

struct IcaModel {
    WhiteningModel whitening;
    Matrix rotation;  // n x n, orthonormal rows
    Matrix unmixing;  // n x d = rotation * whitening.projection
    int components = 0;
    IcaNonlinearity nonlinearity = IcaNonlinearity::logcosh;
    int iterations_used = 0;
    bool converged = false;

    int input_dim() const { return static_cast<int>(unmixing.cols()); }
};

// Centers columns and whitens to the top n principal directions (descending
// eigenvalue order). Errors if fewer than n covariance eigenvalues exceed
// 1e-12 times the largest.
std::pair<Matrix, WhiteningModel> center_whiten(const Matrix& x, int n);

// Symmetric (parallel) fixed-point FastICA on whitened data. Non-convergence
// is reported through the flags, not as an error.
IcaModel fastica_fit(const Matrix& whitened, const WhiteningModel& whitening,
                     IcaNonlinearity nonlinearity, double tol, int max_iter,
                     std::uint64_t seed);

inline constexpr double kIcaDefaultTol = 1e-6;
inline constexpr int kIcaDefaultMaxIter = 400;

// P = unmixing * (X - mean), columnwise.
Matrix ica_transform(const IcaModel& model, const Matrix& x);

}  // namespace rffhsi

#endif
