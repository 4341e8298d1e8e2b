#ifndef RFFHSI_RFF_HPP
#define RFFHSI_RFF_HPP

#include <cstdint>

#include "rffhsi/types.hpp"

namespace rffhsi {

// Sampled random Fourier map: z(x) = sqrt(2/D) cos(coefficients^T x + offsets).
// Immutable after sampling.
struct RffMap {
    Matrix coefficients;  // d x D, entries ~ N(0, 1/sigma^2)
    Vector offsets;       // D, in [0, 2*pi)
    double sigma = 0.0;
    std::uint64_t seed = 0;

    int input_dim() const { return static_cast<int>(coefficients.rows()); }
    int feature_count() const { return static_cast<int>(coefficients.cols()); }
};

enum class BandwidthRule {
    mean_squared_distance,  // sigma^2 = mean ||x - y||^2 (default)
    mean_distance,          // sigma   = mean ||x - y||
};

// Estimates the RBF bandwidth from pairwise distances over at most max_pairs
// uniformly sampled unordered pairs (all pairs when there are few enough).
// Errors if the sampled mean distance is zero.
double estimate_bandwidth(const Matrix& x, std::int64_t max_pairs, std::uint64_t seed,
                          BandwidthRule rule = BandwidthRule::mean_squared_distance);

inline constexpr std::int64_t kDefaultMaxPairs = 1'000'000;

// The single sigma <-> exponent conversion shared with the kernel module.
inline double gamma_from_sigma(double sigma) { return 1.0 / (2.0 * sigma * sigma); }

RffMap sample_rff_map(int dim, int feature_count, double sigma, std::uint64_t seed);

// Applies the map columnwise: output (i, j) = sqrt(2/D) cos(r_i . x_j + b_i).
Matrix apply_rff(const RffMap& map, const Matrix& x);

}  // namespace rffhsi

#endif
