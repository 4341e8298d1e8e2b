#ifndef RFFHSI_TYPES_HPP
#define RFFHSI_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "rffhsi/error.hpp"

namespace rffhsi {

// Samples are stored as columns: a d x N matrix holds N spectra of d bands.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Class labels paired with a sample matrix. Ids run 1..num_classes and every
// class must occur at least once; background (0) is never stored here.
struct LabelVector {
    std::vector<int> ids;
    int num_classes = 0;
};

// Builds a LabelVector from raw ids, inferring the class count and checking
// that every class 1..C is present.
LabelVector make_label_vector(std::vector<int> ids);

inline void check_same_length(const Matrix& x, const LabelVector& labels) {
    if (static_cast<std::size_t>(x.cols()) != labels.ids.size())
        throw_dimension("label count " + std::to_string(labels.ids.size()) +
                        " does not match sample count " + std::to_string(x.cols()));
}

// splitmix64; used to derive independent sub-streams from one user seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t offset);

// Fixed offsets for the derived seed streams of a pipeline.
namespace seed_offset {
inline constexpr std::uint64_t sigma = 1;
inline constexpr std::uint64_t rff = 2;
inline constexpr std::uint64_t landmarks = 3;
inline constexpr std::uint64_t ica = 4;
inline constexpr std::uint64_t folds = 5;
}  // namespace seed_offset

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace rffhsi

#endif
