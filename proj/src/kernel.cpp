#include "rffhsi/kernel.hpp"

#include <cmath>

namespace rffhsi {

double rbf_kernel(const Vector& x, const Vector& y, const KernelParams& params) {
    if (x.size() != y.size())
        throw_dimension("kernel arguments have dimensions " + std::to_string(x.size()) + " and " +
                        std::to_string(y.size()));
    if (!(params.gamma > 0.0)) throw_numeric("gamma must be positive");
    return std::exp(-params.gamma * (x - y).squaredNorm());
}

Matrix rbf_gram(const Matrix& a, const Matrix& b, const KernelParams& params) {
    if (a.rows() != b.rows())
        throw_dimension("gram arguments have dimensions " + std::to_string(a.rows()) + " and " +
                        std::to_string(b.rows()));
    if (!(params.gamma > 0.0)) throw_numeric("gamma must be positive");
    // ||a - b||^2 = ||a||^2 + ||b||^2 - 2 a.b, evaluated as one GEMM.
    Vector a2 = a.colwise().squaredNorm().transpose();
    Vector b2 = b.colwise().squaredNorm().transpose();
    Matrix d2 = (-2.0 * (a.transpose() * b));
    d2.colwise() += a2;
    d2.rowwise() += b2.transpose();
    return (-params.gamma * d2.array().max(0.0)).exp().matrix();
}

LandmarkSet select_landmarks(const Matrix& x, int m, std::uint64_t seed,
                             const KernelParams& params) {
    const std::int64_t n = x.cols();
    if (m < 2) throw_usage("need at least 2 landmarks");
    if (m > n)
        throw_usage("requested " + std::to_string(m) + " landmarks from " + std::to_string(n) +
                    " samples");

    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    auto rng = make_rng(mix_seed(seed, seed_offset::landmarks));
    // Partial Fisher-Yates: first m entries are a uniform draw without
    // replacement, kept in sampled order.
    for (int i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::int64_t> pick(i, n - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    pool.resize(static_cast<std::size_t>(m));

    LandmarkSet set;
    set.seed = seed;
    set.source_indices = pool;
    set.points.resize(x.rows(), m);
    for (int j = 0; j < m; ++j) set.points.col(j) = x.col(pool[static_cast<std::size_t>(j)]);

    const Matrix gram = rbf_gram(set.points, set.points, params);
    set.gram_mean = gram.rowwise().mean();
    set.gram_total_mean = gram.mean();
    return set;
}

Matrix kernel_feature_map(const Matrix& x, const LandmarkSet& landmarks,
                          const KernelParams& params, bool centered) {
    if (x.rows() != landmarks.points.rows())
        throw_dimension("input dimension " + std::to_string(x.rows()) +
                        " does not match landmark dimension " +
                        std::to_string(landmarks.points.rows()));
    Matrix features = rbf_gram(landmarks.points, x, params);
    if (centered) {
        const Eigen::RowVectorXd column_means = features.colwise().mean();
        features.rowwise() -= column_means;
        features.colwise() -= landmarks.gram_mean;
        features.array() += landmarks.gram_total_mean;
    }
    return features;
}

}  // namespace rffhsi
