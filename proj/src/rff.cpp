#include "rffhsi/rff.hpp"

#include <cmath>
#include <numbers>

namespace rffhsi {

double estimate_bandwidth(const Matrix& x, std::int64_t max_pairs, std::uint64_t seed,
                          BandwidthRule rule) {
    const std::int64_t n = x.cols();
    if (n < 2) throw_dimension("bandwidth estimation needs at least 2 samples");
    if (max_pairs < 1) throw_usage("max_pairs must be >= 1");

    const std::int64_t total_pairs = n * (n - 1) / 2;
    double sum = 0.0;
    std::int64_t used = 0;
    const bool squared = rule == BandwidthRule::mean_squared_distance;

    if (total_pairs <= max_pairs) {
        for (std::int64_t i = 0; i < n; ++i) {
            for (std::int64_t j = i + 1; j < n; ++j) {
                const double d2 = (x.col(i) - x.col(j)).squaredNorm();
                sum += squared ? d2 : std::sqrt(d2);
            }
        }
        used = total_pairs;
    } else {
        auto rng = make_rng(mix_seed(seed, seed_offset::sigma));
        std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
        for (std::int64_t k = 0; k < max_pairs; ++k) {
            std::int64_t i = pick(rng);
            std::int64_t j = pick(rng);
            while (j == i) j = pick(rng);
            const double d2 = (x.col(i) - x.col(j)).squaredNorm();
            sum += squared ? d2 : std::sqrt(d2);
        }
        used = max_pairs;
    }

    const double mean = sum / static_cast<double>(used);
    if (mean <= 0.0)
        throw_numeric("all sampled point pairs are identical; bandwidth undefined");
    return squared ? std::sqrt(mean) : mean;
}

RffMap sample_rff_map(int dim, int feature_count, double sigma, std::uint64_t seed) {
    if (dim < 1 || feature_count < 1)
        throw_dimension("rff map needs dim >= 1 and feature count >= 1");
    if (!(sigma > 0.0)) throw_numeric("sigma must be positive");

    RffMap map;
    map.sigma = sigma;
    map.seed = seed;
    map.coefficients.resize(dim, feature_count);
    map.offsets.resize(feature_count);

    auto rng = make_rng(mix_seed(seed, seed_offset::rff));
    std::normal_distribution<double> coeff(0.0, 1.0 / sigma);
    for (int j = 0; j < feature_count; ++j)
        for (int i = 0; i < dim; ++i) map.coefficients(i, j) = coeff(rng);
    std::uniform_real_distribution<double> offset(0.0, 2.0 * std::numbers::pi);
    for (int j = 0; j < feature_count; ++j) map.offsets(j) = offset(rng);
    return map;
}

Matrix apply_rff(const RffMap& map, const Matrix& x) {
    if (x.rows() != map.coefficients.rows())
        throw_dimension("input dimension " + std::to_string(x.rows()) +
                        " does not match map dimension " + std::to_string(map.coefficients.rows()));
    const double scale = std::sqrt(2.0 / map.feature_count());
    Matrix z = map.coefficients.transpose() * x;
    z.colwise() += map.offsets;
    return (scale * z.array().cos()).matrix();
}

}  // namespace rffhsi
