#include "rffhsi/fastica.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rffhsi {

namespace {

// Symmetric orthogonalization: W <- (W W^T)^{-1/2} W.
Matrix symmetric_orthogonalize(const Matrix& w) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(w * w.transpose());
    if (eig.info() != Eigen::Success) throw_numeric("orthogonalization eigensolver failed");
    const Vector inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * w;
}

}  // namespace

std::pair<Matrix, WhiteningModel> center_whiten(const Matrix& x, int n) {
    const std::int64_t d = x.rows();
    const std::int64_t count = x.cols();
    if (n < 1 || n > d)
        throw_dimension("requested " + std::to_string(n) + " whitening components from " +
                        std::to_string(d) + " dimensions");
    if (count <= n)
        throw_dimension("whitening needs more samples than components");

    WhiteningModel model;
    model.mean = x.rowwise().mean();
    Matrix centered = x.colwise() - model.mean;

    // Covariance eigenpairs (1/N convention), via the cheaper route: a thin
    // SVD of the centered data when N < d, the d x d covariance otherwise.
    Vector eigenvalues;       // descending
    Matrix eigenvectors;      // d x k, matching columns
    if (count < d) {
        Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
        const std::int64_t k = svd.singularValues().size();
        eigenvalues.resize(k);
        for (std::int64_t i = 0; i < k; ++i) {
            const double s = svd.singularValues()(i);
            eigenvalues(i) = s * s / static_cast<double>(count);
        }
        eigenvectors = svd.matrixU();
    } else {
        Matrix cov = Matrix::Zero(d, d);
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0 / static_cast<double>(count));
        Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
        if (eig.info() != Eigen::Success) throw_numeric("covariance eigensolver failed");
        eigenvalues.resize(d);
        eigenvectors.resize(d, d);
        for (std::int64_t i = 0; i < d; ++i) {
            eigenvalues(i) = eig.eigenvalues()(d - 1 - i);
            eigenvectors.col(i) = eig.eigenvectors().col(d - 1 - i);
        }
    }

    const double largest = eigenvalues(0);
    const double threshold = 1e-12 * largest;
    if (n > eigenvalues.size())
        throw_numeric("data rank below " + std::to_string(n) + " components");
    model.projection.resize(n, d);
    model.back_projection.resize(d, n);
    for (int i = 0; i < n; ++i) {
        const double lambda = eigenvalues(i);
        if (!(lambda > threshold))
            throw_numeric("data rank below " + std::to_string(n) +
                          ": eigenvalue " + std::to_string(lambda) + " under threshold");
        const double scale = std::sqrt(lambda);
        model.projection.row(i) = eigenvectors.col(i).transpose() / scale;
        model.back_projection.col(i) = eigenvectors.col(i) * scale;
    }
    model.retained = n;
    return {model.projection * centered, std::move(model)};
}

IcaModel fastica_fit(const Matrix& whitened, const WhiteningModel& whitening,
                     IcaNonlinearity nonlinearity, double tol, int max_iter,
                     std::uint64_t seed) {
    const std::int64_t n = whitened.rows();
    const std::int64_t count = whitened.cols();
    if (n != whitening.retained)
        throw_dimension("whitened data does not match the whitening model");
    if (!(tol > 0.0)) throw_numeric("tol must be positive");
    if (max_iter < 1) throw_usage("max_iter must be >= 1");

    auto rng = make_rng(mix_seed(seed, seed_offset::ica));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix w(n, n);
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < n; ++i) w(i, j) = normal(rng);
    w = symmetric_orthogonalize(w);

    IcaModel model;
    model.whitening = whitening;
    model.components = static_cast<int>(n);
    model.nonlinearity = nonlinearity;

    const double inv_count = 1.0 / static_cast<double>(count);
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        const Matrix projected = w * whitened;  // n x N
        Matrix g(n, count);
        Vector g_prime_mean(n);
        if (nonlinearity == IcaNonlinearity::logcosh) {
            g = projected.array().tanh().matrix();
            g_prime_mean = (1.0 - g.array().square()).rowwise().mean().matrix();
        } else {
            g = projected.array().cube().matrix();
            g_prime_mean = (3.0 * projected.array().square()).rowwise().mean().matrix();
        }
        Matrix w_next = inv_count * (g * whitened.transpose()) - g_prime_mean.asDiagonal() * w;
        w_next = symmetric_orthogonalize(w_next);

        const double min_diag = (w_next * w.transpose()).diagonal().cwiseAbs().minCoeff();
        w = std::move(w_next);
        if (min_diag >= 1.0 - tol) {
            converged = true;
            ++iter;
            break;
        }
    }
    model.iterations_used = iter;
    model.converged = converged;

    // Deterministic presentation: order rows by the whitening component they
    // load most on, and make the dominant entry positive.
    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::int64_t> dominant(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Eigen::Index arg = 0;
        w.row(i).cwiseAbs().maxCoeff(&arg);
        dominant[static_cast<std::size_t>(i)] = arg;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return dominant[static_cast<std::size_t>(a)] < dominant[static_cast<std::size_t>(b)];
    });
    Matrix rotation(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t src = order[static_cast<std::size_t>(i)];
        Vector row = w.row(src).transpose();
        if (row(dominant[static_cast<std::size_t>(src)]) < 0.0) row = -row;
        rotation.row(i) = row.transpose();
    }
    model.rotation = std::move(rotation);
    model.unmixing = model.rotation * whitening.projection;
    return model;
}

Matrix ica_transform(const IcaModel& model, const Matrix& x) {
    if (x.rows() != model.unmixing.cols())
        throw_dimension("input dimension " + std::to_string(x.rows()) +
                        " does not match model dimension " + std::to_string(model.unmixing.cols()));
    return model.unmixing * (x.colwise() - model.whitening.mean);
}

}  // namespace rffhsi
