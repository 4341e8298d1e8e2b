#include "rffhsi/lda.hpp"

#include <cmath>

namespace rffhsi {

ScatterPair compute_scatter(const Matrix& x, const LabelVector& labels) {
    check_same_length(x, labels);
    const std::int64_t d = x.rows();
    const std::int64_t n = x.cols();
    const int num_classes = labels.num_classes;

    ScatterPair scatter;
    scatter.class_counts.assign(static_cast<std::size_t>(num_classes), 0);
    scatter.class_means = Matrix::Zero(d, num_classes);
    for (std::int64_t j = 0; j < n; ++j) {
        const int c = labels.ids[static_cast<std::size_t>(j)] - 1;
        ++scatter.class_counts[static_cast<std::size_t>(c)];
        scatter.class_means.col(c) += x.col(j);
    }
    for (int c = 0; c < num_classes; ++c) {
        const auto count = scatter.class_counts[static_cast<std::size_t>(c)];
        if (count == 0) throw_numeric("class " + std::to_string(c + 1) + " is empty");
        scatter.class_means.col(c) /= static_cast<double>(count);
    }
    scatter.global_mean = x.rowwise().mean();

    scatter.within = Matrix::Zero(d, d);
    // Accumulate per class in fixed class order for reproducibility.
    for (int c = 0; c < num_classes; ++c) {
        Matrix centered(d, scatter.class_counts[static_cast<std::size_t>(c)]);
        std::int64_t k = 0;
        for (std::int64_t j = 0; j < n; ++j)
            if (labels.ids[static_cast<std::size_t>(j)] - 1 == c)
                centered.col(k++) = x.col(j) - scatter.class_means.col(c);
        scatter.within.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0);
    }
    scatter.within = scatter.within.selfadjointView<Eigen::Lower>();

    scatter.between = Matrix::Zero(d, d);
    for (int c = 0; c < num_classes; ++c) {
        const Vector diff = scatter.class_means.col(c) - scatter.global_mean;
        scatter.between +=
            static_cast<double>(scatter.class_counts[static_cast<std::size_t>(c)]) * diff *
            diff.transpose();
    }
    return scatter;
}

LdaModel solve_lda(const ScatterPair& scatter, int q, double ridge) {
    const std::int64_t d = scatter.within.rows();
    const int num_classes = scatter.num_classes();
    if (q < 1 || q > num_classes - 1)
        throw_usage("component count " + std::to_string(q) + " outside [1, C-1] = [1, " +
                    std::to_string(num_classes - 1) + "] (rank of the between-class scatter)");
    if (q > d) throw_dimension("component count exceeds feature dimension");
    if (ridge < 0.0) throw_usage("ridge must be >= 0");

    const double ridge_used = ridge * scatter.within.trace() / static_cast<double>(d);
    Matrix regularized = scatter.within;
    regularized.diagonal().array() += ridge_used;

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(scatter.between, regularized);
    if (eig.info() != Eigen::Success)
        throw_numeric("within-class scatter is numerically singular even with ridge");

    LdaModel model;
    model.ridge_used = ridge_used;
    model.projection.resize(d, q);
    model.eigenvalues.resize(q);
    for (int i = 0; i < q; ++i) {
        const std::int64_t src = d - 1 - i;  // ascending -> descending
        model.eigenvalues(i) = eig.eigenvalues()(src);
        Vector column = eig.eigenvectors().col(src);
        const double norm = column.norm();
        if (norm > 0.0) column /= norm;
        model.projection.col(i) = column;
    }
    model.degenerate = model.eigenvalues.cwiseAbs().maxCoeff() < 1e-10;

    // Generalized-eigenpair residual check, with an absolute floor so exact
    // zero scatters do not trip it.
    for (int i = 0; i < q; ++i) {
        const Vector g = model.projection.col(i);
        const double lambda = model.eigenvalues(i);
        const Vector residual = scatter.between * g - lambda * (regularized * g);
        const double scale = (scatter.between * g).norm();
        const double floor = 1e-9 * (scatter.between.norm() + std::abs(lambda) * regularized.norm());
        if (residual.norm() > 1e-6 * scale + floor)
            throw_numeric("generalized eigenpair residual too large for component " +
                          std::to_string(i));
    }
    return model;
}

Matrix lda_transform(const LdaModel& model, const Matrix& x) {
    if (x.rows() != model.projection.rows())
        throw_dimension("input dimension " + std::to_string(x.rows()) +
                        " does not match model dimension " +
                        std::to_string(model.projection.rows()));
    return model.projection.transpose() * x;
}

}  // namespace rffhsi
