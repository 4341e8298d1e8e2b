#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rffhsi/lda.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace rffhsi;

TEST_CASE("scatter matrices of the 1-D two-point case") {
    Matrix x(1, 2);
    x << 0.0, 2.0;
    const LabelVector labels = make_label_vector({1, 2});
    const ScatterPair scatter = compute_scatter(x, labels);

    // mu = 1; S_w = 0; S_b = 1*(0-1)^2 + 1*(2-1)^2 = 2
    CHECK(scatter.global_mean(0) == doctest::Approx(1.0));
    CHECK(scatter.within(0, 0) == doctest::Approx(0.0));
    CHECK(scatter.between(0, 0) == doctest::Approx(2.0));
    CHECK(scatter.class_counts == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("identical samples give zero scatters") {
    Matrix x = Matrix::Constant(3, 12, 4.2);
    std::vector<int> ids;
    for (int i = 0; i < 12; ++i) ids.push_back(1 + i % 3);
    const ScatterPair scatter = compute_scatter(x, make_label_vector(ids));
    CHECK(scatter.within.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(scatter.between.cwiseAbs().maxCoeff() <= 1e-20);
}

TEST_CASE("total scatter identity S_w + S_b = S_t on random 5-class data") {
    const auto [x, ids] = testing::gaussian_blobs(8, 5, 60, 2.0, 21);
    const LabelVector labels = make_label_vector(ids);
    const ScatterPair scatter = compute_scatter(x, labels);

    const Matrix centered = x.colwise() - Vector(x.rowwise().mean());
    const Matrix total = centered * centered.transpose();
    const double relative =
        (scatter.within + scatter.between - total).norm() / total.norm();
    CHECK(relative <= 1e-8);

    SUBCASE("both scatters are symmetric") {
        CHECK((scatter.within - scatter.within.transpose()).norm() / scatter.within.norm() <= 1e-10);
        CHECK((scatter.between - scatter.between.transpose()).norm() / scatter.between.norm() <=
              1e-10);
    }
}

TEST_CASE("solve_lda finds the closed-form direction for two isotropic Gaussians") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(2, 1000);
    std::vector<int> ids(1000);
    for (int j = 0; j < 1000; ++j) {
        const bool second = j >= 500;
        x(0, j) = normal(rng) + (second ? 4.0 : 0.0);
        x(1, j) = normal(rng);
        ids[static_cast<std::size_t>(j)] = second ? 2 : 1;
    }
    const ScatterPair scatter = compute_scatter(x, make_label_vector(ids));
    const LdaModel model = solve_lda(scatter, 1);

    // closed form: g proportional to S_w^-1 (mu_1 - mu_2)
    const Vector delta = scatter.class_means.col(0) - scatter.class_means.col(1);
    const Vector oracle = scatter.within.ldlt().solve(delta);
    CHECK(std::abs(testing::cosine_similarity(model.projection.col(0), oracle)) >= 0.999);

    // projected Fisher criterion is non-increasing down the spectrum
    CHECK(model.eigenvalues(0) > 0.0);
}

TEST_CASE("solve_lda enforces q <= C - 1") {
    const auto [x, ids] = testing::gaussian_blobs(5, 2, 40, 3.0, 9);
    const ScatterPair scatter = compute_scatter(x, make_label_vector(ids));
    CHECK_NOTHROW(solve_lda(scatter, 1));
    CHECK_THROWS_AS(solve_lda(scatter, 2), Error);  // C = 2 means q max 1
}

TEST_CASE("identical class means yield a degenerate model") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(3, 400);
    std::vector<int> ids(400);
    for (int j = 0; j < 400; ++j) {
        for (int i = 0; i < 3; ++i) x(i, j) = normal(rng);
        ids[static_cast<std::size_t>(j)] = 1 + j % 2;
    }
    // force exactly equal class means
    Matrix mean_1 = Matrix::Zero(3, 1), mean_2 = Matrix::Zero(3, 1);
    int n1 = 0, n2 = 0;
    for (int j = 0; j < 400; ++j)
        (ids[static_cast<std::size_t>(j)] == 1 ? (mean_1 += x.col(j), ++n1)
                                               : (mean_2 += x.col(j), ++n2));
    for (int j = 0; j < 400; ++j)
        x.col(j) -= (ids[static_cast<std::size_t>(j)] == 1 ? mean_1 / n1 : mean_2 / n2);

    const ScatterPair scatter = compute_scatter(x, make_label_vector(ids));
    const LdaModel model = solve_lda(scatter, 1);
    CHECK(model.degenerate);
    CHECK(std::abs(model.eigenvalues(0)) < 1e-10);
}

TEST_CASE("generalized eigenpair residuals stay within the contract") {
    const auto [x, ids] = testing::gaussian_blobs(10, 4, 50, 2.5, 55);
    const ScatterPair scatter = compute_scatter(x, make_label_vector(ids));
    const LdaModel model = solve_lda(scatter, 3);

    Matrix regularized = scatter.within;
    regularized.diagonal().array() += model.ridge_used;
    for (int i = 0; i < 3; ++i) {
        const Vector g = model.projection.col(i);
        const double residual =
            (scatter.between * g - model.eigenvalues(i) * (regularized * g)).norm();
        CHECK(residual <= 1e-6 * (scatter.between * g).norm() + 1e-12);
        CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(model.eigenvalues(0) >= model.eigenvalues(1));
    CHECK(model.eigenvalues(1) >= model.eigenvalues(2));
}

TEST_CASE("lda_transform projects exactly") {
    const auto [x, ids] = testing::gaussian_blobs(6, 3, 30, 2.0, 77);
    const LabelVector labels = make_label_vector(ids);
    const ScatterPair scatter = compute_scatter(x, labels);
    const LdaModel model = solve_lda(scatter, 2);

    SUBCASE("a basis-vector projection copies the input row") {
        LdaModel basis;
        basis.projection = Matrix::Zero(6, 1);
        basis.projection(2, 0) = 1.0;
        basis.eigenvalues = Vector::Ones(1);
        const Matrix projected = lda_transform(basis, x);
        CHECK((projected.row(0) - x.row(2)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("class means transform linearly") {
        const Matrix projected_means = lda_transform(model, scatter.class_means);
        CHECK((projected_means - model.projection.transpose() * scatter.class_means)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }

    SUBCASE("top direction beats 1000 random directions on the Fisher ratio") {
        auto fisher_ratio = [&](const Vector& direction) {
            const double between = direction.dot(scatter.between * direction);
            const double within = direction.dot(scatter.within * direction);
            return between / within;
        };
        const double top = fisher_ratio(model.projection.col(0));
        std::mt19937_64 rng(5);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int t = 0; t < 1000; ++t) {
            Vector direction(6);
            for (int i = 0; i < 6; ++i) direction(i) = normal(rng);
            direction.normalize();
            CHECK(fisher_ratio(direction) <= top * (1.0 + 1e-9));
        }
    }

    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(lda_transform(model, Matrix::Zero(5, 2)), Error);
    }
}

TEST_CASE("scaling all inputs leaves directions unchanged") {
    const auto [x, ids] = testing::gaussian_blobs(7, 3, 40, 2.0, 88);
    const LabelVector labels = make_label_vector(ids);
    const LdaModel base = solve_lda(compute_scatter(x, labels), 2);
    const LdaModel scaled = solve_lda(compute_scatter(Matrix(3.7 * x), labels), 2);
    for (int i = 0; i < 2; ++i) {
        const double cosine = std::abs(
            testing::cosine_similarity(base.projection.col(i), scaled.projection.col(i)));
        CHECK(cosine >= 0.999);
    }
}
