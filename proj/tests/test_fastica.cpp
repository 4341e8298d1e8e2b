#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rffhsi/fastica.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace rffhsi;

namespace {

Matrix sample_covariance(const Matrix& x) {
    const Matrix centered = x.colwise() - Vector(x.rowwise().mean());
    return centered * centered.transpose() / static_cast<double>(x.cols());
}

// Three non-Gaussian sources mixed by a well-conditioned matrix.
struct MixtureFixture {
    Matrix sources;  // n x N
    Matrix mixing;   // n x n
    Matrix observed;

    explicit MixtureFixture(int n_samples, std::uint64_t seed) {
        sources.resize(3, n_samples);
        sources.row(0) = testing::uniform_source(n_samples, seed).transpose();
        sources.row(1) = testing::laplace_source(n_samples, seed + 1).transpose();
        sources.row(2) = testing::uniform_source(n_samples, seed + 2).transpose();
        mixing = testing::well_conditioned_mixing(3, seed + 3);
        observed = mixing * sources;
    }
};

}  // namespace

TEST_CASE("center_whiten produces identity covariance in eigenvalue order") {
    const Matrix x = testing::gaussian_matrix(6, 4000, 2);
    Matrix scaled = x;
    scaled.row(0) *= 5.0;  // spread the spectrum
    scaled.row(5) *= 0.2;

    const auto [whitened, model] = center_whiten(scaled, 6);
    CHECK(model.retained == 6);
    CHECK((sample_covariance(whitened) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(whitened.rowwise().mean().cwiseAbs().maxCoeff() <= 1e-12);

    // projection * cov * projection^T = I within 1e-6 (model invariant)
    const Matrix check = model.projection * sample_covariance(scaled) * model.projection.transpose();
    CHECK((check - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("center_whiten on {-1, +1} keeps unit variance") {
    Matrix x(1, 2);
    x << -1.0, 1.0;
    const auto [whitened, model] = center_whiten(x, 1);
    // 1/N variance convention: cov = 1, so values stay put
    CHECK(whitened(0, 0) == doctest::Approx(-1.0));
    CHECK(whitened(0, 1) == doctest::Approx(1.0));
    CHECK(model.mean(0) == doctest::Approx(0.0));
}

TEST_CASE("center_whiten rejects rank-deficient requests") {
    // points on a line in 3-D
    Matrix x(3, 100);
    const Vector direction = Vector::Ones(3);
    for (int j = 0; j < 100; ++j) x.col(j) = direction * static_cast<double>(j);
    CHECK_THROWS_AS(center_whiten(x, 2), Error);
    CHECK_NOTHROW(center_whiten(x, 1));
}

TEST_CASE("fastica recovers mixed non-Gaussian sources") {
    const MixtureFixture fixture(20000, 100);
    const auto [whitened, whitening] = center_whiten(fixture.observed, 3);
    const IcaModel model =
        fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-6, 400, 1);

    CHECK(model.converged);
    const double amari = testing::amari_index(model.unmixing * fixture.mixing);
    CHECK(amari < 0.05);

    // rows orthonormal
    const Matrix gram = model.rotation * model.rotation.transpose();
    CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-6);
    // unmixing = rotation * projection exactly
    CHECK((model.unmixing - model.rotation * whitening.projection).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fastica with cube nonlinearity also separates") {
    const MixtureFixture fixture(20000, 300);
    const auto [whitened, whitening] = center_whiten(fixture.observed, 3);
    const IcaModel model = fastica_fit(whitened, whitening, IcaNonlinearity::cube, 1e-6, 400, 2);
    CHECK(testing::amari_index(model.unmixing * fixture.mixing) < 0.05);
}

TEST_CASE("fastica n=1 returns the whitening row up to sign") {
    const Matrix x = testing::uniform_source(5000, 4).transpose() * 3.0;
    const auto [whitened, whitening] = center_whiten(x, 1);
    const IcaModel model = fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-6, 400, 3);
    CHECK(std::abs(model.rotation(0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(model.unmixing(0, 0)) ==
          doctest::Approx(std::abs(whitening.projection(0, 0))).epsilon(1e-9));
}

TEST_CASE("two Gaussian sources keep orthonormal rows even without convergence") {
    const Matrix x = testing::gaussian_matrix(2, 8000, 8);
    const auto [whitened, whitening] = center_whiten(x, 2);
    const IcaModel model = fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-9, 50, 5);
    // convergence flag may be false here; orthonormality must hold regardless
    const Matrix gram = model.rotation * model.rotation.transpose();
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(model.iterations_used <= 50);
}

TEST_CASE("ica_transform whitens the training distribution") {
    const MixtureFixture fixture(10000, 200);
    const auto [whitened, whitening] = center_whiten(fixture.observed, 3);
    const IcaModel model =
        fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-6, 400, 7);

    const Matrix projected = ica_transform(model, fixture.observed);
    CHECK((sample_covariance(projected) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-4);

    SUBCASE("training mean maps to zero") {
        const Matrix mean_only = fixture.observed.rowwise().mean().replicate(1, 4);
        const Matrix out = ica_transform(model, mean_only);
        CHECK(out.cwiseAbs().maxCoeff() <= 1e-10);
    }

    SUBCASE("held-out mixtures recover sources up to sign and permutation") {
        const MixtureFixture held_out(4000, 201);
        const Matrix fresh = fixture.mixing * held_out.sources;
        const Matrix recovered = ica_transform(model, fresh);
        // best absolute correlation per true source
        for (int s = 0; s < 3; ++s) {
            double best = 0.0;
            const Vector truth = (held_out.sources.row(s).transpose().array() -
                                  held_out.sources.row(s).mean())
                                     .matrix();
            for (int r = 0; r < 3; ++r) {
                const Vector estimate =
                    (recovered.row(r).transpose().array() - recovered.row(r).mean()).matrix();
                best = std::max(best,
                                std::abs(testing::cosine_similarity(truth, estimate)));
            }
            CHECK(best >= 0.95);
        }
    }
}

TEST_CASE("fastica is deterministic per seed") {
    const MixtureFixture fixture(5000, 400);
    const auto [whitened, whitening] = center_whiten(fixture.observed, 3);
    const IcaModel a = fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-6, 400, 11);
    const IcaModel b = fastica_fit(whitened, whitening, IcaNonlinearity::logcosh, 1e-6, 400, 11);
    CHECK(a.rotation == b.rotation);
    CHECK(a.iterations_used == b.iterations_used);
}
