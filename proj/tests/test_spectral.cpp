#include "oracles.hpp"

#include "sadrc/error.hpp"
#include "sadrc/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sadrc;

namespace {

oracle::Dense to_dense(const Matrix& m)
{
    oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
        }
    }
    return d;
}

Matrix random_matrix(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

// Block-diagonal 2x2 rotations scaled by r_k, so the dominant eigenvalues are a complex pair.
Matrix rotation_blocks(const std::vector<std::pair<double, double>>& blocks)
{
    const auto n = static_cast<int>(2 * blocks.size());
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto [r, angle] = blocks[b];
        const int o = static_cast<int>(2 * b);
        m(o, o) = r * std::cos(angle);
        m(o, o + 1) = -r * std::sin(angle);
        m(o + 1, o) = r * std::sin(angle);
        m(o + 1, o + 1) = r * std::cos(angle);
    }
    return m;
}

SpectralRadiusSettings subspace()
{
    SpectralRadiusSettings s;
    s.method = SpectralMethod::subspace_iteration;
    s.max_iterations = 20000;
    return s;
}

} // namespace

TEST_CASE("oracle: characteristic polynomial roots of known matrices")
{
    CHECK(oracle::spectral_radius({{2, 0}, {0, -1}}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(oracle::spectral_radius({{0, 1}, {-1, 0}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::spectral_radius({{0, 1}, {0, 0}}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oracle::spectral_radius({{1, 2, 0}, {0, 3, 0}, {0, 0, -0.5}}) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral_radius examples")
{
    for (const auto& settings : {SpectralRadiusSettings{}, subspace()}) {
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = 2.0;
        d(1, 1) = -1.0;
        CHECK(spectral_radius(d, settings) == doctest::Approx(2.0).epsilon(1e-10));

        Matrix nil = Matrix::Zero(2, 2);
        nil(0, 1) = 1.0;
        CHECK(spectral_radius(nil, settings) == doctest::Approx(0.0).epsilon(1e-10));

        Matrix rot = Matrix::Zero(2, 2);
        rot(0, 1) = 1.0;
        rot(1, 0) = -1.0;
        CHECK(spectral_radius(rot, settings) == doctest::Approx(1.0).epsilon(1e-10));

        CHECK(spectral_radius(Matrix::Zero(4, 4), settings) == 0.0);
        CHECK(spectral_radius(Matrix::Constant(1, 1, -3.0), settings) == 3.0);
    }
}

TEST_CASE("spectral_radius matches the polynomial-root oracle on random small matrices")
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + t % 9;
        const Matrix m = random_matrix(rng, n);
        const double expected = oracle::spectral_radius(to_dense(m));
        CHECK(std::abs(spectral_radius(m) - expected) <= 1e-6);
        CHECK(std::abs(spectral_radius(m, subspace()) - expected) <= 1e-6);
    }
}

TEST_CASE("spectral_radius resolves complex dominant pairs")
{
    const Matrix m = rotation_blocks({{0.9, 0.7}, {1.3, 2.1}, {0.4, 0.2}, {1.1, 0.5}});
    const double expected = oracle::spectral_radius(to_dense(m));
    CHECK(expected == doctest::Approx(1.3).epsilon(1e-10));
    CHECK(std::abs(spectral_radius(m) - expected) <= 1e-6);
    CHECK(std::abs(spectral_radius(m, subspace()) - expected) <= 1e-6);

    // Conjugate the blocks with a random similarity so the matrix is dense.
    std::mt19937_64 rng(5);
    Matrix s = random_matrix(rng, 8) + 3.0 * Matrix::Identity(8, 8);
    const Matrix dense = s * m * s.inverse();
    const double dense_expected = oracle::spectral_radius(to_dense(dense));
    CHECK(dense_expected == doctest::Approx(1.3).epsilon(1e-8));
    CHECK(std::abs(spectral_radius(dense) - dense_expected) <= 1e-6);
    CHECK(std::abs(spectral_radius(dense, subspace()) - dense_expected) <= 1e-6);
}

TEST_CASE("spectral_radius is absolutely homogeneous")
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const Matrix m = random_matrix(rng, 6);
        const double base = oracle::spectral_radius(to_dense(m));
        for (double c : {-2.5, 0.3, 4.0}) {
            CHECK(spectral_radius(Matrix(c * m)) == doctest::Approx(std::abs(c) * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("network overload applies K through live edges")
{
    auto net = init_network(60, 0.1, 21, {});
    const double direct = spectral_radius(net.coupling());
    CHECK(spectral_radius(net) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(spectral_radius(net, subspace()) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("rescale_to_radius examples")
{
    Matrix d = Matrix::Zero(2, 2);
    d(0, 1) = 2.0;
    d(1, 0) = 2.0;
    MaskMatrix mask = MaskMatrix::Constant(2, 2, false);
    mask(0, 1) = mask(1, 0) = true;
    OscillatorNetwork net({0.0, 0.0}, {0.0, 0.0}, d, mask, {});
    CHECK(rescale_to_radius(net, 1.0) == doctest::Approx(2.0));
    CHECK(net.coupling()(0, 1) == doctest::Approx(1.0).epsilon(1e-14));

    OscillatorNetwork empty({0.0, 0.0}, {0.0, 0.0}, Matrix::Zero(2, 2), mask, {});
    CHECK(rescale_to_radius(empty, 0.7) == 0.0);
    CHECK(empty.coupling().isZero(0.0));

    CHECK_THROWS_AS(rescale_to_radius(net, 0.0), ConfigError);
}

TEST_CASE("rescale_to_radius hits the target on random networks")
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto net = init_network(10, 0.5, seed, {});
        rescale_to_radius(net, 0.9);
        CHECK(std::abs(oracle::spectral_radius(to_dense(net.coupling())) - 0.9) <= 1e-8);
    }
    auto big = init_network(100, 0.05, 3, {});
    rescale_to_radius(big, 1.7);
    CHECK(spectral_radius(big) == doctest::Approx(1.7).epsilon(1e-10));
}

TEST_CASE("subspace iteration reports its best estimate on non-convergence")
{
    std::mt19937_64 rng(1);
    const Matrix m = random_matrix(rng, 40);
    SpectralRadiusSettings s;
    s.method = SpectralMethod::subspace_iteration;
    s.max_iterations = 2;
    s.tolerance = 1e-15;
    try {
        spectral_radius(m, s);
        FAIL("expected SpectralRadiusError");
    } catch (const SpectralRadiusError& e) {
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.best_estimate() > 0.0);
    }
}

TEST_CASE("spectral_radius rejects bad input and settings")
{
    CHECK_THROWS_AS(spectral_radius(Matrix::Zero(2, 3)), ConfigError);
    CHECK_THROWS_AS(spectral_radius(Matrix(0, 0)), ConfigError);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(spectral_radius(bad), NumericalError);
    SpectralRadiusSettings s;
    s.tolerance = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.max_iterations = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.zero_threshold = -1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}
