#include "oracles.hpp"

#include "sadrc/error.hpp"
#include "sadrc/metrics.hpp"
#include "sadrc/reservoir.hpp"
#include "sadrc/tasks.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sadrc;

TEST_CASE("mse examples and properties")
{
    const std::vector<double> y = {1.0, 2.0};
    CHECK(mse(y, y) == 0.0);
    CHECK(mse(y, std::vector<double>{0.0, 0.0}) == 2.5);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> a(50);
    std::vector<double> b(50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = g(rng);
        b[i] = g(rng);
    }
    const double base = mse(a, b);
    CHECK(base > 0.0);
    for (auto& v : a) {
        v *= 3.0;
    }
    for (auto& v : b) {
        v *= 3.0;
    }
    CHECK(mse(a, b) == doctest::Approx(9.0 * base).epsilon(1e-12));
    CHECK_THROWS_AS(mse(y, std::vector<double>{1.0}), DataError);
    CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST_CASE("squared_correlation matches the two-pass oracle")
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(200);
        std::vector<double> y(200);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = g(rng);
            y[i] = 0.7 * x[i] + g(rng) + 5.0;
        }
        CHECK(std::abs(squared_correlation(x, y) - oracle::squared_correlation(x, y)) <= 1e-12);
    }
    const std::vector<double> c(10, 4.0);
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(squared_correlation(v, c) == 0.0);
    CHECK(squared_correlation(v, v) == doctest::Approx(1.0));
}

TEST_CASE("mc_curve: perfect and constant readouts")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Matrix delayed(300, 5);
    for (Eigen::Index i = 0; i < delayed.rows(); ++i) {
        for (Eigen::Index k = 0; k < delayed.cols(); ++k) {
            delayed(i, k) = u(rng);
        }
    }
    const auto perfect = mc_curve(delayed, delayed);
    for (double m : perfect.per_delay) {
        CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(perfect.total == doctest::Approx(5.0));
    const auto flat = mc_curve(delayed, Matrix::Constant(300, 5, 0.3));
    CHECK(flat.total == 0.0);
    CHECK_THROWS_AS(mc_curve(delayed, Matrix::Zero(300, 4)), DataError);
}

TEST_CASE("memory_capacity: bounds, determinism and prefix property")
{
    ReservoirConfig cfg;
    cfg.n = 30;
    cfg.density = 0.2;
    cfg.len_adev = 20;
    cfg.len_train = 200;
    cfg.len_test = 10;
    const auto res = run_pipeline(cfg, gen_narma10(cfg.required_length(), 2));

    McSettings s;
    s.k_max = 20;
    s.washout = 100;
    s.samples = 600;
    const auto mc = memory_capacity(cfg, res.developed, 9, s);
    REQUIRE(mc.k_max() == 20);
    double sum = 0.0;
    for (double m : mc.per_delay) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
        sum += m;
    }
    CHECK(mc.total == doctest::Approx(sum).epsilon(1e-14));
    CHECK(mc.total <= 20.0);

    const auto again = memory_capacity(cfg, res.developed, 9, s);
    CHECK(again.per_delay == mc.per_delay);

    s.k_max = 10;
    const auto shorter = memory_capacity(cfg, res.developed, 9, s);
    CHECK(shorter.total <= mc.total);
    for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(shorter.per_delay[static_cast<std::size_t>(k)] - mc.per_delay[static_cast<std::size_t>(k)])
              <= 1e-8);
    }

    s.washout = 5;
    CHECK_THROWS_AS(memory_capacity(cfg, res.developed, 9, s), ConfigError);
}

TEST_CASE("matrix_distance examples")
{
    const Matrix z = Matrix::Zero(2, 2);
    const Matrix a = (Matrix(2, 2) << 1.0, -1.0, 0.0, 0.0).finished();
    const Matrix b = (Matrix(2, 2) << 0.5, 0.5, 0.0, 0.0).finished();
    CHECK(matrix_distance(a, a, DistanceMode::signed_sum) == 0.0);
    CHECK(matrix_distance(a, a, DistanceMode::absolute) == 0.0);
    CHECK(matrix_distance(a, z, DistanceMode::signed_sum) == 0.0);
    CHECK(matrix_distance(a, z, DistanceMode::absolute) == 2.0);
    CHECK(matrix_distance(b, z, DistanceMode::signed_sum) == 1.0);
    CHECK(matrix_distance(b, z, DistanceMode::absolute) == 1.0);
    CHECK_THROWS_AS(matrix_distance(a, Matrix::Zero(3, 2), DistanceMode::absolute), DataError);
}

TEST_CASE("matrix_distance absolute mode is a metric")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random = [&] {
        Matrix m(6, 6);
        for (Eigen::Index i = 0; i < 36; ++i) {
            m(i) = u(rng);
        }
        return m;
    };
    for (int t = 0; t < 100; ++t) {
        const Matrix x = random();
        const Matrix y = random();
        const Matrix w = random();
        const double xy = matrix_distance(x, y, DistanceMode::absolute);
        CHECK(xy == matrix_distance(y, x, DistanceMode::absolute));
        CHECK(xy > 0.0);
        CHECK(xy <= matrix_distance(x, w, DistanceMode::absolute) + matrix_distance(w, y, DistanceMode::absolute)
                        + 1e-12);
        CHECK(matrix_distance(x, y, DistanceMode::signed_sum) == doctest::Approx(-matrix_distance(y, x, DistanceMode::signed_sum)));
    }
}

TEST_CASE("beta_fit recovers known shapes")
{
    std::mt19937_64 rng(2025);
    const std::size_t n = 1000000;
    std::vector<double> w(n);

    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (auto& v : w) {
        v = uniform(rng);
    }
    const auto fit_u = beta_fit(w);
    CHECK(fit_u.sample_size == n);
    CHECK(std::abs(fit_u.a - 1.0) <= 0.02);
    CHECK(std::abs(fit_u.b - 1.0) <= 0.02);

    auto beta_samples = [&](double a, double b) {
        std::gamma_distribution<double> ga(a, 1.0);
        std::gamma_distribution<double> gb(b, 1.0);
        for (auto& v : w) {
            const double x = ga(rng);
            const double y = gb(rng);
            v = 2.0 * (x / (x + y)) - 1.0;
        }
        return beta_fit(w);
    };
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{5.0, 1.0}, {0.5, 0.5}, {2.0, 10.0}, {10.0, 10.0}}) {
        const auto fit = beta_samples(a, b);
        CHECK(std::abs(fit.a - a) <= 0.1);
        CHECK(std::abs(fit.b - b) <= 0.1);
    }
}

TEST_CASE("beta_fit faults")
{
    CHECK_THROWS_AS(beta_fit(std::vector<double>(20, 0.3)), DataError);
    CHECK_THROWS_AS(beta_fit(std::vector<double>(5, 0.3)), DataError);
    std::vector<double> outside(20, 0.0);
    outside[3] = 1.2;
    CHECK_THROWS_AS(beta_fit(outside), DataError);
    // Half the mass at each end: variance equals m(1 - m).
    std::vector<double> ends(20, -1.0);
    std::fill(ends.begin(), ends.begin() + 10, 1.0);
    CHECK_THROWS_AS(beta_fit(ends), DataError);
}

TEST_CASE("weight_histogram examples and conservation")
{
    MaskMatrix mask = MaskMatrix::Constant(2, 2, false);
    mask(0, 1) = mask(1, 0) = true;
    const auto zero = weight_histogram(Matrix::Zero(2, 2), mask, 4);
    REQUIRE(zero.size() == 4);
    CHECK(zero[2].count == 2);
    CHECK(zero[0].count + zero[1].count + zero[3].count == 0);
    CHECK(zero[0].center == doctest::Approx(-0.75));

    Matrix k = Matrix::Zero(2, 2);
    k(0, 1) = -1.0;
    k(1, 0) = 1.0;
    const auto ends = weight_histogram(k, mask, 2);
    CHECK(ends[0].count == 1);
    CHECK(ends[1].count == 1);

    const auto net = init_network(50, 0.1, 4, {});
    const auto h = weight_histogram(net.coupling(), net.mask(), 20);
    std::int64_t total = 0;
    for (const auto& bin : h) {
        total += bin.count;
    }
    CHECK(total == live_edge_count(50, 0.1));
    CHECK_THROWS_AS(weight_histogram(k, mask, 0), ConfigError);
}

TEST_CASE("histogram_mass_change")
{
    const std::vector<HistogramBin> a = {{-0.5, 4}, {0.5, 0}};
    const std::vector<HistogramBin> b = {{-0.5, 1}, {0.5, 3}};
    CHECK(histogram_mass_change(a, a) == 0.0);
    CHECK(histogram_mass_change(a, b) == doctest::Approx(0.75));
    CHECK(histogram_mass_change(a, b) == histogram_mass_change(b, a));
    CHECK_THROWS_AS(histogram_mass_change(a, std::vector<HistogramBin>{{0.0, 1}}), DataError);
}
