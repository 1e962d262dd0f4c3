#include "sadrc/spectral.hpp"

#include "sadrc/error.hpp"
#include "sadrc/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sadrc {

void SpectralRadiusSettings::validate() const
{
    if (!(tolerance > 0.0)) {
        throw ConfigError("spectral radius tolerance must be > 0");
    }
    if (max_iterations < 1) {
        throw ConfigError("spectral radius max_iterations must be >= 1");
    }
    if (!(zero_threshold > 0.0)) {
        throw ConfigError("spectral radius zero_threshold must be > 0");
    }
    if (block_size < 2) {
        throw ConfigError("spectral radius block_size must be >= 2");
    }
}

namespace {

Matrix starting_basis(Eigen::Index n, Eigen::Index p)
{
    if (p == n) {
        return Matrix::Identity(n, n);
    }
    // Fixed generator: the start must not depend on any caller seed.
    Rng rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix start(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            start(i, j) = u(rng);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(start);
    return qr.householderQ() * Matrix::Identity(n, p);
}

double dense_radius(const Matrix& k)
{
    Eigen::EigenSolver<Matrix> solver(k, false);
    if (solver.info() != Eigen::Success) {
        throw SpectralRadiusError("spectral_radius: Schur decomposition did not converge",
                                  std::numeric_limits<double>::quiet_NaN());
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double max_ritz_modulus(const Matrix& projected)
{
    if (projected.rows() == 1) {
        return std::abs(projected(0, 0));
    }
    Eigen::EigenSolver<Matrix> solver(projected, false);
    if (solver.info() != Eigen::Success) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

template <class Apply>
double subspace_radius(Eigen::Index n, Apply&& apply, const SpectralRadiusSettings& settings,
                       SpectralWorkspace* workspace)
{
    settings.validate();
    const Eigen::Index p = std::min<Eigen::Index>(n, settings.block_size);

    Matrix basis;
    if (workspace != nullptr && workspace->basis.rows() == n && workspace->basis.cols() == p) {
        basis = workspace->basis;
    } else {
        basis = starting_basis(n, p);
    }

    Matrix image(n, p);
    double previous = std::numeric_limits<double>::quiet_NaN();
    double estimate = previous;
    // Norm-limit estimate rho ~ |K^m q|^(1/m) from the growth of the leading column.
    double log_growth = 0.0;

    for (int it = 1; it <= settings.max_iterations; ++it) {
        apply(basis, image);
        const Matrix projected = basis.transpose() * image;
        estimate = max_ritz_modulus(projected);
        if (!std::isfinite(estimate)) {
            throw SpectralRadiusError("spectral_radius: Ritz projection failed", previous);
        }

        Eigen::HouseholderQR<Matrix> qr(image);
        log_growth += std::log(std::max(std::abs(qr.matrixQR()(0, 0)),
                                        std::numeric_limits<double>::min()));
        basis = qr.householderQ() * Matrix::Identity(n, p);

        const double scale = std::max(estimate, settings.zero_threshold);
        if (it > 1 && std::abs(estimate - previous) <= settings.tolerance * scale) {
            if (workspace != nullptr) {
                workspace->basis = basis;
            }
            return estimate < settings.zero_threshold ? 0.0 : estimate;
        }
        previous = estimate;
    }

    const double norm_limit = std::exp(log_growth / settings.max_iterations);
    std::ostringstream os;
    os.precision(12);
    os << "spectral_radius: no convergence after " << settings.max_iterations
       << " iterations (Ritz estimate " << estimate << ", norm-limit estimate " << norm_limit << ")";
    throw SpectralRadiusError(os.str(), estimate);
}

} // namespace

double spectral_radius(const Matrix& k, const SpectralRadiusSettings& settings,
                       SpectralWorkspace* workspace)
{
    if (k.rows() != k.cols()) {
        throw ConfigError("spectral_radius: matrix must be square");
    }
    if (k.size() == 0) {
        throw ConfigError("spectral_radius: empty matrix");
    }
    if (!k.allFinite()) {
        throw NumericalError("spectral_radius: non-finite matrix entry");
    }
    if (k.cwiseAbs().maxCoeff() == 0.0) {
        return 0.0;
    }
    if (k.rows() == 1) {
        return std::abs(k(0, 0));
    }
    settings.validate();
    if (settings.method == SpectralMethod::dense_schur) {
        const double r = dense_radius(k);
        return r < settings.zero_threshold ? 0.0 : r;
    }
    return subspace_radius(
        k.rows(), [&k](const Matrix& q, Matrix& out) { out.noalias() = k * q; }, settings, workspace);
}

double spectral_radius(const OscillatorNetwork& net, const SpectralRadiusSettings& settings,
                       SpectralWorkspace* workspace)
{
    const Matrix& k = net.coupling();
    const auto edges = net.edges();
    bool all_zero = true;
    for (const auto& e : edges) {
        const double w = k(e.row, e.col);
        if (!std::isfinite(w)) {
            throw NumericalError("spectral_radius: non-finite coupling weight");
        }
        all_zero = all_zero && w == 0.0;
    }
    if (all_zero) {
        return 0.0;
    }
    if (net.size() == 1) {
        return std::abs(k(0, 0));
    }
    settings.validate();
    if (settings.method == SpectralMethod::dense_schur) {
        const double r = dense_radius(k);
        return r < settings.zero_threshold ? 0.0 : r;
    }
    auto apply = [&](const Matrix& q, Matrix& out) {
        out.setZero();
        for (const auto& e : edges) {
            out.row(e.row) += k(e.row, e.col) * q.row(e.col);
        }
    };
    return subspace_radius(net.size(), apply, settings, workspace);
}

double rescale_to_radius(OscillatorNetwork& net, double target,
                         const SpectralRadiusSettings& settings, SpectralWorkspace* workspace)
{
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw ConfigError("rescale_to_radius: target radius must be > 0");
    }
    const double radius = spectral_radius(net, settings, workspace);
    if (radius >= settings.zero_threshold) {
        net.scale_coupling(target / radius);
    }
    return radius;
}

} // namespace sadrc
