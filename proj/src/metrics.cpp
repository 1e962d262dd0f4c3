#include "sadrc/metrics.hpp"

#include "sadrc/error.hpp"
#include "sadrc/random.hpp"
#include "sadrc/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sadrc {

double mse(std::span<const double> targets, std::span<const double> predictions)
{
    if (targets.size() != predictions.size()) {
        std::ostringstream os;
        os << "mse: " << targets.size() << " targets vs " << predictions.size() << " predictions";
        throw DataError(os.str());
    }
    if (targets.empty()) {
        throw DataError("mse: empty sequences");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double d = targets[i] - predictions[i];
        sum += d * d;
    }
    return sum / static_cast<double>(targets.size());
}

double squared_correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.empty()) {
        throw DataError("squared_correlation: sequences must be nonempty and of equal length");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // Exact constancy is checked directly: the centered sums of a constant
    // series can be a rounding residue instead of 0.
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (sxx <= 0.0 || syy <= 0.0 || constant(x) || constant(y)) {
        return 0.0;
    }
    return std::clamp((sxy / n) * (sxy / n) / ((sxx / n) * (syy / n)), 0.0, 1.0);
}

McCurve mc_curve(const Matrix& delayed_inputs, const Matrix& outputs)
{
    if (delayed_inputs.rows() != outputs.rows() || delayed_inputs.cols() != outputs.cols()) {
        throw DataError("mc_curve: delayed inputs and outputs differ in shape");
    }
    McCurve curve;
    curve.per_delay.resize(static_cast<std::size_t>(outputs.cols()));
    for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
        const Eigen::VectorXd target = delayed_inputs.col(k);
        const Eigen::VectorXd out = outputs.col(k);
        const double mc = squared_correlation(
            std::span<const double>(target.data(), static_cast<std::size_t>(target.size())),
            std::span<const double>(out.data(), static_cast<std::size_t>(out.size())));
        curve.per_delay[static_cast<std::size_t>(k)] = mc;
        curve.total += mc;
    }
    return curve;
}

McCurve memory_capacity(const ReservoirConfig& cfg, const OscillatorNetwork& developed,
                        std::uint64_t seed, const McSettings& settings)
{
    if (settings.k_max < 1 || settings.washout < settings.k_max) {
        throw ConfigError("memory_capacity: need k_max >= 1 and washout >= k_max");
    }
    if (!(settings.train_fraction > 0.0 && settings.train_fraction < 1.0)) {
        throw ConfigError("memory_capacity: train_fraction must lie in (0, 1)");
    }
    const int train_rows = static_cast<int>(std::floor(settings.train_fraction * settings.samples));
    const int test_rows = settings.samples - train_rows;
    if (train_rows < 1 || test_rows < 2) {
        throw ConfigError("memory_capacity: too few samples for the train/test split");
    }

    OscillatorNetwork net = developed;
    const int total = settings.washout + settings.samples;
    Rng rng(derive_seed({seed, stream::mc_input}));
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    std::vector<double> s(static_cast<std::size_t>(total));
    for (auto& v : s) {
        v = uniform(rng);
    }

    Matrix phases(settings.samples, net.size());
    Matrix delayed(settings.samples, settings.k_max);
    for (int t = 0; t < total; ++t) {
        net.phase_step(s[static_cast<std::size_t>(t)]);
        if (t < settings.washout) {
            continue;
        }
        const int row = t - settings.washout;
        const auto p = net.phases();
        for (int j = 0; j < net.size(); ++j) {
            phases(row, j) = p[static_cast<std::size_t>(j)];
        }
        for (int k = 1; k <= settings.k_max; ++k) {
            delayed(row, k - 1) = s[static_cast<std::size_t>(t - k)];
        }
    }

    const Matrix features = feature_matrix(phases, cfg.features);
    const Readout readout = train_readout(features.topRows(train_rows), delayed.topRows(train_rows),
                                          cfg.ridge_alpha, cfg.features);
    const Matrix outputs = features.bottomRows(test_rows) * readout.weights.transpose();
    return mc_curve(delayed.bottomRows(test_rows), outputs);
}

double matrix_distance(const Matrix& a, const Matrix& b, DistanceMode mode)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DataError("matrix_distance: shape mismatch");
    }
    const Matrix diff = a - b;
    return mode == DistanceMode::signed_sum ? diff.sum() : diff.cwiseAbs().sum();
}

BetaFit beta_fit(std::span<const double> weights)
{
    if (weights.size() < 10) {
        throw DataError("beta_fit: need at least 10 samples");
    }
    const auto n = static_cast<double>(weights.size());
    double mean = 0.0;
    for (double w : weights) {
        if (!(w >= -1.0 && w <= 1.0)) {
            std::ostringstream os;
            os << "beta_fit: weight " << w << " outside [-1, 1]";
            throw DataError(os.str());
        }
        mean += (w + 1.0) / 2.0;
    }
    mean /= n;
    double var = 0.0;
    for (double w : weights) {
        const double d = (w + 1.0) / 2.0 - mean;
        var += d * d;
    }
    var /= n;
    const bool all_equal = std::all_of(weights.begin(), weights.end(),
                                       [&](double w) { return w == weights.front(); });
    if (var <= 0.0 || all_equal) {
        throw DataError("beta_fit: degenerate sample (zero variance)");
    }
    const double spread = mean * (1.0 - mean);
    if (var >= spread) {
        throw DataError("beta_fit: moment fit infeasible (variance >= m(1 - m))");
    }
    const double common = spread / var - 1.0;
    return {mean * common, (1.0 - mean) * common, weights.size()};
}

std::vector<HistogramBin> weight_histogram(const Matrix& k, const MaskMatrix& mask, int bins)
{
    if (bins < 1) {
        throw ConfigError("weight_histogram: bins must be >= 1");
    }
    if (k.rows() != mask.rows() || k.cols() != mask.cols()) {
        throw DataError("weight_histogram: matrix and mask differ in shape");
    }
    const double width = 2.0 / bins;
    std::vector<HistogramBin> hist(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        hist[static_cast<std::size_t>(b)] = {-1.0 + (b + 0.5) * width, 0};
    }
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            if (!mask(i, j)) {
                continue;
            }
            const auto b = static_cast<int>(std::floor((k(i, j) + 1.0) / width));
            ++hist[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))].count;
        }
    }
    return hist;
}

double histogram_mass_change(std::span<const HistogramBin> a, std::span<const HistogramBin> b)
{
    if (a.size() != b.size()) {
        throw DataError("histogram_mass_change: bin counts differ");
    }
    double ta = 0.0;
    double tb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ta += static_cast<double>(a[i].count);
        tb += static_cast<double>(b[i].count);
    }
    if (ta == 0.0 || tb == 0.0) {
        return ta == tb ? 0.0 : 1.0;
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        moved += std::abs(static_cast<double>(a[i].count) / ta - static_cast<double>(b[i].count) / tb);
    }
    return 0.5 * moved;
}

} // namespace sadrc
