#include "sadrc/oscillator.hpp"

#include "sadrc/error.hpp"
#include "sadrc/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

namespace sadrc {

namespace {

double sample_beta(Rng& rng, const BetaShape& shape)
{
    std::gamma_distribution<double> ga(shape.a, 1.0);
    std::gamma_distribution<double> gb(shape.b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y > 0.0) {
        return x / (x + y);
    }
    // Both gamma draws underflowed (tiny shapes): the limit is a two-point law.
    std::bernoulli_distribution coin(shape.a / (shape.a + shape.b));
    return coin(rng) ? 1.0 : 0.0;
}

} // namespace

double wrap_phase(double theta) noexcept
{
    double w = std::fmod(theta, two_pi);
    if (w < 0.0) {
        w += two_pi;
    }
    if (w >= two_pi) {
        w = 0.0;
    }
    return w;
}

OscillatorNetwork::OscillatorNetwork(std::vector<double> phases,
                                     std::vector<double> natural_frequencies,
                                     Matrix coupling,
                                     MaskMatrix mask,
                                     DynamicsParams params)
    : phases_(std::move(phases)),
      omega_(std::move(natural_frequencies)),
      coupling_(std::move(coupling)),
      mask_(std::move(mask)),
      params_(params)
{
    const auto n = static_cast<Eigen::Index>(phases_.size());
    if (n < 1) {
        throw ConfigError("oscillator network needs at least one node");
    }
    if (static_cast<Eigen::Index>(omega_.size()) != n || coupling_.rows() != n ||
        coupling_.cols() != n || mask_.rows() != n || mask_.cols() != n) {
        throw ConfigError("oscillator network: phases, frequencies, coupling and mask sizes disagree");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(phases_[i] >= 0.0 && phases_[i] < two_pi)) {
            std::ostringstream os;
            os << "oscillator network: phase " << i << " = " << phases_[i] << " outside [0, 2pi)";
            throw ConfigError(os.str());
        }
        if (mask_(i, i)) {
            throw ConfigError("oscillator network: self-coupling on the mask diagonal");
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (mask_(i, j)) {
                edges_.push_back({static_cast<int>(i), static_cast<int>(j)});
            } else if (coupling_(i, j) != 0.0) {
                throw ConfigError("oscillator network: nonzero coupling outside the mask");
            }
        }
    }
    drive_.resize(phases_.size());
}

std::vector<double> OscillatorNetwork::live_weights() const
{
    std::vector<double> w;
    w.reserve(edges_.size());
    for (const auto& e : edges_) {
        w.push_back(coupling_(e.row, e.col));
    }
    return w;
}

void OscillatorNetwork::phase_step(double input)
{
    if (!std::isfinite(input)) {
        throw NumericalError("phase_step: non-finite input u(t)");
    }
    std::fill(drive_.begin(), drive_.end(), 0.0);
    for (const auto& e : edges_) {
        drive_[e.row] += coupling_(e.row, e.col) * std::sin(phases_[e.col] - phases_[e.row] + input);
    }
    const double dt = params_.dt;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        const double next = phases_[i] + dt * (omega_[i] + params_.lambda * drive_[i]);
        if (!std::isfinite(next)) {
            std::ostringstream os;
            os << "phase_step: non-finite phase at node " << i;
            throw NumericalError(os.str());
        }
        phases_[i] = wrap_phase(next);
    }
}

void OscillatorNetwork::coupling_step()
{
    const double step = params_.epsilon * params_.dt;
    for (const auto& e : edges_) {
        double& k = coupling_(e.row, e.col);
        k = std::clamp(k - step * std::sin(phases_[e.col] - phases_[e.row] + params_.beta), -1.0, 1.0);
    }
}

void OscillatorNetwork::scale_coupling(double factor)
{
    coupling_ *= factor;
}

void OscillatorNetwork::set_live_weights(std::span<const double> weights)
{
    if (weights.size() != edges_.size()) {
        throw ConfigError("set_live_weights: expected one weight per live edge");
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        coupling_(edges_[e].row, edges_[e].col) = weights[e];
    }
}

std::int64_t live_edge_count(int n, double density)
{
    const double slots = static_cast<double>(n) * static_cast<double>(n - 1);
    return static_cast<std::int64_t>(std::floor(density * slots));
}

OscillatorNetwork init_network(int n, double density, std::uint64_t seed,
                               const DynamicsParams& params, const WeightInit& weights)
{
    if (n < 1) {
        throw ConfigError("init_network: n must be >= 1");
    }
    if (!(density >= 0.0 && density <= 1.0)) {
        throw ConfigError("init_network: density must lie in [0, 1]");
    }
    if (weights.shape && !(weights.shape->a > 0.0 && weights.shape->b > 0.0)) {
        throw ConfigError("init_network: beta shape parameters must be positive");
    }

    Rng structure(derive_seed({seed, stream::structure}));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> omega(static_cast<std::size_t>(n));
    for (auto& w : omega) {
        w = normal(structure);
    }

    // Off-diagonal slots enumerated row-major; live slots drawn without replacement.
    std::vector<std::int64_t> slots;
    slots.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                slots.push_back(static_cast<std::int64_t>(i) * n + j);
            }
        }
    }
    const auto count = static_cast<std::size_t>(live_edge_count(n, density));
    std::vector<std::int64_t> live;
    live.reserve(count);
    std::sample(slots.begin(), slots.end(), std::back_inserter(live), count, structure);

    MaskMatrix mask = MaskMatrix::Constant(n, n, false);
    for (auto s : live) {
        mask(s / n, s % n) = true;
    }

    Rng weight_rng(weights.seed ? *weights.seed : derive_seed({seed, stream::weights}));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Matrix coupling = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!mask(i, j)) {
                continue;
            }
            coupling(i, j) = weights.shape ? 2.0 * sample_beta(weight_rng, *weights.shape) - 1.0
                                           : uniform(weight_rng);
        }
    }

    return OscillatorNetwork(std::vector<double>(static_cast<std::size_t>(n), 0.0),
                             std::move(omega), std::move(coupling), std::move(mask), params);
}

OrderParameter order_parameter(std::span<const double> phases)
{
    if (phases.empty()) {
        throw ConfigError("order_parameter: need at least one phase");
    }
    std::complex<double> sum{0.0, 0.0};
    for (double theta : phases) {
        sum += std::polar(1.0, theta);
    }
    sum /= static_cast<double>(phases.size());
    const double r = std::min(std::abs(sum), 1.0);
    return {r, r > 0.0 ? std::arg(sum) : 0.0};
}

} // namespace sadrc
