#include "sadrc/reservoir.hpp"

#include "sadrc/error.hpp"
#include "sadrc/metrics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sadrc {

void TaskData::validate() const
{
    if (inputs.size() != targets.size()) {
        std::ostringstream os;
        os << "task data: " << inputs.size() << " inputs but " << targets.size() << " targets";
        throw DataError(os.str());
    }
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        if (!std::isfinite(inputs[t]) || !std::isfinite(targets[t])) {
            std::ostringstream os;
            os << "task data: non-finite value at index " << t;
            throw DataError(os.str());
        }
    }
}

void ReservoirConfig::validate() const
{
    auto fail = [](const char* what) { throw ConfigError(what); };
    if (n < 1) fail("n must be >= 1");
    if (!(density >= 0.0 && density <= 1.0)) fail("density must lie in [0, 1]");
    if (!(spectral_target > 0.0) || !std::isfinite(spectral_target)) fail("rho must be > 0");
    if (!(dynamics.lambda > 0.0) || !std::isfinite(dynamics.lambda)) fail("lambda must be > 0");
    if (!std::isfinite(dynamics.beta)) fail("beta must be finite");
    if (!(dynamics.epsilon >= 0.0) || !std::isfinite(dynamics.epsilon)) fail("epsilon must be >= 0");
    if (!(dynamics.dt > 0.0) || !std::isfinite(dynamics.dt)) fail("dt must be > 0");
    if (len_adev < 0 || len_train < 0 || len_test < 0) fail("sequence lengths must be >= 0");
    if (!extra_train_after_dev && !(len_adev < len_train)) fail("L_adev must be < L_train");
    if (extra_train_after_dev && len_train < 1) fail("L_train must be >= 1");
    if (!(ridge_alpha >= 0.0) || !std::isfinite(ridge_alpha)) fail("ridge alpha must be >= 0");
    if (weight_shape && !(weight_shape->a > 0.0 && weight_shape->b > 0.0)) {
        fail("initial beta shape parameters must be > 0");
    }
    spectral.validate();
}

int ReservoirConfig::train_steps() const noexcept
{
    return extra_train_after_dev ? len_adev + len_train : len_train;
}

int ReservoirConfig::collected_rows() const noexcept
{
    return extra_train_after_dev ? len_train : len_train - std::max(len_adev, 1) + 1;
}

OscillatorNetwork build_network(const ReservoirConfig& cfg)
{
    cfg.validate();
    WeightInit init;
    init.seed = cfg.weight_seed;
    init.shape = cfg.weight_shape;
    OscillatorNetwork net = init_network(cfg.n, cfg.density, cfg.seed, cfg.dynamics, init);
    rescale_to_radius(net, cfg.spectral_target, cfg.spectral);
    return net;
}

DevelopmentResult develop_and_collect(const ReservoirConfig& cfg, const TaskData& data,
                                      const DevelopmentObserver& observer)
{
    return develop_and_collect(cfg, build_network(cfg), data, observer);
}

DevelopmentResult develop_and_collect(const ReservoirConfig& cfg, OscillatorNetwork net,
                                      const TaskData& data, const DevelopmentObserver& observer)
{
    cfg.validate();
    data.validate();
    const int steps = cfg.train_steps();
    if (static_cast<int>(data.size()) < steps) {
        std::ostringstream os;
        os << "develop_and_collect: need " << steps << " samples, got " << data.size();
        throw DataError(os.str());
    }
    if (net.size() != cfg.n) {
        throw ConfigError("develop_and_collect: network size differs from config n");
    }

    // A development step index i (1-based) adapts when i < dev_limit.
    const int dev_limit = cfg.extra_train_after_dev ? cfg.len_adev + 1 : cfg.len_adev;
    const int first_collect = cfg.extra_train_after_dev ? cfg.len_adev + 1 : std::max(cfg.len_adev, 1);

    StateTrace trace;
    trace.states.resize(cfg.collected_rows(), cfg.n);
    trace.targets.reserve(static_cast<std::size_t>(cfg.collected_rows()));

    SpectralWorkspace workspace;
    OrderParameter post = order_parameter(net.phases());
    double r_sum = 0.0;
    Eigen::Index row = 0;

    for (int i = 1; i <= steps; ++i) {
        const auto t = static_cast<std::size_t>(i - 1);
        net.phase_step(data.inputs[t]);
        if (i < dev_limit) {
            if (cfg.adaptive) {
                net.coupling_step();
                rescale_to_radius(net, cfg.spectral_target, cfg.spectral, &workspace);
            }
            if (observer) {
                observer(i, net);
            }
        }
        if (i == first_collect - 1) {
            post = order_parameter(net.phases());
        }
        if (i >= first_collect) {
            const auto phases = net.phases();
            for (int j = 0; j < cfg.n; ++j) {
                trace.states(row, j) = phases[static_cast<std::size_t>(j)];
            }
            trace.targets.push_back(data.targets[t]);
            r_sum += order_parameter(phases).r;
            ++row;
        }
    }

    const double mean_r = row > 0 ? r_sum / static_cast<double>(row) : post.r;
    return {std::move(net), std::move(trace), post, mean_r};
}

Matrix feature_matrix(const Matrix& phases, const FeatureContract& features)
{
    const Eigen::Index n = phases.cols();
    Matrix x(phases.rows(), features.width(static_cast<int>(n)));
    if (features.trig) {
        x.leftCols(n) = phases.array().sin().matrix();
        x.middleCols(n, n) = phases.array().cos().matrix();
    } else {
        x.leftCols(n) = phases;
    }
    if (features.bias) {
        x.rightCols(1).setOnes();
    }
    return x;
}

Eigen::VectorXd feature_vector(std::span<const double> phases, const FeatureContract& features)
{
    const auto n = static_cast<Eigen::Index>(phases.size());
    Eigen::VectorXd x(features.width(static_cast<int>(n)));
    for (Eigen::Index j = 0; j < n; ++j) {
        const double theta = phases[static_cast<std::size_t>(j)];
        if (features.trig) {
            x(j) = std::sin(theta);
            x(n + j) = std::cos(theta);
        } else {
            x(j) = theta;
        }
    }
    if (features.bias) {
        x(x.size() - 1) = 1.0;
    }
    return x;
}

Readout train_readout(const Matrix& features, const Matrix& targets, double alpha,
                      const FeatureContract& contract)
{
    if (features.rows() < 1 || features.rows() != targets.rows()) {
        std::ostringstream os;
        os << "train_readout: " << features.rows() << " feature rows vs " << targets.rows()
           << " target rows";
        throw DataError(os.str());
    }
    if (!(alpha >= 0.0)) {
        throw ConfigError("train_readout: alpha must be >= 0");
    }
    Matrix gram = features.transpose() * features;
    gram.diagonal().array() += alpha;
    const Matrix rhs = features.transpose() * targets;

    Eigen::LLT<Matrix> llt(gram);
    // With alpha > 0 the system is positive definite by construction; with alpha = 0 a
    // numerically rank-deficient X is rejected.
    const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    const bool singular = llt.info() != Eigen::Success ||
                          (alpha == 0.0 && !(rcond > 1e3 * std::numeric_limits<double>::epsilon()));
    if (singular) {
        std::ostringstream os;
        os << "train_readout: normal equations are singular or ill-conditioned (rcond " << rcond
           << ", alpha " << alpha << "); use a positive ridge alpha";
        throw NumericalError(os.str());
    }
    const Matrix solution = llt.solve(rhs); // width x N_Y

    Readout out;
    out.weights = solution.transpose();
    out.features = contract;
    out.training_residual.resize(static_cast<std::size_t>(targets.cols()));
    for (Eigen::Index c = 0; c < targets.cols(); ++c) {
        // |XW - Y|^2 = Y'Y - W'X'Y - alpha |W|^2 at the normal-equations solution.
        const double yy = targets.col(c).squaredNorm();
        const double wxy = solution.col(c).dot(rhs.col(c));
        out.training_residual[static_cast<std::size_t>(c)] =
            std::max(0.0, yy - wxy - alpha * solution.col(c).squaredNorm());
    }
    return out;
}

Readout train_readout(const StateTrace& trace, std::span<const double> targets, double alpha,
                      const FeatureContract& contract)
{
    if (static_cast<Eigen::Index>(targets.size()) != trace.rows()) {
        std::ostringstream os;
        os << "train_readout: " << trace.rows() << " trace rows vs " << targets.size() << " targets";
        throw DataError(os.str());
    }
    const Matrix x = feature_matrix(trace.states, contract);
    const Matrix y = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                                       static_cast<Eigen::Index>(targets.size()));
    return train_readout(x, y, alpha, contract);
}

std::vector<double> predict(OscillatorNetwork& net, const Readout& readout,
                            const ReservoirConfig& cfg, std::span<const double> inputs)
{
    if (!(readout.features == cfg.features)) {
        throw ConfigError("predict: readout feature contract does not match the config");
    }
    if (readout.weights.cols() != readout.features.width(net.size())) {
        throw ConfigError("predict: readout width does not match the network size");
    }
    std::vector<double> out;
    out.reserve(inputs.size());
    for (double u : inputs) {
        net.phase_step(u);
        const Eigen::VectorXd x = feature_vector(net.phases(), readout.features);
        out.push_back(readout.weights.row(0).dot(x));
    }
    return out;
}

PipelineResult run_pipeline(const ReservoirConfig& cfg, const TaskData& data,
                            const DevelopmentObserver& observer)
{
    cfg.validate();
    if (static_cast<int>(data.size()) < cfg.required_length()) {
        std::ostringstream os;
        os << "run_pipeline: need " << cfg.required_length() << " samples, got " << data.size();
        throw DataError(os.str());
    }
    DevelopmentResult dev = develop_and_collect(cfg, data, observer);
    Readout readout = train_readout(dev.trace, dev.trace.targets, cfg.ridge_alpha, cfg.features);

    const Matrix x = feature_matrix(dev.trace.states, cfg.features);
    const Eigen::VectorXd fitted = x * readout.weights.row(0).transpose();
    const double train_mse =
        mse(dev.trace.targets, std::span<const double>(fitted.data(), static_cast<std::size_t>(fitted.size())));

    OscillatorNetwork developed = dev.network;
    const auto offset = static_cast<std::size_t>(cfg.train_steps());
    const auto len = static_cast<std::size_t>(cfg.len_test);
    std::vector<double> predictions =
        predict(dev.network, readout, cfg, std::span<const double>(data.inputs).subspan(offset, len));
    const double test_mse =
        len == 0 ? 0.0 : mse(std::span<const double>(data.targets).subspan(offset, len), predictions);

    return {test_mse,          train_mse,           dev.post_development, dev.mean_collection_r,
            std::move(developed), std::move(dev.network), std::move(readout), std::move(predictions)};
}

} // namespace sadrc
