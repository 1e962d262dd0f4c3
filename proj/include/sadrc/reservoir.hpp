#pragma once

#include "sadrc/oscillator.hpp"
#include "sadrc/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sadrc {

/// Paired input/target sequences for one benchmark task.
struct TaskData
{
    std::vector<double> inputs;
    std::vector<double> targets;

    std::size_t size() const noexcept { return inputs.size(); }
    /// Throws DataError unless lengths match and every value is finite.
    void validate() const;
};

/// How reservoir phases map to readout features.
struct FeatureContract
{
    bool bias = false;   // trailing constant-1 column
    bool trig = false;   // (sin theta, cos theta) per node instead of raw theta

    int width(int n) const noexcept { return (trig ? 2 * n : n) + (bias ? 1 : 0); }
    friend bool operator==(const FeatureContract&, const FeatureContract&) = default;
};

/// Hyperparameters of one run. Defaults: NARMA10 row of the task table plus
/// the common settings (N = 100, density 0.05, eps = 0.1, dt = 1, beta = pi/2).
struct ReservoirConfig
{
    int n = 100;
    double density = 0.05;
    double spectral_target = 1.0;
    DynamicsParams dynamics{};
    int len_adev = 100;
    int len_train = 900;
    int len_test = 500;
    double ridge_alpha = 1e-6;
    bool adaptive = true;
    FeatureContract features{};
    /// Prose reading of the loop: L_adev development steps, then L_train
    /// collected steps (instead of one loop of L_train steps).
    bool extra_train_after_dev = false;
    std::uint64_t seed = 1;
    /// Seed for the initial live weights only; the mask and frequencies still follow `seed`.
    std::optional<std::uint64_t> weight_seed;
    std::optional<BetaShape> weight_shape;
    SpectralRadiusSettings spectral{};

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Steps consumed by development + collection.
    int train_steps() const noexcept;
    /// Number of collected rows.
    int collected_rows() const noexcept;
    /// Minimum TaskData length for a full pipeline.
    int required_length() const noexcept { return train_steps() + len_test; }
};

/// Reservoir states collected during training, one row per collection step, as
/// raw phases, with the aligned targets.
struct StateTrace
{
    Matrix states;
    std::vector<double> targets;

    Eigen::Index rows() const noexcept { return states.rows(); }
};

/// Trained linear readout y = W * features(theta).
struct Readout
{
    Matrix weights;              // N_Y x N_R
    FeatureContract features{};
    /// Sum of squared training residuals per output, from the normal equations.
    std::vector<double> training_residual;
};

struct DevelopmentResult
{
    OscillatorNetwork network;
    StateTrace trace;
    /// Synchrony right after the last development step (before collection).
    OrderParameter post_development;
    /// Mean r over the collection steps.
    double mean_collection_r;
};

/// Called after every development step with (step index starting at 1, network).
using DevelopmentObserver = std::function<void(int, const OscillatorNetwork&)>;

/// Construct the initial network for `cfg`, including the one-time rescale to the
/// target spectral radius.
OscillatorNetwork build_network(const ReservoirConfig& cfg);

/// Run the development + collection loop over data.inputs[0 .. train_steps()).
/// Throws DataError when data is too short.
DevelopmentResult develop_and_collect(const ReservoirConfig& cfg, const TaskData& data,
                                      const DevelopmentObserver& observer = {});

/// Same, starting from an already built network.
DevelopmentResult develop_and_collect(const ReservoirConfig& cfg, OscillatorNetwork net,
                                      const TaskData& data,
                                      const DevelopmentObserver& observer = {});

/// Map raw phase rows to the feature matrix of the contract.
Matrix feature_matrix(const Matrix& phases, const FeatureContract& features);
Eigen::VectorXd feature_vector(std::span<const double> phases, const FeatureContract& features);

/// Ridge regression: W = argmin |X W^T - Y|^2 + alpha |W|^2 via a Cholesky solve
/// of (X^T X + alpha I) W^T = X^T Y. Y holds one column per output. Throws
/// NumericalError when the system is singular (alpha = 0 with rank-deficient X).
Readout train_readout(const Matrix& features, const Matrix& targets, double alpha,
                      const FeatureContract& contract = {});

/// Convenience overload: features from the trace under `contract`, single output.
Readout train_readout(const StateTrace& trace, std::span<const double> targets, double alpha,
                      const FeatureContract& contract = {});

/// Teacher-forced one-step-ahead prediction: per input, advance the phases with the
/// true input and emit W * features(theta). Coupling is never adapted here.
std::vector<double> predict(OscillatorNetwork& net, const Readout& readout,
                            const ReservoirConfig& cfg, std::span<const double> inputs);

struct PipelineResult
{
    double test_mse;
    double train_mse;
    OrderParameter post_development;
    double mean_collection_r;
    OscillatorNetwork developed;   // network right after the training loop
    OscillatorNetwork final_state; // network after the test segment
    Readout readout;
    std::vector<double> predictions;
};

/// init -> develop/collect -> ridge readout -> teacher-forced test -> MSE.
PipelineResult run_pipeline(const ReservoirConfig& cfg, const TaskData& data,
                            const DevelopmentObserver& observer = {});

} // namespace sadrc
