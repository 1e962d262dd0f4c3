#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace sadrc {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

using Matrix = Eigen::MatrixXd;
using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Parameters of the co-evolving phase/coupling dynamics.
struct DynamicsParams
{
    double lambda = 4.0;                     // global coupling strength
    double beta = std::numbers::pi / 2.0;    // character parameter of the adaptation rule
    double epsilon = 0.1;                    // adaptation rate
    double dt = 1.0;                         // Euler step
};

/// A live (masked) entry of the coupling matrix: k(row, col) couples node
/// `row` to the phase of node `col`.
struct Edge
{
    int row;
    int col;
};

/// Shape of Beta(a, b) used to draw initial live weights, mapped to [-1, 1].
struct BetaShape
{
    double a = 1.0;
    double b = 1.0;
};

/// Optional overrides for how live weights are drawn at initialization.
struct WeightInit
{
    std::optional<std::uint64_t> seed;   // defaults to a stream derived from the network seed
    std::optional<BetaShape> shape;      // defaults to uniform on [-1, 1]
};

struct OrderParameter
{
    double r;
    double psi;
};

/// Network of Kuramoto oscillators with adaptive, sparsity-masked coupling.
///
/// Invariants maintained by every mutator:
///  - phases stay in [0, 2pi)
///  - coupling is zero off the mask; the mask has an empty diagonal and never changes
///  - the adaptation step clamps live weights to [-1, 1]; scaling does not clamp
class OscillatorNetwork
{
public:
    /// Takes ownership of the given state. Throws ConfigError when shapes disagree,
    /// the mask has diagonal entries, coupling is nonzero off the mask, or a phase
    /// lies outside [0, 2pi).
    OscillatorNetwork(std::vector<double> phases,
                      std::vector<double> natural_frequencies,
                      Matrix coupling,
                      MaskMatrix mask,
                      DynamicsParams params);

    int size() const noexcept { return static_cast<int>(phases_.size()); }

    std::span<const double> phases() const noexcept { return phases_; }
    std::span<const double> natural_frequencies() const noexcept { return omega_; }
    const Matrix& coupling() const noexcept { return coupling_; }
    const MaskMatrix& mask() const noexcept { return mask_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const DynamicsParams& params() const noexcept { return params_; }

    /// Live weights in edge order (row-major over the mask).
    std::vector<double> live_weights() const;

    /// One forward-Euler step of the phase equation with input offset `input`.
    /// Throws NumericalError naming the first non-finite node.
    void phase_step(double input);

    /// One forward-Euler step of the adaptation rule on live edges, clamped to [-1, 1].
    void coupling_step();

    /// K <- factor * K. No clamp.
    void scale_coupling(double factor);

    /// Replace the live weights (edge order). Entries off the mask remain zero.
    void set_live_weights(std::span<const double> weights);

    void set_params(const DynamicsParams& params) noexcept { params_ = params; }

private:
    std::vector<double> phases_;
    std::vector<double> omega_;
    Matrix coupling_;
    MaskMatrix mask_;
    std::vector<Edge> edges_;
    DynamicsParams params_;
    std::vector<double> drive_;
};

/// Fresh network: zero phases, standard-normal natural frequencies, and
/// floor(density * n * (n - 1)) live off-diagonal edges drawn without
/// replacement, weights uniform on [-1, 1] (or Beta-shaped per `weights`).
/// The mask and frequencies come from `seed`; the weights from `weights.seed`
/// when given, else from a stream derived from `seed`.
OscillatorNetwork init_network(int n, double density, std::uint64_t seed,
                               const DynamicsParams& params,
                               const WeightInit& weights = {});

/// Number of live edges init_network draws for (n, density).
std::int64_t live_edge_count(int n, double density);

/// r * exp(i psi) = mean of exp(i theta_j). psi is in (-pi, pi]; 0 when r == 0.
OrderParameter order_parameter(std::span<const double> phases);

/// Wrap an angle to [0, 2pi).
double wrap_phase(double theta) noexcept;

} // namespace sadrc
