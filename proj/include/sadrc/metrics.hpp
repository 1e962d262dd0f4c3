#pragma once

#include "sadrc/oscillator.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sadrc {

struct ReservoirConfig;

/// (1/L) sum (y - yhat)^2. Throws DataError on empty or mismatched input.
double mse(std::span<const double> targets, std::span<const double> predictions);

/// Cov^2(x, y) / (Var(x) Var(y)) with population moments, clipped to [0, 1].
/// Returns 0 when either variance vanishes.
double squared_correlation(std::span<const double> x, std::span<const double> y);

struct McCurve
{
    std::vector<double> per_delay;   // per_delay[k - 1] = MC_k
    double total = 0.0;

    int k_max() const noexcept { return static_cast<int>(per_delay.size()); }
};

struct McSettings
{
    int k_max = 100;
    int washout = 100;           // must be >= k_max so every delayed target exists
    int samples = 2000;          // collected steps after the washout
    double train_fraction = 0.7; // leading share for training; the rest is held out
};

/// MC_k from a matrix of delayed inputs (column k-1 holds s(t-k)) and the matching
/// readout outputs.
McCurve mc_curve(const Matrix& delayed_inputs, const Matrix& outputs);

/// Short-term memory capacity of a frozen, developed reservoir. The network is
/// copied and driven by fresh s(t) ~ U[-0.5, 0.5]; one ridge readout per delay
/// is trained from the shared state matrix and scored on the held-out tail.
McCurve memory_capacity(const ReservoirConfig& cfg, const OscillatorNetwork& developed,
                        std::uint64_t seed, const McSettings& settings = {});

enum class DistanceMode { signed_sum, absolute };

/// Sum over entries of (a - b), or of |a - b|.
double matrix_distance(const Matrix& a, const Matrix& b, DistanceMode mode);

struct BetaFit
{
    double a;
    double b;
    std::size_t sample_size;
};

/// Method-of-moments Beta(a, b) fit of weights in [-1, 1], mapped by w -> (w + 1) / 2.
/// Throws DataError on fewer than 10 samples, out-of-range weights, a degenerate
/// (zero-variance) sample, or an infeasible moment fit (v >= m(1 - m)).
BetaFit beta_fit(std::span<const double> weights);

struct HistogramBin
{
    double center;
    std::int64_t count;
};

/// Equal-width histogram over [-1, 1] of the live entries of K. Entries beyond
/// the support (possible after spectral rescaling) land in the end bins.
std::vector<HistogramBin> weight_histogram(const Matrix& k, const MaskMatrix& mask, int bins);

/// Half the L1 distance between two normalized histograms: the share of mass moved.
double histogram_mass_change(std::span<const HistogramBin> a, std::span<const HistogramBin> b);

} // namespace sadrc
