#pragma once

#include "sadrc/reservoir.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sadrc {

/// Raw NARMA10 output y(1), ..., y(T + 1) for inputs u(1), ..., u(T), with zero
/// history (y(t) = u(t) = 0 for t <= 0). Element 0 holds y(1).
/// Throws NumericalError when |y| exceeds 1e6.
std::vector<double> narma10_series(std::span<const double> inputs);

/// NARMA10 task: inputs u(t) ~ U[0, 0.5] (or `input_override`), targets y(t + 1).
TaskData gen_narma10(int length, std::uint64_t seed,
                     const std::optional<std::vector<double>>& input_override = std::nullopt);

struct MackeyGlassParams
{
    double a = 0.2;
    double b = -0.1;
    double n_exp = 10.0;
    double tau = 17.0;
    double inner_step = 0.1;
    int sample_every = 10;
    int transient_discard = 1000;

    /// Throws ConfigError: tau must be a positive multiple of inner_step.
    void validate() const;
    /// tau / inner_step as an exact integer.
    int delay_steps() const;
};

/// Integrate the Mackey-Glass delay equation with classical RK4 at step `h` for
/// `steps` steps, starting from the history function on [-tau, 0]. Delayed values
/// at half steps come from four-point Lagrange interpolation on the grid, with
/// the stencil kept inside one [j tau, (j + 1) tau] segment so that derivative
/// jumps at multiples of tau are never interpolated across.
/// Returns y(0), y(h), ..., y(steps * h).
std::vector<double> integrate_mackey_glass(const MackeyGlassParams& params, double h, int steps,
                                           const std::function<double(double)>& history);

/// Mackey-Glass task with random history (i.i.d. U[0.1, 1.3] at the history grid
/// points), unit-spaced samples after the transient; inputs y(t), targets y(t + 1).
TaskData gen_mackey_glass(int length, const MackeyGlassParams& params, std::uint64_t seed);

struct MsoParams
{
    std::vector<double> frequencies;

    void validate() const;
    /// The conventional twelve-frequency set.
    static MsoParams mso12();
};

/// u(t) = sum_i sin(phi_i t) for t = 0, 1, ...; inputs u(t), targets u(t + 1).
TaskData gen_mso(int length, const MsoParams& params);

struct SeriesNormalization
{
    double lo = 0.0;
    double hi = 1.0;
};

struct LoadedSeries
{
    TaskData data;
    /// When normalized: value' = scale * value + offset.
    std::optional<std::pair<double, double>> scale_offset;
};

/// Read a numeric series: one value per line, or the named column of a
/// comma-separated file whose first line is a header. Blank lines and lines
/// starting with '#' are skipped. Throws DataError citing the line number.
LoadedSeries load_series(const std::string& path, const std::optional<std::string>& column = std::nullopt,
                         const std::optional<SeriesNormalization>& normalize = std::nullopt);

struct SpectrumBin
{
    int bin;
    double magnitude;
};

/// |DFT| over all L bins (direct transform).
std::vector<double> dft_magnitudes(std::span<const double> series);

/// |DFT| for bins 0 .. floor(L / 2).
std::vector<SpectrumBin> spectrum(std::span<const double> series);

/// Generate a task by preset name: `narma10`, `mg17`, `mso12`, or `file:<path>`.
/// `length` is the number of input/target pairs; for files it truncates when positive.
TaskData make_task(const std::string& preset, int length, std::uint64_t seed);

} // namespace sadrc
