#pragma once

#include "sadrc/metrics.hpp"
#include "sadrc/reservoir.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sadrc {

inline constexpr double no_value = std::numeric_limits<double>::quiet_NaN();

/// One swept configuration field and its values.
struct Axis
{
    std::string name;
    std::vector<double> values;
};

/// Config fields an axis may sweep.
const std::vector<std::string>& sweepable_fields();

/// Set a sweepable field by name. Throws ConfigError for unknown names.
void apply_axis_value(ReservoirConfig& cfg, const std::string& name, double value);

struct SweepSpec
{
    std::string task = "narma10";
    ReservoirConfig base{};
    std::vector<Axis> axes;
    int trials = 10;
    std::uint64_t master_seed = 1;
    int workers = 1;
    /// Supplied task data; when empty, the task is generated from the master seed.
    std::optional<TaskData> data;

    void validate() const;
    /// Number of grid cells (product of axis lengths).
    std::size_t cell_count() const;
    /// Axis values of a cell; the last axis varies fastest.
    std::vector<double> cell_values(std::size_t cell) const;
    /// Base config with the cell's axis values applied.
    ReservoirConfig cell_config(std::size_t cell) const;
};

/// Seed of one (cell, trial): a hash of the master seed and both indices.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t cell, int trial);

struct Record
{
    std::size_t cell = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string mode = "sad-rc";
    std::vector<double> params;    // one per axis
    double test_mse = no_value;
    double train_mse = no_value;
    double order_r = no_value;     // after the development stage
    double mean_r = no_value;      // averaged over the collection steps
    double mc = no_value;
    double dist_init_signed = no_value;
    double dist_init_abs = no_value;
    double dist_dev_signed = no_value;
    double dist_dev_abs = no_value;
    double beta_a = no_value;
    double beta_b = no_value;
    double hist_shift = no_value;  // mass moved between development step 10 and the last step
    bool faulted = false;
    std::string fault;
};

/// Names and accessors of the numeric record columns, in output order.
struct MetricColumn
{
    const char* name;
    double Record::*field;
};
const std::vector<MetricColumn>& metric_columns();

/// Summary of one metric over the non-faulted records of one (cell, mode).
struct Aggregate
{
    std::size_t cell = 0;
    std::string mode;
    std::vector<double> params;
    std::string metric;
    std::size_t count = 0;          // values aggregated
    std::size_t faulted = 0;        // records excluded because they faulted
    double mean = no_value;
    double variance = no_value;     // sample variance (n - 1); 0 for a single value
    double median = no_value;
    double q1 = no_value;
    double q3 = no_value;
    double whisker_lo = no_value;   // most extreme values within 1.5 IQR of the quartiles
    double whisker_hi = no_value;
    double min = no_value;
    double max = no_value;
    std::vector<double> outliers;
};

struct McRow
{
    std::size_t cell;
    int trial;
    int delay;
    double value;
};

struct SnapshotRow
{
    std::size_t cell;
    int trial;
    int step;
    double bin_center;
    std::int64_t count;
};

struct EdgeRow
{
    std::size_t cell;
    int trial;
    std::string stage;   // "initial" or "developed"
    int row;
    int col;
    double weight;
};

struct ExperimentResult
{
    std::string experiment;
    std::vector<std::string> axis_names;
    std::vector<Record> records;
    std::vector<Aggregate> aggregates;
    std::vector<McRow> mc_curves;
    std::vector<SnapshotRow> snapshots;
    std::vector<EdgeRow> edges;

    std::size_t fault_count() const;
};

/// Linear-interpolation quantile of sorted data, p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

/// Aggregates per (cell, mode, metric) over the records, skipping faulted rows
/// and absent (NaN) metrics.
std::vector<Aggregate> compute_aggregates(const ExperimentResult& result);

/// Run `count` independent jobs on up to `workers` threads. Job i writes only its
/// own output slot, so results do not depend on scheduling.
void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

/// Task data long enough for every cell of the spec: the supplied data, or the
/// task generated from the master seed. Throws DataError when supplied data is short.
TaskData sweep_task_data(const SweepSpec& spec);

/// Generic pipeline sweep over the spec's axes: per (cell, trial) run the
/// pipeline and record test/train MSE and synchrony.
ExperimentResult run_grid_sweep(const SweepSpec& spec);

struct McNode
{
    double lambda;
    double rho;
};

/// For each node: develop on the task, then memory capacity of the frozen network.
ExperimentResult run_mc_study(const SweepSpec& spec, const std::vector<McNode>& nodes,
                              const McSettings& settings = {});

/// Density sweep running both the adaptive reservoir and the frozen baseline
/// with the same initial network per trial.
ExperimentResult run_sparsity_sweep(const SweepSpec& spec);

struct AstringencyOptions
{
    /// Explicit weight seeds, one per trial (trial count taken from here when set).
    std::optional<std::vector<std::uint64_t>> weight_seeds;
};

/// Per density: `trials` initial matrices sharing mask and frequencies but with
/// independent weights; distances to trial 0 before and after development.
ExperimentResult run_astringency(const SweepSpec& spec, const AstringencyOptions& options = {});

/// 25 values from -pi to pi in steps of pi/12.
std::vector<double> beta_grid();

/// Pipeline sweep over the spec's beta axis (boxplot statistics in the aggregates).
ExperimentResult run_beta_sweep(const SweepSpec& spec);

struct WeightStudyOptions
{
    std::vector<BetaShape> initial_shapes;
    std::vector<double> betas;
    int bins = 20;
    int early_step = 10;   // compared against the final development step for hist_shift
};

/// Initial live weights ~ Beta(a, b) mapped to [-1, 1]; develop; fit a Beta to the
/// developed weights; per-step histogram snapshots and edge lists of trial 0.
ExperimentResult run_weight_distribution_study(const SweepSpec& spec, const WeightStudyOptions& options);

} // namespace sadrc
