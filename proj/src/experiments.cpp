#include "sadrc/experiments.hpp"

#include "sadrc/error.hpp"
#include "sadrc/random.hpp"
#include "sadrc/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

namespace sadrc {

namespace {

struct FieldSetter
{
    const char* name;
    void (*set)(ReservoirConfig&, double);
};

int as_int(const char* name, double v)
{
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9) {
        std::ostringstream os;
        os << "axis " << name << ": value " << v << " is not an integer";
        throw ConfigError(os.str());
    }
    return static_cast<int>(v);
}

const std::vector<FieldSetter>& setters()
{
    static const std::vector<FieldSetter> table = {
        {"lambda", [](ReservoirConfig& c, double v) { c.dynamics.lambda = v; }},
        {"rho", [](ReservoirConfig& c, double v) { c.spectral_target = v; }},
        {"beta", [](ReservoirConfig& c, double v) { c.dynamics.beta = v; }},
        {"epsilon", [](ReservoirConfig& c, double v) { c.dynamics.epsilon = v; }},
        {"dt", [](ReservoirConfig& c, double v) { c.dynamics.dt = v; }},
        {"density", [](ReservoirConfig& c, double v) { c.density = v; }},
        {"ridge_alpha", [](ReservoirConfig& c, double v) { c.ridge_alpha = v; }},
        {"n", [](ReservoirConfig& c, double v) { c.n = as_int("n", v); }},
        {"len_adev", [](ReservoirConfig& c, double v) { c.len_adev = as_int("len_adev", v); }},
        {"len_train", [](ReservoirConfig& c, double v) { c.len_train = as_int("len_train", v); }},
        {"len_test", [](ReservoirConfig& c, double v) { c.len_test = as_int("len_test", v); }},
    };
    return table;
}

void validate_common(const SweepSpec& spec)
{
    if (spec.trials < 1) {
        throw ConfigError("sweep: trials must be >= 1");
    }
    if (spec.workers < 1) {
        throw ConfigError("sweep: workers must be >= 1");
    }
    spec.base.validate();
}

// Runs every job catching its fault into the record instead of aborting the sweep.
template <class Fn>
void run_records(std::vector<Record>& records, int workers, Fn&& fn)
{
    run_jobs(records.size(), workers, [&](std::size_t i) {
        Record& rec = records[i];
        try {
            fn(i, rec);
        } catch (const std::exception& e) {
            rec.faulted = true;
            rec.fault = e.what();
        }
    });
}

void fill_pipeline_metrics(Record& rec, const PipelineResult& res)
{
    rec.test_mse = res.test_mse;
    rec.train_mse = res.train_mse;
    rec.order_r = res.post_development.r;
    rec.mean_r = res.mean_collection_r;
}

ExperimentResult pipeline_sweep(const SweepSpec& spec, const char* name)
{
    spec.validate();
    ExperimentResult out;
    out.experiment = name;
    for (const auto& a : spec.axes) {
        out.axis_names.push_back(a.name);
    }
    const std::size_t cells = spec.cell_count();
    const auto trials = static_cast<std::size_t>(spec.trials);
    out.records.resize(cells * trials);
    const TaskData data = sweep_task_data(spec);

    run_records(out.records, spec.workers, [&](std::size_t i, Record& rec) {
        rec.cell = i / trials;
        rec.trial = static_cast<int>(i % trials);
        rec.params = spec.cell_values(rec.cell);
        rec.seed = trial_seed(spec.master_seed, rec.cell, rec.trial);
        ReservoirConfig cfg = spec.cell_config(rec.cell);
        cfg.seed = rec.seed;
        fill_pipeline_metrics(rec, run_pipeline(cfg, data));
    });
    out.aggregates = compute_aggregates(out);
    return out;
}

} // namespace

const std::vector<std::string>& sweepable_fields()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : setters()) {
            v.emplace_back(s.name);
        }
        return v;
    }();
    return names;
}

void apply_axis_value(ReservoirConfig& cfg, const std::string& name, double value)
{
    for (const auto& s : setters()) {
        if (name == s.name) {
            s.set(cfg, value);
            return;
        }
    }
    std::ostringstream os;
    os << "unknown sweep axis '" << name << "' (accepted:";
    for (const auto& s : setters()) {
        os << ' ' << s.name;
    }
    os << ')';
    throw ConfigError(os.str());
}

void SweepSpec::validate() const
{
    validate_common(*this);
    if (axes.empty()) {
        throw ConfigError("sweep: at least one axis is required");
    }
    for (const auto& a : axes) {
        if (a.values.empty()) {
            throw ConfigError("sweep: axis '" + a.name + "' has no values");
        }
        for (double v : a.values) {
            ReservoirConfig probe = base;
            apply_axis_value(probe, a.name, v);
        }
    }
    for (std::size_t c = 0; c < cell_count(); ++c) {
        cell_config(c).validate();
    }
}

std::size_t SweepSpec::cell_count() const
{
    if (axes.empty()) {
        return 0;
    }
    std::size_t count = 1;
    for (const auto& a : axes) {
        count *= a.values.size();
    }
    return count;
}

std::vector<double> SweepSpec::cell_values(std::size_t cell) const
{
    std::vector<double> values(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        const std::size_t len = axes[k].values.size();
        values[k] = axes[k].values[cell % len];
        cell /= len;
    }
    return values;
}

ReservoirConfig SweepSpec::cell_config(std::size_t cell) const
{
    ReservoirConfig cfg = base;
    const auto values = cell_values(cell);
    for (std::size_t k = 0; k < axes.size(); ++k) {
        apply_axis_value(cfg, axes[k].name, values[k]);
    }
    return cfg;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t cell, int trial)
{
    return derive_seed({master_seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial)});
}

const std::vector<MetricColumn>& metric_columns()
{
    static const std::vector<MetricColumn> cols = {
        {"test_mse", &Record::test_mse},
        {"train_mse", &Record::train_mse},
        {"order_r", &Record::order_r},
        {"mean_r", &Record::mean_r},
        {"mc", &Record::mc},
        {"dist_init_signed", &Record::dist_init_signed},
        {"dist_init_abs", &Record::dist_init_abs},
        {"dist_dev_signed", &Record::dist_dev_signed},
        {"dist_dev_abs", &Record::dist_dev_abs},
        {"beta_a", &Record::beta_a},
        {"beta_b", &Record::beta_b},
        {"hist_shift", &Record::hist_shift},
    };
    return cols;
}

std::size_t ExperimentResult::fault_count() const
{
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const Record& r) { return r.faulted; }));
}

double quantile_sorted(const std::vector<double>& sorted, double p)
{
    if (sorted.empty()) {
        return no_value;
    }
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<Aggregate> compute_aggregates(const ExperimentResult& result)
{
    // Groups ordered by (cell, mode).
    std::map<std::pair<std::size_t, std::string>, std::vector<const Record*>> groups;
    for (const auto& rec : result.records) {
        groups[{rec.cell, rec.mode}].push_back(&rec);
    }

    std::vector<Aggregate> out;
    for (const auto& [key, recs] : groups) {
        std::size_t faulted = 0;
        for (const Record* r : recs) {
            faulted += r->faulted ? 1 : 0;
        }
        for (const auto& col : metric_columns()) {
            std::vector<double> values;
            for (const Record* r : recs) {
                const double v = r->*col.field;
                if (!r->faulted && !std::isnan(v)) {
                    values.push_back(v);
                }
            }
            // Metrics no record of the group carries are skipped; test_mse is always
            // reported so that fully faulted cells still show their fault count.
            const bool carried = std::any_of(recs.begin(), recs.end(), [&](const Record* r) {
                return !std::isnan(r->*col.field);
            });
            if (!carried && col.field != &Record::test_mse) {
                continue;
            }

            Aggregate agg;
            agg.cell = key.first;
            agg.mode = key.second;
            agg.params = recs.front()->params;
            agg.metric = col.name;
            agg.count = values.size();
            agg.faulted = faulted;
            if (!values.empty()) {
                double sum = 0.0;
                for (double v : values) {
                    sum += v;
                }
                agg.mean = sum / static_cast<double>(values.size());
                double ss = 0.0;
                for (double v : values) {
                    ss += (v - agg.mean) * (v - agg.mean);
                }
                agg.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;

                std::sort(values.begin(), values.end());
                agg.min = values.front();
                agg.max = values.back();
                agg.median = quantile_sorted(values, 0.5);
                agg.q1 = quantile_sorted(values, 0.25);
                agg.q3 = quantile_sorted(values, 0.75);
                const double iqr = agg.q3 - agg.q1;
                const double fence_lo = agg.q1 - 1.5 * iqr;
                const double fence_hi = agg.q3 + 1.5 * iqr;
                agg.whisker_lo = agg.max;
                agg.whisker_hi = agg.min;
                for (double v : values) {
                    if (v < fence_lo || v > fence_hi) {
                        agg.outliers.push_back(v);
                    } else {
                        agg.whisker_lo = std::min(agg.whisker_lo, v);
                        agg.whisker_hi = std::max(agg.whisker_hi, v);
                    }
                }
            }
            out.push_back(std::move(agg));
        }
    }
    return out;
}

void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job)
{
    if (count == 0) {
        return;
    }
    const auto threads = static_cast<std::size_t>(std::clamp<std::size_t>(
        static_cast<std::size_t>(std::max(workers, 1)), 1, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

TaskData sweep_task_data(const SweepSpec& spec)
{
    int length = spec.base.required_length();
    for (std::size_t c = 0; c < spec.cell_count(); ++c) {
        length = std::max(length, spec.cell_config(c).required_length());
    }
    if (spec.data) {
        if (static_cast<int>(spec.data->size()) < length) {
            std::ostringstream os;
            os << "sweep: supplied task data has " << spec.data->size() << " samples, need " << length;
            throw DataError(os.str());
        }
        return *spec.data;
    }
    return make_task(spec.task, length, derive_seed({spec.master_seed, stream::task_data}));
}

ExperimentResult run_grid_sweep(const SweepSpec& spec)
{
    return pipeline_sweep(spec, "sweep");
}

ExperimentResult run_mc_study(const SweepSpec& spec, const std::vector<McNode>& nodes,
                              const McSettings& settings)
{
    validate_common(spec);
    ExperimentResult out;
    out.experiment = "mc";
    out.axis_names = {"lambda", "rho"};
    const auto trials = static_cast<std::size_t>(spec.trials);
    out.records.resize(nodes.size() * trials);
    if (nodes.empty()) {
        return out;
    }
    for (const auto& node : nodes) {
        ReservoirConfig probe = spec.base;
        probe.dynamics.lambda = node.lambda;
        probe.spectral_target = node.rho;
        probe.validate();
    }
    const TaskData data = sweep_task_data(spec);

    std::vector<McCurve> curves(out.records.size());
    run_records(out.records, spec.workers, [&](std::size_t i, Record& rec) {
        rec.cell = i / trials;
        rec.trial = static_cast<int>(i % trials);
        const McNode& node = nodes[rec.cell];
        rec.params = {node.lambda, node.rho};
        rec.seed = trial_seed(spec.master_seed, rec.cell, rec.trial);
        ReservoirConfig cfg = spec.base;
        cfg.dynamics.lambda = node.lambda;
        cfg.spectral_target = node.rho;
        cfg.seed = rec.seed;
        const PipelineResult res = run_pipeline(cfg, data);
        fill_pipeline_metrics(rec, res);
        curves[i] = memory_capacity(cfg, res.developed, rec.seed, settings);
        rec.mc = curves[i].total;
    });

    for (std::size_t i = 0; i < out.records.size(); ++i) {
        const Record& rec = out.records[i];
        for (int k = 0; k < curves[i].k_max(); ++k) {
            out.mc_curves.push_back({rec.cell, rec.trial, k + 1, curves[i].per_delay[static_cast<std::size_t>(k)]});
        }
    }
    out.aggregates = compute_aggregates(out);
    return out;
}

ExperimentResult run_sparsity_sweep(const SweepSpec& spec)
{
    spec.validate();
    ExperimentResult out;
    out.experiment = "sparsity";
    for (const auto& a : spec.axes) {
        out.axis_names.push_back(a.name);
    }
    const std::size_t cells = spec.cell_count();
    const auto trials = static_cast<std::size_t>(spec.trials);
    out.records.resize(cells * trials * 2);
    const TaskData data = sweep_task_data(spec);

    run_records(out.records, spec.workers, [&](std::size_t i, Record& rec) {
        const bool adaptive = i % 2 == 0;
        const std::size_t job = i / 2;
        rec.cell = job / trials;
        rec.trial = static_cast<int>(job % trials);
        rec.mode = adaptive ? "sad-rc" : "rc";
        rec.params = spec.cell_values(rec.cell);
        // Both modes of a trial start from the same initial network.
        rec.seed = trial_seed(spec.master_seed, rec.cell, rec.trial);
        ReservoirConfig cfg = spec.cell_config(rec.cell);
        cfg.seed = rec.seed;
        cfg.adaptive = adaptive;
        fill_pipeline_metrics(rec, run_pipeline(cfg, data));
    });
    out.aggregates = compute_aggregates(out);
    return out;
}

ExperimentResult run_astringency(const SweepSpec& spec, const AstringencyOptions& options)
{
    spec.validate();
    const int trials = options.weight_seeds ? static_cast<int>(options.weight_seeds->size()) : spec.trials;
    if (trials < 2) {
        throw ConfigError("astringency: trials must be >= 2");
    }
    ExperimentResult out;
    out.experiment = "astringency";
    for (const auto& a : spec.axes) {
        out.axis_names.push_back(a.name);
    }
    const std::size_t cells = spec.cell_count();
    const auto t_count = static_cast<std::size_t>(trials);
    out.records.resize(cells * t_count);
    const TaskData data = sweep_task_data(spec);

    std::vector<Matrix> initial(out.records.size());
    std::vector<Matrix> developed(out.records.size());
    run_records(out.records, spec.workers, [&](std::size_t i, Record& rec) {
        rec.cell = i / t_count;
        rec.trial = static_cast<int>(i % t_count);
        rec.params = spec.cell_values(rec.cell);
        rec.seed = options.weight_seeds ? (*options.weight_seeds)[i % t_count]
                                        : trial_seed(spec.master_seed, rec.cell, rec.trial);
        ReservoirConfig cfg = spec.cell_config(rec.cell);
        // Mask and frequencies are shared by every trial of a cell; only the weights vary.
        cfg.seed = derive_seed({spec.master_seed, static_cast<std::uint64_t>(rec.cell)});
        cfg.weight_seed = rec.seed;
        const OscillatorNetwork net = build_network(cfg);
        initial[i] = net.coupling();
        const PipelineResult res = run_pipeline(cfg, data);
        developed[i] = res.developed.coupling();
        fill_pipeline_metrics(rec, res);
    });

    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t ref = c * t_count;
        if (out.records[ref].faulted) {
            continue;
        }
        for (std::size_t t = 1; t < t_count; ++t) {
            Record& rec = out.records[ref + t];
            if (rec.faulted) {
                continue;
            }
            rec.dist_init_signed = matrix_distance(initial[ref + t], initial[ref], DistanceMode::signed_sum);
            rec.dist_init_abs = matrix_distance(initial[ref + t], initial[ref], DistanceMode::absolute);
            rec.dist_dev_signed = matrix_distance(developed[ref + t], developed[ref], DistanceMode::signed_sum);
            rec.dist_dev_abs = matrix_distance(developed[ref + t], developed[ref], DistanceMode::absolute);
        }
    }
    out.aggregates = compute_aggregates(out);
    return out;
}

std::vector<double> beta_grid()
{
    std::vector<double> grid;
    for (int k = -12; k <= 12; ++k) {
        grid.push_back(k * std::numbers::pi / 12.0);
    }
    return grid;
}

ExperimentResult run_beta_sweep(const SweepSpec& spec)
{
    return pipeline_sweep(spec, "beta-sweep");
}

ExperimentResult run_weight_distribution_study(const SweepSpec& spec, const WeightStudyOptions& options)
{
    validate_common(spec);
    if (options.initial_shapes.empty() || options.betas.empty()) {
        throw ConfigError("weights: initial shapes and beta list must be nonempty");
    }
    if (options.bins < 1) {
        throw ConfigError("weights: bins must be >= 1");
    }
    for (const auto& s : options.initial_shapes) {
        if (!(s.a > 0.0) || !(s.b > 0.0)) {
            throw ConfigError("weights: beta shape parameters must be > 0");
        }
    }

    ExperimentResult out;
    out.experiment = "weights";
    out.axis_names = {"init_a", "init_b", "beta"};
    const std::size_t cells = options.initial_shapes.size() * options.betas.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    out.records.resize(cells * trials);
    const TaskData data = sweep_task_data(spec);

    std::vector<std::vector<SnapshotRow>> snaps(out.records.size());
    std::vector<std::vector<EdgeRow>> edges(out.records.size());
    run_records(out.records, spec.workers, [&](std::size_t i, Record& rec) {
        rec.cell = i / trials;
        rec.trial = static_cast<int>(i % trials);
        const BetaShape shape = options.initial_shapes[rec.cell / options.betas.size()];
        const double beta = options.betas[rec.cell % options.betas.size()];
        rec.params = {shape.a, shape.b, beta};
        rec.seed = trial_seed(spec.master_seed, rec.cell, rec.trial);
        ReservoirConfig cfg = spec.base;
        cfg.seed = rec.seed;
        cfg.weight_shape = shape;
        cfg.dynamics.beta = beta;

        auto snapshot = [&](int step, const OscillatorNetwork& net) {
            for (const auto& bin : weight_histogram(net.coupling(), net.mask(), options.bins)) {
                snaps[i].push_back({rec.cell, rec.trial, step, bin.center, bin.count});
            }
        };
        auto add_edges = [&](const char* stage, const OscillatorNetwork& net) {
            for (const auto& e : net.edges()) {
                edges[i].push_back({rec.cell, rec.trial, stage, e.row, e.col, net.coupling()(e.row, e.col)});
            }
        };

        const OscillatorNetwork initial = build_network(cfg);
        snapshot(0, initial);
        if (rec.trial == 0) {
            add_edges("initial", initial);
        }
        const PipelineResult res = run_pipeline(cfg, data, snapshot);
        fill_pipeline_metrics(rec, res);
        if (rec.trial == 0) {
            add_edges("developed", res.developed);
        }

        // hist_shift: compare the early snapshot with the last one taken.
        const auto bins = static_cast<std::size_t>(options.bins);
        const std::size_t n_snaps = snaps[i].size() / bins;
        const auto early = static_cast<std::size_t>(options.early_step);
        if (early < n_snaps && n_snaps > 1) {
            auto to_bins = [&](std::size_t s) {
                std::vector<HistogramBin> h;
                for (std::size_t b = 0; b < bins; ++b) {
                    const auto& row = snaps[i][s * bins + b];
                    h.push_back({row.bin_center, row.count});
                }
                return h;
            };
            rec.hist_shift = histogram_mass_change(to_bins(early), to_bins(n_snaps - 1));
        }

        const BetaFit fit = beta_fit(res.developed.live_weights());
        rec.beta_a = fit.a;
        rec.beta_b = fit.b;
    });

    for (std::size_t i = 0; i < out.records.size(); ++i) {
        out.snapshots.insert(out.snapshots.end(), snaps[i].begin(), snaps[i].end());
        out.edges.insert(out.edges.end(), edges[i].begin(), edges[i].end());
    }
    out.aggregates = compute_aggregates(out);
    return out;
}

} // namespace sadrc
