#include "sadrc/app.hpp"

#include "sadrc/error.hpp"
#include "sadrc/io.hpp"
#include "sadrc/random.hpp"
#include "sadrc/tasks.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>

namespace sadrc {

namespace {

SweepSpec make_spec(const RunConfig& cfg)
{
    SweepSpec spec;
    spec.task = cfg.task;
    spec.base = cfg.reservoir;
    spec.trials = cfg.trials;
    spec.master_seed = cfg.seed;
    spec.workers = cfg.workers;
    return spec;
}

// File tasks are loaded once here; generated tasks are left to the experiment.
void attach_file_data(SweepSpec& spec, const RunConfig& cfg)
{
    if (cfg.task.rfind("file:", 0) == 0) {
        spec.data = load_task(cfg, 0);
    }
}

std::string command_help(const std::string& name)
{
    static const std::map<std::string, std::string> help = {
        {"run", "one pipeline: develop, train the readout, teacher-forced test"},
        {"sweep", "lambda x rho grid of pipelines with synchrony"},
        {"mc", "memory capacity at lambda:rho nodes"},
        {"sparsity", "density sweep, adaptive vs frozen coupling"},
        {"astringency", "distances between differently initialized networks before and after development"},
        {"beta-sweep", "pipelines over the adaptation phase offset beta"},
        {"weights", "Beta-initialized weights: fitted developed distribution and histogram snapshots"},
        {"spectrum", "DFT magnitude of the task input series"},
    };
    return help.at(name);
}

ExperimentResult run_single(const RunConfig& cfg, const OutputFormat format, std::ostream& out)
{
    ReservoirConfig rc = cfg.reservoir;
    rc.seed = cfg.seed;
    const TaskData data = load_task(cfg, rc.required_length());

    ExperimentResult result;
    result.experiment = "run";
    Record rec;
    rec.seed = rc.seed;
    rec.mode = rc.adaptive ? "sad-rc" : "rc";
    try {
        const PipelineResult res = run_pipeline(rc, data);
        rec.test_mse = res.test_mse;
        rec.train_mse = res.train_mse;
        rec.order_r = res.post_development.r;
        rec.mean_r = res.mean_collection_r;
        const auto first = data.targets.begin() + rc.train_steps();
        const std::vector<double> targets(first, first + rc.len_test);
        write_predictions(targets, res.predictions, format, cfg.output_dir);
        out << "test_mse " << format_double(res.test_mse) << "  train_mse " << format_double(res.train_mse)
            << "  r " << format_double(res.post_development.r) << "\n";
    } catch (const Error& e) {
        rec.faulted = true;
        rec.fault = e.what();
    }
    result.records.push_back(rec);
    result.aggregates = compute_aggregates(result);
    return result;
}

} // namespace

TaskData load_task(const RunConfig& cfg, int length)
{
    if (cfg.task.rfind("file:", 0) == 0) {
        const std::string path = cfg.task.substr(5);
        const std::optional<std::string> column =
            cfg.column.empty() ? std::nullopt : std::optional<std::string>(cfg.column);
        TaskData data = load_series(path, column, cfg.normalize).data;
        if (length > 0) {
            if (static_cast<int>(data.size()) < length) {
                throw DataError("series file '" + path + "' yields " + std::to_string(data.size()) +
                                " samples, need " + std::to_string(length));
            }
            data.inputs.resize(static_cast<std::size_t>(length));
            data.targets.resize(static_cast<std::size_t>(length));
        }
        return data;
    }
    return make_task(cfg.task, length, derive_seed({cfg.seed, stream::task_data}));
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        const OutputFormat format = parse_format(cfg.format);
        const std::string config_text = format_config(cfg);
        write_config(config_text, cfg.output_dir);

        if (cfg.command == "spectrum") {
            const int length = cfg.length > 0 ? cfg.length : cfg.reservoir.required_length();
            const TaskData data = load_task(cfg, length);
            const auto bins = spectrum(data.inputs);
            write_spectrum(bins, format, cfg.output_dir);
            out << "spectrum: " << bins.size() << " bins written to " << cfg.output_dir << "\n";
            return 0;
        }

        ExperimentResult result;
        SweepSpec spec = make_spec(cfg);
        if (cfg.command == "run") {
            result = run_single(cfg, format, out);
        } else if (cfg.command == "sweep") {
            spec.axes = {{"lambda", cfg.lambda_values}, {"rho", cfg.rho_values}};
            attach_file_data(spec, cfg);
            result = run_grid_sweep(spec);
        } else if (cfg.command == "mc") {
            attach_file_data(spec, cfg);
            result = run_mc_study(spec, cfg.nodes, cfg.mc);
        } else if (cfg.command == "sparsity") {
            spec.axes = {{"density", cfg.density_values}};
            attach_file_data(spec, cfg);
            result = run_sparsity_sweep(spec);
        } else if (cfg.command == "astringency") {
            spec.axes = {{"density", cfg.density_values}};
            attach_file_data(spec, cfg);
            result = run_astringency(spec);
        } else if (cfg.command == "beta-sweep") {
            spec.axes = {{"beta", cfg.beta_values}};
            attach_file_data(spec, cfg);
            result = run_beta_sweep(spec);
        } else if (cfg.command == "weights") {
            attach_file_data(spec, cfg);
            WeightStudyOptions options;
            options.initial_shapes = cfg.shapes;
            options.betas = cfg.weight_betas;
            options.bins = cfg.bins;
            result = run_weight_distribution_study(spec, options);
        } else {
            err << "unknown command '" << cfg.command << "'\n";
            return 2;
        }

        write_result(result, format, cfg.output_dir, config_text);
        const std::size_t faults = result.fault_count();
        out << cfg.command << ": " << result.records.size() << " records (" << faults << " faulted) written to "
            << cfg.output_dir << "\n";
        for (const auto& rec : result.records) {
            if (rec.faulted) {
                err << "fault in cell " << rec.cell << " trial " << rec.trial << ": " << rec.fault << "\n";
            }
        }
        return faults == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Adaptive Kuramoto-oscillator reservoir computing experiments", "sadrc"};
    app.require_subcommand(1, 1);

    if (argc > 1 && argv[1][0] != '-' &&
        std::find(command_names().begin(), command_names().end(), argv[1]) == command_names().end()) {
        err << "unknown command '" << argv[1] << "'\n";
    }

    std::optional<std::string> config_file;
    std::map<std::string, std::map<std::string, std::string>> given;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, command_help(name));
        sub->add_option("--config", config_file, "key = value file applied before the flags");
        for (const auto& key : config_keys()) {
            sub->add_option("--" + key, given[name][key], describe_key(key));
        }
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) {
            continue;
        }
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& key : config_keys()) {
            if (sub->count("--" + key) > 0) {
                overrides.emplace_back(key, given[name][key]);
            }
        }
        RunConfig cfg;
        try {
            cfg = parse_config(name, config_file, overrides);
        } catch (const Error& e) {
            err << "config error: " << e.what() << "\n";
            return 2;
        }
        return dispatch(cfg, out, err);
    }
    err << app.help();
    return 2;
}

} // namespace sadrc
