#include "sadrc/app.hpp"
#include "sadrc/config.hpp"
#include "sadrc/error.hpp"
#include "sadrc/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

using namespace sadrc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "sadrc-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "sadrc");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) {
        *out_text = out.str();
    }
    if (err_text) {
        *err_text = err.str();
    }
    return code;
}

// Small reservoir flags so CLI round trips stay fast.
std::vector<std::string> small(std::vector<std::string> args)
{
    for (const char* a : {"--n", "12", "--density", "0.2", "--len_adev", "10", "--len_train", "60", "--len_test", "20"}) {
        args.emplace_back(a);
    }
    return args;
}

} // namespace

TEST_CASE("default narma10 config is the task row plus the common settings")
{
    const auto cfg = parse_config("run", std::nullopt, {});
    CHECK(cfg.task == "narma10");
    CHECK(cfg.reservoir.n == 100);
    CHECK(cfg.reservoir.density == 0.05);
    CHECK(cfg.reservoir.dynamics.epsilon == 0.1);
    CHECK(cfg.reservoir.dynamics.dt == 1.0);
    CHECK(cfg.reservoir.dynamics.beta == std::numbers::pi / 2.0);
    CHECK(cfg.reservoir.dynamics.lambda == 4.0);
    CHECK(cfg.reservoir.len_adev == 100);
    CHECK(cfg.reservoir.len_train == 900);
    CHECK(cfg.reservoir.len_test == 500);

    const auto mg = parse_config("run", std::nullopt, {{"task", "mg17"}});
    CHECK(mg.reservoir.len_train == 2900);
    CHECK(mg.reservoir.len_test == 1000);
    CHECK(mg.reservoir.dynamics.lambda == 1.0);
    const auto mso = parse_config("run", std::nullopt, {{"task", "mso12"}});
    CHECK(mso.reservoir.len_train == 1200);
    CHECK(mso.reservoir.len_test == 100);

    const auto sweep = parse_config("sweep", std::nullopt, {});
    CHECK(sweep.lambda_values.size() == 16);
    CHECK(sweep.rho_values.size() == 20);
    CHECK(sweep.trials == 10);
    CHECK(parse_config("beta-sweep", std::nullopt, {}).beta_values.size() == 25);
}

TEST_CASE("precedence: defaults < file < flags")
{
    const auto dir = scratch_dir("precedence");
    const auto file = (dir / "cfg.txt").string();
    std::ofstream(file) << "# comment\nlambda = 2.5\nrho = 0.7  # trailing\n\nbeta = -pi/4\n";
    const auto from_file = parse_config("run", file, {});
    CHECK(from_file.reservoir.dynamics.lambda == 2.5);
    CHECK(from_file.reservoir.spectral_target == 0.7);
    CHECK(from_file.reservoir.dynamics.beta == doctest::Approx(-std::numbers::pi / 4.0));
    const auto flagged = parse_config("run", file, {{"lambda", "6"}});
    CHECK(flagged.reservoir.dynamics.lambda == 6.0);
    CHECK(flagged.reservoir.spectral_target == 0.7);

    CHECK(run_cli({"run", "--config", file, "--lambda", "6", "--output_dir", (dir / "o").string(), "--n", "8",
                   "--len_adev", "5", "--len_train", "30", "--len_test", "10"})
          == 0);
    CHECK(slurp(dir / "o" / "config.txt").find("lambda = 6") != std::string::npos);
}

TEST_CASE("config faults name the key and the accepted range")
{
    try {
        parse_config("run", std::nullopt, {{"lamda", "4"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("lamda") != std::string::npos);
    }
    try {
        parse_config("run", std::nullopt, {{"density", "1.5"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("density") != std::string::npos);
        CHECK(msg.find("[0, 1]") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("run", std::nullopt, {{"trials", "abc"}}), ConfigError);
    CHECK_THROWS_AS(parse_config("run", std::nullopt, {{"len_adev", "900"}}), ConfigError);
    CHECK_THROWS_AS(parse_config("mc", std::nullopt, {{"k_max", "200"}}), ConfigError);
    CHECK_THROWS_AS(parse_config("astringency", std::nullopt, {{"trials", "1"}}), ConfigError);

    const auto dir = scratch_dir("badfile");
    const auto file = (dir / "bad.txt").string();
    std::ofstream(file) << "lambda = 2\nno equals sign\n";
    try {
        parse_config("run", file, {});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    std::string err;
    CHECK(run_cli({"run", "--lamda", "4"}, nullptr, &err) == 2);
    CHECK(err.find("lamda") != std::string::npos);
    CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
    CHECK(err.find("unknown command 'frobnicate'") != std::string::npos);
}

TEST_CASE("parse_real accepts multiples of pi")
{
    CHECK(parse_real("0.25") == 0.25);
    CHECK(parse_real("pi") == std::numbers::pi);
    CHECK(parse_real("-pi/2") == doctest::Approx(-std::numbers::pi / 2.0));
    CHECK(parse_real("3*pi/4") == doctest::Approx(0.75 * std::numbers::pi));
    CHECK_THROWS_AS(parse_real("tau"), ConfigError);
}

TEST_CASE("format_double round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, std::numbers::pi}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("write_result: empty result gives a header-only records file")
{
    const auto dir = scratch_dir("empty");
    ExperimentResult r;
    r.experiment = "mc";
    r.axis_names = {"lambda", "rho"};
    write_result(r, OutputFormat::csv, dir.string(), "# command: mc\n");
    const auto table = read_csv((dir / "records.csv").string());
    CHECK(table.header == records_header(r.axis_names));
    CHECK(table.rows.empty());
    CHECK(fs::exists(dir / "aggregates.csv"));
    CHECK(slurp(dir / "config.txt") == "# command: mc\n");
}

TEST_CASE("write_result: records round-trip and aggregates match the records")
{
    SweepSpec spec;
    spec.base.n = 10;
    spec.base.density = 0.3;
    spec.base.len_adev = 8;
    spec.base.len_train = 50;
    spec.base.len_test = 20;
    spec.trials = 3;
    spec.axes = {{"lambda", {1.0, 2.0}}};
    auto result = run_grid_sweep(spec);
    result.records[1].faulted = true;
    result.records[1].fault = "synthetic, with \"quotes\", commas";
    result.aggregates = compute_aggregates(result);

    const auto dir = scratch_dir("roundtrip");
    write_result(result, OutputFormat::csv, dir.string(), "x");
    const auto back = read_records((dir / "records.csv").string());
    REQUIRE(back.records.size() == result.records.size());
    CHECK(back.axis_names == result.axis_names);
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        const auto& a = result.records[i];
        const auto& b = back.records[i];
        CHECK(a.seed == b.seed);
        CHECK(a.params == b.params);
        CHECK(a.fault == b.fault);
        CHECK(a.faulted == b.faulted);
        CHECK(a.test_mse == b.test_mse);
        CHECK(a.order_r == b.order_r);
        CHECK(std::isnan(b.mc));
    }

    const auto aggs = read_csv((dir / "aggregates.csv").string());
    const auto records = read_csv((dir / "records.csv").string());
    const auto metric = aggs.column("metric");
    const auto cell = aggs.column("cell");
    const auto mean = aggs.column("mean");
    for (const auto& row : aggs.rows) {
        if (row[metric] != "test_mse") {
            continue;
        }
        double sum = 0.0;
        int n = 0;
        for (const auto& rec : records.rows) {
            if (rec[records.column("cell")] == row[cell] && rec[records.column("faulted")] == "0") {
                sum += std::stod(rec[records.column("test_mse")]);
                ++n;
            }
        }
        REQUIRE(n > 0);
        CHECK(std::stod(row[mean]) == doctest::Approx(sum / n).epsilon(1e-14));
    }

    // Tampered aggregates are refused.
    result.aggregates[0].mean += 1.0;
    CHECK_THROWS_AS(write_result(result, OutputFormat::csv, dir.string(), "x"), DataError);
}

TEST_CASE("json output")
{
    const auto dir = scratch_dir("json");
    CHECK(run_cli(small({"run", "--format", "json", "--output_dir", dir.string()})) == 0);
    CHECK(fs::exists(dir / "results.json"));
    CHECK(fs::exists(dir / "config.txt"));
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("run twice with the same seed gives byte-identical files")
{
    const auto a = scratch_dir("run-a");
    const auto b = scratch_dir("run-b");
    std::string out;
    CHECK(run_cli(small({"run", "--seed", "7", "--output_dir", a.string()}), &out) == 0);
    CHECK(out.find("test_mse") != std::string::npos);
    CHECK(run_cli(small({"run", "--seed", "7", "--workers", "3", "--output_dir", b.string()})) == 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++files;
    }
    CHECK(files >= 3);
}

TEST_CASE("spectrum of mso12 over 1200 samples has 601 rows")
{
    const auto dir = scratch_dir("spectrum");
    CHECK(run_cli({"spectrum", "--task", "mso12", "--length", "1200", "--output_dir", dir.string()}) == 0);
    const auto table = read_csv((dir / "spectrum.csv").string());
    CHECK(table.header == std::vector<std::string>{"bin", "magnitude"});
    CHECK(table.rows.size() == 601);
}

TEST_CASE("sweep on a 2x2 grid with one trial")
{
    const auto dir = scratch_dir("sweep");
    CHECK(run_cli(small({"sweep", "--lambda_values", "1,2", "--rho_values", "0.5,1", "--trials", "1", "--output_dir",
                         dir.string()}))
          == 0);
    const auto records = read_csv((dir / "records.csv").string());
    CHECK(records.rows.size() == 4);
    const auto aggs = read_csv((dir / "aggregates.csv").string());
    CHECK(aggs.rows.size() >= 4);
    CHECK(slurp(dir / "config.txt").rfind("# command: sweep", 0) == 0);
}

TEST_CASE("file task through the CLI")
{
    const auto dir = scratch_dir("filetask");
    const auto series = (dir / "series.csv").string();
    {
        std::ofstream f(series);
        f << "t,value\n";
        for (int t = 0; t < 200; ++t) {
            f << t << "," << std::sin(0.1 * t) * 3.0 + 5.0 << "\n";
        }
    }
    CHECK(run_cli(small({"run", "--task", "file:" + series, "--column", "value", "--normalize", "0:1",
                         "--output_dir", (dir / "o").string()}))
          == 0);
    const auto missing = run_cli(small({"run", "--task", "file:" + (dir / "nope.csv").string(), "--output_dir",
                                        (dir / "o2").string()}));
    CHECK(missing != 0);
}

TEST_CASE("faulted cells give a nonzero exit status")
{
    const auto dir = scratch_dir("fault");
    std::string err;
    const int code = run_cli(small({"sweep", "--lambda_values", "1", "--rho_values", "1", "--trials", "1",
                                    "--spectral_method", "subspace", "--spectral_max_iterations", "1",
                                    "--spectral_tolerance", "1e-15", "--output_dir", dir.string()}),
                             nullptr, &err);
    CHECK(code == 1);
    CHECK(err.find("fault") != std::string::npos);
    CHECK(fs::exists(dir / "records.csv"));
}
