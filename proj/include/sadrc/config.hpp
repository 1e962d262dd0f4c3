#pragma once

#include "sadrc/experiments.hpp"
#include "sadrc/reservoir.hpp"
#include "sadrc/tasks.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sadrc {

/// Subcommands of the command-line tool.
const std::vector<std::string>& command_names();

/// Fully resolved settings of one invocation.
struct RunConfig
{
    std::string command = "run";
    std::string task = "narma10";
    ReservoirConfig reservoir{};
    std::uint64_t seed = 1;          // master seed
    int trials = 1;
    int workers = 1;

    std::vector<double> lambda_values;
    std::vector<double> rho_values;
    std::vector<double> density_values;
    std::vector<double> beta_values;
    std::vector<McNode> nodes;
    std::vector<BetaShape> shapes;
    std::vector<double> weight_betas;
    McSettings mc{};
    int length = 0;                  // spectrum length; 0 = the task's pipeline length
    int bins = 20;
    std::string column;              // column of a CSV series file; empty = single column
    std::optional<SeriesNormalization> normalize;

    std::string output_dir;
    std::string format = "csv";
};

/// Built-in defaults for a command and task: the task's row of the
/// hyperparameter table (lengths and lambda) plus the command's sweep grids
/// and trial count.
RunConfig default_config(const std::string& command, const std::string& task);

/// Key = value file (one pair per line, '#' starts a comment) as ordered pairs.
/// Throws ConfigError citing path and line on malformed lines.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Resolve defaults < file < overrides. Unknown keys, unparseable values and
/// out-of-range settings throw ConfigError naming the key and the accepted range.
RunConfig parse_config(const std::string& command, const std::optional<std::string>& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Every accepted key, in echo order.
const std::vector<std::string>& config_keys();

/// One-line description of a key with its accepted range.
std::string describe_key(const std::string& key);

/// The resolved config as key = value text. Execution-only keys (workers,
/// output_dir) are omitted because they cannot change any result.
std::string format_config(const RunConfig& cfg);

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "SADRC_OUTPUT_DIR";

/// Parse a number; also accepts multiples of pi such as "pi/2", "-pi", "3*pi/4".
double parse_real(const std::string& text);

} // namespace sadrc
