#pragma once

#include "sadrc/config.hpp"

#include <ostream>

namespace sadrc {

/// Load the configured task: generated presets from a stream of the master
/// seed, or the series file named by `file:<path>` (with column / normalize).
TaskData load_task(const RunConfig& cfg, int length);

/// Run the configured command and write its files. Returns 0 when nothing
/// faulted, 1 otherwise; diagnostics go to `err`.
int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Command-line entry point: `<command> [--config FILE] [--key VALUE ...]`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sadrc
