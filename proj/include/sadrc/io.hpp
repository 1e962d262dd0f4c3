#pragma once

#include "sadrc/experiments.hpp"
#include "sadrc/tasks.hpp"

#include <span>
#include <string>
#include <vector>

namespace sadrc {

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

/// %.17g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// Header of records.csv for the given axis names.
std::vector<std::string> records_header(const std::vector<std::string>& axis_names);
/// Header of aggregates.csv for the given axis names.
std::vector<std::string> aggregates_header(const std::vector<std::string>& axis_names);

/// Write records, aggregates and any per-delay, snapshot or edge tables into `dir`,
/// plus config.txt holding `config_text`. Aggregates are recomputed from the
/// records first and a mismatch throws DataError. I/O failures throw DataError
/// citing the path. Returns the paths written.
std::vector<std::string> write_result(const ExperimentResult& result, OutputFormat format, const std::string& dir,
                                      const std::string& config_text);

/// Write t, target, prediction rows.
std::string write_predictions(std::span<const double> targets, std::span<const double> predictions,
                              OutputFormat format, const std::string& dir);

/// Write bin, magnitude rows.
std::string write_spectrum(std::span<const SpectrumBin> bins, OutputFormat format, const std::string& dir);

/// Write config.txt into `dir` (creating it).
std::string write_config(const std::string& config_text, const std::string& dir);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column. Throws DataError when absent.
    std::size_t column(const std::string& name) const;
};

/// RFC 4180 style reader (quoted fields may hold commas, quotes and newlines).
CsvTable read_csv(const std::string& path);

/// Parse a records.csv back into records; axis columns are those between
/// `mode` and the first metric column.
ExperimentResult read_records(const std::string& path);

} // namespace sadrc
