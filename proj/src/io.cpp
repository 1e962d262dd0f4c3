#include "sadrc/io.hpp"

#include "sadrc/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sadrc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string quote(const std::string& field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

void put_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        os << (i ? "," : "") << quote(fields[i]);
    }
    os << '\n';
}

fs::path ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + dir + "': " + ec.message());
    }
    return fs::path(dir);
}

std::string write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.close();
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
    return path.string();
}

json num(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string join_values(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ";" : "") + format_double(v[i]);
    }
    return out;
}

bool same(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

bool same_aggregate(const Aggregate& a, const Aggregate& b)
{
    if (a.cell != b.cell || a.mode != b.mode || a.metric != b.metric || a.count != b.count ||
        a.faulted != b.faulted || a.params.size() != b.params.size() || a.outliers.size() != b.outliers.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        if (!same(a.params[i], b.params[i])) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.outliers.size(); ++i) {
        if (!same(a.outliers[i], b.outliers[i])) {
            return false;
        }
    }
    return same(a.mean, b.mean) && same(a.variance, b.variance) && same(a.median, b.median) &&
           same(a.q1, b.q1) && same(a.q3, b.q3) && same(a.whisker_lo, b.whisker_lo) &&
           same(a.whisker_hi, b.whisker_hi) && same(a.min, b.min) && same(a.max, b.max);
}

void verify_aggregates(const ExperimentResult& result)
{
    const auto expected = compute_aggregates(result);
    bool ok = expected.size() == result.aggregates.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i) {
        ok = same_aggregate(expected[i], result.aggregates[i]);
    }
    if (!ok) {
        throw DataError("aggregates do not match recomputation from the records");
    }
}

double parse_double(const std::string& s)
{
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw DataError("not a number in CSV: '" + s + "'");
    }
    return v;
}

} // namespace

OutputFormat parse_format(const std::string& name)
{
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw ConfigError("unknown output format '" + name + "' (accepted: csv, json)");
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> records_header(const std::vector<std::string>& axis_names)
{
    std::vector<std::string> h = {"experiment", "cell", "trial", "seed", "mode"};
    h.insert(h.end(), axis_names.begin(), axis_names.end());
    for (const auto& col : metric_columns()) {
        h.emplace_back(col.name);
    }
    h.emplace_back("faulted");
    h.emplace_back("fault");
    return h;
}

std::vector<std::string> aggregates_header(const std::vector<std::string>& axis_names)
{
    std::vector<std::string> h = {"experiment", "cell", "mode"};
    h.insert(h.end(), axis_names.begin(), axis_names.end());
    for (const char* c : {"metric", "count", "faulted", "mean", "variance", "median", "q1", "q3", "whisker_lo",
                          "whisker_hi", "min", "max", "outliers"}) {
        h.emplace_back(c);
    }
    return h;
}

std::string write_config(const std::string& config_text, const std::string& dir)
{
    return write_file(ensure_dir(dir) / "config.txt", config_text);
}

std::vector<std::string> write_result(const ExperimentResult& result, OutputFormat format, const std::string& dir,
                                      const std::string& config_text)
{
    verify_aggregates(result);
    const fs::path root = ensure_dir(dir);
    std::vector<std::string> written;

    if (format == OutputFormat::json) {
        json doc;
        doc["experiment"] = result.experiment;
        doc["axes"] = result.axis_names;
        doc["records"] = json::array();
        for (const auto& r : result.records) {
            json j;
            j["cell"] = r.cell;
            j["trial"] = r.trial;
            j["seed"] = r.seed;
            j["mode"] = r.mode;
            json params = json::array();
            for (double p : r.params) {
                params.push_back(num(p));
            }
            j["params"] = params;
            for (const auto& col : metric_columns()) {
                j[col.name] = num(r.*col.field);
            }
            j["faulted"] = r.faulted;
            j["fault"] = r.fault;
            doc["records"].push_back(std::move(j));
        }
        doc["aggregates"] = json::array();
        for (const auto& a : result.aggregates) {
            json j;
            j["cell"] = a.cell;
            j["mode"] = a.mode;
            json params = json::array();
            for (double p : a.params) {
                params.push_back(num(p));
            }
            j["params"] = params;
            j["metric"] = a.metric;
            j["count"] = a.count;
            j["faulted"] = a.faulted;
            for (const auto& [name, v] : {std::pair{"mean", a.mean}, {"variance", a.variance}, {"median", a.median},
                                          {"q1", a.q1}, {"q3", a.q3}, {"whisker_lo", a.whisker_lo},
                                          {"whisker_hi", a.whisker_hi}, {"min", a.min}, {"max", a.max}}) {
                j[name] = num(v);
            }
            json outliers = json::array();
            for (double v : a.outliers) {
                outliers.push_back(num(v));
            }
            j["outliers"] = outliers;
            doc["aggregates"].push_back(std::move(j));
        }
        if (!result.mc_curves.empty()) {
            doc["mc_curves"] = json::array();
            for (const auto& m : result.mc_curves) {
                doc["mc_curves"].push_back({{"cell", m.cell}, {"trial", m.trial}, {"delay", m.delay}, {"mc", num(m.value)}});
            }
        }
        if (!result.snapshots.empty()) {
            doc["snapshots"] = json::array();
            for (const auto& s : result.snapshots) {
                doc["snapshots"].push_back({{"cell", s.cell}, {"trial", s.trial}, {"step", s.step},
                                            {"bin_center", num(s.bin_center)}, {"count", s.count}});
            }
        }
        if (!result.edges.empty()) {
            doc["edges"] = json::array();
            for (const auto& e : result.edges) {
                doc["edges"].push_back({{"cell", e.cell}, {"trial", e.trial}, {"stage", e.stage}, {"row", e.row},
                                        {"col", e.col}, {"weight", num(e.weight)}});
            }
        }
        written.push_back(write_file(root / "results.json", doc.dump(1) + "\n"));
        written.push_back(write_file(root / "config.txt", config_text));
        return written;
    }

    std::ostringstream rec;
    put_row(rec, records_header(result.axis_names));
    for (const auto& r : result.records) {
        std::vector<std::string> f = {result.experiment, std::to_string(r.cell), std::to_string(r.trial),
                                      std::to_string(r.seed), r.mode};
        for (double p : r.params) {
            f.push_back(format_double(p));
        }
        for (const auto& col : metric_columns()) {
            f.push_back(format_double(r.*col.field));
        }
        f.emplace_back(r.faulted ? "1" : "0");
        f.push_back(r.fault);
        put_row(rec, f);
    }
    written.push_back(write_file(root / "records.csv", rec.str()));

    std::ostringstream agg;
    put_row(agg, aggregates_header(result.axis_names));
    for (const auto& a : result.aggregates) {
        std::vector<std::string> f = {result.experiment, std::to_string(a.cell), a.mode};
        for (double p : a.params) {
            f.push_back(format_double(p));
        }
        f.push_back(a.metric);
        f.push_back(std::to_string(a.count));
        f.push_back(std::to_string(a.faulted));
        for (double v : {a.mean, a.variance, a.median, a.q1, a.q3, a.whisker_lo, a.whisker_hi, a.min, a.max}) {
            f.push_back(format_double(v));
        }
        f.push_back(join_values(a.outliers));
        put_row(agg, f);
    }
    written.push_back(write_file(root / "aggregates.csv", agg.str()));

    if (!result.mc_curves.empty()) {
        std::ostringstream os;
        put_row(os, {"cell", "trial", "delay", "mc"});
        for (const auto& m : result.mc_curves) {
            put_row(os, {std::to_string(m.cell), std::to_string(m.trial), std::to_string(m.delay), format_double(m.value)});
        }
        written.push_back(write_file(root / "mc_curves.csv", os.str()));
    }
    if (!result.snapshots.empty()) {
        std::ostringstream os;
        put_row(os, {"cell", "trial", "step", "bin_center", "count"});
        for (const auto& s : result.snapshots) {
            put_row(os, {std::to_string(s.cell), std::to_string(s.trial), std::to_string(s.step),
                         format_double(s.bin_center), std::to_string(s.count)});
        }
        written.push_back(write_file(root / "snapshots.csv", os.str()));
    }
    if (!result.edges.empty()) {
        std::ostringstream os;
        put_row(os, {"cell", "trial", "stage", "row", "col", "weight"});
        for (const auto& e : result.edges) {
            put_row(os, {std::to_string(e.cell), std::to_string(e.trial), e.stage, std::to_string(e.row),
                         std::to_string(e.col), format_double(e.weight)});
        }
        written.push_back(write_file(root / "edges.csv", os.str()));
    }
    written.push_back(write_file(root / "config.txt", config_text));
    return written;
}

std::string write_predictions(std::span<const double> targets, std::span<const double> predictions,
                              OutputFormat format, const std::string& dir)
{
    if (targets.size() != predictions.size()) {
        throw DataError("write_predictions: length mismatch");
    }
    const fs::path root = ensure_dir(dir);
    if (format == OutputFormat::json) {
        json rows = json::array();
        for (std::size_t t = 0; t < targets.size(); ++t) {
            rows.push_back({{"t", t}, {"target", num(targets[t])}, {"prediction", num(predictions[t])}});
        }
        return write_file(root / "predictions.json", rows.dump(1) + "\n");
    }
    std::ostringstream os;
    put_row(os, {"t", "target", "prediction"});
    for (std::size_t t = 0; t < targets.size(); ++t) {
        put_row(os, {std::to_string(t), format_double(targets[t]), format_double(predictions[t])});
    }
    return write_file(root / "predictions.csv", os.str());
}

std::string write_spectrum(std::span<const SpectrumBin> bins, OutputFormat format, const std::string& dir)
{
    const fs::path root = ensure_dir(dir);
    if (format == OutputFormat::json) {
        json rows = json::array();
        for (const auto& b : bins) {
            rows.push_back({{"bin", b.bin}, {"magnitude", num(b.magnitude)}});
        }
        return write_file(root / "spectrum.json", rows.dump(1) + "\n");
    }
    std::ostringstream os;
    put_row(os, {"bin", "magnitude"});
    for (const auto& b : bins) {
        put_row(os, {std::to_string(b.bin), format_double(b.magnitude)});
    }
    return write_file(root / "spectrum.csv", os.str());
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw DataError("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool pending = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            pending = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            pending = true;
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            pending = false;
        } else if (c != '\r') {
            field += c;
            pending = true;
        }
    }
    if (quoted) {
        throw DataError("'" + path + "': unterminated quoted field");
    }
    if (pending) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DataError("'" + path + "': empty file");
    }
    CsvTable table;
    table.header = std::move(rows.front());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != table.header.size()) {
            throw DataError("'" + path + "': row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " fields, header has " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(rows[r]));
    }
    return table;
}

ExperimentResult read_records(const std::string& path)
{
    const CsvTable t = read_csv(path);
    const std::size_t mode_col = t.column("mode");
    const std::size_t first_metric = t.column(metric_columns().front().name);
    ExperimentResult out;
    for (std::size_t c = mode_col + 1; c < first_metric; ++c) {
        out.axis_names.push_back(t.header[c]);
    }
    if (t.header != records_header(out.axis_names)) {
        throw DataError("'" + path + "': not a records file");
    }
    for (const auto& row : t.rows) {
        Record r;
        out.experiment = row[0];
        r.cell = std::stoull(row[1]);
        r.trial = std::stoi(row[2]);
        r.seed = std::stoull(row[3]);
        r.mode = row[4];
        for (std::size_t c = mode_col + 1; c < first_metric; ++c) {
            r.params.push_back(parse_double(row[c]));
        }
        std::size_t c = first_metric;
        for (const auto& col : metric_columns()) {
            r.*col.field = parse_double(row[c++]);
        }
        r.faulted = row[c++] == "1";
        r.fault = row[c];
        out.records.push_back(std::move(r));
    }
    return out;
}

} // namespace sadrc
