#include "sadrc/config.hpp"

#include "sadrc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace sadrc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        parts.push_back(trim(cur));
    }
    return parts;
}

std::string fmt_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + fmt_real(v[i]);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& range, const std::string& text)
{
    throw ConfigError("key '" + key + "': expected " + range + ", got '" + text + "'");
}

struct Key
{
    std::string name;
    std::string range;
    std::function<void(RunConfig&, const std::string& key, const std::string& range, const std::string& text)> set;
    std::function<std::string(const RunConfig&)> get;
    bool echoed = true;
};

double real_in(const std::string& key, const std::string& range, const std::string& text, double lo, double hi,
               bool lo_open = false)
{
    double v = 0.0;
    try {
        v = parse_real(text);
    } catch (const ConfigError&) {
        bad_value(key, range, text);
    }
    if (!std::isfinite(v) || v > hi || v < lo || (lo_open && v == lo)) {
        bad_value(key, range, text);
    }
    return v;
}

long long int_in(const std::string& key, const std::string& range, const std::string& text, long long lo,
                 long long hi)
{
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || v < lo || v > hi) {
        bad_value(key, range, text);
    }
    return v;
}

std::uint64_t uint_value(const std::string& key, const std::string& range, const std::string& text)
{
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        bad_value(key, range, text);
    }
    return v;
}

bool bool_value(const std::string& key, const std::string& range, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    bad_value(key, range, text);
}

std::vector<double> list_in(const std::string& key, const std::string& range, const std::string& text,
                            double lo, double hi, bool lo_open = false)
{
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        out.push_back(real_in(key, range, part, lo, hi, lo_open));
    }
    if (out.empty()) {
        bad_value(key, range, text);
    }
    return out;
}

std::pair<double, double> pair_in(const std::string& key, const std::string& range, const std::string& text,
                                  double lo, bool lo_open)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        bad_value(key, range, text);
    }
    const double inf = std::numeric_limits<double>::infinity();
    return {real_in(key, range, parts[0], lo, inf, lo_open), real_in(key, range, parts[1], lo, inf, lo_open)};
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

const char* method_name(SpectralMethod m)
{
    return m == SpectralMethod::dense_schur ? "dense" : "subspace";
}

const std::vector<Key>& keys()
{
    const double inf = std::numeric_limits<double>::infinity();
    static const std::vector<Key> table = {
        {"task", "narma10 | mg17 | mso12 | file:<path>",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t != "narma10" && t != "mg17" && t != "mso12" && !(t.rfind("file:", 0) == 0 && t.size() > 5)) {
                 bad_value(k, r, t);
             }
             c.task = t;
         },
         [](const RunConfig& c) { return c.task; }},
        {"seed", "an unsigned 64-bit integer",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) { c.seed = uint_value(k, r, t); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"trials", "an integer in [1, 100000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.trials = static_cast<int>(int_in(k, r, t, 1, 100000));
         },
         [](const RunConfig& c) { return std::to_string(c.trials); }},
        {"workers", "an integer in [1, 1024]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.workers = static_cast<int>(int_in(k, r, t, 1, 1024));
         },
         [](const RunConfig& c) { return std::to_string(c.workers); }, false},
        {"n", "an integer in [1, 100000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.n = static_cast<int>(int_in(k, r, t, 1, 100000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.n); }},
        {"density", "a real in [0, 1]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.density = real_in(k, r, t, 0.0, 1.0);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.density); }},
        {"rho", "a real > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.spectral_target = real_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.spectral_target); }},
        {"lambda", "a real > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.dynamics.lambda = real_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.dynamics.lambda); }},
        {"beta", "a finite real (multiples of pi allowed, e.g. pi/2)",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.dynamics.beta = real_in(k, r, t, -inf, inf);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.dynamics.beta); }},
        {"epsilon", "a real >= 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.dynamics.epsilon = real_in(k, r, t, 0.0, inf);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.dynamics.epsilon); }},
        {"dt", "a real > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.dynamics.dt = real_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.dynamics.dt); }},
        {"len_adev", "an integer in [0, 10000000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.len_adev = static_cast<int>(int_in(k, r, t, 0, 10000000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.len_adev); }},
        {"len_train", "an integer in [1, 10000000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.len_train = static_cast<int>(int_in(k, r, t, 1, 10000000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.len_train); }},
        {"len_test", "an integer in [1, 10000000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.len_test = static_cast<int>(int_in(k, r, t, 1, 10000000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.len_test); }},
        {"ridge_alpha", "a real >= 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.ridge_alpha = real_in(k, r, t, 0.0, inf);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.ridge_alpha); }},
        {"adaptive", "true | false",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.adaptive = bool_value(k, r, t);
         },
         [](const RunConfig& c) { return fmt_bool(c.reservoir.adaptive); }},
        {"bias", "true | false",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.features.bias = bool_value(k, r, t);
         },
         [](const RunConfig& c) { return fmt_bool(c.reservoir.features.bias); }},
        {"trig", "true | false",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.features.trig = bool_value(k, r, t);
         },
         [](const RunConfig& c) { return fmt_bool(c.reservoir.features.trig); }},
        {"extra_train_after_dev", "true | false",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.extra_train_after_dev = bool_value(k, r, t);
         },
         [](const RunConfig& c) { return fmt_bool(c.reservoir.extra_train_after_dev); }},
        {"weight_shape", "uniform | a:b with a, b > 0",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t == "uniform") {
                 c.reservoir.weight_shape.reset();
                 return;
             }
             const auto [a, b] = pair_in(k, r, t, 0.0, true);
             c.reservoir.weight_shape = BetaShape{a, b};
         },
         [](const RunConfig& c) {
             return c.reservoir.weight_shape
                        ? fmt_real(c.reservoir.weight_shape->a) + ":" + fmt_real(c.reservoir.weight_shape->b)
                        : std::string("uniform");
         }},
        {"spectral_method", "dense | subspace",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t == "dense") {
                 c.reservoir.spectral.method = SpectralMethod::dense_schur;
             } else if (t == "subspace") {
                 c.reservoir.spectral.method = SpectralMethod::subspace_iteration;
             } else {
                 bad_value(k, r, t);
             }
         },
         [](const RunConfig& c) { return std::string(method_name(c.reservoir.spectral.method)); }},
        {"spectral_tolerance", "a real > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.spectral.tolerance = real_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_real(c.reservoir.spectral.tolerance); }},
        {"spectral_max_iterations", "an integer in [1, 100000000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.spectral.max_iterations = static_cast<int>(int_in(k, r, t, 1, 100000000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.spectral.max_iterations); }},
        {"spectral_block_size", "an integer in [2, 100000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.reservoir.spectral.block_size = static_cast<int>(int_in(k, r, t, 2, 100000));
         },
         [](const RunConfig& c) { return std::to_string(c.reservoir.spectral.block_size); }},
        {"lambda_values", "a comma-separated list of reals > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.lambda_values = list_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_list(c.lambda_values); }},
        {"rho_values", "a comma-separated list of reals > 0",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.rho_values = list_in(k, r, t, 0.0, inf, true);
         },
         [](const RunConfig& c) { return fmt_list(c.rho_values); }},
        {"density_values", "a comma-separated list of reals in [0, 1]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.density_values = list_in(k, r, t, 0.0, 1.0);
         },
         [](const RunConfig& c) { return fmt_list(c.density_values); }},
        {"beta_values", "a comma-separated list of finite reals",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.beta_values = list_in(k, r, t, -inf, inf);
         },
         [](const RunConfig& c) { return fmt_list(c.beta_values); }},
        {"nodes", "a comma-separated list of lambda:rho pairs with lambda, rho > 0",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.nodes.clear();
             for (const auto& part : split(t, ',')) {
                 const auto parts = split(part, ':');
                 if (parts.size() != 2) {
                     bad_value(k, r, t);
                 }
                 const double inf2 = std::numeric_limits<double>::infinity();
                 c.nodes.push_back({real_in(k, r, parts[0], 0.0, inf2, true), real_in(k, r, parts[1], 0.0, inf2, true)});
             }
         },
         [](const RunConfig& c) {
             std::string out;
             for (std::size_t i = 0; i < c.nodes.size(); ++i) {
                 out += (i ? "," : "") + fmt_real(c.nodes[i].lambda) + ":" + fmt_real(c.nodes[i].rho);
             }
             return out;
         }},
        {"shapes", "a comma-separated list of a:b pairs with a, b > 0",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.shapes.clear();
             for (const auto& part : split(t, ',')) {
                 const auto [a, b] = pair_in(k, r, part, 0.0, true);
                 c.shapes.push_back({a, b});
             }
             if (c.shapes.empty()) {
                 bad_value(k, r, t);
             }
         },
         [](const RunConfig& c) {
             std::string out;
             for (std::size_t i = 0; i < c.shapes.size(); ++i) {
                 out += (i ? "," : "") + fmt_real(c.shapes[i].a) + ":" + fmt_real(c.shapes[i].b);
             }
             return out;
         }},
        {"weight_betas", "a comma-separated list of finite reals",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.weight_betas = list_in(k, r, t, -inf, inf);
         },
         [](const RunConfig& c) { return fmt_list(c.weight_betas); }},
        {"k_max", "an integer in [1, 100000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.mc.k_max = static_cast<int>(int_in(k, r, t, 1, 100000));
         },
         [](const RunConfig& c) { return std::to_string(c.mc.k_max); }},
        {"mc_washout", "an integer in [0, 10000000], at least k_max",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.mc.washout = static_cast<int>(int_in(k, r, t, 0, 10000000));
         },
         [](const RunConfig& c) { return std::to_string(c.mc.washout); }},
        {"mc_samples", "an integer in [2, 10000000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.mc.samples = static_cast<int>(int_in(k, r, t, 2, 10000000));
         },
         [](const RunConfig& c) { return std::to_string(c.mc.samples); }},
        {"mc_train_fraction", "a real in (0, 1)",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             const double v = real_in(k, r, t, 0.0, 1.0, true);
             if (v == 1.0) {
                 bad_value(k, r, t);
             }
             c.mc.train_fraction = v;
         },
         [](const RunConfig& c) { return fmt_real(c.mc.train_fraction); }},
        {"length", "an integer in [0, 100000000] (0 = the task's pipeline length)",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.length = static_cast<int>(int_in(k, r, t, 0, 100000000));
         },
         [](const RunConfig& c) { return std::to_string(c.length); }},
        {"bins", "an integer in [1, 100000]",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             c.bins = static_cast<int>(int_in(k, r, t, 1, 100000));
         },
         [](const RunConfig& c) { return std::to_string(c.bins); }},
        {"column", "a column name of the series file (empty = single-column file)",
         [](RunConfig& c, const std::string&, const std::string&, const std::string& t) { c.column = t; },
         [](const RunConfig& c) { return c.column; }},
        {"normalize", "none | lo:hi with lo < hi",
         [inf](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t == "none") {
                 c.normalize.reset();
                 return;
             }
             const auto [lo, hi] = pair_in(k, r, t, -inf, false);
             if (!(lo < hi)) {
                 bad_value(k, r, t);
             }
             c.normalize = SeriesNormalization{lo, hi};
         },
         [](const RunConfig& c) {
             return c.normalize ? fmt_real(c.normalize->lo) + ":" + fmt_real(c.normalize->hi) : std::string("none");
         }},
        {"output_dir", "a directory path",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t.empty()) {
                 bad_value(k, r, t);
             }
             c.output_dir = t;
         },
         [](const RunConfig& c) { return c.output_dir; }, false},
        {"format", "csv | json",
         [](RunConfig& c, const std::string& k, const std::string& r, const std::string& t) {
             if (t != "csv" && t != "json") {
                 bad_value(k, r, t);
             }
             c.format = t;
         },
         [](const RunConfig& c) { return c.format; }},
    };
    return table;
}

const Key& find_key(const std::string& name)
{
    for (const auto& k : keys()) {
        if (k.name == name) {
            return k;
        }
    }
    throw ConfigError("unknown config key '" + name + "'");
}

// i / denom for i = 1..count; division keeps values like 0.3 correctly rounded.
std::vector<double> stepped(int count, double denom)
{
    std::vector<double> v;
    for (int i = 1; i <= count; ++i) {
        v.push_back(i / denom);
    }
    return v;
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"run",         "sweep",      "mc",      "sparsity",
                                                   "astringency", "beta-sweep", "weights", "spectrum"};
    return names;
}

double parse_real(const std::string& raw)
{
    const std::string text = trim(raw);
    const auto pi_at = text.find("pi");
    if (pi_at == std::string::npos) {
        double v = 0.0;
        const auto* end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, v);
        if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
            throw ConfigError("not a number: '" + raw + "'");
        }
        return v;
    }
    // [sign][coef*]pi[/den]
    std::string coef = text.substr(0, pi_at);
    std::string rest = text.substr(pi_at + 2);
    double c = 1.0;
    if (coef == "-") {
        c = -1.0;
    } else if (!coef.empty() && coef != "+") {
        if (coef.back() != '*') {
            throw ConfigError("not a number: '" + raw + "'");
        }
        coef.pop_back();
        c = parse_real(coef);
    }
    double d = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw ConfigError("not a number: '" + raw + "'");
        }
        d = parse_real(rest.substr(1));
    }
    return c * std::numbers::pi / d;
}

RunConfig default_config(const std::string& command, const std::string& task)
{
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    RunConfig c;
    c.command = command;
    find_key("task").set(c, "task", find_key("task").range, task);

    // Lengths and coupling strength per task.
    c.reservoir.len_adev = 100;
    if (task == "narma10") {
        c.reservoir.len_train = 900;
        c.reservoir.len_test = 500;
        c.reservoir.dynamics.lambda = 4.0;
    } else if (task == "mg17") {
        c.reservoir.len_train = 2900;
        c.reservoir.len_test = 1000;
        c.reservoir.dynamics.lambda = 1.0;
    } else if (task == "mso12") {
        c.reservoir.len_train = 1200;
        c.reservoir.len_test = 100;
        c.reservoir.dynamics.lambda = 4.0;
    } else {
        c.reservoir.len_train = 1700;
        c.reservoir.len_test = 500;
        c.reservoir.dynamics.lambda = 0.5;
    }

    c.lambda_values = stepped(16, 2.0);
    c.rho_values = stepped(20, 10.0);
    c.density_values = stepped(10, 10.0);
    c.density_values.insert(c.density_values.begin(), 0.0);
    c.beta_values = beta_grid();
    c.nodes = {{0.5, 0.1}, {2.0, 0.5}, {4.0, 1.0}, {6.0, 1.5}, {8.0, 2.0}};
    c.shapes = {{0.4, 0.4}, {10.0, 10.0}};
    c.weight_betas = {std::numbers::pi / 2.0};

    if (command == "run" || command == "spectrum") {
        c.trials = 1;
    } else if (command == "sweep" || command == "mc" || command == "weights") {
        c.trials = 10;
    } else {
        c.trials = 50;
    }
    if (command == "astringency") {
        c.density_values = {0.05};
        c.reservoir.dynamics.beta = 0.0;
    }

    if (const char* env = std::getenv(output_dir_env); env != nullptr && *env != '\0') {
        c.output_dir = env;
    } else {
        c.output_dir = "sadrc-out/" + command;
    }
    return c;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

RunConfig parse_config(const std::string& command, const std::optional<std::string>& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides)
{
    std::vector<std::pair<std::string, std::string>> layers;
    if (file) {
        layers = read_config_file(*file);
    }
    layers.insert(layers.end(), overrides.begin(), overrides.end());

    // Task-dependent defaults need the task first; the last assignment wins.
    std::string task = "narma10";
    for (const auto& [k, v] : layers) {
        if (k == "task") {
            task = v;
        }
    }
    RunConfig cfg = default_config(command, task);
    for (const auto& [k, v] : layers) {
        const Key& key = find_key(k);
        key.set(cfg, key.name, key.range, v);
    }

    try {
        cfg.reservoir.validate();
        cfg.reservoir.spectral.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    if (cfg.mc.washout < cfg.mc.k_max) {
        throw ConfigError("key 'mc_washout': expected an integer >= k_max (" + std::to_string(cfg.mc.k_max) +
                          "), got '" + std::to_string(cfg.mc.washout) + "'");
    }
    if (command == "astringency" && cfg.trials < 2) {
        throw ConfigError("key 'trials': expected an integer >= 2 for astringency, got '" +
                          std::to_string(cfg.trials) + "'");
    }
    return cfg;
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& k : keys()) {
            v.push_back(k.name);
        }
        return v;
    }();
    return names;
}

std::string describe_key(const std::string& key)
{
    return find_key(key).range;
}

std::string format_config(const RunConfig& cfg)
{
    std::string out = "# command: " + cfg.command + "\n";
    for (const auto& k : keys()) {
        if (k.echoed) {
            out += k.name + " = " + k.get(cfg) + "\n";
        }
    }
    return out;
}

} // namespace sadrc
