#include "sadrc/tasks.hpp"

#include "sadrc/error.hpp"
#include "sadrc/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sadrc {

// ---------------------------------------------------------------- NARMA10 --

std::vector<double> narma10_series(std::span<const double> inputs)
{
    constexpr int order = 10;
    const auto steps = inputs.size();
    // y[t] for t = 0 .. steps + 1; y[0] = 0 is history.
    std::vector<double> y(steps + 2, 0.0);
    auto u = [&](std::ptrdiff_t t) { return t >= 1 ? inputs[static_cast<std::size_t>(t - 1)] : 0.0; };
    auto yy = [&](std::ptrdiff_t t) { return t >= 0 ? y[static_cast<std::size_t>(t)] : 0.0; };

    for (std::ptrdiff_t t = 0; t <= static_cast<std::ptrdiff_t>(steps); ++t) {
        double window = 0.0;
        for (int i = 0; i < order; ++i) {
            window += yy(t - i);
        }
        const double next = 0.3 * yy(t) + 0.05 * yy(t) * window + 1.5 * u(t - (order - 1)) * u(t) + 0.1;
        if (!std::isfinite(next) || std::abs(next) > 1e6) {
            std::ostringstream os;
            os << "narma10: output diverged at t = " << t + 1 << "; reseed the input";
            throw NumericalError(os.str());
        }
        y[static_cast<std::size_t>(t + 1)] = next;
    }
    return {y.begin() + 1, y.end()};
}

TaskData gen_narma10(int length, std::uint64_t seed, const std::optional<std::vector<double>>& input_override)
{
    if (length < 11) {
        throw ConfigError("gen_narma10: length must be >= 11");
    }
    std::vector<double> u;
    if (input_override) {
        if (static_cast<int>(input_override->size()) < length) {
            throw DataError("gen_narma10: input override shorter than length");
        }
        u.assign(input_override->begin(), input_override->begin() + length);
    } else {
        Rng rng(derive_seed({seed, stream::task_data}));
        std::uniform_real_distribution<double> uniform(0.0, 0.5);
        u.resize(static_cast<std::size_t>(length));
        for (auto& v : u) {
            v = uniform(rng);
        }
    }
    const std::vector<double> y = narma10_series(u); // y(1) .. y(length + 1)
    TaskData data;
    data.inputs = u;
    data.targets.assign(y.begin() + 1, y.end());     // y(t + 1) for t = 1 .. length
    return data;
}

// ----------------------------------------------------------- Mackey-Glass --

void MackeyGlassParams::validate() const
{
    if (!(tau > 0.0) || !(inner_step > 0.0)) {
        throw ConfigError("mackey-glass: tau and inner_step must be > 0");
    }
    const double ratio = tau / inner_step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw ConfigError("mackey-glass: tau must be an integer multiple of inner_step");
    }
    if (std::round(ratio) < 3) {
        throw ConfigError("mackey-glass: tau must span at least three inner steps");
    }
    if (sample_every < 1 || transient_discard < 0) {
        throw ConfigError("mackey-glass: sample_every >= 1 and transient_discard >= 0 required");
    }
}

int MackeyGlassParams::delay_steps() const
{
    return static_cast<int>(std::lround(tau / inner_step));
}

namespace {

// Lagrange weights at position x for nodes 0..3 (offsets relative to `base`).
std::array<double, 4> lagrange4(double x)
{
    std::array<double, 4> w{};
    for (int i = 0; i < 4; ++i) {
        double v = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) {
                v *= (x - j) / static_cast<double>(i - j);
            }
        }
        w[static_cast<std::size_t>(i)] = v;
    }
    return w;
}

std::vector<double> integrate_on_grid(const MackeyGlassParams& p, double h, int steps,
                                      std::vector<double> history /* indices -delay-2 .. 0 */)
{
    const int delay = static_cast<int>(std::lround(p.tau / h));
    if (std::abs(delay * h - p.tau) > 1e-9 * p.tau || delay < 3) {
        throw ConfigError("mackey-glass: tau must be an integer multiple (>= 3) of the step");
    }
    const int offset = delay + 2;                 // storage index of grid index 0
    std::vector<double> y(std::move(history));
    y.resize(static_cast<std::size_t>(offset + steps + 1));
    auto at = [&](int i) { return y[static_cast<std::size_t>(i + offset)]; };

    auto rhs = [&](double state, double delayed) {
        return p.a * delayed / (1.0 + std::pow(delayed, p.n_exp)) + p.b * state;
    };

    const auto centered = lagrange4(1.5);   // nodes p0-1 .. p1+1
    const auto forward = lagrange4(0.5);    // nodes p0 .. p1+2
    const auto backward = lagrange4(2.5);   // nodes p0-2 .. p1

    for (int i = 0; i < steps; ++i) {
        const int p0 = i - delay;
        // Smooth segment containing [p0, p0 + 1]: history (-inf, 0] or [j delay, (j+1) delay].
        int lo;
        int hi;
        if (p0 < 0) {
            lo = -offset;
            hi = 0;
        } else {
            const int j = p0 / delay;
            lo = j * delay;
            hi = std::min((j + 1) * delay, i);
        }
        double half;
        if (p0 - 1 >= lo && p0 + 2 <= hi) {
            half = centered[0] * at(p0 - 1) + centered[1] * at(p0) + centered[2] * at(p0 + 1) +
                   centered[3] * at(p0 + 2);
        } else if (p0 - 1 < lo) {
            half = forward[0] * at(p0) + forward[1] * at(p0 + 1) + forward[2] * at(p0 + 2) +
                   forward[3] * at(p0 + 3);
        } else {
            half = backward[0] * at(p0 - 2) + backward[1] * at(p0 - 1) + backward[2] * at(p0) +
                   backward[3] * at(p0 + 1);
        }

        const double yi = at(i);
        const double k1 = rhs(yi, at(p0));
        const double k2 = rhs(yi + 0.5 * h * k1, half);
        const double k3 = rhs(yi + 0.5 * h * k2, half);
        const double k4 = rhs(yi + h * k3, at(p0 + 1));
        const double next = yi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(next)) {
            std::ostringstream os;
            os << "mackey-glass: non-finite state at step " << i + 1;
            throw NumericalError(os.str());
        }
        y[static_cast<std::size_t>(i + 1 + offset)] = next;
    }
    return {y.begin() + offset, y.end()};
}

} // namespace

std::vector<double> integrate_mackey_glass(const MackeyGlassParams& params, double h, int steps,
                                           const std::function<double(double)>& history)
{
    if (!(h > 0.0) || steps < 0) {
        throw ConfigError("mackey-glass: step must be > 0 and steps >= 0");
    }
    const int delay = static_cast<int>(std::lround(params.tau / h));
    std::vector<double> hist(static_cast<std::size_t>(delay + 3));
    for (int i = -(delay + 2); i <= 0; ++i) {
        hist[static_cast<std::size_t>(i + delay + 2)] = history(i * h);
    }
    return integrate_on_grid(params, h, steps, std::move(hist));
}

TaskData gen_mackey_glass(int length, const MackeyGlassParams& params, std::uint64_t seed)
{
    params.validate();
    if (length < 2) {
        throw ConfigError("gen_mackey_glass: length must be >= 2");
    }
    if (std::abs(params.sample_every * params.inner_step - 1.0) > 1e-9) {
        throw ConfigError("gen_mackey_glass: sample_every * inner_step must equal 1");
    }
    const int delay = params.delay_steps();
    Rng rng(derive_seed({seed, stream::task_data}));
    std::uniform_real_distribution<double> uniform(0.1, 1.3);
    std::vector<double> hist(static_cast<std::size_t>(delay + 3));
    for (auto& v : hist) {
        v = uniform(rng);
    }
    const int samples = params.transient_discard + length + 1;
    const int steps = (samples - 1) * params.sample_every;
    const std::vector<double> y = integrate_on_grid(params, params.inner_step, steps, std::move(hist));

    TaskData data;
    data.inputs.reserve(static_cast<std::size_t>(length));
    data.targets.reserve(static_cast<std::size_t>(length));
    for (int m = params.transient_discard; m < params.transient_discard + length; ++m) {
        data.inputs.push_back(y[static_cast<std::size_t>(m * params.sample_every)]);
        data.targets.push_back(y[static_cast<std::size_t>((m + 1) * params.sample_every)]);
    }
    return data;
}

// -------------------------------------------------------------------- MSO --

void MsoParams::validate() const
{
    if (frequencies.empty()) {
        throw ConfigError("mso: need at least one frequency");
    }
    for (double f : frequencies) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ConfigError("mso: frequencies must be > 0");
        }
    }
}

MsoParams MsoParams::mso12()
{
    return {{0.2, 0.311, 0.42, 0.51, 0.63, 0.74, 0.85, 0.97, 1.08, 1.19, 1.27, 1.32}};
}

TaskData gen_mso(int length, const MsoParams& params)
{
    params.validate();
    if (length < 2) {
        throw ConfigError("gen_mso: length must be >= 2");
    }
    auto value = [&](int t) {
        double s = 0.0;
        for (double f : params.frequencies) {
            s += std::sin(f * t);
        }
        return s;
    };
    TaskData data;
    data.inputs.reserve(static_cast<std::size_t>(length));
    data.targets.reserve(static_cast<std::size_t>(length));
    double current = value(0);
    for (int t = 0; t < length; ++t) {
        const double next = value(t + 1);
        data.inputs.push_back(current);
        data.targets.push_back(next);
        current = next;
    }
    return data;
}

// ------------------------------------------------------------ file series --

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& token, const std::string& path, int line)
{
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        std::ostringstream os;
        os << path << ":" << line << ": not a finite number: '" << token << "'";
        throw DataError(os.str());
    }
    return v;
}

} // namespace

LoadedSeries load_series(const std::string& path, const std::optional<std::string>& column,
                         const std::optional<SeriesNormalization>& normalize)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open series file: " + path);
    }
    std::vector<double> values;
    std::string raw;
    int line = 0;
    std::optional<std::size_t> col_index;
    std::size_t header_width = 0;
    bool header_seen = !column.has_value();

    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!header_seen) {
            const auto names = split_commas(text);
            const auto it = std::find(names.begin(), names.end(), *column);
            if (it == names.end()) {
                std::ostringstream os;
                os << path << ":" << line << ": column '" << *column << "' not in header";
                throw DataError(os.str());
            }
            col_index = static_cast<std::size_t>(it - names.begin());
            header_width = names.size();
            header_seen = true;
            continue;
        }
        if (col_index) {
            const auto fields = split_commas(text);
            if (fields.size() != header_width) {
                std::ostringstream os;
                os << path << ":" << line << ": expected " << header_width << " fields, got " << fields.size();
                throw DataError(os.str());
            }
            values.push_back(parse_number(fields[*col_index], path, line));
        } else {
            values.push_back(parse_number(text, path, line));
        }
    }
    if (!header_seen) {
        throw DataError(path + ": empty file (no header)");
    }
    if (values.size() < 2) {
        throw DataError(path + ": need at least two values, found " + std::to_string(values.size()));
    }

    LoadedSeries out;
    if (normalize) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        if (!(*mx > *mn)) {
            throw DataError(path + ": cannot normalize a constant series");
        }
        const double scale = (normalize->hi - normalize->lo) / (*mx - *mn);
        const double offset = normalize->lo - scale * *mn;
        for (auto& v : values) {
            v = scale * v + offset;
        }
        out.scale_offset = std::make_pair(scale, offset);
    }
    out.data.inputs.assign(values.begin(), values.end() - 1);
    out.data.targets.assign(values.begin() + 1, values.end());
    return out;
}

// ---------------------------------------------------------------- spectrum --

std::vector<double> dft_magnitudes(std::span<const double> series)
{
    const std::size_t n = series.size();
    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            // k t mod n keeps the angle argument small.
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += series[t] * std::polar(1.0, angle);
        }
        mags[k] = std::abs(acc);
    }
    return mags;
}

std::vector<SpectrumBin> spectrum(std::span<const double> series)
{
    if (series.size() < 2) {
        throw DataError("spectrum: need at least two samples");
    }
    const auto full = dft_magnitudes(series);
    std::vector<SpectrumBin> out;
    const std::size_t half = series.size() / 2;
    out.reserve(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        out.push_back({static_cast<int>(k), full[k]});
    }
    return out;
}

// ----------------------------------------------------------------- presets --

TaskData make_task(const std::string& preset, int length, std::uint64_t seed)
{
    if (preset == "narma10") {
        return gen_narma10(length, seed);
    }
    if (preset == "mg17") {
        return gen_mackey_glass(length, MackeyGlassParams{}, seed);
    }
    if (preset == "mso12") {
        return gen_mso(length, MsoParams::mso12());
    }
    if (preset.rfind("file:", 0) == 0) {
        TaskData data = load_series(preset.substr(5)).data;
        if (length > 0 && static_cast<int>(data.size()) > length) {
            data.inputs.resize(static_cast<std::size_t>(length));
            data.targets.resize(static_cast<std::size_t>(length));
        }
        return data;
    }
    throw ConfigError("unknown task preset '" + preset + "' (expected narma10, mg17, mso12, file:<path>)");
}

} // namespace sadrc
