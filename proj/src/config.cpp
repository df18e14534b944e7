#include "zalm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace zalm {

namespace {

enum class Dim { None, Frequency, Time, Voltage, Power, Decibel, Angle };

struct Suffix {
    const char* name;
    double factor;
};

const Suffix kFrequency[] = {{"hz", 1.0},   {"khz", 1e3}, {"mhz", 1e6},
                             {"ghz", 1e9},  {"thz", 1e12}};
const Suffix kTime[] = {{"s", 1.0},    {"ms", 1e-3}, {"us", 1e-6},
                        {"ns", 1e-9},  {"ps", 1e-12}, {"fs", 1e-15}};
const Suffix kVoltage[] = {{"v", 1.0}, {"mv", 1e-3}, {"uv", 1e-6},
                           {"kv", 1e3}};
const Suffix kPower[] = {{"w", 1.0}, {"mw", 1e-3}, {"uw", 1e-6},
                         {"kw", 1e3}};
const Suffix kDecibel[] = {{"db", 1.0}};
const Suffix kAngle[] = {{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double suffix_factor(Dim dim, const std::string& suffix,
                     const std::string& key) {
    if (suffix.empty()) return 1.0;
    const Suffix* table = nullptr;
    size_t count = 0;
    switch (dim) {
        case Dim::None:
            throw std::invalid_argument("key '" + key +
                                        "' is dimensionless, got suffix '" +
                                        suffix + "'");
        case Dim::Frequency: table = kFrequency; count = 5; break;
        case Dim::Time: table = kTime; count = 6; break;
        case Dim::Voltage: table = kVoltage; count = 4; break;
        case Dim::Power: table = kPower; count = 4; break;
        case Dim::Decibel: table = kDecibel; count = 1; break;
        case Dim::Angle: table = kAngle; count = 2; break;
    }
    const std::string low = lower(suffix);
    for (size_t i = 0; i < count; ++i)
        if (low == table[i].name) return table[i].factor;
    throw std::invalid_argument("key '" + key + "' got unknown unit '" +
                                suffix + "'");
}

double parse_quantity(const std::string& value, Dim dim,
                      const std::string& key) {
    const std::string v = trim(value);
    if (v.empty())
        throw std::invalid_argument("key '" + key + "' has an empty value");
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || errno == ERANGE || !std::isfinite(x))
        throw std::invalid_argument("key '" + key +
                                    "' has a malformed number: " + v);
    return x * suffix_factor(dim, trim(std::string(end)), key);
}

long long parse_integer(const std::string& value, const std::string& key,
                        long long min_value) {
    const std::string v = trim(value);
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw std::invalid_argument("key '" + key +
                                    "' needs an integer, got: " + value);
    if (x < min_value)
        throw std::invalid_argument("key '" + key + "' must be at least " +
                                    std::to_string(min_value));
    return x;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE ||
        v[0] == '-')
        throw std::invalid_argument("key '" + key +
                                    "' needs an unsigned integer, got: " +
                                    value);
    return x;
}

struct SweepField {
    const char* name;
    Dim dim;
};

const SweepField kSweepFields[] = {
    {"rf_power", Dim::Power},       {"bin_width", Dim::Frequency},
    {"guard_band", Dim::Frequency}, {"tbp", Dim::None},
    {"v_pi", Dim::Voltage},         {"containment", Dim::None},
    {"pair_prob", Dim::None},       {"eta_herald", Dim::None},
    {"eta_a", Dim::None},           {"eta_b", Dim::None},
    {"bsm_eff", Dim::None},         {"chain_loss", Dim::Decibel},
    {"insertion_loss", Dim::Decibel}};

Dim sweep_dim(const std::string& variable) {
    for (const auto& f : kSweepFields)
        if (variable == f.name) return f.dim;
    throw std::invalid_argument("unknown sweep variable '" + variable + "'");
}

const char* kSweepOutputs[] = {"bins",       "bins_usable", "drive_freq",
                               "peak_voltage", "freq_shift", "pump_rate",
                               "pulse_width",  "bin_spacing_f",
                               "bin_spacing_t", "rate", "modulators"};

void check_sweep_output(const std::string& name) {
    for (const char* o : kSweepOutputs)
        if (name == o) return;
    throw std::invalid_argument("unknown sweep output '" + name + "'");
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* waveform_name(WaveShape s) {
    switch (s) {
        case WaveShape::Sawtooth: return "sawtooth";
        case WaveShape::Triangle: return "triangle";
        case WaveShape::Sine: return "sine";
    }
    return "sine";
}

}  // namespace

void apply_assignment(RunConfig& c, const std::string& raw_key,
                      const std::string& value) {
    const std::string key = lower(trim(raw_key));

    // design
    if (key == "bin_width") {
        c.design.bin_width = parse_quantity(value, Dim::Frequency, key);
    } else if (key == "guard_band") {
        c.design.guard_band = parse_quantity(value, Dim::Frequency, key);
    } else if (key == "tbp") {
        c.design.tbp = parse_quantity(value, Dim::None, key);
    } else if (key == "rf_power") {
        c.design.rf_power = parse_quantity(value, Dim::Power, key);
    } else if (key == "v_pi") {
        c.design.v_pi = parse_quantity(value, Dim::Voltage, key);
    } else if (key == "containment") {
        c.design.containment = parse_quantity(value, Dim::None, key);
    } else if (key == "waveform") {
        const std::string w = lower(trim(value));
        if (w == "sawtooth") c.design.waveform.shape = WaveShape::Sawtooth;
        else if (w == "triangle") c.design.waveform.shape = WaveShape::Triangle;
        else if (w == "sine") c.design.waveform.shape = WaveShape::Sine;
        else
            throw std::invalid_argument(
                "key 'waveform' must be sawtooth, triangle, or sine");
    } else if (key == "waveform_phase") {
        c.design.waveform.phase = parse_quantity(value, Dim::Angle, key);

        // rates
    } else if (key == "pair_prob") {
        c.rates.pair_prob = parse_quantity(value, Dim::None, key);
    } else if (key == "eta_herald") {
        c.rates.eta_herald = parse_quantity(value, Dim::None, key);
    } else if (key == "eta_a") {
        c.rates.eta_a = parse_quantity(value, Dim::None, key);
    } else if (key == "eta_b") {
        c.rates.eta_b = parse_quantity(value, Dim::None, key);
    } else if (key == "bsm_eff") {
        c.rates.bsm_eff = parse_quantity(value, Dim::None, key);
    } else if (key == "chain_loss") {
        c.rates.chain_loss_db = parse_quantity(value, Dim::Decibel, key);
    } else if (key == "insertion_loss") {
        c.rates.insertion_loss_db = parse_quantity(value, Dim::Decibel, key);

        // joint spectrum
    } else if (key == "pump_duration") {
        c.jsa.pump_fwhm_duration = parse_quantity(value, Dim::Time, key);
    } else if (key == "pump_bandwidth") {
        c.jsa.pump_fwhm_bandwidth = parse_quantity(value, Dim::Frequency, key);
    } else if (key == "pm_bandwidth") {
        c.jsa.pm_fwhm = parse_quantity(value, Dim::Frequency, key);
    } else if (key == "filter_width") {
        c.jsa.filter.fwhm = parse_quantity(value, Dim::Frequency, key);
    } else if (key == "filter_order") {
        c.jsa.filter.shape_order =
            static_cast<int>(parse_integer(value, key, 1));
    } else if (key == "grid_size") {
        c.jsa.grid_size = static_cast<int>(parse_integer(value, key, 8));
    } else if (key == "jsa_span") {
        c.jsa.span = parse_quantity(value, Dim::Frequency, key);

        // simulator
    } else if (key == "n_pulses") {
        c.n_pulses = parse_integer(value, key, 1);
    } else if (key == "seed") {
        c.seed = parse_u64(value, key);
    } else if (key == "workers") {
        c.workers = static_cast<int>(parse_integer(value, key, 1));

        // shear experiment
    } else if (key == "drive_multiple") {
        c.drive_multiple = parse_quantity(value, Dim::None, key);
        if (!(c.drive_multiple > 0.0))
            throw std::invalid_argument("key 'drive_multiple' must be > 0");
    } else if (key == "drive_harmonics") {
        c.drive_harmonics = static_cast<int>(parse_integer(value, key, 0));
    } else if (key == "scan_points") {
        c.scan_points = static_cast<int>(parse_integer(value, key, 8));

        // sweep
    } else if (key == "sweep_variable") {
        const std::string v = lower(trim(value));
        sweep_dim(v);  // throws on unknown names
        c.sweep_variable = v;
    } else if (key == "sweep_start") {
        c.sweep_start =
            parse_quantity(value, sweep_dim(c.sweep_variable), key);
    } else if (key == "sweep_stop") {
        c.sweep_stop =
            parse_quantity(value, sweep_dim(c.sweep_variable), key);
    } else if (key == "sweep_points") {
        c.sweep_points = static_cast<int>(parse_integer(value, key, 2));
    } else if (key == "sweep_scale") {
        const std::string v = lower(trim(value));
        if (v == "linear") c.sweep_log = false;
        else if (v == "log") c.sweep_log = true;
        else
            throw std::invalid_argument(
                "key 'sweep_scale' must be linear or log");
    } else if (key == "sweep_outputs") {
        std::vector<std::string> outs;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = lower(trim(item));
            if (item.empty()) continue;
            check_sweep_output(item);
            outs.push_back(item);
        }
        if (outs.empty())
            throw std::invalid_argument(
                "key 'sweep_outputs' needs at least one output");
        c.sweep_outputs = std::move(outs);
    } else {
        throw std::invalid_argument("unknown configuration key '" + raw_key +
                                    "'");
    }
}

void apply_config_text(RunConfig& c, const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        " is not a key = value pair: " + t);
        apply_assignment(c, t.substr(0, eq), t.substr(eq + 1));
    }
    // cross-key checks only make sense once the whole text is in
    if (!(c.sweep_start < c.sweep_stop))
        throw std::invalid_argument("sweep_start must be below sweep_stop");
    if (c.sweep_log && !(c.sweep_start > 0.0))
        throw std::invalid_argument("log sweeps need sweep_start > 0");
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    if (name == "fig2a") {
        apply_config_text(c,
                          "sweep_variable = rf_power\n"
                          "sweep_start = 0.1 W\n"
                          "sweep_stop = 100 W\n"
                          "sweep_points = 200\n"
                          "sweep_scale = log\n"
                          "sweep_outputs = bins\n");
    } else if (name == "fig3") {
        apply_config_text(c,
                          "sweep_variable = bin_width\n"
                          "sweep_start = 5 GHz\n"
                          "sweep_stop = 50 GHz\n"
                          "sweep_points = 46\n"
                          "sweep_scale = linear\n"
                          "sweep_outputs = bins,drive_freq,pump_rate\n");
    } else if (name == "fig4b") {
        apply_config_text(c,
                          "pump_duration = 70 ps\n"
                          "pump_bandwidth = 12.9 GHz\n");
    } else if (name == "fig4c") {
        apply_config_text(c,
                          "pump_duration = 35 ps\n"
                          "pump_bandwidth = 25.8 GHz\n");
    } else if (name == "fig5a") {
        apply_config_text(c,
                          "sweep_variable = rf_power\n"
                          "sweep_start = 0.1 W\n"
                          "sweep_stop = 100 W\n"
                          "sweep_points = 121\n"
                          "sweep_scale = log\n"
                          "sweep_outputs = rate,bins_usable\n");
    } else if (name == "fig5b") {
        apply_config_text(c,
                          "sweep_variable = rf_power\n"
                          "sweep_start = 0.1 W\n"
                          "sweep_stop = 100 W\n"
                          "sweep_points = 121\n"
                          "sweep_scale = log\n"
                          "sweep_outputs = modulators\n");
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig3", "fig4b", "fig4c", "fig5a", "fig5b"};
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream out;
    out << "bin_width = " << format_double(c.design.bin_width) << "\n"
        << "guard_band = " << format_double(c.design.guard_band) << "\n"
        << "tbp = " << format_double(c.design.tbp) << "\n"
        << "rf_power = " << format_double(c.design.rf_power) << "\n"
        << "v_pi = " << format_double(c.design.v_pi) << "\n"
        << "containment = " << format_double(c.design.containment) << "\n"
        << "waveform = " << waveform_name(c.design.waveform.shape) << "\n"
        << "waveform_phase = " << format_double(c.design.waveform.phase)
        << "\n"
        << "pair_prob = " << format_double(c.rates.pair_prob) << "\n"
        << "eta_herald = " << format_double(c.rates.eta_herald) << "\n"
        << "eta_a = " << format_double(c.rates.eta_a) << "\n"
        << "eta_b = " << format_double(c.rates.eta_b) << "\n"
        << "bsm_eff = " << format_double(c.rates.bsm_eff) << "\n"
        << "chain_loss = " << format_double(c.rates.chain_loss_db) << "\n"
        << "insertion_loss = " << format_double(c.rates.insertion_loss_db)
        << "\n"
        << "pump_duration = " << format_double(c.jsa.pump_fwhm_duration)
        << "\n"
        << "pump_bandwidth = " << format_double(c.jsa.pump_fwhm_bandwidth)
        << "\n"
        << "pm_bandwidth = " << format_double(c.jsa.pm_fwhm) << "\n"
        << "filter_width = " << format_double(c.jsa.filter.fwhm) << "\n"
        << "filter_order = " << c.jsa.filter.shape_order << "\n"
        << "grid_size = " << c.jsa.grid_size << "\n"
        << "jsa_span = " << format_double(c.jsa.span) << "\n"
        << "n_pulses = " << c.n_pulses << "\n"
        << "seed = " << c.seed << "\n"
        << "workers = " << c.workers << "\n"
        << "drive_multiple = " << format_double(c.drive_multiple) << "\n"
        << "drive_harmonics = " << c.drive_harmonics << "\n"
        << "scan_points = " << c.scan_points << "\n"
        << "sweep_variable = " << c.sweep_variable << "\n"
        << "sweep_start = " << format_double(c.sweep_start) << "\n"
        << "sweep_stop = " << format_double(c.sweep_stop) << "\n"
        << "sweep_points = " << c.sweep_points << "\n"
        << "sweep_scale = " << (c.sweep_log ? "log" : "linear") << "\n";
    out << "sweep_outputs = ";
    for (size_t i = 0; i < c.sweep_outputs.size(); ++i)
        out << (i ? "," : "") << c.sweep_outputs[i];
    out << "\n";
    return out.str();
}

}  // namespace zalm
