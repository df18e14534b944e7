#ifndef ZALM_CONFIG_HPP
#define ZALM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zalm/design.hpp"
#include "zalm/jsa.hpp"
#include "zalm/rates.hpp"

namespace zalm {

// Flat `key = value` run configuration shared by every subcommand. Values
// carry optional case-insensitive unit suffixes checked against the key's
// dimension (12.5GHz, 70 ps, 0.6 dB, 500 mV, 10 W, 90 deg); bare numbers
// are base SI. Unknown keys, unknown suffixes, and dimension mismatches
// all throw std::invalid_argument naming the offender.

struct RunConfig {
    DesignParams design;
    RateParams rates;
    JsaParams jsa;

    long long n_pulses = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;

    // shear subcommand: drive frequency = drive_multiple / bin spacing;
    // harmonics 0 keeps the ideal waveform
    double drive_multiple = 2.0;
    int drive_harmonics = 0;
    int scan_points = 64;

    std::string sweep_variable = "rf_power";
    double sweep_start = 0.1;  // base SI units of the sweep variable
    double sweep_stop = 100.0;
    int sweep_points = 200;
    bool sweep_log = true;
    std::vector<std::string> sweep_outputs = {"bins"};
};

// single `key = value` assignment
void apply_assignment(RunConfig& config, const std::string& key,
                      const std::string& value);

// whole config text: blank lines and #-comments ignored, later keys win
void apply_config_text(RunConfig& config, const std::string& text);

// named parameter bundles reproducing the published sweeps and spectra
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// canonical dump; reparses to an identical RunConfig (exact doubles)
std::string dump_config(const RunConfig& config);

}  // namespace zalm

#endif
