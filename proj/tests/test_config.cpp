#include "zalm/config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

using namespace zalm;

TEST_CASE("empty text leaves the defaults untouched") {
    RunConfig c;
    apply_config_text(c, "");
    CHECK(c.design.bin_width == 12.5e9);
    CHECK(c.design.rf_power == 10.0);
    CHECK(c.rates.pair_prob == 0.01);
    CHECK(c.n_pulses == 1000000);
    CHECK(c.sweep_outputs == std::vector<std::string>{"bins"});
}

TEST_CASE("unit suffixes are case-insensitive and dimension-checked") {
    RunConfig c;
    apply_assignment(c, "bin_width", "12.5GHz");
    CHECK(c.design.bin_width == doctest::Approx(12.5e9).epsilon(1e-15));
    apply_assignment(c, "bin_width", "12.5 ghz");
    CHECK(c.design.bin_width == doctest::Approx(12.5e9).epsilon(1e-15));
    apply_assignment(c, "bin_width", "12500 MHZ");
    CHECK(c.design.bin_width == doctest::Approx(12.5e9).epsilon(1e-15));

    apply_assignment(c, "pump_duration", "70 PS");
    CHECK(c.jsa.pump_fwhm_duration == doctest::Approx(70e-12).epsilon(1e-15));

    apply_assignment(c, "v_pi", "500 mV");
    CHECK(c.design.v_pi == doctest::Approx(0.5).epsilon(1e-15));

    apply_assignment(c, "rf_power", "100mW");
    CHECK(c.design.rf_power == doctest::Approx(0.1).epsilon(1e-15));

    apply_assignment(c, "chain_loss", "0.6 dB");
    CHECK(c.rates.chain_loss_db == doctest::Approx(0.6).epsilon(1e-15));

    apply_assignment(c, "waveform_phase", "90 deg");
    CHECK(c.design.waveform.phase ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

    apply_assignment(c, "tbp", "0.89");
    CHECK(c.design.tbp == doctest::Approx(0.89).epsilon(1e-15));
}

TEST_CASE("bad suffixes and dimension mismatches name the key") {
    RunConfig c;
    CHECK_THROWS_WITH_AS(apply_assignment(c, "bin_width", "12.5 Gz"),
                         doctest::Contains("bin_width"),
                         std::invalid_argument);
    // time suffix on a frequency key
    CHECK_THROWS_AS(apply_assignment(c, "bin_width", "70 ps"),
                    std::invalid_argument);
    // dimensionless key refuses any suffix
    CHECK_THROWS_AS(apply_assignment(c, "tbp", "0.89 GHz"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "bin_width", ""),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "bin_width", "fast"),
                    std::invalid_argument);
}

TEST_CASE("unknown keys are rejected by name") {
    RunConfig c;
    CHECK_THROWS_WITH_AS(apply_assignment(c, "bandwidth", "1 GHz"),
                         doctest::Contains("bandwidth"),
                         std::invalid_argument);
}

TEST_CASE("enumerated keys parse case-insensitively") {
    RunConfig c;
    apply_assignment(c, "waveform", "Sawtooth");
    CHECK(c.design.waveform.shape == WaveShape::Sawtooth);
    apply_assignment(c, "waveform", "TRIANGLE");
    CHECK(c.design.waveform.shape == WaveShape::Triangle);
    apply_assignment(c, "waveform", "sine");
    CHECK(c.design.waveform.shape == WaveShape::Sine);
    CHECK_THROWS_AS(apply_assignment(c, "waveform", "square"),
                    std::invalid_argument);

    apply_assignment(c, "sweep_scale", "Linear");
    CHECK_FALSE(c.sweep_log);
    apply_assignment(c, "sweep_scale", "LOG");
    CHECK(c.sweep_log);
    CHECK_THROWS_AS(apply_assignment(c, "sweep_scale", "cubic"),
                    std::invalid_argument);
}

TEST_CASE("integer keys reject fractions and trailing junk") {
    RunConfig c;
    apply_assignment(c, "n_pulses", "2500000");
    CHECK(c.n_pulses == 2500000);
    apply_assignment(c, "seed", "18446744073709551615");
    CHECK(c.seed == 18446744073709551615ULL);
    apply_assignment(c, "workers", "4");
    CHECK(c.workers == 4);
    apply_assignment(c, "grid_size", "256");
    CHECK(c.jsa.grid_size == 256);

    CHECK_THROWS_AS(apply_assignment(c, "n_pulses", "10x"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "n_pulses", "1.5"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "n_pulses", "0"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "workers", "0"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "sweep_points", "1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_assignment(c, "scan_points", "4"),
                    std::invalid_argument);
}

TEST_CASE("sweep bounds are validated when text is applied") {
    RunConfig c;
    CHECK_THROWS_AS(
        apply_config_text(c, "sweep_start = 5 W\nsweep_stop = 2 W\n"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        apply_config_text(
            c, "sweep_scale = log\nsweep_start = 0 W\nsweep_stop = 2 W\n"),
        std::invalid_argument);
    // linear sweeps may start at zero
    apply_config_text(
        c, "sweep_scale = linear\nsweep_start = 0 W\nsweep_stop = 2 W\n");
    CHECK(c.sweep_start == 0.0);

    CHECK_THROWS_AS(apply_assignment(c, "sweep_variable", "bogus_field"),
                    std::invalid_argument);
    apply_assignment(c, "sweep_variable", "bin_width");
    CHECK(c.sweep_variable == "bin_width");

    apply_assignment(c, "sweep_outputs", "bins,drive_freq,pump_rate");
    CHECK(c.sweep_outputs.size() == 3);
    CHECK_THROWS_AS(apply_assignment(c, "sweep_outputs", "bins,bogus"),
                    std::invalid_argument);
}

TEST_CASE("sweep bounds take the sweep variable's dimension") {
    RunConfig c;
    apply_config_text(c,
                      "sweep_variable = bin_width\n"
                      "sweep_start = 5 GHz\n"
                      "sweep_stop = 50 GHz\n"
                      "sweep_scale = linear\n");
    CHECK(c.sweep_start == doctest::Approx(5e9).epsilon(1e-15));
    CHECK(c.sweep_stop == doctest::Approx(50e9).epsilon(1e-15));
    // a frequency suffix on a power sweep is a mismatch
    RunConfig d;
    CHECK_THROWS_AS(
        apply_config_text(d, "sweep_start = 5 GHz\nsweep_stop = 50 GHz\n"),
        std::invalid_argument);
}

TEST_CASE("comments, blanks, and duplicates behave like plain ini text") {
    RunConfig c;
    apply_config_text(c,
                      "# heralded source run\n"
                      "\n"
                      "rf_power = 1 W\n"
                      "rf_power = 2 W\n"
                      "  # indented comment\n"
                      "eta_a = 0.8\n");
    CHECK(c.design.rf_power == 2.0);
    CHECK(c.rates.eta_a == 0.8);
    CHECK_THROWS_AS(apply_config_text(c, "rf_power\n"),
                    std::invalid_argument);
}

TEST_CASE("dump reparses to an identical configuration") {
    RunConfig c;
    apply_config_text(c,
                      "waveform = sawtooth\n"
                      "waveform_phase = 30 deg\n"
                      "bin_width = 17.3 GHz\n"
                      "rf_power = 0.37 W\n"
                      "v_pi = 3 V\n"
                      "pair_prob = 0.02\n"
                      "insertion_loss = 3 dB\n"
                      "pump_duration = 41.7 ps\n"
                      "filter_order = 2\n"
                      "n_pulses = 123457\n"
                      "seed = 987654321\n"
                      "workers = 3\n"
                      "drive_multiple = 1.75\n"
                      "sweep_variable = v_pi\n"
                      "sweep_start = 0.25 V\n"
                      "sweep_stop = 4 V\n"
                      "sweep_points = 7\n"
                      "sweep_scale = log\n"
                      "sweep_outputs = bins,peak_voltage\n");
    const std::string dumped = dump_config(c);
    CHECK(dump_config(c) == dumped);  // deterministic, no timestamps

    RunConfig back;
    apply_config_text(back, dumped);
    CHECK(back.design.bin_width == c.design.bin_width);
    CHECK(back.design.rf_power == c.design.rf_power);
    CHECK(back.design.v_pi == c.design.v_pi);
    CHECK(back.design.waveform.shape == c.design.waveform.shape);
    CHECK(back.design.waveform.phase == c.design.waveform.phase);
    CHECK(back.rates.pair_prob == c.rates.pair_prob);
    CHECK(back.rates.insertion_loss_db == c.rates.insertion_loss_db);
    CHECK(back.jsa.pump_fwhm_duration == c.jsa.pump_fwhm_duration);
    CHECK(back.jsa.filter.shape_order == c.jsa.filter.shape_order);
    CHECK(back.n_pulses == c.n_pulses);
    CHECK(back.seed == c.seed);
    CHECK(back.workers == c.workers);
    CHECK(back.drive_multiple == c.drive_multiple);
    CHECK(back.sweep_variable == c.sweep_variable);
    CHECK(back.sweep_start == c.sweep_start);
    CHECK(back.sweep_stop == c.sweep_stop);
    CHECK(back.sweep_points == c.sweep_points);
    CHECK(back.sweep_log == c.sweep_log);
    CHECK(back.sweep_outputs == c.sweep_outputs);
    CHECK(dump_config(back) == dumped);
}

TEST_CASE("presets bake in the published parameter bundles") {
    const RunConfig f2 = preset_config("fig2a");
    CHECK(f2.sweep_variable == "rf_power");
    CHECK(f2.sweep_log);
    CHECK(f2.sweep_start == doctest::Approx(0.1));
    CHECK(f2.sweep_stop == doctest::Approx(100.0));

    const RunConfig f3 = preset_config("fig3");
    CHECK(f3.sweep_variable == "bin_width");
    CHECK_FALSE(f3.sweep_log);
    CHECK(f3.sweep_start == doctest::Approx(5e9));
    CHECK(f3.sweep_stop == doctest::Approx(50e9));

    const RunConfig f4b = preset_config("fig4b");
    CHECK(f4b.jsa.pump_fwhm_duration == doctest::Approx(70e-12));
    CHECK(f4b.jsa.pump_fwhm_bandwidth == doctest::Approx(12.9e9));
    const RunConfig f4c = preset_config("fig4c");
    CHECK(f4c.jsa.pump_fwhm_duration == doctest::Approx(35e-12));
    CHECK(f4c.jsa.pump_fwhm_bandwidth == doctest::Approx(25.8e9));

    const RunConfig f5b = preset_config("fig5b");
    CHECK(f5b.sweep_variable == "rf_power");
    CHECK(f5b.sweep_outputs ==
          std::vector<std::string>{"modulators"});

    CHECK(preset_names().size() >= 6);
    CHECK_THROWS_WITH_AS(preset_config("fig99"), doctest::Contains("fig99"),
                         std::invalid_argument);
}
