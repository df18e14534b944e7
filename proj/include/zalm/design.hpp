#ifndef ZALM_DESIGN_HPP
#define ZALM_DESIGN_HPP

// Closed-form design relations for a spectrally multiplexed time-bin
// entanglement source driven by a serrodyne phase modulator.
//
// All quantities are SI: Hz, s, V, W, rad.  The chain is
//
//   bin_width, tbp        -> conjugate pulse width tau_b = tbp / bin_width
//   tau_b                 -> time-bin spacing  dt_b = (24/2.355) * tau_b
//                            (>= 8 Gaussian sigma between bins at the
//                             default containment, FWHM = 2.355 sigma)
//   containment sigma     -> drive frequency D = k / dt_b with integer k,
//                            k = floor(24/sigma) sawtooth, floor(8/sigma)
//                            sine and triangle
//   rf_power              -> peak voltage via the waveform RMS factor at
//                            50 Ohm average-power limit
//   peak voltage, D       -> serrodyne shift df and bin count
//                            n = 2*df / dF_b + 1,  dF_b = bin_width/tbp
//                                                        + guard_band
//
// The drive period must divide the bin spacing (k integer) so both time
// bins ride the same waveform segment; the rule is enforced by flooring,
// never rounding up, which keeps the pulse inside the linear ramp.

namespace zalm {

enum class WaveShape { Sawtooth, Triangle, Sine };

struct Waveform {
    WaveShape shape = WaveShape::Sine;
    double phase = 0.0;  // rad in [-pi, pi); slope alignment at the pulse (sine only)
};

struct DesignParams {
    double bin_width = 12.5e9;  // Hz, frequency-bin spacing, > 0
    double guard_band = 2.0e9;  // Hz, shift-error tolerance, >= 0
    double tbp = 0.89;          // pulse time-bandwidth product, (0, 1]
    double rf_power = 10.0;     // W, average drive power, >= 0
    double v_pi = 1.0;          // V, modulator half-wave voltage, > 0
    double containment = 8.0;   // Gaussian std devs separating bin from ramp edge, >= 2
    Waveform waveform;
};

struct DesignPoint {
    double bin_spacing_f = 0.0;  // Hz, usable frequency-bin spacing dF_b
    double pulse_width = 0.0;    // s, conjugate pulse width tau_b (FWHM)
    double bin_spacing_t = 0.0;  // s, time-bin spacing dt_b
    double drive_freq = 0.0;     // Hz; drive_freq * bin_spacing_t is a positive integer
    double peak_voltage = 0.0;   // V at the average-power limit
    double freq_shift = 0.0;     // Hz, serrodyne shift at max slope (signed for sine)
    double bins = 0.0;           // real-valued bin count n >= 1
    int bins_usable = 1;         // largest odd integer <= bins, >= 1
    double pump_rate = 0.0;      // Hz, R_P = 1/(3 * bin_spacing_t)
};

// DC-offset / ramp-slope budget for the drive electronics.  offset is the
// DC error that produces allowed_phase of differential phase; slope is the
// ramp rate realizing freq_shift (shift = slope / (2 v_pi)).
struct NoiseSpec {
    double allowed_phase = 0.0;  // rad
    double v_pi = 0.0;           // V
    double offset = 0.0;         // V
    double slope = 0.0;          // V/s
};

// Full design chain.  Throws std::invalid_argument naming the violated
// constraint (non-positive bin_width/v_pi, tbp outside (0,1], negative
// power or guard band, containment < 2 or too large for an integer drive
// multiple, waveform phase outside [-pi, pi)).
DesignPoint derive_design(const DesignParams& p);

// Idealized closed-form bin count: n = 2 (c/sigma) X + 1 with
// X = bin_width sqrt(P) / (v_pi tbp dF_b) and c = 28.447 sawtooth,
// 19.147 triangle, 24.662 sine (cos(phase) factored in).  Matches
// derive_design exactly when 24/sigma (sawtooth) or 8/sigma (sine,
// triangle) is an integer; elsewhere derive_design floors the drive
// multiple and is more conservative.
double bins_closed_form(const DesignParams& p);

// Closed-form coefficient c for one waveform shape (phase excluded);
// exposed so tests can pin the constants.
double bins_coefficient(WaveShape shape);

// Largest DC voltage offset keeping the bin-to-bin phase error within
// allowed_phase: offset = allowed_phase * v_pi / pi.
double max_voltage_offset(double allowed_phase, double v_pi);

// Inverse of max_voltage_offset: phase = pi * offset / v_pi.
double phase_error_from_offset(double offset, double v_pi);

// Budget for a design's shift: slope = 2 * v_pi * freq_shift.
NoiseSpec noise_spec(double allowed_phase, double v_pi, double freq_shift);

}  // namespace zalm

#endif
