#include "zalm/design.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zalm {

namespace {

constexpr double kPi = std::numbers::pi;

// FWHM of a unit-variance Gaussian; dt_b = (24/kFwhmSigma) tau_b puts the
// bins at least 8 sigma inside their half of the drive period.
constexpr double kFwhmSigma = 2.355;

// Peak over RMS is waveform dependent; average power P into 50 Ohm fixes
// the RMS, so V_peak = sqrt(50 P) / (RMS/peak).
constexpr double kRmsFactorSawtooth = 0.585382;
constexpr double kRmsFactorTriangle = 0.579814;

double rms_factor(WaveShape shape) {
    switch (shape) {
        case WaveShape::Sawtooth: return kRmsFactorSawtooth;
        case WaveShape::Triangle: return kRmsFactorTriangle;
        case WaveShape::Sine:     return 1.0 / std::sqrt(2.0);
    }
    throw std::invalid_argument("waveform shape out of range");
}

// sigma-scaled maximum drive multiple k in D = k / dt_b.  At sigma = 8
// this is 3 for the sawtooth (full-period ramp) and 1 for sine and
// triangle (half-period ramp).
double drive_anchor(WaveShape shape) {
    return shape == WaveShape::Sawtooth ? 24.0 : 8.0;
}

// Shift per unit D V / v_pi: slope of the waveform at the pulse in units
// of peak voltage per drive period, divided by two (shift = slope/(2 v_pi)).
double slope_factor(const Waveform& w) {
    switch (w.shape) {
        case WaveShape::Sawtooth: return 1.0;
        case WaveShape::Triangle: return 2.0;
        case WaveShape::Sine:     return kPi * std::cos(w.phase);
    }
    throw std::invalid_argument("waveform shape out of range");
}

void validate(const DesignParams& p) {
    if (!(p.bin_width > 0.0))
        throw std::invalid_argument("bin_width must be > 0");
    if (!(p.guard_band >= 0.0))
        throw std::invalid_argument("guard_band must be >= 0");
    if (!(p.tbp > 0.0) || !(p.tbp <= 1.0))
        throw std::invalid_argument("tbp must lie in (0, 1]");
    if (!(p.rf_power >= 0.0))
        throw std::invalid_argument("rf_power must be >= 0");
    if (!(p.v_pi > 0.0))
        throw std::invalid_argument("v_pi must be > 0");
    if (!(p.containment >= 2.0))
        throw std::invalid_argument("containment must be >= 2");
    if (!(p.waveform.phase >= -kPi) || !(p.waveform.phase < kPi))
        throw std::invalid_argument("waveform phase must lie in [-pi, pi)");
}

int drive_multiple(const DesignParams& p) {
    // floor, never round up: a larger multiple would push the pulse past
    // the containment edge of the ramp
    const int k = static_cast<int>(
        std::floor(drive_anchor(p.waveform.shape) / p.containment + 1e-12));
    if (k < 1)
        throw std::invalid_argument(
            "containment " + std::to_string(p.containment) +
            " leaves no integer drive multiple for this waveform");
    return k;
}

}  // namespace

DesignPoint derive_design(const DesignParams& p) {
    validate(p);
    DesignPoint d;
    d.bin_spacing_f = p.bin_width / p.tbp + p.guard_band;
    d.pulse_width = p.tbp / p.bin_width;
    d.bin_spacing_t = (24.0 / kFwhmSigma) * d.pulse_width;
    d.drive_freq = drive_multiple(p) / d.bin_spacing_t;
    d.peak_voltage = std::sqrt(50.0 * p.rf_power) / rms_factor(p.waveform.shape);
    d.freq_shift =
        d.peak_voltage * slope_factor(p.waveform) * d.drive_freq / p.v_pi;
    d.bins = 2.0 * std::abs(d.freq_shift) / d.bin_spacing_f + 1.0;
    int usable = static_cast<int>(std::floor(d.bins + 1e-12));
    if (usable % 2 == 0) --usable;
    d.bins_usable = usable < 1 ? 1 : usable;
    d.pump_rate = 1.0 / (3.0 * d.bin_spacing_t);
    return d;
}

double bins_coefficient(WaveShape shape) {
    // 2.355 * anchor / 24 converts the drive multiple into bin_width /
    // (sigma tbp); the voltage factor folds in the 50 Ohm power limit
    Waveform w{shape, 0.0};
    return std::sqrt(50.0) / rms_factor(shape) * slope_factor(w) * kFwhmSigma *
           drive_anchor(shape) / 24.0;
}

double bins_closed_form(const DesignParams& p) {
    validate(p);
    const double dFb = p.bin_width / p.tbp + p.guard_band;
    const double x =
        p.bin_width * std::sqrt(p.rf_power) / (p.v_pi * p.tbp * dFb);
    double c = bins_coefficient(p.waveform.shape);
    if (p.waveform.shape == WaveShape::Sine)
        c *= std::abs(std::cos(p.waveform.phase));
    return 2.0 * (c / p.containment) * x + 1.0;
}

double max_voltage_offset(double allowed_phase, double v_pi) {
    if (!(allowed_phase >= 0.0))
        throw std::invalid_argument("allowed_phase must be >= 0");
    if (!(v_pi > 0.0))
        throw std::invalid_argument("v_pi must be > 0");
    return allowed_phase * v_pi / kPi;
}

double phase_error_from_offset(double offset, double v_pi) {
    if (!(v_pi > 0.0))
        throw std::invalid_argument("v_pi must be > 0");
    return kPi * offset / v_pi;
}

NoiseSpec noise_spec(double allowed_phase, double v_pi, double freq_shift) {
    NoiseSpec n;
    n.allowed_phase = allowed_phase;
    n.v_pi = v_pi;
    n.offset = max_voltage_offset(allowed_phase, v_pi);
    n.slope = 2.0 * v_pi * freq_shift;
    return n;
}

}  // namespace zalm
