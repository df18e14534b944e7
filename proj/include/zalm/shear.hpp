#ifndef ZALM_SHEAR_HPP
#define ZALM_SHEAR_HPP

// Time-domain simulation of serrodyne spectral shearing on a two-bin
// pulse train.  The optical field is kept as a baseband complex envelope;
// the modulator multiplies it by exp(i pi V(t) / v_pi).
//
// Per-bin shift and phase come from an intensity-weighted least-squares
// linear fit of the applied phase over the bin's support (half the bin
// spacing to each side): shift = slope / 2 pi, phase = intercept at the
// bin center.  The whole-train shift is the first moment of the DFT power
// spectrum, exact for trains that decay inside the grid.
//
// Gaussian factory grids keep the bin separation an exact integer number
// of samples, so a drive whose period divides the bin spacing produces
// bit-identical weights and phases in both bins and the differential
// phase cancels to machine precision, discontinuous sawtooth included.

#include <complex>
#include <iosfwd>
#include <limits>
#include <vector>

#include "zalm/design.hpp"

namespace zalm {

struct PulseTrain {
    double sample_period = 0.0;  // s; <= bin_fwhm / 20
    double t_start = 0.0;        // s, time of envelope[0]
    std::vector<std::complex<double>> envelope;
    double bin_center_early = 0.0;  // s
    double bin_center_late = 0.0;   // s; spacing = late - early > 4 * bin_fwhm
    double bin_fwhm = 0.0;          // s, intensity FWHM of each pulse
};

inline constexpr int kUnlimitedHarmonics = std::numeric_limits<int>::max();

struct DriveSignal {
    Waveform waveform;          // shape and designed phase alignment
    double frequency = 0.0;     // Hz, > 0
    double peak_voltage = 0.0;  // V of the untruncated shape, >= 0
    double phase_offset = 0.0;  // rad, experimental offset added to the phase
    // leading Fourier terms kept, >= 1; kUnlimitedHarmonics = ideal shape.
    // Truncation keeps the ideal-series coefficients, so the realized peak
    // drops below peak_voltage (a bandwidth-starved driver).
    int harmonics_kept = kUnlimitedHarmonics;
};

struct BinShear {
    double shift = 0.0;  // Hz
    double phase = 0.0;  // rad in [-pi, pi), intercept at the bin center
};

struct ShearResult {
    PulseTrain sheared;
    BinShear early;
    BinShear late;
    double differential_phase = 0.0;  // rad in [-pi, pi), late - early
    double centroid_shift = 0.0;      // Hz, whole-train spectral centroid
};

struct PhaseSweep {
    std::vector<double> phase;  // rad, n_points over [0, 2 pi)
    std::vector<double> shift;  // Hz, centroid shift at each phase
    // least-squares shift(p) ~ amplitude * cos(p - fit_phase) + offset
    double amplitude = 0.0;     // Hz, >= 0
    double fit_phase = 0.0;     // rad
    double offset = 0.0;        // Hz
    double misfit = 0.0;        // 1 - R^2
};

struct DifferentialScan {
    std::vector<double> phase;         // rad, scanned drive offsets
    std::vector<double> differential;  // rad per offset
    double best_phase = 0.0;           // rad, offset maximizing |differential|
    double differential_phase = 0.0;   // rad, signed value at best_phase
};

// Two unit-peak Gaussian pulses at -bin_spacing/2 and +bin_spacing/2 on a
// uniform grid spanning [-1.5, +1.5) * bin_spacing.  min_samples is
// rounded up to a multiple of 6 so both centers and their separation land
// exactly on samples; the count also grows to keep sample_period <=
// fwhm/20.  Throws std::invalid_argument if bin_spacing <= 4 * fwhm.
PulseTrain gaussian_train(double bin_spacing, double fwhm,
                          int min_samples = 16384);

// Drive voltage at time t.  Truncated shapes sum the leading
// harmonics_kept terms of the ideal Fourier series (sawtooth 2V/pi
// alternating 1/k, triangle 8V/pi^2 odd 1/k^2 terms, sine is itself).
double synth_drive(const DriveSignal& d, double t);

// Applies the modulator and analyzes both bins.  Throws
// std::invalid_argument on bad parameters and computation_error when a
// bin's support holds less than 1e-12 of the train energy (fit
// degenerate).
ShearResult shear(const PulseTrain& train, const DriveSignal& drive,
                  double v_pi);

// Centroid shift versus drive phase offset with a sinusoid fit;
// n_points >= 8 evenly spaced offsets.
PhaseSweep shift_vs_phase(const PulseTrain& train, const DriveSignal& drive,
                          double v_pi, int n_points = 32);

// Scans the drive phase offset for the largest bin-to-bin differential
// phase (the alignment the interferometric measurement singles out);
// n_points >= 8 coarse offsets refined around the peak.
DifferentialScan differential_phase_experiment(const PulseTrain& train,
                                               const DriveSignal& drive,
                                               double v_pi,
                                               int n_points = 64);

// "time_s,drive_v,intensity" rows covering the train.
void write_shear_csv(const PulseTrain& train, const DriveSignal& drive,
                     double v_pi, std::ostream& out);

}  // namespace zalm

#endif
