#ifndef ZALM_JSA_HPP
#define ZALM_JSA_HPP

// Joint spectral amplitude of the filtered photon pair:
//
//   A(ws, wi) = pump(ws + wi) * pm(ws - wi) * filter(ws) * filter(wi)
//
// with a Gaussian pump envelope, a sinc phase-matching function and a
// super-Gaussian bin filter on each arm, Frobenius-normalized on a square
// frequency grid (detunings from the respective carriers).
//
// Every width parameter is an intensity FWHM.  The sinc half-intensity
// point sits at x = 1.391557377 (sinc(x)^2 = 1/2); the filter amplitude is
// exp(-(ln2/2) (2w/fwhm)^(2 m)), order m = 1 Gaussian, m >= 4 near flat-top.

#include <complex>
#include <iosfwd>
#include <vector>

namespace zalm {

struct FilterSpec {
    double fwhm = 12.5e9;  // Hz, > 0
    int shape_order = 4;   // super-Gaussian order, >= 1
};

struct JsaParams {
    double pump_fwhm_duration = 70e-12;   // s, metadata paired with bandwidth
    double pump_fwhm_bandwidth = 12.9e9;  // Hz, > 0
    double pm_fwhm = 200e9;               // Hz, > 0
    FilterSpec filter;
    int grid_size = 512;  // points per axis, >= 64
    double span = 60e9;   // Hz, axes cover [-span, +span]; span > 2 * filter fwhm
};

// values is row-major with the signal index major:
// values[i * axis.size() + j] = A(axis[i], axis[j]), unit Frobenius norm.
struct JsaGrid {
    std::vector<double> axis;                   // Hz
    std::vector<std::complex<double>> values;
};

enum class Axis { Signal, Idler };

// Throws std::invalid_argument when a parameter violates its range or the
// filter would span fewer than 8 grid cells (under-resolved).
JsaGrid build_jsa(const JsaParams& p);

// Spectral purity sum_k s_k^4 over the singular values s_k of the
// normalized amplitude, computed as ||A A^H||_F^2 (identical by
// s_k^2 = eigenvalues of A A^H).  Throws computation_error on non-finite
// amplitudes or an all-zero grid.
double purity(const JsaGrid& g);

// Intensity marginal along one axis, normalized to unit sum.
std::vector<double> marginal(const JsaGrid& g, Axis axis);

// Intensity as a 16-bit ASCII portable graymap; row i = signal axis[i].
void write_pgm(const JsaGrid& g, std::ostream& out);

// "signal_hz,idler_hz,intensity" rows.
void write_csv(const JsaGrid& g, std::ostream& out);

}  // namespace zalm

#endif
