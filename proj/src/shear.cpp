#include "zalm/shear.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "zalm/errors.hpp"

namespace zalm {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) {
    // into [-pi, pi)
    return x - 2.0 * kPi * std::floor((x + kPi) / (2.0 * kPi));
}

void validate_train(const PulseTrain& t) {
    if (t.envelope.empty())
        throw std::invalid_argument("pulse train envelope is empty");
    if (!(t.sample_period > 0.0))
        throw std::invalid_argument("sample_period must be > 0");
    if (!(t.bin_fwhm > 0.0))
        throw std::invalid_argument("bin_fwhm must be > 0");
    const double spacing = t.bin_center_late - t.bin_center_early;
    if (!(spacing > 4.0 * t.bin_fwhm))
        throw std::invalid_argument(
            "bin spacing must exceed four pulse widths");
    if (t.sample_period > t.bin_fwhm / 20.0 * (1.0 + 1e-9))
        throw std::invalid_argument(
            "sample_period must be at most bin_fwhm / 20");
    double e = 0.0;
    for (const auto& v : t.envelope) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("envelope holds non-finite samples");
        e += std::norm(v);
    }
    if (!(e > 0.0))
        throw std::invalid_argument("envelope carries no energy");
}

void validate_drive(const DriveSignal& d) {
    if (!(d.frequency > 0.0))
        throw std::invalid_argument("drive frequency must be > 0");
    if (!(d.peak_voltage >= 0.0))
        throw std::invalid_argument("peak_voltage must be >= 0");
    if (d.harmonics_kept < 1)
        throw std::invalid_argument("harmonics_kept must be >= 1");
    if (!std::isfinite(d.phase_offset) || !std::isfinite(d.waveform.phase))
        throw std::invalid_argument("drive phases must be finite");
}

// intensity-weighted linear fit of phase over one bin window
BinShear fit_bin(const PulseTrain& train, const std::vector<double>& phase,
                 double center, double half, double total_weight,
                 const char* label) {
    double s0 = 0, s1 = 0, s2 = 0, sy = 0, sxy = 0;
    const double guard = 1e-9 * train.sample_period;
    for (size_t i = 0; i < train.envelope.size(); ++i) {
        const double x = train.t_start + i * train.sample_period - center;
        if (x < -half - guard || x >= half - guard) continue;
        const double w = std::norm(train.envelope[i]);
        s0 += w;
        s1 += w * x;
        s2 += w * x * x;
        sy += w * phase[i];
        sxy += w * x * phase[i];
    }
    if (!(s0 > 1e-12 * total_weight))
        throw computation_error(std::string("phase fit degenerate: ") + label +
                                " bin support carries no intensity");
    const double denom = s0 * s2 - s1 * s1;
    if (!(denom > 1e-20 * s0 * s2))
        throw computation_error(std::string("phase fit degenerate: ") + label +
                                " bin support too narrow");
    const double slope = (s0 * sxy - s1 * sy) / denom;
    const double intercept = (sy - slope * s1) / s0;
    BinShear b;
    b.shift = slope / (2.0 * kPi);
    b.phase = wrap_pi(intercept);
    return b;
}

// first moment of the DFT power spectrum
double spectral_centroid(const std::vector<std::complex<double>>& env,
                         double dt) {
    const int n = static_cast<int>(env.size());
    std::vector<std::complex<double>> spec(env.size());
    fftw_plan plan = fftw_plan_dft_1d(
        n,
        reinterpret_cast<fftw_complex*>(
            const_cast<std::complex<double>*>(env.data())),
        reinterpret_cast<fftw_complex*>(spec.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double df = 1.0 / (n * dt);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        const double f = (k <= n / 2 ? k : k - n) * df;
        const double p = std::norm(spec[k]);
        num += f * p;
        den += p;
    }
    if (!(den > 0.0))
        throw computation_error("spectrum carries no energy");
    return num / den;
}

}  // namespace

PulseTrain gaussian_train(double bin_spacing, double fwhm, int min_samples) {
    if (!(bin_spacing > 0.0) || !(fwhm > 0.0))
        throw std::invalid_argument("bin_spacing and fwhm must be > 0");
    if (!(bin_spacing > 4.0 * fwhm))
        throw std::invalid_argument(
            "bin spacing must exceed four pulse widths");
    if (min_samples < 60)
        throw std::invalid_argument("min_samples must be at least 60");
    // grid spans [-1.5, 1.5) spacings; a multiple of 6 samples puts both
    // centers and their separation exactly on samples
    long n = min_samples;
    const double need = 60.0 * bin_spacing / fwhm;  // sample_period <= fwhm/20
    if (static_cast<double>(n) < need) n = static_cast<long>(std::ceil(need));
    n = ((n + 5) / 6) * 6;

    PulseTrain t;
    t.sample_period = 3.0 * bin_spacing / static_cast<double>(n);
    t.t_start = -1.5 * bin_spacing;
    t.bin_fwhm = fwhm;
    const long early = n / 3, late = 2 * n / 3;  // sample indices of centers
    t.bin_center_early = t.t_start + early * t.sample_period;
    t.bin_center_late = t.t_start + late * t.sample_period;
    // fwhm is the intensity FWHM, so the amplitude profile is the square
    // root of a 2.355-sigma Gaussian: exp(-x^2 / (4 sigma^2))
    const double sigma = fwhm / 2.355;
    t.envelope.resize(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        // relative offsets as exact integer multiples of the step, so the
        // two windows see bit-identical sample values
        const double xe = (i - early) * t.sample_period;
        const double xl = (i - late) * t.sample_period;
        t.envelope[static_cast<size_t>(i)] =
            std::exp(-xe * xe / (4.0 * sigma * sigma)) +
            std::exp(-xl * xl / (4.0 * sigma * sigma));
    }
    return t;
}

double synth_drive(const DriveSignal& d, double t) {
    validate_drive(d);
    const double theta =
        2.0 * kPi * d.frequency * t + d.waveform.phase + d.phase_offset;
    const double V = d.peak_voltage;
    const int H = d.harmonics_kept;
    switch (d.waveform.shape) {
        case WaveShape::Sine:
            return V * std::sin(theta);
        case WaveShape::Sawtooth: {
            if (H == kUnlimitedHarmonics) {
                const double u = wrap_pi(theta);
                // a sample landing on the flyback takes the series midpoint;
                // the branch must not depend on how theta rounded
                if (kPi - std::abs(u) < 1e-9 * (1.0 + std::abs(theta)))
                    return 0.0;
                return V * u / kPi;
            }
            double s = 0.0;
            for (int k = 1; k <= H; ++k)
                s += (k % 2 ? 1.0 : -1.0) * std::sin(k * theta) / k;
            return 2.0 * V / kPi * s;
        }
        case WaveShape::Triangle: {
            if (H == kUnlimitedHarmonics)
                return 2.0 * V / kPi * std::asin(std::sin(theta));
            double s = 0.0;
            for (int j = 0; j < H; ++j) {
                const double k = 2.0 * j + 1.0;
                s += (j % 2 ? -1.0 : 1.0) * std::sin(k * theta) / (k * k);
            }
            return 8.0 * V / (kPi * kPi) * s;
        }
    }
    throw std::invalid_argument("waveform shape out of range");
}

ShearResult shear(const PulseTrain& train, const DriveSignal& drive,
                  double v_pi) {
    validate_train(train);
    validate_drive(drive);
    if (!(v_pi > 0.0)) throw std::invalid_argument("v_pi must be > 0");

    const size_t n = train.envelope.size();
    std::vector<double> phase(n);
    ShearResult res;
    res.sheared = train;
    double total_weight = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double t = train.t_start + i * train.sample_period;
        phase[i] = kPi * synth_drive(drive, t) / v_pi;
        res.sheared.envelope[i] =
            train.envelope[i] * std::polar(1.0, phase[i]);
        total_weight += std::norm(train.envelope[i]);
    }

    const double half = (train.bin_center_late - train.bin_center_early) / 2.0;
    res.early = fit_bin(train, phase, train.bin_center_early, half,
                        total_weight, "early");
    res.late = fit_bin(train, phase, train.bin_center_late, half,
                       total_weight, "late");
    res.differential_phase = wrap_pi(res.late.phase - res.early.phase);
    res.centroid_shift =
        spectral_centroid(res.sheared.envelope, train.sample_period) -
        spectral_centroid(train.envelope, train.sample_period);
    return res;
}

PhaseSweep shift_vs_phase(const PulseTrain& train, const DriveSignal& drive,
                          double v_pi, int n_points) {
    if (n_points < 8)
        throw std::invalid_argument("n_points must be at least 8");
    PhaseSweep sweep;
    sweep.phase.resize(static_cast<size_t>(n_points));
    sweep.shift.resize(static_cast<size_t>(n_points));
    DriveSignal d = drive;
    for (int i = 0; i < n_points; ++i) {
        // offsets span [0, 2pi), replacing the drive's configured offset
        d.phase_offset = 2.0 * kPi * i / n_points;
        sweep.phase[static_cast<size_t>(i)] = d.phase_offset;
        sweep.shift[static_cast<size_t>(i)] =
            shear(train, d, v_pi).centroid_shift;
    }

    // least squares on {cos, sin, 1}
    double cc = 0, cs = 0, c1 = 0, ss = 0, s1 = 0, n1 = n_points;
    double yc = 0, ys = 0, y1 = 0;
    for (int i = 0; i < n_points; ++i) {
        const double c = std::cos(sweep.phase[static_cast<size_t>(i)]);
        const double s = std::sin(sweep.phase[static_cast<size_t>(i)]);
        const double y = sweep.shift[static_cast<size_t>(i)];
        cc += c * c; cs += c * s; c1 += c;
        ss += s * s; s1 += s;
        yc += y * c; ys += y * s; y1 += y;
    }
    // 3x3 normal equations via Cramer's rule
    const double det = cc * (ss * n1 - s1 * s1) - cs * (cs * n1 - s1 * c1) +
                       c1 * (cs * s1 - ss * c1);
    if (std::abs(det) < 1e-12)
        throw computation_error("phase sweep fit is singular");
    const double a = (yc * (ss * n1 - s1 * s1) - cs * (ys * n1 - y1 * s1) +
                      c1 * (ys * s1 - y1 * ss)) / det;
    const double b = (cc * (ys * n1 - y1 * s1) - yc * (cs * n1 - s1 * c1) +
                      c1 * (cs * y1 - ys * c1)) / det;
    const double c0 = (cc * (ss * y1 - s1 * ys) - cs * (cs * y1 - c1 * ys) +
                       yc * (cs * s1 - ss * c1)) / det;
    sweep.amplitude = std::hypot(a, b);
    sweep.fit_phase = std::atan2(b, a);
    sweep.offset = c0;
    double ssres = 0.0, sstot = 0.0;
    const double mean = y1 / n1;
    for (int i = 0; i < n_points; ++i) {
        const double p = sweep.phase[static_cast<size_t>(i)];
        const double y = sweep.shift[static_cast<size_t>(i)];
        const double fit = a * std::cos(p) + b * std::sin(p) + c0;
        ssres += (y - fit) * (y - fit);
        sstot += (y - mean) * (y - mean);
    }
    sweep.misfit = sstot > 0.0 ? ssres / sstot : 0.0;
    return sweep;
}

DifferentialScan differential_phase_experiment(const PulseTrain& train,
                                               const DriveSignal& drive,
                                               double v_pi, int n_points) {
    if (n_points < 8)
        throw std::invalid_argument("n_points must be at least 8");
    DifferentialScan scan;
    scan.phase.resize(static_cast<size_t>(n_points));
    scan.differential.resize(static_cast<size_t>(n_points));
    DriveSignal d = drive;
    auto eval = [&](double offset) {
        d.phase_offset = offset;
        return shear(train, d, v_pi).differential_phase;
    };
    int best = 0;
    for (int i = 0; i < n_points; ++i) {
        const double p = 2.0 * kPi * i / n_points;
        scan.phase[static_cast<size_t>(i)] = p;
        scan.differential[static_cast<size_t>(i)] = eval(p);
        if (std::abs(scan.differential[static_cast<size_t>(i)]) >
            std::abs(scan.differential[static_cast<size_t>(best)]))
            best = i;
    }
    // golden-section refine around the coarse winner
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = scan.phase[static_cast<size_t>(best)] - 2.0 * kPi / n_points;
    double hi = scan.phase[static_cast<size_t>(best)] + 2.0 * kPi / n_points;
    scan.best_phase = scan.phase[static_cast<size_t>(best)];
    scan.differential_phase = scan.differential[static_cast<size_t>(best)];
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 40; ++it) {
        if (std::abs(f1) > std::abs(f2)) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = eval(x2);
        }
    }
    const double xz = std::abs(f1) > std::abs(f2) ? x1 : x2;
    const double fz = std::abs(f1) > std::abs(f2) ? f1 : f2;
    if (std::abs(fz) > std::abs(scan.differential_phase)) {
        scan.best_phase = wrap_pi(xz) + (wrap_pi(xz) < 0.0 ? 2.0 * kPi : 0.0);
        scan.differential_phase = fz;
    }
    return scan;
}

void write_shear_csv(const PulseTrain& train, const DriveSignal& drive,
                     double v_pi, std::ostream& out) {
    validate_train(train);
    validate_drive(drive);
    if (!(v_pi > 0.0)) throw std::invalid_argument("v_pi must be > 0");
    out << "time_s,drive_v,intensity\n";
    out.precision(17);
    for (size_t i = 0; i < train.envelope.size(); ++i) {
        const double t = train.t_start + i * train.sample_period;
        out << t << ',' << synth_drive(drive, t) << ','
            << std::norm(train.envelope[i]) << '\n';
    }
}

}  // namespace zalm
