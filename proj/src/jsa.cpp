#include "zalm/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "zalm/errors.hpp"

namespace zalm {

namespace {

// sinc(x)^2 = 1/2 at this x; scales pm_fwhm like the Gaussian ln-2 factors
constexpr double kSincHalfIntensity = 1.391557377;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void validate(const JsaParams& p) {
    if (!(p.pump_fwhm_duration > 0.0))
        throw std::invalid_argument("pump_fwhm_duration must be > 0");
    if (!(p.pump_fwhm_bandwidth > 0.0))
        throw std::invalid_argument("pump_fwhm_bandwidth must be > 0");
    if (!(p.pm_fwhm > 0.0))
        throw std::invalid_argument("pm_fwhm must be > 0");
    if (!(p.filter.fwhm > 0.0))
        throw std::invalid_argument("filter fwhm must be > 0");
    if (p.filter.shape_order < 1)
        throw std::invalid_argument("filter shape_order must be >= 1");
    if (p.grid_size < 64)
        throw std::invalid_argument("grid_size must be >= 64");
    if (!(p.span > 2.0 * p.filter.fwhm))
        throw std::invalid_argument("span must exceed twice the filter fwhm");
    const double cell = 2.0 * p.span / (p.grid_size - 1);
    if (p.filter.fwhm < 8.0 * cell)
        throw std::invalid_argument(
            "filter fwhm spans fewer than 8 grid cells; raise grid_size or "
            "shrink span");
}

}  // namespace

JsaGrid build_jsa(const JsaParams& p) {
    validate(p);
    const int n = p.grid_size;
    JsaGrid g;
    g.axis.resize(n);
    const double step = 2.0 * p.span / (n - 1);
    for (int i = 0; i < n; ++i) g.axis[i] = -p.span + step * i;

    const double ln2 = std::log(2.0);
    const int m = p.filter.shape_order;
    // amplitude profiles; intensity FWHM equals the named width
    auto filt = [&](double w) {
        return std::exp(-0.5 * ln2 *
                        std::pow(2.0 * w / p.filter.fwhm, 2.0 * m));
    };
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = filt(g.axis[i]);

    g.values.resize(static_cast<size_t>(n) * n);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sum = g.axis[i] + g.axis[j];
            const double dif = g.axis[i] - g.axis[j];
            const double pump =
                std::exp(-2.0 * ln2 * (sum / p.pump_fwhm_bandwidth) *
                         (sum / p.pump_fwhm_bandwidth));
            const double pm = sinc(2.0 * kSincHalfIntensity * dif / p.pm_fwhm);
            const double a = pump * pm * f[i] * f[j];
            g.values[static_cast<size_t>(i) * n + j] = a;
            norm2 += a * a;
        }
    }
    if (!(norm2 > 0.0))
        throw computation_error("joint spectrum vanished on the grid");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : g.values) v *= inv;
    return g;
}

double purity(const JsaGrid& g) {
    const size_t n = g.axis.size();
    if (n == 0 || g.values.size() != n * n)
        throw std::invalid_argument("grid values do not match axis size");
    double norm2 = 0.0;
    for (const auto& v : g.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw computation_error("non-finite amplitude in joint spectrum");
        norm2 += std::norm(v);
    }
    if (!(norm2 > 0.0))
        throw computation_error("joint spectrum is identically zero");

    // sum s_k^4 = ||A A^H||_F^2; G is Hermitian so only the upper triangle
    // is accumulated
    const std::complex<double>* a = g.values.data();
    double frob2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const std::complex<double>* ri = a + i * n;
        for (size_t j = i; j < n; ++j) {
            const std::complex<double>* rj = a + j * n;
            std::complex<double> dot{0.0, 0.0};
            for (size_t k = 0; k < n; ++k) dot += ri[k] * std::conj(rj[k]);
            frob2 += (i == j ? 1.0 : 2.0) * std::norm(dot);
        }
    }
    const double p = frob2 / (norm2 * norm2);
    if (!std::isfinite(p))
        throw computation_error("purity accumulation overflowed");
    return p;
}

std::vector<double> marginal(const JsaGrid& g, Axis axis) {
    const size_t n = g.axis.size();
    if (g.values.size() != n * n)
        throw std::invalid_argument("grid values do not match axis size");
    std::vector<double> m(n, 0.0);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const double w = std::norm(g.values[i * n + j]);
            m[axis == Axis::Signal ? i : j] += w;
            total += w;
        }
    }
    if (!(total > 0.0))
        throw computation_error("joint spectrum is identically zero");
    for (auto& v : m) v /= total;
    return m;
}

void write_pgm(const JsaGrid& g, std::ostream& out) {
    const size_t n = g.axis.size();
    double peak = 0.0;
    for (const auto& v : g.values) peak = std::max(peak, std::norm(v));
    if (!(peak > 0.0)) peak = 1.0;
    out << "P2\n" << n << ' ' << n << "\n65535\n";
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const long px = std::lround(std::norm(g.values[i * n + j]) /
                                        peak * 65535.0);
            out << px << (j + 1 < n ? ' ' : '\n');
        }
    }
}

void write_csv(const JsaGrid& g, std::ostream& out) {
    const size_t n = g.axis.size();
    out << "signal_hz,idler_hz,intensity\n";
    out.precision(17);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out << g.axis[i] << ',' << g.axis[j] << ','
                << std::norm(g.values[i * n + j]) << '\n';
}

}  // namespace zalm
