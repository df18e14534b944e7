// Thin python surface over the core library: plain functions taking
// keyword arguments and returning dicts, enough for notebook exploration
// and the smoke tests. The C++ headers stay the source of truth.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "zalm/config.hpp"
#include "zalm/design.hpp"
#include "zalm/jsa.hpp"
#include "zalm/montecarlo.hpp"
#include "zalm/rates.hpp"
#include "zalm/shear.hpp"

namespace py = pybind11;
using namespace zalm;

namespace {

WaveShape shape_from_name(const std::string& name) {
    if (name == "sawtooth") return WaveShape::Sawtooth;
    if (name == "triangle") return WaveShape::Triangle;
    if (name == "sine") return WaveShape::Sine;
    throw std::invalid_argument("waveform must be sawtooth, triangle, or sine");
}

DesignParams make_params(double bin_width, double guard_band, double tbp,
                         double rf_power, double v_pi, double containment,
                         const std::string& waveform, double waveform_phase) {
    DesignParams p;
    p.bin_width = bin_width;
    p.guard_band = guard_band;
    p.tbp = tbp;
    p.rf_power = rf_power;
    p.v_pi = v_pi;
    p.containment = containment;
    p.waveform.shape = shape_from_name(waveform);
    p.waveform.phase = waveform_phase;
    return p;
}

py::dict point_to_dict(const DesignPoint& d) {
    py::dict out;
    out["bin_spacing_f"] = d.bin_spacing_f;
    out["pulse_width"] = d.pulse_width;
    out["bin_spacing_t"] = d.bin_spacing_t;
    out["drive_freq"] = d.drive_freq;
    out["peak_voltage"] = d.peak_voltage;
    out["freq_shift"] = d.freq_shift;
    out["bins"] = d.bins;
    out["bins_usable"] = d.bins_usable;
    out["pump_rate"] = d.pump_rate;
    return out;
}

RateParams make_rates(double pair_prob, double eta_herald, double eta_a,
                      double eta_b, double bsm_eff, double chain_loss_db,
                      double insertion_loss_db) {
    RateParams r;
    r.pair_prob = pair_prob;
    r.eta_herald = eta_herald;
    r.eta_a = eta_a;
    r.eta_b = eta_b;
    r.bsm_eff = bsm_eff;
    r.chain_loss_db = chain_loss_db;
    r.insertion_loss_db = insertion_loss_db;
    return r;
}

}  // namespace

PYBIND11_MODULE(_zalm, m) {
    m.doc() = "multiplexed time-bin entanglement source toolkit";

    m.def(
        "design",
        [](double bin_width, double guard_band, double tbp, double rf_power,
           double v_pi, double containment, const std::string& waveform,
           double waveform_phase) {
            return point_to_dict(derive_design(
                make_params(bin_width, guard_band, tbp, rf_power, v_pi,
                            containment, waveform, waveform_phase)));
        },
        py::arg("bin_width") = 12.5e9, py::arg("guard_band") = 2.0e9,
        py::arg("tbp") = 0.89, py::arg("rf_power") = 10.0,
        py::arg("v_pi") = 1.0, py::arg("containment") = 8.0,
        py::arg("waveform") = "sine", py::arg("waveform_phase") = 0.0,
        "derive the operating point from hardware constraints");

    m.def(
        "bins_closed_form",
        [](double bin_width, double guard_band, double tbp, double rf_power,
           double v_pi, double containment, const std::string& waveform) {
            return bins_closed_form(make_params(bin_width, guard_band, tbp,
                                                rf_power, v_pi, containment,
                                                waveform, 0.0));
        },
        py::arg("bin_width") = 12.5e9, py::arg("guard_band") = 2.0e9,
        py::arg("tbp") = 0.89, py::arg("rf_power") = 10.0,
        py::arg("v_pi") = 1.0, py::arg("containment") = 8.0,
        py::arg("waveform") = "sine");

    m.def(
        "jsa_purity",
        [](double pump_duration, double pump_bandwidth, double pm_bandwidth,
           double filter_width, int filter_order, int grid_size,
           double span) {
            JsaParams p;
            p.pump_fwhm_duration = pump_duration;
            p.pump_fwhm_bandwidth = pump_bandwidth;
            p.pm_fwhm = pm_bandwidth;
            p.filter.fwhm = filter_width;
            p.filter.shape_order = filter_order;
            p.grid_size = grid_size;
            p.span = span;
            return purity(build_jsa(p));
        },
        py::arg("pump_duration") = 70e-12,
        py::arg("pump_bandwidth") = 12.9e9, py::arg("pm_bandwidth") = 200e9,
        py::arg("filter_width") = 12.5e9, py::arg("filter_order") = 4,
        py::arg("grid_size") = 512, py::arg("span") = 60e9,
        "Schmidt purity of the filtered joint spectrum");

    m.def(
        "rates",
        [](py::dict design_kwargs, double pair_prob, double eta_herald,
           double eta_a, double eta_b, double bsm_eff, double chain_loss_db,
           double insertion_loss_db) {
            DesignParams p;
            if (design_kwargs.contains("bin_width"))
                p.bin_width = design_kwargs["bin_width"].cast<double>();
            if (design_kwargs.contains("rf_power"))
                p.rf_power = design_kwargs["rf_power"].cast<double>();
            if (design_kwargs.contains("v_pi"))
                p.v_pi = design_kwargs["v_pi"].cast<double>();
            if (design_kwargs.contains("waveform"))
                p.waveform.shape = shape_from_name(
                    design_kwargs["waveform"].cast<std::string>());
            const DesignPoint d = derive_design(p);
            const RateParams r =
                make_rates(pair_prob, eta_herald, eta_a, eta_b, bsm_eff,
                           chain_loss_db, insertion_loss_db);
            const ZalmRate z = zalm_rate(d, r);
            py::dict out;
            out["basic"] = basic_rate(d, r);
            out["total"] = z.total;
            py::list per_bin;
            for (const BinRate& b : z.per_bin) {
                py::dict row;
                row["bin"] = b.bin;
                row["depth"] = b.depth;
                row["rate"] = b.rate;
                per_bin.append(row);
            }
            out["per_bin"] = per_bin;
            out["bins_usable"] = d.bins_usable;
            return out;
        },
        py::arg("design") = py::dict(), py::arg("pair_prob") = 0.01,
        py::arg("eta_herald") = 1.0, py::arg("eta_a") = 1.0,
        py::arg("eta_b") = 1.0, py::arg("bsm_eff") = 0.5,
        py::arg("chain_loss_db") = 0.6, py::arg("insertion_loss_db") = 0.0,
        "analytic heralded rates at a derived operating point");

    m.def(
        "simulate",
        [](long long n_pulses, std::uint64_t seed, int workers,
           double pair_prob, double eta_herald, double eta_a, double eta_b,
           double bsm_eff, double chain_loss_db, double insertion_loss_db) {
            SimConfig c;
            c.design = derive_design(DesignParams{});
            c.rate_params =
                make_rates(pair_prob, eta_herald, eta_a, eta_b, bsm_eff,
                           chain_loss_db, insertion_loss_db);
            c.n_pulses = n_pulses;
            c.seed = seed;
            c.workers = workers;
            const ConvergenceReport rep = convergence_check(c);
            py::dict out;
            out["coincidences"] = rep.sim.coincidences;
            out["estimated_rate"] = rep.sim.estimated_rate;
            out["std_error"] = rep.sim.std_error;
            out["analytic_rate"] = rep.analytic_rate;
            out["z"] = rep.z;
            out["passed"] = rep.passed;
            out["low_power"] = rep.low_power;
            out["heralds_per_bin"] = rep.sim.heralds_per_bin;
            return out;
        },
        py::arg("n_pulses") = 100000, py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("pair_prob") = 0.01,
        py::arg("eta_herald") = 1.0, py::arg("eta_a") = 1.0,
        py::arg("eta_b") = 1.0, py::arg("bsm_eff") = 0.5,
        py::arg("chain_loss_db") = 0.0,
        py::arg("insertion_loss_db") = 0.0,
        "event-level simulation scored against the analytic rate");

    m.def(
        "shear_experiment",
        [](double drive_multiple, const std::string& waveform,
           int harmonics) {
            const DesignPoint d = derive_design(DesignParams{});
            const PulseTrain train =
                gaussian_train(d.bin_spacing_t, d.pulse_width);
            DriveSignal drive;
            drive.waveform.shape = shape_from_name(waveform);
            drive.frequency = drive_multiple / d.bin_spacing_t;
            drive.peak_voltage = d.peak_voltage;
            drive.harmonics_kept =
                harmonics == 0 ? kUnlimitedHarmonics : harmonics;
            const ShearResult res = shear(train, drive, 1.0);
            py::dict out;
            out["differential_phase"] = res.differential_phase;
            out["centroid_shift"] = res.centroid_shift;
            out["early_shift"] = res.early.shift;
            out["late_shift"] = res.late.shift;
            return out;
        },
        py::arg("drive_multiple") = 2.0, py::arg("waveform") = "sine",
        py::arg("harmonics") = 0,
        "shear the designed pulse train and report per-bin fits");

    m.def("dump_default_config",
          []() { return dump_config(RunConfig{}); },
          "canonical key = value configuration text");
}
