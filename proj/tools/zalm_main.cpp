// Command-line surface for the multiplexed-source toolkit. All heavy
// lifting lives in the core library; this file only parses flags, merges
// configuration layers (defaults < preset < config file < flags), routes
// to a subcommand, and writes artifacts atomically.
//
// Exit codes: 0 success, 2 configuration error, 3 computation error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zalm/config.hpp"
#include "zalm/design.hpp"
#include "zalm/errors.hpp"
#include "zalm/jsa.hpp"
#include "zalm/montecarlo.hpp"
#include "zalm/rates.hpp"
#include "zalm/shear.hpp"

namespace {

using namespace zalm;

struct CommandOutput {
    std::string artifact;  // file body (table or key-value text)
    std::string summary;   // one line
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw std::invalid_argument("cannot open output path: " + path);
        f << content;
        f.flush();
        if (!f)
            throw computation_error("failed writing artifact: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw computation_error("cannot move artifact into place: " + path);
    }
}

int bin_offset(int index) {
    return (index % 2 == 1) ? (index + 1) / 2 : -(index / 2);
}

void warn_if_strained(const RateParams& p) {
    if (pair_prob_strains_model(p))
        std::cerr << "warning: pair_prob above 0.1 strains the first-order"
                     " pair model\n";
}

CommandOutput run_design(const RunConfig& cfg) {
    const DesignPoint d = derive_design(cfg.design);
    if (d.freq_shift == 0.0)
        std::cerr << "warning: zero frequency shift, single usable bin\n";
    std::ostringstream a;
    a << "bin_spacing_f_hz = " << fmt(d.bin_spacing_f) << "\n"
      << "pulse_width_s = " << fmt(d.pulse_width) << "\n"
      << "bin_spacing_t_s = " << fmt(d.bin_spacing_t) << "\n"
      << "drive_freq_hz = " << fmt(d.drive_freq) << "\n"
      << "peak_voltage_v = " << fmt(d.peak_voltage) << "\n"
      << "freq_shift_hz = " << fmt(d.freq_shift) << "\n"
      << "bins = " << fmt(d.bins) << "\n"
      << "bins_usable = " << d.bins_usable << "\n"
      << "pump_rate_hz = " << fmt(d.pump_rate) << "\n";
    CommandOutput out;
    out.artifact = a.str();
    out.summary = "drive_freq_hz=" + fmt6(d.drive_freq) +
                  " pump_rate_hz=" + fmt6(d.pump_rate) +
                  " bins_usable=" + std::to_string(d.bins_usable);
    return out;
}

void set_sweep_value(RunConfig& cfg, const std::string& var, double x) {
    if (var == "rf_power") cfg.design.rf_power = x;
    else if (var == "bin_width") cfg.design.bin_width = x;
    else if (var == "guard_band") cfg.design.guard_band = x;
    else if (var == "tbp") cfg.design.tbp = x;
    else if (var == "v_pi") cfg.design.v_pi = x;
    else if (var == "containment") cfg.design.containment = x;
    else if (var == "pair_prob") cfg.rates.pair_prob = x;
    else if (var == "eta_herald") cfg.rates.eta_herald = x;
    else if (var == "eta_a") cfg.rates.eta_a = x;
    else if (var == "eta_b") cfg.rates.eta_b = x;
    else if (var == "bsm_eff") cfg.rates.bsm_eff = x;
    else if (var == "chain_loss") cfg.rates.chain_loss_db = x;
    else if (var == "insertion_loss") cfg.rates.insertion_loss_db = x;
    else
        throw std::invalid_argument("unknown sweep variable '" + var + "'");
}

std::string sweep_axis_header(const std::string& var) {
    if (var == "rf_power") return "rf_power_w";
    if (var == "bin_width") return "bin_width_hz";
    if (var == "guard_band") return "guard_band_hz";
    if (var == "v_pi") return "v_pi_v";
    if (var == "chain_loss") return "chain_loss_db";
    if (var == "insertion_loss") return "insertion_loss_db";
    return var;  // dimensionless
}

const WaveShape kShapes[] = {WaveShape::Sawtooth, WaveShape::Sine,
                             WaveShape::Triangle};
const char* kShapeNames[] = {"sawtooth", "sine", "triangle"};

struct ModulatorColumn {
    const char* label;
    double v_pi;
    double insertion_loss_db;
};

const ModulatorColumn kModulators[] = {
    {"3v_3db", 3.0, 3.0}, {"1v_6db", 1.0, 6.0}, {"hero_0v5_1db", 0.5, 1.0}};

CommandOutput run_sweep(const RunConfig& cfg) {
    std::ostringstream a;
    a << sweep_axis_header(cfg.sweep_variable);
    for (const std::string& o : cfg.sweep_outputs) {
        if (o == "bins" || o == "bins_usable") {
            for (const char* w : kShapeNames) a << ',' << o << '_' << w;
        } else if (o == "drive_freq") {
            for (const char* w : kShapeNames) a << ",drive_freq_hz_" << w;
        } else if (o == "peak_voltage") {
            for (const char* w : kShapeNames) a << ",peak_voltage_v_" << w;
        } else if (o == "freq_shift") {
            for (const char* w : kShapeNames) a << ",freq_shift_hz_" << w;
        } else if (o == "rate") {
            for (const char* w : kShapeNames) a << ",rate_hz_" << w;
        } else if (o == "modulators") {
            for (const auto& m : kModulators) a << ",rate_hz_" << m.label;
        } else if (o == "pump_rate") {
            a << ",pump_rate_hz";
        } else if (o == "pulse_width") {
            a << ",pulse_width_s";
        } else if (o == "bin_spacing_f") {
            a << ",bin_spacing_f_hz";
        } else if (o == "bin_spacing_t") {
            a << ",bin_spacing_t_s";
        } else {
            throw std::invalid_argument("unknown sweep output '" + o + "'");
        }
    }
    a << '\n';

    for (int i = 0; i < cfg.sweep_points; ++i) {
        const double f =
            static_cast<double>(i) / (cfg.sweep_points - 1);
        const double x =
            cfg.sweep_log
                ? cfg.sweep_start *
                      std::pow(cfg.sweep_stop / cfg.sweep_start, f)
                : cfg.sweep_start + (cfg.sweep_stop - cfg.sweep_start) * f;
        RunConfig point = cfg;
        set_sweep_value(point, cfg.sweep_variable, x);

        DesignPoint per_shape[3];
        for (int s = 0; s < 3; ++s) {
            DesignParams p = point.design;
            p.waveform.shape = kShapes[s];
            per_shape[s] = derive_design(p);
        }

        a << fmt(x);
        for (const std::string& o : cfg.sweep_outputs) {
            if (o == "bins") {
                for (const auto& d : per_shape) a << ',' << fmt(d.bins);
            } else if (o == "bins_usable") {
                for (const auto& d : per_shape) a << ',' << d.bins_usable;
            } else if (o == "drive_freq") {
                for (const auto& d : per_shape) a << ',' << fmt(d.drive_freq);
            } else if (o == "peak_voltage") {
                for (const auto& d : per_shape)
                    a << ',' << fmt(d.peak_voltage);
            } else if (o == "freq_shift") {
                for (const auto& d : per_shape) a << ',' << fmt(d.freq_shift);
            } else if (o == "rate") {
                for (const auto& d : per_shape)
                    a << ',' << fmt(zalm_rate(d, point.rates).total);
            } else if (o == "modulators") {
                for (const auto& m : kModulators) {
                    DesignParams p = point.design;
                    p.v_pi = m.v_pi;
                    RateParams r = point.rates;
                    r.insertion_loss_db = m.insertion_loss_db;
                    a << ',' << fmt(zalm_rate(derive_design(p), r).total);
                }
            } else if (o == "pump_rate") {
                a << ',' << fmt(per_shape[0].pump_rate);
            } else if (o == "pulse_width") {
                a << ',' << fmt(per_shape[0].pulse_width);
            } else if (o == "bin_spacing_f") {
                a << ',' << fmt(per_shape[0].bin_spacing_f);
            } else if (o == "bin_spacing_t") {
                a << ',' << fmt(per_shape[0].bin_spacing_t);
            }
        }
        a << '\n';
    }

    CommandOutput out;
    out.artifact = a.str();
    out.summary = "sweep variable=" + cfg.sweep_variable +
                  " points=" + std::to_string(cfg.sweep_points) +
                  " outputs=" + std::to_string(cfg.sweep_outputs.size());
    return out;
}

CommandOutput run_jsa(const RunConfig& cfg, const std::string& out_path) {
    const JsaGrid g = build_jsa(cfg.jsa);
    const double p = purity(g);
    const std::vector<double> m = marginal(g, Axis::Signal);
    double peak = 0.0;
    for (double v : m) peak = std::max(peak, v);
    double lo = g.axis.back(), hi = g.axis.front();
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] >= 0.5 * peak) {
            lo = std::min(lo, g.axis[i]);
            hi = std::max(hi, g.axis[i]);
        }
    }
    std::ostringstream a;
    const bool pgm = out_path.size() > 4 &&
                     out_path.compare(out_path.size() - 4, 4, ".pgm") == 0;
    if (pgm)
        write_pgm(g, a);
    else
        write_csv(g, a);
    CommandOutput out;
    out.artifact = a.str();
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "purity=%.6f marginal_fwhm_hz=%.6g grid=%d", p, hi - lo,
                  cfg.jsa.grid_size);
    out.summary = buf;
    return out;
}

CommandOutput run_rates(const RunConfig& cfg) {
    warn_if_strained(cfg.rates);
    const DesignPoint d = derive_design(cfg.design);
    const double basic = basic_rate(d, cfg.rates);
    const ZalmRate z = zalm_rate(d, cfg.rates);
    std::ostringstream a;
    a << "bin,offset,depth,rate_hz\n";
    for (size_t i = 0; i < z.per_bin.size(); ++i) {
        const int off = bin_offset(static_cast<int>(i));
        a << i << ',' << off << ',' << std::abs(off) << ','
          << fmt(z.per_bin[i].rate) << '\n';
    }
    CommandOutput out;
    out.artifact = a.str();
    out.summary = "basic_hz=" + fmt6(basic) + " zalm_hz=" + fmt6(z.total) +
                  " gain=" + fmt6(z.total / basic) +
                  " bins_usable=" + std::to_string(d.bins_usable);
    return out;
}

CommandOutput run_sim(const RunConfig& cfg) {
    warn_if_strained(cfg.rates);
    SimConfig sc;
    sc.design = derive_design(cfg.design);
    sc.rate_params = cfg.rates;
    sc.n_pulses = cfg.n_pulses;
    sc.seed = cfg.seed;
    sc.workers = cfg.workers;
    const ConvergenceReport rep = convergence_check(sc);
    std::ostringstream a;
    a << "pulses = " << rep.sim.pulses_run << "\n"
      << "seed = " << rep.sim.seed_used << "\n"
      << "workers = " << cfg.workers << "\n"
      << "coincidences = " << rep.sim.coincidences << "\n"
      << "estimated_rate_hz = " << fmt(rep.sim.estimated_rate) << "\n"
      << "std_error_hz = " << fmt(rep.sim.std_error) << "\n"
      << "analytic_rate_hz = " << fmt(rep.analytic_rate) << "\n"
      << "z_score = " << fmt(rep.z) << "\n"
      << "converged = " << (rep.passed ? "true" : "false") << "\n"
      << "low_power = " << (rep.low_power ? "true" : "false") << "\n";
    a << "heralds_per_bin = ";
    for (size_t i = 0; i < rep.sim.heralds_per_bin.size(); ++i)
        a << (i ? "," : "") << rep.sim.heralds_per_bin[i];
    a << "\n";
    CommandOutput out;
    out.artifact = a.str();
    out.summary = "estimated_hz=" + fmt6(rep.sim.estimated_rate) +
                  " analytic_hz=" + fmt6(rep.analytic_rate) +
                  " z=" + fmt6(rep.z) +
                  (rep.low_power ? " low_power" : "");
    return out;
}

CommandOutput run_shear(const RunConfig& cfg) {
    const DesignPoint d = derive_design(cfg.design);
    const PulseTrain train = gaussian_train(d.bin_spacing_t, d.pulse_width);
    DriveSignal drive;
    drive.waveform = cfg.design.waveform;
    drive.frequency = cfg.drive_multiple / d.bin_spacing_t;
    drive.peak_voltage = d.peak_voltage;
    drive.harmonics_kept =
        cfg.drive_harmonics == 0 ? kUnlimitedHarmonics : cfg.drive_harmonics;
    const ShearResult res = shear(train, drive, cfg.design.v_pi);
    const DifferentialScan scan = differential_phase_experiment(
        train, drive, cfg.design.v_pi, cfg.scan_points);
    std::ostringstream a;
    write_shear_csv(train, drive, cfg.design.v_pi, a);
    CommandOutput out;
    out.artifact = a.str();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "differential_phase_rad=%.3e max_differential_rad=%.3e"
                  " centroid_shift_hz=%.6g early_shift_hz=%.6g",
                  res.differential_phase, scan.differential_phase,
                  res.centroid_shift, res.early.shift);
    out.summary = buf;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"design and simulation toolkit for spectrally multiplexed"
                 " time-bin entanglement sources"};
    app.require_subcommand(0, 1);

    std::string config_path, preset_name, out_path;
    std::uint64_t seed_flag = 0;
    int workers_flag = 1;
    bool dump_flag = false;
    app.add_option("--config", config_path,
                   "key = value configuration file");
    app.add_option("--preset", preset_name,
                   "named bundle: fig2a fig3 fig4b fig4c fig5a fig5b");
    app.add_option("--out", out_path, "artifact path (written atomically)");
    app.add_option("--seed", seed_flag, "simulator seed override");
    app.add_option("--workers", workers_flag, "simulator worker override");
    app.add_flag("--dump-config", dump_flag,
                 "print the merged configuration and exit");

    CLI::App* cmds[6];
    cmds[0] = app.add_subcommand("design", "derive the operating point");
    cmds[1] = app.add_subcommand("sweep", "tabulate designs over a variable");
    cmds[2] = app.add_subcommand("jsa", "joint spectrum and purity");
    cmds[3] = app.add_subcommand("rates", "analytic heralded rates");
    cmds[4] = app.add_subcommand("sim", "event-level simulation");
    cmds[5] = app.add_subcommand("shear", "pulse-train shearing experiment");
    for (CLI::App* c : cmds) c->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig cfg;
        if (!preset_name.empty()) cfg = preset_config(preset_name);
        if (!config_path.empty()) {
            std::ifstream f(config_path, std::ios::binary);
            if (!f)
                throw std::invalid_argument("cannot read config file '" +
                                            config_path + "'");
            std::ostringstream body;
            body << f.rdbuf();
            apply_config_text(cfg, body.str());
        }
        if (app.count("--seed") > 0) cfg.seed = seed_flag;
        if (app.count("--workers") > 0) cfg.workers = workers_flag;

        if (dump_flag) {
            std::cout << dump_config(cfg);
            return 0;
        }

        CommandOutput result;
        if (cmds[0]->parsed()) result = run_design(cfg);
        else if (cmds[1]->parsed()) result = run_sweep(cfg);
        else if (cmds[2]->parsed()) result = run_jsa(cfg, out_path);
        else if (cmds[3]->parsed()) result = run_rates(cfg);
        else if (cmds[4]->parsed()) result = run_sim(cfg);
        else if (cmds[5]->parsed()) result = run_shear(cfg);
        else {
            std::cerr << "configuration error: a subcommand is required"
                         " (design, sweep, jsa, rates, sim, shear)\n";
            return 2;
        }

        if (out_path.empty()) {
            std::cerr << result.summary << "\n";
            std::cout << result.artifact;
        } else {
            write_atomic(out_path, result.artifact);
            std::cout << result.summary << "\n";
        }
        return 0;
    } catch (const computation_error& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 3;
    }
}
