#include "zalm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace zalm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int bin_offset(int index) {
    // 0, +1, -1, +2, -2, ...
    return (index % 2 == 1) ? (index + 1) / 2 : -(index / 2);
}

void validate(const SimConfig& c) {
    if (c.n_pulses < 1)
        throw std::invalid_argument("n_pulses must be >= 1");
    if (c.workers < 1)
        throw std::invalid_argument("workers must be >= 1");
    if (c.design.bins_usable < 1)
        throw std::invalid_argument("design must offer at least one bin");
    if (!(c.design.pump_rate > 0.0))
        throw std::invalid_argument("pump_rate must be > 0");
    if (!(c.design.bin_spacing_f > 0.0))
        throw std::invalid_argument("bin_spacing_f must be > 0");
    const RateParams& p = c.rate_params;
    if (!(p.pair_prob >= 0.0) || !(p.pair_prob <= 1.0))
        throw std::invalid_argument("pair_prob must lie in [0, 1]");
    for (double eta : {p.eta_herald, p.eta_a, p.eta_b, p.bsm_eff})
        if (!(eta > 0.0) || !(eta <= 1.0))
            throw std::invalid_argument(
                "efficiencies must lie in (0, 1]");
    if (!(p.chain_loss_db >= 0.0) || !(p.insertion_loss_db >= 0.0))
        throw std::invalid_argument("losses must be >= 0 dB");
}

struct Partial {
    std::vector<long long> heralds;
    long long coincidences = 0;
};

// per-bin stage probabilities, precomputed once
struct Stages {
    std::vector<double> herald_survival;  // eta_H * 10^(-depth*Lc/10)
    std::vector<bool> reachable;          // |offset|*spacing <= shift
    double pair_prob = 0.0;
    double bsm_eff = 0.0;
    double det_a = 0.0;
    double det_b = 0.0;
};

void simulate_chunk(const Stages& st, long long pulses, std::uint64_t seed,
                    Partial& out) {
    const int n_bins = static_cast<int>(st.herald_survival.size());
    out.heralds.assign(static_cast<size_t>(n_bins), 0);
    std::mt19937_64 rng(seed);
    for (long long pulse = 0; pulse < pulses; ++pulse) {
        int consumed = -1;
        for (int b = 0; b < n_bins; ++b) {
            // fixed five draws per bin keeps the stream aligned across
            // parameter changes (common random numbers)
            const double u_pair_a = uniform(rng);
            const double u_pair_b = uniform(rng);
            const double u_her_a = uniform(rng);
            const double u_her_b = uniform(rng);
            const double u_swap = uniform(rng);
            if (consumed >= 0) continue;
            const bool herald = u_pair_a < st.pair_prob &&
                                u_pair_b < st.pair_prob &&
                                u_her_a < st.herald_survival[
                                    static_cast<size_t>(b)] &&
                                u_her_b < st.herald_survival[
                                    static_cast<size_t>(b)] &&
                                u_swap < st.bsm_eff;
            if (herald && st.reachable[static_cast<size_t>(b)]) consumed = b;
        }
        const double u_det_a = uniform(rng);
        const double u_det_b = uniform(rng);
        if (consumed >= 0) {
            ++out.heralds[static_cast<size_t>(consumed)];
            if (u_det_a < st.det_a && u_det_b < st.det_b)
                ++out.coincidences;
        }
    }
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
    validate(config);
    const RateParams& p = config.rate_params;
    const int n_bins = config.design.bins_usable;

    Stages st;
    st.pair_prob = p.pair_prob;
    st.bsm_eff = p.bsm_eff;
    st.det_a = p.eta_a;
    st.det_b = p.eta_b * std::pow(10.0, -p.insertion_loss_db / 10.0);
    st.herald_survival.resize(static_cast<size_t>(n_bins));
    st.reachable.resize(static_cast<size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        const int depth = std::abs(bin_offset(b));
        st.herald_survival[static_cast<size_t>(b)] =
            p.eta_herald * std::pow(10.0, -depth * p.chain_loss_db / 10.0);
        st.reachable[static_cast<size_t>(b)] =
            depth * config.design.bin_spacing_f <=
            config.design.freq_shift * (1.0 + 1e-12) + 1e-9;
    }

    const int workers =
        static_cast<int>(std::min<long long>(config.workers, config.n_pulses));
    const long long chunk = (config.n_pulses + workers - 1) / workers;
    std::vector<Partial> partials(static_cast<size_t>(workers));
    std::vector<std::thread> threads;
    const std::uint64_t base = splitmix64(config.seed);
    for (int w = 0; w < workers; ++w) {
        const long long start = static_cast<long long>(w) * chunk;
        const long long count =
            std::min(chunk, config.n_pulses - start);
        const std::uint64_t worker_seed = splitmix64(
            base ^ (static_cast<std::uint64_t>(w + 1) *
                    0x9E3779B97F4A7C15ULL));
        threads.emplace_back(simulate_chunk, std::cref(st), count,
                             worker_seed, std::ref(partials[
                                 static_cast<size_t>(w)]));
    }
    for (auto& t : threads) t.join();

    SimResult r;
    r.heralds_per_bin.assign(static_cast<size_t>(n_bins), 0);
    for (const Partial& part : partials) {
        for (int b = 0; b < n_bins; ++b)
            r.heralds_per_bin[static_cast<size_t>(b)] +=
                part.heralds[static_cast<size_t>(b)];
        r.coincidences += part.coincidences;
    }
    r.pulses_run = config.n_pulses;
    r.seed_used = config.seed;
    const double phat = static_cast<double>(r.coincidences) /
                        static_cast<double>(r.pulses_run);
    r.estimated_rate = phat * config.design.pump_rate;
    r.std_error = std::sqrt(phat * (1.0 - phat) /
                            static_cast<double>(r.pulses_run)) *
                  config.design.pump_rate;
    return r;
}

ConvergenceReport convergence_check(const SimConfig& config) {
    return convergence_check(config, config.rate_params);
}

ConvergenceReport convergence_check(const SimConfig& config,
                                    const RateParams& oracle) {
    ConvergenceReport rep;
    rep.sim = run_simulation(config);
    rep.analytic_rate = zalm_rate(config.design, oracle).total;
    const double p = rep.analytic_rate / config.design.pump_rate;
    const double sigma =
        std::sqrt(std::max(p * (1.0 - p), 0.0) /
                  static_cast<double>(rep.sim.pulses_run)) *
        config.design.pump_rate;
    if (sigma > 0.0) {
        rep.z = (rep.sim.estimated_rate - rep.analytic_rate) / sigma;
    } else {
        rep.z = rep.sim.estimated_rate == rep.analytic_rate
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
    }
    rep.passed = std::abs(rep.z) < 3.0;
    rep.low_power =
        p * static_cast<double>(rep.sim.pulses_run) < 100.0;
    return rep;
}

}  // namespace zalm
