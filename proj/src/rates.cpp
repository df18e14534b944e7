#include "zalm/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zalm {

namespace {

void validate(const RateParams& p) {
    if (!(p.pair_prob >= 0.0) || !(p.pair_prob <= 1.0))
        throw std::invalid_argument("pair_prob must lie in [0, 1]");
    auto unit = [](double v, const char* name) {
        if (!(v > 0.0) || !(v <= 1.0))
            throw std::invalid_argument(std::string(name) +
                                        " must lie in (0, 1]");
    };
    unit(p.eta_herald, "eta_herald");
    unit(p.eta_a, "eta_a");
    unit(p.eta_b, "eta_b");
    unit(p.bsm_eff, "bsm_eff");
    if (!(p.chain_loss_db >= 0.0))
        throw std::invalid_argument("chain_loss_db must be >= 0");
    if (!(p.insertion_loss_db >= 0.0))
        throw std::invalid_argument("insertion_loss_db must be >= 0");
}

double transmission(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

}  // namespace

double basic_rate(const DesignPoint& d, const RateParams& p) {
    validate(p);
    const double herald = p.pair_prob * p.eta_herald;
    return d.pump_rate * herald * herald * p.bsm_eff * p.eta_a * p.eta_b;
}

ZalmRate zalm_rate(const DesignPoint& d, const RateParams& p) {
    validate(p);
    ZalmRate z;
    const double out =
        p.bsm_eff * p.eta_a * p.eta_b * transmission(p.insertion_loss_db);
    z.per_bin.reserve(static_cast<size_t>(d.bins_usable));
    for (int i = 0; i < d.bins_usable; ++i) {
        // center-first: 0, +1, -1, +2, -2, ...
        const int bin = (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);
        const int depth = std::abs(bin);
        const double herald =
            p.pair_prob * p.eta_herald * transmission(depth * p.chain_loss_db);
        BinRate br;
        br.bin = bin;
        br.depth = depth;
        br.rate = d.pump_rate * herald * herald * out;
        z.per_bin.push_back(br);
        z.total += br.rate;
    }
    return z;
}

std::vector<ModulatorResult> compare_modulators(
    const DesignParams& base, const RateParams& p,
    const std::vector<ModulatorSpec>& modulators) {
    std::vector<ModulatorResult> out;
    out.reserve(modulators.size());
    for (const auto& m : modulators) {
        DesignParams dp = base;
        dp.v_pi = m.v_pi;
        RateParams rp = p;
        rp.insertion_loss_db = m.insertion_loss_db;
        ModulatorResult r;
        r.spec = m;
        r.design = derive_design(dp);
        r.rate = zalm_rate(r.design, rp).total;
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ModulatorResult& a, const ModulatorResult& b) {
                         return a.rate > b.rate;
                     });
    return out;
}

bool pair_prob_strains_model(const RateParams& p) { return p.pair_prob > 0.1; }

}  // namespace zalm
