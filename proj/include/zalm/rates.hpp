#ifndef ZALM_RATES_HPP
#define ZALM_RATES_HPP

// Heralded entangled-pair rates for the single-bin source and for the
// multiplexed source that recycles every usable frequency bin through a
// chained add-drop filter bank plus a serrodyne shift modulator.
//
// Probabilities per pump pulse; rates are probability * pump_rate.
// Loss bookkeeping, per coincidence:
//   heralding photons (both):  eta_herald * 10^(-depth(b) * L_c / 10)
//   BSM success:               bsm_eff
//   output arm A:              eta_a
//   output arm B:              eta_b * 10^(-L_I / 10)   (shift modulator)
// depth(b) = |b|: the filter bank peels bins off center-first, so bin 0
// sees no chained circulator and bins +-j see j of them.

#include <string>
#include <vector>

#include "zalm/design.hpp"

namespace zalm {

struct RateParams {
    double pair_prob = 0.01;         // P_p per source per pulse, [0, 1]
    double eta_herald = 1.0;         // heralding path, (0, 1]
    double eta_a = 1.0;              // output arm A, (0, 1]
    double eta_b = 1.0;              // output arm B, (0, 1]
    double bsm_eff = 0.5;            // Bell-state measurement success, (0, 1]
    double chain_loss_db = 0.6;      // L_c per chained circulator, >= 0
    double insertion_loss_db = 0.0;  // L_I of the shift modulator, >= 0
};

struct BinRate {
    int bin = 0;        // signed frequency-bin index
    int depth = 0;      // chained circulators in front of this bin, |bin|
    double rate = 0.0;  // Hz
};

struct ZalmRate {
    double total = 0.0;            // Hz, sum over usable bins
    std::vector<BinRate> per_bin;  // center-first order: 0, +1, -1, +2, -2, ...
};

struct ModulatorSpec {
    std::string name;
    double v_pi = 1.0;               // V
    double insertion_loss_db = 0.0;  // dB
};

struct ModulatorResult {
    ModulatorSpec spec;
    DesignPoint design;
    double rate = 0.0;  // Hz, multiplexed
};

// Single-bin heralded rate: R_P (P_p eta_H)^2 bsm eta_a eta_b.  No filter
// chain and no shift modulator in the basic source.
double basic_rate(const DesignPoint& d, const RateParams& p);

// Multiplexed rate over design.bins_usable bins with per-depth chain loss
// and the modulator insertion loss on arm B.
ZalmRate zalm_rate(const DesignPoint& d, const RateParams& p);

// Re-derives the design for each modulator's v_pi (bin count changes) and
// ranks by multiplexed rate, highest first.  Ties keep input order.
std::vector<ModulatorResult> compare_modulators(
    const DesignParams& base, const RateParams& p,
    const std::vector<ModulatorSpec>& modulators);

// The quadratic-in-P_p model ignores multi-pair events; above P_p = 0.1
// callers should warn (not fail).
bool pair_prob_strains_model(const RateParams& p);

}  // namespace zalm

#endif
