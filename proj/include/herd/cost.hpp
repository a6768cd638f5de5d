#pragma once

#include "herd/netparams.hpp"
#include "herd/topology.hpp"

namespace herd {

struct CostWeights {
    double return_loss = 1.0;
    double rejection = 1.0;
    double ripple = 0.1;
};

/// Passband/stopband targets for a low-pass response.
struct CostSpec {
    double passband_hi = 12e9;        ///< Hz
    double rl_target_db = 20.0;       ///< return loss wanted at f <= passband_hi
    double stop_lo = 15e9;            ///< Hz
    double stop_hi = 40e9;            ///< Hz
    double rejection_target_db = 50.0;
    CostWeights weights{};
    FrequencyGrid grid = FrequencyGrid::linear(0.5e9, 40e9, 240);

    void validate() const;
};

/// Sum of three hinge-squared penalties, each averaged over its band:
///
///   w_rl  * mean_{f <= passband_hi}       max(0, RL_target - RL(f))^2
/// + w_rej * mean_{stop_lo <= f <= stop_hi} max(0, REJ_target - REJ(f))^2
/// + w_rip * mean_{f <= passband_hi}       IL(f)^2
///
/// with RL = -|s11|dB, REJ = -|s21|dB and IL = max(0, -|s21|dB).
/// The response grid is what gets summed over; spec.grid is not consulted.
/// Throws GridCoverage when the grid does not reach stop_hi or a band is empty.
double cost(const FilterResponse& resp, const CostSpec& spec);

}  // namespace herd
