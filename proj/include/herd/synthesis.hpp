#pragma once

#include "herd/cost.hpp"
#include "herd/differential_evolution.hpp"
#include "herd/topology.hpp"

namespace herd {

struct SynthesisResult {
    OptResult opt;
    FilterResponse response;  ///< best lengths evaluated on spec.grid
    FilterMetrics metrics;    ///< over (0, passband_hi] and [stop_lo, stop_hi]
};

/// Checks bounds against the topology before any optimization: one box per
/// half section, and tabulated sections must stay inside their family's length
/// range (half the center length for the center section) and cover spec.grid.
void check_bounds(const FilterTopology& topology, const Bounds& bounds, const FrequencyGrid& grid);

/// Minimizes cost(response(topology, lengths, spec.grid), spec) over `bounds`.
SynthesisResult optimize_filter(const FilterTopology& topology, const CostSpec& spec, const Bounds& bounds,
                                const DEConfig& cfg, std::size_t workers = 1);

}  // namespace herd
