#include "herd/synthesis.hpp"

#include "herd/error.hpp"

#include <string>

namespace herd {

void check_bounds(const FilterTopology& topology, const Bounds& bounds, const FrequencyGrid& grid) {
    bounds.validate();
    if (bounds.size() != topology.size()) {
        throw InvalidArgument("expected " + std::to_string(topology.size()) + " bounds, got " +
                              std::to_string(bounds.size()));
    }
    for (std::size_t i = 0; i < topology.size(); ++i) {
        const auto& model = topology.half_sections()[i];
        auto [lo, hi] = bounds.box[i];
        if (lo < 0.0) {
            throw InvalidArgument("section " + std::to_string(i + 1) + " lower bound must be >= 0");
        }
        const auto* tab = std::get_if<TabulatedBody>(&model.body);
        if (!tab) {
            continue;
        }
        if (i + 1 == topology.size()) {
            lo *= 0.5;
            hi *= 0.5;
        }
        const auto& fam = *tab->family;
        if (lo < fam.min_length() || hi > fam.max_length()) {
            throw OutOfRange("section " + std::to_string(i + 1) + " bounds [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] m leave the tabulated length range [" +
                             std::to_string(fam.min_length()) + ", " + std::to_string(fam.max_length()) + "] m");
        }
        if (grid.front() < fam.min_freq() || grid.back() > fam.max_freq()) {
            throw OutOfRange("section " + std::to_string(i + 1) +
                             " tabulated data does not cover the evaluation frequency grid");
        }
    }
}

SynthesisResult optimize_filter(const FilterTopology& topology, const CostSpec& spec, const Bounds& bounds,
                                const DEConfig& cfg, std::size_t workers) {
    spec.validate();
    check_bounds(topology, bounds, spec.grid);

    const CostFunction fn = [&](std::span<const double> x) {
        const LengthVector lv{std::vector<double>(x.begin(), x.end())};
        return cost(response(topology, lv, spec.grid), spec);
    };
    SynthesisResult out;
    out.opt = differential_evolution(fn, bounds, cfg, workers);
    out.response = response(topology, LengthVector{out.opt.best}, spec.grid);
    out.metrics = metrics(out.response, MetricBands{0.0, spec.passband_hi, spec.stop_lo, spec.stop_hi}, false);
    return out;
}

}  // namespace herd
