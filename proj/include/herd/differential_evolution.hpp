#pragma once

// DE/rand/1/bin with per-generation dithered mutation and reflective bounds.
//
// One seeded 64-bit Mersenne Twister drives initialization, mutation scale,
// index selection and crossover, always consumed on the calling thread in
// population order. Trial costs of a generation are evaluated in parallel and
// written by index, so the result does not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace herd {

struct DEConfig {
    std::size_t population_multiplier = 15;    ///< population = multiplier * dimension
    std::pair<double, double> mutation{0.5, 1.0};  ///< F drawn uniformly from this range each generation
    double crossover_rate = 0.7;
    std::size_t max_generations = 3000;
    /// Stop when stddev(cost) <= tolerance * max(1, |mean(cost)|).
    double tolerance = 1e-8;
    std::uint64_t seed = 0;

    void validate(std::size_t dimension) const;
};

/// Per-parameter closed box [lo, hi]; lo == hi pins a parameter.
struct Bounds {
    std::vector<std::pair<double, double>> box;

    std::size_t size() const noexcept { return box.size(); }
    bool contains(std::span<const double> x) const;
    void validate() const;
};

struct OptResult {
    std::vector<double> best;
    double best_cost = 0.0;
    std::size_t generations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    /// Best-so-far cost after each generation.
    std::vector<double> cost_history;

    friend bool operator==(const OptResult&, const OptResult&) = default;
};

using CostFunction = std::function<double(std::span<const double>)>;

/// `workers` = 0 picks the hardware concurrency. cost_fn must be safe to call
/// concurrently. Throws InvalidArgument for bad bounds/config and
/// NonFiniteCost when cost_fn returns NaN or infinity.
OptResult differential_evolution(const CostFunction& cost_fn, const Bounds& bounds, const DEConfig& cfg,
                                 std::size_t workers = 1);

/// Folds v back into [lo, hi] by mirror reflection at the walls.
double reflect_into(double v, double lo, double hi);

}  // namespace herd
