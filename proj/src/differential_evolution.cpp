#include "herd/differential_evolution.hpp"

#include "herd/error.hpp"
#include "herd/touchstone.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

namespace herd {

namespace {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    // [0, 1) with 53 random bits; independent of the standard library's distributions.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n).
    std::size_t below(std::size_t n) {
        const std::uint64_t range = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % range);
    }

private:
    std::mt19937_64 engine_;
};

std::string describe(std::span<const double> x) {
    std::string s = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += format_double(x[i]);
    }
    return s + "]";
}

// Evaluates cost_fn on every row of `pop` into `out`, `workers` threads striding by index.
void evaluate_all(const CostFunction& cost_fn, const std::vector<std::vector<double>>& pop, std::vector<double>& out,
                  std::size_t workers) {
    const std::size_t n = pop.size();
    out.assign(n, 0.0);
    workers = std::clamp<std::size_t>(workers, 1, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = cost_fn(pop[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> threads;
            threads.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                threads.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++) {
                        try {
                            out[i] = cost_fn(pop[i]);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(out[i])) {
            throw NonFiniteCost("cost function returned " + format_double(out[i]) + " at " + describe(pop[i]));
        }
    }
}

bool spread_converged(std::span<const double> costs, double tolerance) {
    double mean = 0.0;
    for (const double c : costs) mean += c;
    mean /= static_cast<double>(costs.size());
    double var = 0.0;
    for (const double c : costs) var += (c - mean) * (c - mean);
    const double sd = std::sqrt(var / static_cast<double>(costs.size()));
    return sd <= tolerance * std::max(1.0, std::abs(mean));
}

}  // namespace

void DEConfig::validate(std::size_t dimension) const {
    if (population_multiplier * dimension < 4) {
        throw InvalidArgument("DE population must be >= 4 (multiplier * dimension)");
    }
    if (!(mutation.first > 0.0 && mutation.first <= mutation.second && mutation.second < 2.0)) {
        throw InvalidArgument("DE mutation range must satisfy 0 < lo <= hi < 2");
    }
    if (!(crossover_rate > 0.0 && crossover_rate <= 1.0)) {
        throw InvalidArgument("DE crossover rate must be in (0, 1]");
    }
    if (max_generations == 0) {
        throw InvalidArgument("DE max_generations must be >= 1");
    }
    if (!(tolerance >= 0.0)) {
        throw InvalidArgument("DE tolerance must be >= 0");
    }
}

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != box.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= box[i].first && x[i] <= box[i].second)) return false;
    }
    return true;
}

void Bounds::validate() const {
    if (box.empty()) {
        throw InvalidArgument("bounds are empty");
    }
    for (std::size_t i = 0; i < box.size(); ++i) {
        const auto [lo, hi] = box[i];
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw InvalidArgument("invalid bounds for parameter " + std::to_string(i + 1) + ": [" + format_double(lo) +
                                  ", " + format_double(hi) + "]");
        }
    }
}

double reflect_into(double v, double lo, double hi) {
    if (v >= lo && v <= hi) {
        return v;
    }
    const double width = hi - lo;
    if (width <= 0.0) {
        return lo;
    }
    double t = std::fmod(v - lo, 2.0 * width);
    if (t < 0.0) {
        t += 2.0 * width;
    }
    const double r = t <= width ? lo + t : hi - (t - width);
    return std::clamp(r, lo, hi);
}

OptResult differential_evolution(const CostFunction& cost_fn, const Bounds& bounds, const DEConfig& cfg,
                                 std::size_t workers) {
    bounds.validate();
    const std::size_t dim = bounds.size();
    cfg.validate(dim);
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }

    const std::size_t np = cfg.population_multiplier * dim;
    Stream rng(cfg.seed);

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (auto& x : pop) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto [lo, hi] = bounds.box[j];
            x[j] = lo == hi ? lo : std::min(rng.uniform(lo, hi), hi);
        }
    }
    std::vector<double> costs;
    evaluate_all(cost_fn, pop, costs, workers);

    OptResult result;
    result.evaluations = np;
    std::size_t best = static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());

    std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
    std::vector<double> trial_costs;
    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        const double scale = rng.uniform(cfg.mutation.first, cfg.mutation.second);
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = rng.below(np); while (r1 == i);
            do r2 = rng.below(np); while (r2 == i || r2 == r1);
            do r3 = rng.below(np); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t forced = rng.below(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                const bool take = j == forced || rng.uniform() < cfg.crossover_rate;
                if (take) {
                    const double v = pop[r1][j] + scale * (pop[r2][j] - pop[r3][j]);
                    trials[i][j] = reflect_into(v, bounds.box[j].first, bounds.box[j].second);
                } else {
                    trials[i][j] = pop[i][j];
                }
            }
        }
        evaluate_all(cost_fn, trials, trial_costs, workers);
        result.evaluations += np;

        for (std::size_t i = 0; i < np; ++i) {
            if (trial_costs[i] <= costs[i]) {
                std::swap(pop[i], trials[i]);
                costs[i] = trial_costs[i];
                if (costs[i] < costs[best]) {
                    best = i;
                }
            }
        }
        result.cost_history.push_back(costs[best]);
        result.generations = gen;
        if (spread_converged(costs, cfg.tolerance)) {
            result.converged = true;
            break;
        }
    }

    result.best = pop[best];
    result.best_cost = costs[best];
    return result;
}

}  // namespace herd
