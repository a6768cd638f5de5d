#include "herd/differential_evolution.hpp"
#include "herd/error.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>

using namespace herd;

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

Bounds box(std::size_t n, double lo, double hi) {
    return Bounds{std::vector<std::pair<double, double>>(n, {lo, hi})};
}

}  // namespace

TEST_CASE("sphere in 11 dimensions") {
    const auto r = differential_evolution(sphere, box(11, -5, 5), DEConfig{});
    CHECK(r.best_cost < 1e-6);
    CHECK(r.converged);
    CHECK(r.best.size() == 11);
    CHECK(r.generations < 3000);
    CHECK(r.cost_history.size() == r.generations);
}

TEST_CASE("one-dimensional |x - 3|") {
    DEConfig cfg;
    cfg.seed = 7;
    const auto r = differential_evolution([](std::span<const double> x) { return std::abs(x[0] - 3.0); },
                                          box(1, 0, 10), cfg);
    CHECK(std::abs(r.best[0] - 3.0) < 1e-6);
}

TEST_CASE("seeded runs are bit-identical") {
    DEConfig cfg;
    cfg.seed = 12345;
    cfg.max_generations = 200;
    const auto rosen = [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
        }
        return s;
    };
    const auto a = differential_evolution(rosen, box(5, -2, 2), cfg);
    const auto b = differential_evolution(rosen, box(5, -2, 2), cfg);
    CHECK(a == b);
    const auto c = differential_evolution(rosen, box(5, -2, 2), cfg, 4);
    CHECK(a == c);

    cfg.seed = 12346;
    const auto d = differential_evolution(rosen, box(5, -2, 2), cfg);
    CHECK_FALSE(a.best == d.best);
}

TEST_CASE("collapsed bounds") {
    Bounds b{{{2.0, 2.0}, {-1.0, -1.0}}};
    const auto r = differential_evolution(sphere, b, DEConfig{});
    CHECK(r.best == std::vector<double>{2.0, -1.0});
    CHECK(r.best_cost == 5.0);
    CHECK(r.converged);
    CHECK(r.generations == 1);
}

TEST_CASE("history is non-increasing and evaluations stay in the box") {
    std::atomic<bool> outside{false};
    std::atomic<std::size_t> calls{0};
    const Bounds b{{{0.5, 1.5}, {-3.0, -2.0}, {10.0, 20.0}}};
    DEConfig cfg;
    cfg.max_generations = 150;
    cfg.mutation = {1.5, 1.9};  // large steps exercise reflection
    const auto r = differential_evolution(
        [&](std::span<const double> x) {
            ++calls;
            if (!b.contains(x)) outside = true;
            return std::pow(x[0] - 0.5, 2) + std::pow(x[1] + 2.0, 2) + std::pow(x[2] - 20.0, 2);
        },
        b, cfg, 2);
    CHECK_FALSE(outside.load());
    CHECK(r.evaluations == calls.load());
    for (std::size_t i = 1; i < r.cost_history.size(); ++i) CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
}

TEST_CASE("reflect_into") {
    CHECK(reflect_into(0.5, 0.0, 1.0) == 0.5);
    CHECK(reflect_into(1.25, 0.0, 1.0) == doctest::Approx(0.75));
    CHECK(reflect_into(-0.25, 0.0, 1.0) == doctest::Approx(0.25));
    CHECK(reflect_into(2.5, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(reflect_into(-3.75, 0.0, 1.0) == doctest::Approx(0.25));
    CHECK(reflect_into(7.0, 3.0, 3.0) == 3.0);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(differential_evolution(sphere, Bounds{}, DEConfig{}), InvalidArgument);
    CHECK_THROWS_AS(differential_evolution(sphere, Bounds{{{1.0, 0.0}}}, DEConfig{}), InvalidArgument);
    CHECK_THROWS_AS(differential_evolution(sphere, Bounds{{{0.0, std::numeric_limits<double>::infinity()}}}, DEConfig{}),
                    InvalidArgument);

    DEConfig cfg;
    cfg.population_multiplier = 3;
    CHECK_THROWS_AS(differential_evolution(sphere, box(1, 0, 1), cfg), InvalidArgument);
    cfg = DEConfig{};
    cfg.mutation = {0.0, 1.0};
    CHECK_THROWS_AS(differential_evolution(sphere, box(2, 0, 1), cfg), InvalidArgument);
    cfg = DEConfig{};
    cfg.crossover_rate = 0.0;
    CHECK_THROWS_AS(differential_evolution(sphere, box(2, 0, 1), cfg), InvalidArgument);

    try {
        differential_evolution([](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : x[0]; },
                               box(1, 0, 1), DEConfig{});
        FAIL("expected NonFiniteCost");
    } catch (const NonFiniteCost& e) {
        CHECK(std::string(e.what()).find("nan") != std::string::npos);
    }
}
