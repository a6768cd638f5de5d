#include "herd/cost.hpp"
#include "herd/error.hpp"

#include <doctest.h>

using namespace herd;

namespace {

// Ten passband points (1..10 GHz) then a stopband at 15..40 GHz in 5 GHz steps.
FilterResponse two_band(double pass_s21 = 1.0, double stop_s21 = 1e-3) {
    std::vector<double> hz;
    for (int i = 1; i <= 10; ++i) hz.push_back(i * 1e9);
    for (int i = 15; i <= 40; i += 5) hz.push_back(i * 1e9);
    FilterResponse r{FrequencyGrid(hz), {}};
    for (double f : hz) {
        TwoPortS s;
        s.s21 = s.s12 = f <= 12e9 ? pass_s21 : stop_s21;
        r.s.push_back(s);
    }
    return r;
}

Complex from_db(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace

TEST_CASE("targets met costs nothing") {
    CHECK(cost(two_band(), CostSpec{}) == 0.0);
}

TEST_CASE("one in-band point at 15 dB return loss") {
    auto r = two_band();
    r.s[4].s11 = r.s[4].s22 = from_db(-15.0);
    CHECK(cost(r, CostSpec{}) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("each term") {
    CostSpec spec;
    SUBCASE("rejection") {
        auto r = two_band();
        r.s[12].s21 = from_db(-40.0);  // 25 GHz, 10 dB short of target, 6 stopband points
        CHECK(cost(r, spec) == doctest::Approx(100.0 / 6.0));
    }
    SUBCASE("ripple") {
        const auto r = two_band(from_db(-0.5).real());
        CHECK(cost(r, spec) == doctest::Approx(0.1 * 0.25));
    }
    SUBCASE("gain does not count as ripple") {
        CHECK(cost(two_band(1.05), spec) == 0.0);
    }
}

TEST_CASE("cost grows as rejection worsens") {
    CostSpec spec;
    double last = -1.0;
    for (double db : {-60.0, -50.0, -45.0, -30.0, -10.0}) {
        auto r = two_band();
        r.s[11].s21 = from_db(db);
        const double c = cost(r, spec);
        if (db > -50.0) CHECK(c > last);
        last = c;
    }
}

TEST_CASE("cost is linear in each weight") {
    auto r = two_band(from_db(-0.3).real(), from_db(-45.0).real());
    r.s[2].s11 = from_db(-12.0);
    CostSpec base;
    const double c0 = cost(r, base);
    for (int k = 0; k < 3; ++k) {
        CostSpec s2 = base;
        double* w[] = {&s2.weights.return_loss, &s2.weights.rejection, &s2.weights.ripple};
        *w[k] *= 3.0;
        CostSpec s0 = base;
        double* z[] = {&s0.weights.return_loss, &s0.weights.rejection, &s0.weights.ripple};
        *z[k] = 0.0;
        const double term = c0 - cost(r, s0);
        CHECK(term > 0.0);
        CHECK(cost(r, s2) == doctest::Approx(c0 + 2.0 * term));
    }
}

TEST_CASE("grid coverage and validation") {
    CostSpec spec;
    FilterResponse short_grid{FrequencyGrid({1e9, 15e9, 30e9}), std::vector<TwoPortS>(3)};
    CHECK_THROWS_AS(cost(short_grid, spec), GridCoverage);
    FilterResponse no_pass{FrequencyGrid({13e9, 15e9, 40e9}), std::vector<TwoPortS>(3)};
    CHECK_THROWS_AS(cost(no_pass, spec), GridCoverage);

    CostSpec bad;
    bad.stop_lo = 10e9;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = CostSpec{};
    bad.rl_target_db = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = CostSpec{};
    bad.weights.ripple = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_NOTHROW(CostSpec{}.validate());
}
