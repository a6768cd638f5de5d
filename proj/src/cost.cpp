#include "herd/cost.hpp"

#include "herd/error.hpp"

#include <algorithm>
#include <cmath>

namespace herd {

namespace {

double hinge_sq(double target, double actual) {
    const double gap = target - actual;
    return gap > 0.0 ? gap * gap : 0.0;
}

}  // namespace

void CostSpec::validate() const {
    if (!(passband_hi < stop_lo && stop_lo < stop_hi)) {
        throw InvalidArgument("cost spec needs passband_hi < stop_lo < stop_hi");
    }
    if (!(rl_target_db > 0.0) || !(rejection_target_db > 0.0)) {
        throw InvalidArgument("cost targets must be > 0 dB");
    }
    if (!(weights.return_loss >= 0.0) || !(weights.rejection >= 0.0) || !(weights.ripple >= 0.0)) {
        throw InvalidArgument("cost weights must be >= 0");
    }
    if (grid.size() < 2) {
        throw InvalidArgument("cost spec grid needs at least 2 points");
    }
}

double cost(const FilterResponse& resp, const CostSpec& spec) {
    if (resp.grid.empty() || resp.grid.back() < spec.stop_hi * (1.0 - 1e-12)) {
        throw GridCoverage("response grid must extend to the stopband upper edge");
    }
    double rl_sum = 0.0;
    double ripple_sum = 0.0;
    double rej_sum = 0.0;
    std::size_t n_pass = 0;
    std::size_t n_stop = 0;
    for (std::size_t i = 0; i < resp.s.size(); ++i) {
        const double f = resp.grid[i];
        const double s21_db = magnitude_db(resp.s[i].s21);
        if (f <= spec.passband_hi) {
            ++n_pass;
            rl_sum += hinge_sq(spec.rl_target_db, -magnitude_db(resp.s[i].s11));
            const double il = std::max(0.0, -s21_db);
            ripple_sum += il * il;
        }
        if (f >= spec.stop_lo && f <= spec.stop_hi) {
            ++n_stop;
            rej_sum += hinge_sq(spec.rejection_target_db, -s21_db);
        }
    }
    if (n_pass == 0 || n_stop == 0) {
        throw GridCoverage("response grid has no points in the passband or the stopband");
    }
    const double np = static_cast<double>(n_pass);
    return spec.weights.return_loss * rl_sum / np + spec.weights.rejection * rej_sum / static_cast<double>(n_stop) +
           spec.weights.ripple * ripple_sum / np;
}

}  // namespace herd
