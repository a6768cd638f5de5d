#pragma once

// Shared helpers for the unit tests. The reference formulas here are written
// out independently of the library so they can serve as oracles.

#include "herd/netparams.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace herd::test {

inline constexpr double kC0 = 299792458.0;
inline const Complex kJ{0.0, 1.0};

/// Lossless TEM line chain matrix straight from the textbook formula.
inline TwoPortABCD line(double z0, double theta) {
    return {std::cos(theta), kJ * z0 * std::sin(theta), kJ * std::sin(theta) / z0, std::cos(theta)};
}

/// Explicit 2x2 product using std::complex operators.
inline TwoPortABCD mul(const TwoPortABCD& x, const TwoPortABCD& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline double abcd_distance(const TwoPortABCD& x, const TwoPortABCD& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

/// Relative difference with entries scaled to dimensionless form (b / r0, c * r0).
inline double abcd_rel(const TwoPortABCD& x, const TwoPortABCD& y, double r0 = 50.0) {
    const auto n = [&](const TwoPortABCD& t) {
        return std::sqrt(std::norm(t.a) + std::norm(t.b / r0) + std::norm(t.c * r0) + std::norm(t.d));
    };
    const TwoPortABCD diff{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    return n(diff) / std::max(n(y), 1e-300);
}

/// Random lossless line: z0 in [10, 150] ohm, electrical length in [0, 2 pi).
inline TwoPortABCD random_line(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> z(10.0, 150.0);
    std::uniform_real_distribution<double> th(0.0, 2.0 * 3.141592653589793);
    return line(z(rng), th(rng));
}

}  // namespace herd::test
