#include "herd/netparams.hpp"

#include "herd/constants.hpp"
#include "herd/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace herd {

Frequency::Frequency(double hz) : hz_(hz) {
    if (!(hz > 0.0) || !std::isfinite(hz)) {
        throw InvalidArgument("frequency must be finite and > 0, got " + std::to_string(hz));
    }
}

double Frequency::omega() const noexcept { return 2.0 * kPi * hz_; }

ReferenceImpedance::ReferenceImpedance(double ohms) : ohms_(ohms) {
    if (!(ohms > 0.0) || !std::isfinite(ohms)) {
        throw InvalidArgument("reference impedance must be finite and > 0, got " + std::to_string(ohms));
    }
}

FrequencyGrid::FrequencyGrid(std::vector<double> hz) : points_(std::move(hz)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
            throw InvalidArgument("frequency grid point " + std::to_string(i) + " is not a positive finite value");
        }
        if (i > 0 && !(points_[i] > points_[i - 1])) {
            throw InvalidArgument("frequency grid must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

FrequencyGrid FrequencyGrid::linear(double lo_hz, double hi_hz, std::size_t count) {
    if (count < 2) {
        throw InvalidArgument("linear grid needs at least 2 points");
    }
    if (!(hi_hz > lo_hz)) {
        throw InvalidArgument("linear grid needs hi > lo");
    }
    std::vector<double> pts(count);
    const double step = (hi_hz - lo_hz) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = lo_hz + step * static_cast<double>(i);
    }
    pts.back() = hi_hz;
    return FrequencyGrid(std::move(pts));
}

namespace {

// Plain complex product; skips the Annex G inf/nan recovery of operator*.
inline Complex mul(Complex x, Complex y) {
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

TwoPortABCD cascade(const TwoPortABCD& l, const TwoPortABCD& r) {
    return {
        mul(l.a, r.a) + mul(l.b, r.c),
        mul(l.a, r.b) + mul(l.b, r.d),
        mul(l.c, r.a) + mul(l.d, r.c),
        mul(l.c, r.b) + mul(l.d, r.d),
    };
}

TwoPortABCD cascade(std::span<const TwoPortABCD> chain) {
    TwoPortABCD total = TwoPortABCD::identity();
    for (const auto& t : chain) {
        total = cascade(total, t);
    }
    return total;
}

TwoPortS abcd_to_s(const TwoPortABCD& t, const ReferenceImpedance& r0) {
    const double z = r0.ohms();
    const Complex bn = t.b / z;
    const Complex cn = t.c * z;
    const Complex den = t.a + bn + cn + t.d;
    if (std::abs(den) < tol::kSingular) {
        throw SingularConversion("ABCD to S conversion is singular (a + b/r0 + c*r0 + d ~ 0)");
    }
    TwoPortS s;
    s.ref = r0;
    s.s11 = (t.a + bn - cn - t.d) / den;
    s.s12 = 2.0 * (t.a * t.d - t.b * t.c) / den;
    s.s21 = 2.0 / den;
    s.s22 = (-t.a + bn - cn + t.d) / den;
    return s;
}

TwoPortABCD s_to_abcd(const TwoPortS& s) {
    if (std::abs(s.s21) < tol::kSingular) {
        throw ZeroTransmission("S to ABCD conversion needs nonzero s21");
    }
    const double z = s.ref.ohms();
    const Complex one{1.0};
    const Complex cross = s.s12 * s.s21;
    const Complex two_s21 = 2.0 * s.s21;
    return {
        ((one + s.s11) * (one - s.s22) + cross) / two_s21,
        z * ((one + s.s11) * (one + s.s22) - cross) / two_s21,
        ((one - s.s11) * (one - s.s22) - cross) / (two_s21 * z),
        ((one - s.s11) * (one + s.s22) + cross) / two_s21,
    };
}

double magnitude_db(Complex x) {
    const double mag = std::abs(x);
    if (mag == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 20.0 * std::log10(mag);
}

}  // namespace herd
