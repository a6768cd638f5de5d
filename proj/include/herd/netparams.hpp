#pragma once

// Two-port network algebra: chain (ABCD) and scattering matrices at a real
// reference impedance, plus the conversions between them.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace herd {

using Complex = std::complex<double>;

/// Frequency in hertz, strictly positive.
class Frequency {
public:
    explicit Frequency(double hz);
    double hz() const noexcept { return hz_; }
    double omega() const noexcept;

    friend auto operator<=>(const Frequency&, const Frequency&) = default;

private:
    double hz_;
};

/// Real system impedance in ohms, strictly positive.
class ReferenceImpedance {
public:
    explicit ReferenceImpedance(double ohms = 50.0);
    double ohms() const noexcept { return ohms_; }

    friend bool operator==(const ReferenceImpedance&, const ReferenceImpedance&) = default;

private:
    double ohms_;
};

/// Chain matrix [a b; c d]. b in ohms, c in siemens.
struct TwoPortABCD {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static constexpr TwoPortABCD identity() { return {}; }
    Complex det() const { return a * d - b * c; }

    friend bool operator==(const TwoPortABCD&, const TwoPortABCD&) = default;
};

/// Scattering parameters referenced to `ref`.
struct TwoPortS {
    Complex s11{0.0}, s12{0.0}, s21{0.0}, s22{0.0};
    ReferenceImpedance ref{};

    friend bool operator==(const TwoPortS&, const TwoPortS&) = default;
};

/// Strictly increasing list of frequencies.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    /// Throws InvalidArgument unless every point is > 0 and the list strictly increases.
    explicit FrequencyGrid(std::vector<double> hz);

    /// `count` evenly spaced points from lo to hi inclusive (count >= 2).
    static FrequencyGrid linear(double lo_hz, double hi_hz, std::size_t count);

    std::span<const double> hz() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    std::vector<double> points_;
};

/// Matrix product left * right (signal passes `left` first).
TwoPortABCD cascade(const TwoPortABCD& left, const TwoPortABCD& right);

/// Ordered product of a chain of sections; identity for an empty chain.
TwoPortABCD cascade(std::span<const TwoPortABCD> chain);

/// Throws SingularConversion when |a + b/r0 + c r0 + d| < 1e-30.
TwoPortS abcd_to_s(const TwoPortABCD& t, const ReferenceImpedance& r0);

/// Inverse of abcd_to_s at s.ref. Throws ZeroTransmission when |s21| < 1e-30.
TwoPortABCD s_to_abcd(const TwoPortS& s);

/// 20 log10|x|; -infinity for x == 0.
double magnitude_db(Complex x);

}  // namespace herd
