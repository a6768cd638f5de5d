#pragma once

namespace herd {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Speed of light in vacuum, m/s (exact).
inline constexpr double kSpeedOfLight = 299792458.0;

/// First zero of J1'(x); TE11 cutoff wavenumber is this over the radius.
inline constexpr double kTe11Root = 1.8412;

namespace tol {
/// |ad - bc - 1| allowed for reciprocal sections.
inline constexpr double kReciprocity = 1e-9;
/// Lossless energy balance |s11|^2 + |s21|^2 = 1.
inline constexpr double kEnergy = 1e-9;
/// S <-> ABCD round trip, relative per entry.
inline constexpr double kRoundTrip = 1e-10;
/// Cascade associativity, relative.
inline constexpr double kAssociativity = 1e-12;
/// Denominator / |s21| floor below which conversions refuse.
inline constexpr double kSingular = 1e-30;
}  // namespace tol

}  // namespace herd
