#pragma once

// Physical section models: lossless TEM line chain matrices, the short-line
// lumped approximations of a stepped-impedance prototype, and the dominant
// TE11 mode of a dielectric-filled circular waveguide.

#include "herd/netparams.hpp"

namespace herd {

/// Uniform TEM line. Losses are not modeled.
struct TEMLineSection {
    double z0 = 50.0;      ///< characteristic impedance, ohms (> 0)
    double length = 0.0;   ///< meters (>= 0)
    double eps_eff = 1.0;  ///< effective relative permittivity (>= 1)

    /// Throws InvalidArgument on any violated field constraint.
    void validate() const;
};

/// Circular hollow waveguide opening off the main line.
struct CircularWaveguideSpec {
    double radius = 0.0;          ///< meters
    double fill_eps_r = 1.0;      ///< relative permittivity of the fill
    double fill_tan_delta = 0.0;  ///< loss tangent of the fill (carried, not used by the TE11 model)
    double depth = 0.0;           ///< meters

    void validate() const;
};

enum class ElementKind { inductive, capacitive };

/// Normalized lumped value of a short high-Z (series L) or low-Z (shunt C) section.
struct LumpedElementValue {
    double value = 0.0;
    ElementKind kind = ElementKind::inductive;
};

/// beta = 2 pi f sqrt(eps_eff) / c0, rad/m.
double phase_constant(Frequency f, double eps_eff = 1.0);

/// [cos bl, j Z sin bl; j sin bl / Z, cos bl].
TwoPortABCD line_abcd(const TEMLineSection& section, Frequency f);

/// beta*l * Z_h / R0.
LumpedElementValue normalized_inductance(double beta_ell, double z_high, double r0);

/// beta*l * R0 / Z_l.
LumpedElementValue normalized_capacitance(double beta_ell, double z_low, double r0);

/// TE11 cutoff, p'11 c0 / (2 pi r sqrt(eps_r)).
Frequency te11_cutoff(const CircularWaveguideSpec& spec);

/// Below-cutoff field amplitude ratio across the guide depth, exp(-gamma d) with
/// gamma = sqrt(kc^2 - k^2) and k the wavenumber inside the fill.
/// Throws AboveCutoff when f >= the TE11 cutoff.
double evanescent_factor(const CircularWaveguideSpec& spec, Frequency f);

}  // namespace herd
