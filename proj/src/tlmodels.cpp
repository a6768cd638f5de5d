#include "herd/tlmodels.hpp"

#include "herd/constants.hpp"
#include "herd/error.hpp"

#include <cmath>
#include <string>

namespace herd {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw InvalidArgument(what);
    }
}

}  // namespace

void TEMLineSection::validate() const {
    require(z0 > 0.0 && std::isfinite(z0), "TEM line z0 must be > 0");
    require(length >= 0.0 && std::isfinite(length), "TEM line length must be >= 0");
    require(eps_eff >= 1.0 && std::isfinite(eps_eff), "TEM line eps_eff must be >= 1");
}

void CircularWaveguideSpec::validate() const {
    require(radius > 0.0 && std::isfinite(radius), "waveguide radius must be > 0");
    require(fill_eps_r >= 1.0 && std::isfinite(fill_eps_r), "waveguide fill permittivity must be >= 1");
    require(fill_tan_delta >= 0.0 && std::isfinite(fill_tan_delta), "waveguide loss tangent must be >= 0");
    require(depth > 0.0 && std::isfinite(depth), "waveguide depth must be > 0");
}

double phase_constant(Frequency f, double eps_eff) {
    require(eps_eff >= 1.0, "eps_eff must be >= 1");
    return f.omega() * std::sqrt(eps_eff) / kSpeedOfLight;
}

TwoPortABCD line_abcd(const TEMLineSection& section, Frequency f) {
    section.validate();
    const double theta = phase_constant(f, section.eps_eff) * section.length;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex j{0.0, 1.0};
    return {Complex{c}, j * (section.z0 * s), j * (s / section.z0), Complex{c}};
}

LumpedElementValue normalized_inductance(double beta_ell, double z_high, double r0) {
    require(beta_ell >= 0.0, "beta*l must be >= 0");
    require(z_high > 0.0 && r0 > 0.0, "impedances must be > 0");
    return {beta_ell * z_high / r0, ElementKind::inductive};
}

LumpedElementValue normalized_capacitance(double beta_ell, double z_low, double r0) {
    require(beta_ell >= 0.0, "beta*l must be >= 0");
    require(z_low > 0.0 && r0 > 0.0, "impedances must be > 0");
    return {beta_ell * r0 / z_low, ElementKind::capacitive};
}

Frequency te11_cutoff(const CircularWaveguideSpec& spec) {
    spec.validate();
    return Frequency(kTe11Root * kSpeedOfLight / (2.0 * kPi * spec.radius * std::sqrt(spec.fill_eps_r)));
}

double evanescent_factor(const CircularWaveguideSpec& spec, Frequency f) {
    const Frequency fc = te11_cutoff(spec);
    if (f.hz() >= fc.hz()) {
        throw AboveCutoff("evanescent model needs f < TE11 cutoff (" + std::to_string(fc.hz()) + " Hz), got " +
                          std::to_string(f.hz()) + " Hz");
    }
    const double kc = kTe11Root / spec.radius;
    const double k = phase_constant(f, spec.fill_eps_r);
    // (kc - k)(kc + k) keeps precision near cutoff
    const double gamma = std::sqrt((kc - k) * (kc + k));
    return std::exp(-gamma * spec.depth);
}

}  // namespace herd
