#pragma once

#include <stdexcept>
#include <string>

namespace herd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// ABCD -> S denominator vanished.
class SingularConversion : public Error {
public:
    using Error::Error;
};

/// S -> ABCD requested for a network with |s21| ~ 0.
class ZeroTransmission : public Error {
public:
    using Error::Error;
};

/// Evanescent model evaluated at or above the waveguide cutoff.
class AboveCutoff : public Error {
public:
    using Error::Error;
};

/// Query outside the tabulated (frequency, length) rectangle.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Touchstone input could not be parsed. `kind()` tells why.
class ParseError : public Error {
public:
    enum class Kind { malformed_option, non_monotonic, column_count, port_count, bad_number, no_data };

    ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Family construction failed (duplicate lengths, disjoint ranges, ...).
class FamilyError : public Error {
public:
    using Error::Error;
};

/// |s21| never crossed -3 dB inside the evaluated grid.
class UnbracketedCutoff : public Error {
public:
    using Error::Error;
};

/// Response grid does not cover the band a cost/metric needs.
class GridCoverage : public Error {
public:
    using Error::Error;
};

/// Cost function returned NaN or infinity.
class NonFiniteCost : public Error {
public:
    using Error::Error;
};

/// Filter definition / problem file rejected.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace herd
