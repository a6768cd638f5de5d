#pragma once

#include <string_view>

namespace herd {

enum class Quantity { length, frequency, impedance, decibel };

/// Parses "<number>[ ]<unit>" into SI (meters, hertz, ohms, dB). A bare
/// number is taken as already SI. Units are case-insensitive, so "mhz" is
/// MHz. Throws InvalidArgument.
double parse_quantity(std::string_view text, Quantity kind);

}  // namespace herd
