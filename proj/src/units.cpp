#include "herd/units.hpp"

#include "herd/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace herd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

const char* quantity_name(Quantity q) {
    switch (q) {
    case Quantity::length: return "length";
    case Quantity::frequency: return "frequency";
    case Quantity::impedance: return "impedance";
    case Quantity::decibel: return "decibel";
    }
    return "?";
}

bool scale_for(Quantity kind, const std::string& unit, double& scale) {
    switch (kind) {
    case Quantity::length:
        if (unit == "m") scale = 1.0;
        else if (unit == "cm") scale = 1e-2;
        else if (unit == "mm") scale = 1e-3;
        else if (unit == "um" || unit == "\xc2\xb5m") scale = 1e-6;
        else return false;
        return true;
    case Quantity::frequency:
        if (unit == "hz") scale = 1.0;
        else if (unit == "khz") scale = 1e3;
        else if (unit == "mhz") scale = 1e6;
        else if (unit == "ghz") scale = 1e9;
        else return false;
        return true;
    case Quantity::impedance:
        if (unit == "ohm" || unit == "ohms" || unit == "\xce\xa9") scale = 1.0;
        else return false;
        return true;
    case Quantity::decibel:
        if (unit == "db") scale = 1.0;
        else return false;
        return true;
    }
    return false;
}

}  // namespace

double parse_quantity(std::string_view text, Quantity kind) {
    const std::string_view s = trim(text);
    std::string_view num = s;
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc{} || !std::isfinite(value)) {
        throw InvalidArgument("cannot parse " + std::string(quantity_name(kind)) + " '" + std::string(text) + "'");
    }
    const std::string unit = lower(trim(std::string_view(ptr, static_cast<std::size_t>(num.data() + num.size() - ptr))));
    if (unit.empty()) {
        return value;
    }
    double scale = 1.0;
    if (!scale_for(kind, unit, scale)) {
        throw InvalidArgument("unknown " + std::string(quantity_name(kind)) + " unit '" + unit + "' in '" +
                              std::string(text) + "'");
    }
    return value * scale;
}

}  // namespace herd
