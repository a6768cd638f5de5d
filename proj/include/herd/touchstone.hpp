#pragma once

// Touchstone v1 two-port (.s2p) reading and writing, and the CSV export used
// for plotting interpolated or evaluated curves.

#include "herd/netparams.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace herd {

enum class DataFormat { RI, MA, DB };
enum class FrequencyUnit { Hz, kHz, MHz, GHz };

/// One S-matrix per frequency, stored canonically (Hz, rectangular complex).
/// `format` and `unit` remember how the source file was written.
struct TouchstoneRecord {
    FrequencyGrid freqs;
    std::vector<TwoPortS> sparams;
    ReferenceImpedance ref{};
    DataFormat format = DataFormat::RI;
    FrequencyUnit unit = FrequencyUnit::GHz;
    /// Data rows exactly as read (in `unit` and `format`). The writer reuses a
    /// row verbatim when it still decodes to the stored values, which makes
    /// write(parse(text)) a fixed point after one round.
    std::vector<std::array<double, 9>> source_rows;

    /// Throws InvalidArgument if sizes disagree or entries carry a different ref.
    void validate() const;
};

std::string_view to_string(DataFormat f);
std::string_view to_string(FrequencyUnit u);
DataFormat parse_data_format(std::string_view token);
FrequencyUnit parse_frequency_unit(std::string_view token);
double unit_scale(FrequencyUnit u);

/// Parses Touchstone v1 two-port text. `source_name` is only used for messages
/// and for the port count implied by a ".sNp" extension.
TouchstoneRecord parse_touchstone(std::istream& in, std::string_view source_name = {});
TouchstoneRecord parse_touchstone(std::string_view text, std::string_view source_name = {});
TouchstoneRecord read_touchstone_file(const std::filesystem::path& path);

/// Emits the shortest exact form of every number. A zero magnitude in DB form is written as -999 dB,
/// which parse_touchstone maps back to exactly zero.
std::string write_touchstone(const TouchstoneRecord& record, DataFormat format, FrequencyUnit unit);
void write_touchstone_file(const std::filesystem::path& path, const TouchstoneRecord& record, DataFormat format,
                           FrequencyUnit unit);

inline constexpr double kDbZeroSentinel = -999.0;

/// Header `f_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im`, CRLF line endings.
void write_sparam_csv(std::ostream& out, const FrequencyGrid& freqs, const std::vector<TwoPortS>& sparams);

/// Locale-independent formatting used by every text writer here. The default
/// (precision 0) is the shortest string that reads back to exactly `v`.
std::string format_double(double v, int precision = 0);

}  // namespace herd
