#include "herd/touchstone.hpp"

#include "herd/constants.hpp"
#include "herd/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace herd {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

bool parse_number(std::string_view tok, double& out) {
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string where(std::string_view source, std::size_t line_no) {
    std::string s = source.empty() ? std::string("<input>") : std::string(source);
    return s + ":" + std::to_string(line_no) + ": ";
}

// Port count implied by a ".sNp" extension, or 0 when there is none.
int ports_from_name(std::string_view name) {
    const auto dot = name.rfind('.');
    if (dot == std::string_view::npos || dot + 3 > name.size()) {
        return 0;
    }
    const std::string ext = upper(name.substr(dot + 1));
    if (ext.size() < 3 || ext.front() != 'S' || ext.back() != 'P') {
        return 0;
    }
    int n = 0;
    const auto digits = std::string_view(ext).substr(1, ext.size() - 2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        return 0;
    }
    return n;
}

Complex decode_pair(double x, double y, DataFormat fmt) {
    switch (fmt) {
    case DataFormat::RI:
        return {x, y};
    case DataFormat::MA:
        return std::polar(x, y * kPi / 180.0);
    case DataFormat::DB:
        if (x <= kDbZeroSentinel) {
            return {0.0, 0.0};
        }
        return std::polar(std::pow(10.0, x / 20.0), y * kPi / 180.0);
    }
    return {};
}

std::pair<double, double> encode_pair(Complex z, DataFormat fmt) {
    switch (fmt) {
    case DataFormat::RI:
        return {z.real(), z.imag()};
    case DataFormat::MA:
        return {std::abs(z), std::arg(z) * 180.0 / kPi};
    case DataFormat::DB: {
        const double mag = std::abs(z);
        const double db = mag == 0.0 ? kDbZeroSentinel : 20.0 * std::log10(mag);
        return {db, std::arg(z) * 180.0 / kPi};
    }
    }
    return {};
}

bool row_matches(const std::array<double, 9>& v, double hz, const TwoPortS& s, DataFormat fmt, double scale) {
    return v[0] * scale == hz && decode_pair(v[1], v[2], fmt) == s.s11 && decode_pair(v[3], v[4], fmt) == s.s21 &&
           decode_pair(v[5], v[6], fmt) == s.s12 && decode_pair(v[7], v[8], fmt) == s.s22;
}

}  // namespace

void TouchstoneRecord::validate() const {
    if (freqs.size() != sparams.size()) {
        throw InvalidArgument("Touchstone record needs one S-matrix per frequency");
    }
    for (const auto& s : sparams) {
        if (!(s.ref == ref)) {
            throw InvalidArgument("Touchstone record entries must share the record reference impedance");
        }
    }
}

std::string_view to_string(DataFormat f) {
    switch (f) {
    case DataFormat::RI: return "RI";
    case DataFormat::MA: return "MA";
    case DataFormat::DB: return "DB";
    }
    return "?";
}

std::string_view to_string(FrequencyUnit u) {
    switch (u) {
    case FrequencyUnit::Hz: return "Hz";
    case FrequencyUnit::kHz: return "kHz";
    case FrequencyUnit::MHz: return "MHz";
    case FrequencyUnit::GHz: return "GHz";
    }
    return "?";
}

DataFormat parse_data_format(std::string_view token) {
    const std::string t = upper(token);
    if (t == "RI") return DataFormat::RI;
    if (t == "MA") return DataFormat::MA;
    if (t == "DB") return DataFormat::DB;
    throw InvalidArgument("unknown data format '" + std::string(token) + "' (expected RI, MA or DB)");
}

FrequencyUnit parse_frequency_unit(std::string_view token) {
    const std::string t = upper(token);
    if (t == "HZ") return FrequencyUnit::Hz;
    if (t == "KHZ") return FrequencyUnit::kHz;
    if (t == "MHZ") return FrequencyUnit::MHz;
    if (t == "GHZ") return FrequencyUnit::GHz;
    throw InvalidArgument("unknown frequency unit '" + std::string(token) + "' (expected Hz, kHz, MHz or GHz)");
}

double unit_scale(FrequencyUnit u) {
    switch (u) {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

TouchstoneRecord parse_touchstone(std::istream& in, std::string_view source_name) {
    if (const int n = ports_from_name(source_name); n != 0 && n != 2) {
        throw ParseError(ParseError::Kind::port_count,
                         std::string(source_name) + ": only 2-port files are supported, extension implies " +
                             std::to_string(n) + " ports");
    }

    // Touchstone v1 defaults when no option line precedes the data.
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat fmt = DataFormat::MA;
    double r0 = 50.0;
    bool seen_option = false;

    std::vector<double> freqs;
    std::vector<Complex> raw;  // s11 s21 s12 s22 per point
    std::vector<std::array<double, 9>> rows;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto bang = view.find('!'); bang != std::string_view::npos) {
            view = view.substr(0, bang);
        }
        const auto tokens = split_ws(view);
        if (tokens.empty()) {
            continue;
        }

        if (tokens.front().front() == '#') {
            if (seen_option) {
                continue;  // v1: only the first option line counts
            }
            seen_option = true;
            std::vector<std::string> opts;
            if (tokens.front().size() > 1) {
                opts.push_back(upper(tokens.front().substr(1)));
            }
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                opts.push_back(upper(tokens[i]));
            }
            for (std::size_t i = 0; i < opts.size(); ++i) {
                const std::string& o = opts[i];
                if (o == "HZ" || o == "KHZ" || o == "MHZ" || o == "GHZ") {
                    unit = parse_frequency_unit(o);
                } else if (o == "RI" || o == "MA" || o == "DB") {
                    fmt = parse_data_format(o);
                } else if (o == "S") {
                } else if (o == "Y" || o == "Z" || o == "G" || o == "H") {
                    throw ParseError(ParseError::Kind::malformed_option,
                                     where(source_name, line_no) + "only S parameters are supported, got " + o);
                } else if (o == "R") {
                    if (i + 1 >= opts.size() || !parse_number(opts[i + 1], r0) || !(r0 > 0.0)) {
                        throw ParseError(ParseError::Kind::malformed_option,
                                         where(source_name, line_no) + "option line 'R' needs a positive impedance");
                    }
                    ++i;
                } else {
                    throw ParseError(ParseError::Kind::malformed_option,
                                     where(source_name, line_no) + "unrecognized option token '" + o + "'");
                }
            }
            continue;
        }

        if (tokens.size() == 3) {
            throw ParseError(ParseError::Kind::port_count,
                             where(source_name, line_no) + "3-column data looks like a 1-port file; only 2-port is supported");
        }
        if (tokens.size() != 9) {
            throw ParseError(ParseError::Kind::column_count, where(source_name, line_no) + "expected 9 columns, got " +
                                                                 std::to_string(tokens.size()));
        }
        double v[9];
        for (std::size_t i = 0; i < 9; ++i) {
            if (!parse_number(tokens[i], v[i]) || !std::isfinite(v[i])) {
                throw ParseError(ParseError::Kind::bad_number,
                                 where(source_name, line_no) + "cannot parse number '" + std::string(tokens[i]) + "'");
            }
        }
        const double f = v[0] * unit_scale(unit);
        if (!(f > 0.0)) {
            throw ParseError(ParseError::Kind::bad_number, where(source_name, line_no) + "frequency must be > 0");
        }
        if (!freqs.empty() && !(f > freqs.back())) {
            throw ParseError(ParseError::Kind::non_monotonic,
                             where(source_name, line_no) + "frequencies must be strictly increasing");
        }
        freqs.push_back(f);
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
        for (int k = 0; k < 4; ++k) {
            raw.push_back(decode_pair(v[1 + 2 * k], v[2 + 2 * k], fmt));
        }
    }

    if (freqs.empty()) {
        throw ParseError(ParseError::Kind::no_data, where(source_name, line_no) + "no data points");
    }

    TouchstoneRecord rec;
    rec.ref = ReferenceImpedance(r0);
    rec.format = fmt;
    rec.unit = unit;
    rec.sparams.reserve(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        TwoPortS s;
        s.ref = rec.ref;
        s.s11 = raw[4 * i + 0];
        s.s21 = raw[4 * i + 1];
        s.s12 = raw[4 * i + 2];
        s.s22 = raw[4 * i + 3];
        rec.sparams.push_back(s);
    }
    rec.freqs = FrequencyGrid(std::move(freqs));
    rec.source_rows = std::move(rows);
    return rec;
}

TouchstoneRecord parse_touchstone(std::string_view text, std::string_view source_name) {
    std::istringstream in{std::string(text)};
    return parse_touchstone(in, source_name);
}

TouchstoneRecord read_touchstone_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return parse_touchstone(in, path.string());
}

std::string format_double(double v, int precision) {
    char buf[64];
    auto [ptr, ec] = precision > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision)
                                   : std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, ptr);
}

std::string write_touchstone(const TouchstoneRecord& record, DataFormat format, FrequencyUnit unit) {
    record.validate();
    if (record.freqs.empty()) {
        throw InvalidArgument("cannot write an empty Touchstone record");
    }
    std::string out;
    out += "! 2-port S-parameters\n";
    out += "# ";
    out += to_string(unit);
    out += " S ";
    out += to_string(format);
    out += " R ";
    out += format_double(record.ref.ohms());
    out += '\n';
    const double scale = unit_scale(unit);
    const bool same_layout =
        format == record.format && unit == record.unit && record.source_rows.size() == record.freqs.size();
    for (std::size_t i = 0; i < record.freqs.size(); ++i) {
        const auto& s = record.sparams[i];
        if (same_layout && row_matches(record.source_rows[i], record.freqs[i], s, format, scale)) {
            for (std::size_t k = 0; k < 9; ++k) {
                if (k > 0) out += ' ';
                out += format_double(record.source_rows[i][k]);
            }
            out += '\n';
            continue;
        }
        out += format_double(record.freqs[i] / scale);
        for (const Complex z : {s.s11, s.s21, s.s12, s.s22}) {
            const auto [x, y] = encode_pair(z, format);
            out += ' ';
            out += format_double(x);
            out += ' ';
            out += format_double(y);
        }
        out += '\n';
    }
    return out;
}

void write_touchstone_file(const std::filesystem::path& path, const TouchstoneRecord& record, DataFormat format,
                           FrequencyUnit unit) {
    const std::string text = write_touchstone(record, format, unit);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << text;
}

void write_sparam_csv(std::ostream& out, const FrequencyGrid& freqs, const std::vector<TwoPortS>& sparams) {
    if (freqs.size() != sparams.size()) {
        throw InvalidArgument("CSV export needs one S-matrix per frequency");
    }
    out << "f_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im\r\n";
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const auto& s = sparams[i];
        out << format_double(freqs[i]);
        for (const Complex z : {s.s11, s.s21, s.s12, s.s22}) {
            out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        }
        out << "\r\n";
    }
}

}  // namespace herd
