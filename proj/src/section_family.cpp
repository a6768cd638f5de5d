#include "herd/section_family.hpp"

#include "herd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace herd {

namespace {

Complex lerp(Complex a, Complex b, double t) { return a * (1.0 - t) + b * t; }

TwoPortS lerp(const TwoPortS& a, const TwoPortS& b, double t) {
    TwoPortS s;
    s.ref = a.ref;
    s.s11 = lerp(a.s11, b.s11, t);
    s.s12 = lerp(a.s12, b.s12, t);
    s.s21 = lerp(a.s21, b.s21, t);
    s.s22 = lerp(a.s22, b.s22, t);
    return s;
}

// Index i of the cell [x[i], x[i+1]] holding v, plus the fractional position.
// v must already be inside [x.front(), x.back()].
std::pair<std::size_t, double> locate(std::span<const double> x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    if (hi >= x.size()) {
        hi = x.size() - 1;
    }
    if (hi == 0) {
        hi = 1;
    }
    const std::size_t lo = hi - 1;
    return {lo, (v - x[lo]) / (x[hi] - x[lo])};
}

TwoPortS resample(const TouchstoneRecord& rec, double f) {
    const auto [i, t] = locate(rec.freqs.hz(), f);
    if (t == 0.0) {
        return rec.sparams[i];
    }
    if (t == 1.0) {
        return rec.sparams[i + 1];
    }
    return lerp(rec.sparams[i], rec.sparams[i + 1], t);
}

}  // namespace

SectionFamily::SectionFamily(std::vector<double> lengths, FrequencyGrid freqs, ReferenceImpedance ref,
                             std::vector<std::vector<TwoPortS>> data)
    : lengths_(std::move(lengths)), freqs_(std::move(freqs)), ref_(ref), data_(std::move(data)) {
    if (lengths_.size() < 2 || freqs_.size() < 2) {
        throw FamilyError("section family needs at least 2 lengths and 2 frequencies");
    }
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (!std::isfinite(lengths_[i]) || lengths_[i] < 0.0) {
            throw FamilyError("section family lengths must be finite and >= 0");
        }
        if (i > 0 && !(lengths_[i] > lengths_[i - 1])) {
            throw FamilyError("section family lengths must be strictly increasing");
        }
    }
    if (data_.size() != lengths_.size()) {
        throw FamilyError("section family needs one member per length");
    }
    for (const auto& row : data_) {
        if (row.size() != freqs_.size()) {
            throw FamilyError("section family members must share the frequency grid");
        }
        for (const auto& s : row) {
            if (!(s.ref == ref_)) {
                throw FamilyError("section family members must share the reference impedance");
            }
        }
    }
}

TouchstoneRecord SectionFamily::member(std::size_t length_idx) const {
    TouchstoneRecord rec;
    rec.freqs = freqs_;
    rec.sparams = data_.at(length_idx);
    rec.ref = ref_;
    return rec;
}

double SectionFamily::asymmetry() const {
    double worst = 0.0;
    for (const auto& row : data_) {
        for (const auto& s : row) {
            worst = std::max(worst, std::abs(s.s11 - s.s22));
        }
    }
    return worst;
}

SectionFamily build_family(std::vector<std::pair<double, TouchstoneRecord>> members) {
    if (members.size() < 2) {
        throw FamilyError("section family needs at least 2 members, got " + std::to_string(members.size()));
    }
    for (const auto& [len, rec] : members) {
        rec.validate();
        if (rec.freqs.empty()) {
            throw FamilyError("section family member at length " + std::to_string(len) + " has no data");
        }
    }
    std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i].first == members[i - 1].first) {
            throw FamilyError("duplicate section length " + std::to_string(members[i].first));
        }
    }
    const ReferenceImpedance ref = members.front().second.ref;
    double lo = members.front().second.freqs.front();
    double hi = members.front().second.freqs.back();
    for (const auto& [len, rec] : members) {
        if (!(rec.ref == ref)) {
            throw FamilyError("mismatched reference impedances in section family (" + std::to_string(ref.ohms()) +
                              " vs " + std::to_string(rec.ref.ohms()) + " ohm)");
        }
        lo = std::max(lo, rec.freqs.front());
        hi = std::min(hi, rec.freqs.back());
    }
    if (!(hi > lo)) {
        throw FamilyError("section family members have disjoint frequency ranges");
    }

    std::vector<double> grid;
    for (const auto& [len, rec] : members) {
        for (const double f : rec.freqs.hz()) {
            if (f >= lo && f <= hi) {
                grid.push_back(f);
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) {
        throw FamilyError("section family common frequency range holds fewer than 2 points");
    }

    std::vector<double> lengths;
    std::vector<std::vector<TwoPortS>> data;
    for (const auto& [len, rec] : members) {
        lengths.push_back(len);
        std::vector<TwoPortS> row;
        row.reserve(grid.size());
        for (const double f : grid) {
            row.push_back(resample(rec, f));
        }
        data.push_back(std::move(row));
    }
    return SectionFamily(std::move(lengths), FrequencyGrid(std::move(grid)), ref, std::move(data));
}

TwoPortS interp_s(const SectionFamily& family, Frequency f, double length) {
    if (f.hz() < family.min_freq() || f.hz() > family.max_freq()) {
        throw OutOfRange("frequency " + std::to_string(f.hz()) + " Hz outside tabulated range [" +
                         std::to_string(family.min_freq()) + ", " + std::to_string(family.max_freq()) + "] Hz");
    }
    if (!(length >= family.min_length() && length <= family.max_length())) {
        throw OutOfRange("length " + std::to_string(length) + " m outside tabulated range [" +
                         std::to_string(family.min_length()) + ", " + std::to_string(family.max_length()) + "] m");
    }
    const auto [fi, ft] = locate(family.freqs().hz(), f.hz());
    const auto [li, lt] = locate(family.lengths(), length);
    const TwoPortS at_lo = lerp(family.node(li, fi), family.node(li, fi + 1), ft);
    const TwoPortS at_hi = lerp(family.node(li + 1, fi), family.node(li + 1, fi + 1), ft);
    return lerp(at_lo, at_hi, lt);
}

TwoPortABCD family_to_abcd(const SectionFamily& family, Frequency f, double length) {
    return s_to_abcd(interp_s(family, f, length));
}

}  // namespace herd
