#pragma once

// S-parameters of one section type tabulated over (frequency, physical length),
// with bilinear interpolation between the tabulated nodes.

#include "herd/netparams.hpp"
#include "herd/touchstone.hpp"

#include <utility>
#include <vector>

namespace herd {

class SectionFamily {
public:
    /// Members share `freqs` and `ref`; `lengths` strictly increasing.
    /// Prefer build_family(), which resamples arbitrary inputs into this form.
    SectionFamily(std::vector<double> lengths, FrequencyGrid freqs, ReferenceImpedance ref,
                  std::vector<std::vector<TwoPortS>> data);

    const std::vector<double>& lengths() const noexcept { return lengths_; }
    const FrequencyGrid& freqs() const noexcept { return freqs_; }
    const ReferenceImpedance& ref() const noexcept { return ref_; }

    double min_length() const { return lengths_.front(); }
    double max_length() const { return lengths_.back(); }
    double min_freq() const { return freqs_.front(); }
    double max_freq() const { return freqs_.back(); }

    /// Stored value at node (length index, frequency index).
    const TwoPortS& node(std::size_t length_idx, std::size_t freq_idx) const {
        return data_[length_idx][freq_idx];
    }

    /// Member `length_idx` as a Touchstone record.
    TouchstoneRecord member(std::size_t length_idx) const;

    /// Largest |s11 - s22| over all nodes; nonzero means the section is not mirror-symmetric.
    double asymmetry() const;

private:
    std::vector<double> lengths_;
    FrequencyGrid freqs_;
    ReferenceImpedance ref_;
    std::vector<std::vector<TwoPortS>> data_;
};

/// Sorts members by length and resamples them (linear in f on real/imag
/// parts) onto the union of member frequency points inside the common range.
/// Throws FamilyError on fewer than 2 members, duplicate lengths, mismatched
/// reference impedances or a common range with fewer than 2 points.
SectionFamily build_family(std::vector<std::pair<double, TouchstoneRecord>> members);

/// Bilinear interpolation of real and imaginary parts over the (f, length) cell.
/// No extrapolation: throws OutOfRange outside the tabulated rectangle.
TwoPortS interp_s(const SectionFamily& family, Frequency f, double length);

/// s_to_abcd(interp_s(...)).
TwoPortABCD family_to_abcd(const SectionFamily& family, Frequency f, double length);

}  // namespace herd
