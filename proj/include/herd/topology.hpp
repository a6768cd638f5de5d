#pragma once

// Symmetric stepped-impedance filter: a half-filter of alternating
// capacitive/inductive sections is mirrored about its capacitive center
// section, and the chain matrices of all sections are multiplied in order.

#include "herd/netparams.hpp"
#include "herd/section_family.hpp"
#include "herd/tlmodels.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace herd {

/// Number of free lengths in the standard 21-section filter.
inline constexpr std::size_t kHalfSections = 11;

/// Uniform TEM line whose length is the free parameter.
struct AnalyticBody {
    double z0 = 50.0;
    double eps_eff = 1.0;
};

/// Section described by tabulated S-parameters over (f, length).
struct TabulatedBody {
    std::shared_ptr<const SectionFamily> family;
};

struct SectionModel {
    ElementKind kind = ElementKind::capacitive;
    std::variant<AnalyticBody, TabulatedBody> body;
    /// Hollow-waveguide radius carried for reporting only, meters.
    std::optional<double> hw_radius;

    static SectionModel analytic(ElementKind kind, double z0, double eps_eff = 1.0);
    static SectionModel tabulated(ElementKind kind, std::shared_ptr<const SectionFamily> family);

    bool is_tabulated() const noexcept { return std::holds_alternative<TabulatedBody>(body); }
};

/// Free section lengths in meters, index 0 is section 1.
struct LengthVector {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Half of a mirror-symmetric filter. Section 1 sits at the ports, the last
/// section is the capacitive center, and kinds alternate in between, so odd
/// (1-based) indices are capacitive and even indices inductive.
class FilterTopology {
public:
    FilterTopology(std::vector<SectionModel> half_sections, ReferenceImpedance ref);

    const std::vector<SectionModel>& half_sections() const noexcept { return sections_; }
    const ReferenceImpedance& ref() const noexcept { return ref_; }
    std::size_t size() const noexcept { return sections_.size(); }

    /// Non-fatal observations made at construction (e.g. mirror-asymmetric tabulated data).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// True when no section is tabulated; every section is then mirror-symmetric.
    bool all_analytic() const noexcept { return all_analytic_; }

private:
    std::vector<SectionModel> sections_;
    ReferenceImpedance ref_;
    std::vector<std::string> warnings_;
    bool all_analytic_ = true;
};

/// One factor of the full product: 1-based half-section index and the length it is evaluated at.
struct ExpandedSection {
    std::size_t index;
    double length;

    friend bool operator==(const ExpandedSection&, const ExpandedSection&) = default;
};

/// Sections 1..n then n..1. Each of the two center factors carries half the
/// center length, so the physical center section is lengths[n-1] long.
std::vector<ExpandedSection> expand_symmetric(const LengthVector& lengths);

/// Chain matrix of one section at the given length.
TwoPortABCD section_abcd(const SectionModel& model, Frequency f, double length);

struct FilterResponse {
    FrequencyGrid grid;
    std::vector<TwoPortS> s;
};

/// Full-filter S-parameters at every grid point. Section errors are rethrown
/// with the section index and frequency prepended.
FilterResponse response(const FilterTopology& topology, const LengthVector& lengths, const FrequencyGrid& grid);

/// Frequency bands a metric summary is taken over, Hz (inclusive).
struct MetricBands {
    double pass_lo = 0.0;
    double pass_hi = 12e9;
    double stop_lo = 15e9;
    double stop_hi = 40e9;
};

struct FilterMetrics {
    double worst_return_loss_db;      ///< min -|s11|dB in the passband; +inf for a perfect match
    double worst_insertion_loss_db;   ///< max -|s21|dB in the passband
    double min_rejection_db;          ///< min -|s21|dB in the stopband
    std::optional<double> cutoff_hz;  ///< first -3 dB crossing of |s21|
};

/// First downward crossing of -3 dB in |s21|, linearly interpolated in dB.
/// Throws UnbracketedCutoff when there is none inside the grid.
double cutoff_3db(const FilterResponse& resp);

/// Throws GridCoverage when a band holds no grid points. With require_cutoff,
/// a missing -3 dB crossing throws UnbracketedCutoff; otherwise cutoff_hz is empty.
FilterMetrics metrics(const FilterResponse& resp, const MetricBands& bands, bool require_cutoff = true);

}  // namespace herd
