#pragma once

// Filter definition and optimization problem files (JSON). Quantities may be
// bare SI numbers or strings with a unit suffix ("2.5 mm", "12 GHz").

#include "herd/cost.hpp"
#include "herd/differential_evolution.hpp"
#include "herd/topology.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace herd {

inline constexpr int kSchemaVersion = 1;

struct FamilyFile {
    double length;  ///< meters
    std::filesystem::path path;
};

struct SectionSpec {
    std::size_t index = 0;
    ElementKind kind = ElementKind::capacitive;
    bool tabulated = false;
    double z0 = 50.0;  ///< analytic only
    double eps_eff = 1.0;
    std::vector<FamilyFile> family;  ///< tabulated only, paths resolved
    std::optional<std::pair<double, double>> bounds;
    std::optional<double> fixed_length;
    std::optional<double> nominal_length;
    std::optional<double> hw_radius;
};

struct FilterDefinition {
    std::string name;
    double reference_impedance = 50.0;
    std::vector<SectionSpec> sections;
    std::filesystem::path source;
};

FilterDefinition parse_filter_definition(const nlohmann::json& j, const std::filesystem::path& base_dir);
FilterDefinition load_filter_definition(const std::filesystem::path& path);

/// Reads every referenced Touchstone family and assembles the topology.
FilterTopology build_topology(const FilterDefinition& def);

/// Per-section optimizer box; fixed lengths collapse to a point.
/// Throws ConfigError when a free section has no bounds.
Bounds section_bounds(const FilterDefinition& def);

/// The definition's nominal lengths, if every section declares one.
std::optional<LengthVector> nominal_lengths(const FilterDefinition& def);

struct OptimizationProblem {
    std::filesystem::path filter_path;
    FilterDefinition filter;
    CostSpec cost;
    DEConfig de;
    Bounds bounds;
    MetricBands report;  ///< bands the final metrics summary is computed over
};

OptimizationProblem parse_problem(const nlohmann::json& j, const std::filesystem::path& base_dir);
OptimizationProblem load_problem(const std::filesystem::path& path);

/// "1.06mm,2.3mm,..." or bare meters.
LengthVector parse_length_list(std::string_view text);

/// JSON file with a "lengths" array (or a synthesis result's "best_lengths_m").
LengthVector load_lengths_file(const std::filesystem::path& path);

nlohmann::json load_json(const std::filesystem::path& path);

/// Resolved, SI-normalized snapshot of a problem, for manifests.
nlohmann::json to_json(const OptimizationProblem& problem);
nlohmann::json to_json(const FilterDefinition& def);

}  // namespace herd
