#include "herd/config.hpp"

#include "herd/error.hpp"
#include "herd/touchstone.hpp"
#include "herd/units.hpp"

#include <fstream>
#include <memory>

namespace herd {

using nlohmann::json;

namespace {

double quantity(const json& v, Quantity kind, const std::string& what) {
    try {
        if (v.is_number()) {
            return v.get<double>();
        }
        if (v.is_string()) {
            return parse_quantity(v.get<std::string>(), kind);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(what + ": " + e.what());
    }
    throw ConfigError(what + ": expected a number or a quantity string");
}

double quantity_at(const json& obj, const char* key, Quantity kind, const std::string& ctx) {
    if (!obj.contains(key)) {
        throw ConfigError(ctx + ": missing '" + key + "'");
    }
    return quantity(obj.at(key), kind, ctx + "." + key);
}

std::optional<double> optional_quantity(const json& obj, const char* key, Quantity kind, const std::string& ctx) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    return quantity(obj.at(key), kind, ctx + "." + key);
}

std::pair<double, double> quantity_pair(const json& v, Quantity kind, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2) {
        throw ConfigError(ctx + ": expected a [lo, hi] pair");
    }
    return {quantity(v[0], kind, ctx + "[0]"), quantity(v[1], kind, ctx + "[1]")};
}

void check_schema(const json& j, const std::string& ctx) {
    if (!j.is_object()) {
        throw ConfigError(ctx + ": top level must be a JSON object");
    }
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
        throw ConfigError(ctx + ": missing integer 'schema_version'");
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError(ctx + ": unsupported schema_version " + j.at("schema_version").dump() + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
}

ElementKind parse_kind(const json& v, const std::string& ctx) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inductive" || s == "L") return ElementKind::inductive;
        if (s == "capacitive" || s == "C") return ElementKind::capacitive;
    }
    throw ConfigError(ctx + ": kind must be 'inductive' or 'capacitive'");
}

const char* kind_string(ElementKind k) { return k == ElementKind::inductive ? "inductive" : "capacitive"; }

}  // namespace

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

FilterDefinition parse_filter_definition(const json& j, const std::filesystem::path& base_dir) {
    check_schema(j, "filter definition");
    FilterDefinition def;
    def.name = j.value("name", std::string{});
    def.reference_impedance =
        j.contains("reference_impedance") ? quantity(j.at("reference_impedance"), Quantity::impedance, "reference_impedance")
                                          : 50.0;
    if (!j.contains("sections") || !j.at("sections").is_array() || j.at("sections").empty()) {
        throw ConfigError("filter definition: 'sections' must be a non-empty array");
    }
    const auto& sections = j.at("sections");
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const json& s = sections[i];
        const std::string ctx = "sections[" + std::to_string(i) + "]";
        if (!s.is_object()) {
            throw ConfigError(ctx + ": expected an object");
        }
        SectionSpec spec;
        spec.index = i + 1;
        if (s.contains("index") && s.at("index").get<std::size_t>() != spec.index) {
            throw ConfigError(ctx + ": sections must be listed in order starting at index 1");
        }
        spec.kind = parse_kind(s.value("kind", json{}), ctx);
        const std::string model = s.value("model", std::string("analytic"));
        if (model == "analytic") {
            spec.z0 = quantity_at(s, "z0", Quantity::impedance, ctx);
            spec.eps_eff = s.value("eps_eff", 1.0);
        } else if (model == "tabulated") {
            spec.tabulated = true;
            if (!s.contains("family") || !s.at("family").is_array() || s.at("family").size() < 2) {
                throw ConfigError(ctx + ": tabulated sections need a 'family' array of at least 2 {length, path} entries");
            }
            for (const auto& member : s.at("family")) {
                FamilyFile ff;
                ff.length = quantity_at(member, "length", Quantity::length, ctx + ".family");
                ff.path = base_dir / member.at("path").get<std::string>();
                spec.family.push_back(std::move(ff));
            }
        } else {
            throw ConfigError(ctx + ": model must be 'analytic' or 'tabulated'");
        }
        if (s.contains("bounds")) {
            spec.bounds = quantity_pair(s.at("bounds"), Quantity::length, ctx + ".bounds");
        }
        spec.fixed_length = optional_quantity(s, "fixed_length", Quantity::length, ctx);
        spec.nominal_length = optional_quantity(s, "nominal_length", Quantity::length, ctx);
        spec.hw_radius = optional_quantity(s, "hw_radius", Quantity::length, ctx);
        def.sections.push_back(std::move(spec));
    }
    return def;
}

FilterDefinition load_filter_definition(const std::filesystem::path& path) {
    auto def = parse_filter_definition(load_json(path), path.parent_path());
    def.source = path;
    return def;
}

FilterTopology build_topology(const FilterDefinition& def) {
    const ReferenceImpedance ref(def.reference_impedance);
    std::vector<SectionModel> models;
    for (const auto& s : def.sections) {
        SectionModel m;
        if (s.tabulated) {
            std::vector<std::pair<double, TouchstoneRecord>> members;
            for (const auto& ff : s.family) {
                members.emplace_back(ff.length, read_touchstone_file(ff.path));
            }
            m = SectionModel::tabulated(s.kind, std::make_shared<const SectionFamily>(build_family(std::move(members))));
        } else {
            m = SectionModel::analytic(s.kind, s.z0, s.eps_eff);
        }
        m.hw_radius = s.hw_radius;
        models.push_back(std::move(m));
    }
    return FilterTopology(std::move(models), ref);
}

Bounds section_bounds(const FilterDefinition& def) {
    Bounds b;
    for (const auto& s : def.sections) {
        if (s.fixed_length) {
            b.box.emplace_back(*s.fixed_length, *s.fixed_length);
        } else if (s.bounds) {
            b.box.push_back(*s.bounds);
        } else {
            throw ConfigError("section " + std::to_string(s.index) + " has neither 'bounds' nor 'fixed_length'");
        }
    }
    return b;
}

std::optional<LengthVector> nominal_lengths(const FilterDefinition& def) {
    LengthVector lv;
    for (const auto& s : def.sections) {
        if (s.fixed_length) {
            lv.values.push_back(*s.fixed_length);
        } else if (s.nominal_length) {
            lv.values.push_back(*s.nominal_length);
        } else {
            return std::nullopt;
        }
    }
    return lv;
}

OptimizationProblem parse_problem(const json& j, const std::filesystem::path& base_dir) {
    check_schema(j, "problem");
    OptimizationProblem p;
    if (!j.contains("filter") || !j.at("filter").is_string()) {
        throw ConfigError("problem: missing 'filter' path");
    }
    p.filter_path = base_dir / j.at("filter").get<std::string>();
    p.filter = load_filter_definition(p.filter_path);

    const json targets = j.value("targets", json::object());
    p.cost.passband_hi = optional_quantity(targets, "passband_hi", Quantity::frequency, "targets").value_or(12e9);
    p.cost.rl_target_db = optional_quantity(targets, "return_loss", Quantity::decibel, "targets").value_or(20.0);
    p.cost.stop_lo = optional_quantity(targets, "stop_lo", Quantity::frequency, "targets").value_or(15e9);
    p.cost.stop_hi = optional_quantity(targets, "stop_hi", Quantity::frequency, "targets").value_or(40e9);
    p.cost.rejection_target_db = optional_quantity(targets, "rejection", Quantity::decibel, "targets").value_or(50.0);

    const json weights = j.value("weights", json::object());
    p.cost.weights.return_loss = weights.value("return_loss", 1.0);
    p.cost.weights.rejection = weights.value("rejection", 1.0);
    p.cost.weights.ripple = weights.value("ripple", 0.1);

    const json grid = j.value("grid", json::object());
    const double g_lo = optional_quantity(grid, "start", Quantity::frequency, "grid").value_or(0.5e9);
    const double g_hi = optional_quantity(grid, "stop", Quantity::frequency, "grid").value_or(40e9);
    const std::size_t g_n = grid.value("points", std::size_t{240});
    try {
        p.cost.grid = FrequencyGrid::linear(g_lo, g_hi, g_n);
        p.cost.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }

    const json de = j.value("de", json::object());
    p.de.population_multiplier = de.value("population_multiplier", std::size_t{15});
    if (de.contains("mutation")) {
        const auto& m = de.at("mutation");
        if (!m.is_array() || m.size() != 2) {
            throw ConfigError("de.mutation: expected [lo, hi]");
        }
        p.de.mutation = {m[0].get<double>(), m[1].get<double>()};
    }
    p.de.crossover_rate = de.value("crossover", 0.7);
    p.de.max_generations = de.value("max_generations", std::size_t{3000});
    p.de.tolerance = de.value("tolerance", 1e-8);
    p.de.seed = j.value("seed", std::uint64_t{0});

    if (j.contains("bounds")) {
        const auto& arr = j.at("bounds");
        if (!arr.is_array()) {
            throw ConfigError("problem: 'bounds' must be an array of [lo, hi] pairs");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            p.bounds.box.push_back(quantity_pair(arr[i], Quantity::length, "bounds[" + std::to_string(i) + "]"));
        }
        // fixed lengths in the filter definition still win
        for (const auto& s : p.filter.sections) {
            if (s.fixed_length && s.index <= p.bounds.box.size()) {
                p.bounds.box[s.index - 1] = {*s.fixed_length, *s.fixed_length};
            }
        }
    } else {
        p.bounds = section_bounds(p.filter);
    }

    p.report = MetricBands{0.0, p.cost.passband_hi, p.cost.stop_lo, p.cost.stop_hi};
    if (j.contains("report")) {
        const json& r = j.at("report");
        p.report.pass_lo = optional_quantity(r, "pass_lo", Quantity::frequency, "report").value_or(p.report.pass_lo);
        p.report.pass_hi = optional_quantity(r, "pass_hi", Quantity::frequency, "report").value_or(p.report.pass_hi);
        p.report.stop_lo = optional_quantity(r, "stop_lo", Quantity::frequency, "report").value_or(p.report.stop_lo);
        p.report.stop_hi = optional_quantity(r, "stop_hi", Quantity::frequency, "report").value_or(p.report.stop_hi);
    }
    try {
        p.de.validate(p.filter.sections.size());
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    return p;
}

OptimizationProblem load_problem(const std::filesystem::path& path) {
    return parse_problem(load_json(path), path.parent_path());
}

LengthVector parse_length_list(std::string_view text) {
    LengthVector lv;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        try {
            lv.values.push_back(parse_quantity(piece, Quantity::length));
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("lengths: ") + e.what());
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return lv;
}

LengthVector load_lengths_file(const std::filesystem::path& path) {
    const json j = load_json(path);
    const char* key = j.contains("lengths") ? "lengths" : "best_lengths_m";
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ConfigError(path.string() + ": expected a 'lengths' array");
    }
    LengthVector lv;
    for (std::size_t i = 0; i < j.at(key).size(); ++i) {
        lv.values.push_back(quantity(j.at(key)[i], Quantity::length, path.string() + ": lengths[" + std::to_string(i) + "]"));
    }
    return lv;
}

json to_json(const FilterDefinition& def) {
    json sections = json::array();
    for (const auto& s : def.sections) {
        json o{{"index", s.index}, {"kind", kind_string(s.kind)}, {"model", s.tabulated ? "tabulated" : "analytic"}};
        if (s.tabulated) {
            json fam = json::array();
            for (const auto& ff : s.family) {
                fam.push_back({{"length_m", ff.length}, {"path", ff.path.generic_string()}});
            }
            o["family"] = fam;
        } else {
            o["z0_ohm"] = s.z0;
            o["eps_eff"] = s.eps_eff;
        }
        if (s.bounds) o["bounds_m"] = {s.bounds->first, s.bounds->second};
        if (s.fixed_length) o["fixed_length_m"] = *s.fixed_length;
        if (s.nominal_length) o["nominal_length_m"] = *s.nominal_length;
        if (s.hw_radius) o["hw_radius_m"] = *s.hw_radius;
        sections.push_back(o);
    }
    return {{"name", def.name}, {"reference_impedance_ohm", def.reference_impedance}, {"sections", sections}};
}

json to_json(const OptimizationProblem& p) {
    json bounds = json::array();
    for (const auto& [lo, hi] : p.bounds.box) bounds.push_back({lo, hi});
    return {
        {"filter_path", p.filter_path.generic_string()},
        {"filter", to_json(p.filter)},
        {"targets",
         {{"passband_hi_hz", p.cost.passband_hi},
          {"return_loss_db", p.cost.rl_target_db},
          {"stop_lo_hz", p.cost.stop_lo},
          {"stop_hi_hz", p.cost.stop_hi},
          {"rejection_db", p.cost.rejection_target_db}}},
        {"weights",
         {{"return_loss", p.cost.weights.return_loss},
          {"rejection", p.cost.weights.rejection},
          {"ripple", p.cost.weights.ripple}}},
        {"grid", {{"start_hz", p.cost.grid.front()}, {"stop_hz", p.cost.grid.back()}, {"points", p.cost.grid.size()}}},
        {"bounds_m", bounds},
        {"de",
         {{"population_multiplier", p.de.population_multiplier},
          {"mutation", {p.de.mutation.first, p.de.mutation.second}},
          {"crossover", p.de.crossover_rate},
          {"max_generations", p.de.max_generations},
          {"tolerance", p.de.tolerance}}},
        {"seed", p.de.seed},
        {"report",
         {{"pass_lo_hz", p.report.pass_lo},
          {"pass_hi_hz", p.report.pass_hi},
          {"stop_lo_hz", p.report.stop_lo},
          {"stop_hi_hz", p.report.stop_hi}}},
    };
}

}  // namespace herd
