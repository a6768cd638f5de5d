// herdfilt: evaluate, synthesize, sweep and convert stepped-impedance filter data.

#include "herd/config.hpp"
#include "herd/error.hpp"
#include "herd/synthesis.hpp"
#include "herd/touchstone.hpp"
#include "herd/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef HERD_VERSION
#define HERD_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace herd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;

/// Input problem detected by the CLI itself (missing file, bad flag value).
class InputError : public Error {
public:
    using Error::Error;
};

std::size_t worker_count() {
    const char* env = std::getenv("HERD_WORKERS");
    if (!env || !*env) {
        return 0;
    }
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0) {
        throw InputError("HERD_WORKERS must be a non-negative integer, got '" + std::string(env) + "'");
    }
    return static_cast<std::size_t>(n);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) {
        throw InputError("input file not found: " + p.string());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw InputError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    out << text;
}

/// Everything needed to replay a run lives in the manifest next to its outputs.
void write_manifest(const fs::path& path, const std::string& command, const std::vector<std::string>& argv,
                    const std::vector<fs::path>& inputs, json config, std::optional<std::uint64_t> seed) {
    json in = json::array();
    for (const auto& p : inputs) {
        in.push_back(p.generic_string());
    }
    json m{
        {"command", command},
        {"argv", argv},
        {"cwd", fs::current_path().generic_string()},
        {"inputs", in},
        {"config", std::move(config)},
        {"seed", seed ? json(*seed) : json(nullptr)},
        {"version", HERD_VERSION},
        {"timestamp", utc_timestamp()},
    };
    write_text(path, m.dump(2) + "\n");
}

double quantity_flag(const std::string& text, Quantity kind, const char* flag) {
    try {
        return parse_quantity(text, kind);
    } catch (const InvalidArgument& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
}

struct GridOptions {
    std::string start = "0.1 GHz";
    std::string stop = "40 GHz";
    std::size_t points = 400;

    void attach(CLI::App* app) {
        app->add_option("--fstart", start, "First frequency (e.g. 0.1GHz)")->capture_default_str();
        app->add_option("--fstop", stop, "Last frequency")->capture_default_str();
        app->add_option("--points", points, "Number of linearly spaced points")->capture_default_str();
    }

    FrequencyGrid grid() const {
        try {
            return FrequencyGrid::linear(quantity_flag(start, Quantity::frequency, "--fstart"),
                                         quantity_flag(stop, Quantity::frequency, "--fstop"), points);
        } catch (const InvalidArgument& e) {
            throw InputError(std::string("frequency grid: ") + e.what());
        }
    }

    json to_json() const {
        const auto g = grid();
        return {{"start_hz", g.front()}, {"stop_hz", g.back()}, {"points", g.size()}};
    }
};

struct OutputFormat {
    std::string format = "RI";
    std::string unit = "GHz";

    void attach(CLI::App* app) {
        app->add_option("--format", format, "Touchstone data format: RI, MA or DB")->capture_default_str();
        app->add_option("--unit", unit, "Touchstone frequency unit: Hz, kHz, MHz or GHz")->capture_default_str();
    }

    DataFormat data_format() const {
        try {
            return parse_data_format(format);
        } catch (const InvalidArgument& e) {
            throw InputError(std::string("--format: ") + e.what());
        }
    }
    FrequencyUnit frequency_unit() const {
        try {
            return parse_frequency_unit(unit);
        } catch (const InvalidArgument& e) {
            throw InputError(std::string("--unit: ") + e.what());
        }
    }
};

std::string fmt_db(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

double max_energy_deviation(const FilterResponse& resp) {
    double worst = 0.0;
    for (const auto& s : resp.s) {
        worst = std::max(worst, std::abs(std::norm(s.s11) + std::norm(s.s21) - 1.0));
    }
    return worst;
}

std::string metrics_text(const FilterMetrics& m, const MetricBands& bands, const FilterResponse& resp) {
    std::string t;
    t += "pass_band_hz: " + format_double(bands.pass_lo) + " " + format_double(bands.pass_hi) + "\n";
    t += "stop_band_hz: " + format_double(bands.stop_lo) + " " + format_double(bands.stop_hi) + "\n";
    t += "worst_return_loss_db: " + fmt_db(m.worst_return_loss_db) + "\n";
    t += "worst_insertion_loss_db: " + fmt_db(m.worst_insertion_loss_db) + "\n";
    t += "min_rejection_db: " + fmt_db(m.min_rejection_db) + "\n";
    t += "cutoff_3db_hz: " + (m.cutoff_hz ? format_double(*m.cutoff_hz) : std::string("none")) + "\n";
    t += "max_energy_deviation: " + format_double(max_energy_deviation(resp), 6) + "\n";
    t += "grid_points: " + std::to_string(resp.grid.size()) + "\n";
    return t;
}

void write_response(const fs::path& dir, const FilterResponse& resp, const ReferenceImpedance& ref,
                    const OutputFormat& out) {
    TouchstoneRecord rec;
    rec.freqs = resp.grid;
    rec.sparams = resp.s;
    rec.ref = ref;
    write_touchstone_file(dir / "response.s2p", rec, out.data_format(), out.frequency_unit());
    std::ofstream csv(dir / "response.csv", std::ios::binary);
    write_sparam_csv(csv, resp.grid, resp.s);
}

void print_warnings(const FilterTopology& topo) {
    for (const auto& w : topo.warnings()) {
        std::cerr << "herdfilt: warning: " << w << "\n";
    }
}

// ---------------------------------------------------------------------------

struct EvaluateCmd {
    std::string filter;
    std::string lengths;
    std::string lengths_file;
    std::string out_dir = "evaluate_out";
    std::string pass_lo = "0 Hz", pass_hi = "12 GHz", stop_lo = "15 GHz", stop_hi = "40 GHz";
    GridOptions grid;
    OutputFormat format;

    void attach(CLI::App* app) {
        app->add_option("filter", filter, "Filter definition file")->required();
        auto* inline_opt = app->add_option("--lengths", lengths, "Comma-separated section lengths, e.g. 1.06mm,2.3mm,...");
        app->add_option("--lengths-file", lengths_file, "JSON file with a 'lengths' array")->excludes(inline_opt);
        app->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
        app->add_option("--pass-lo", pass_lo, "Metrics passband lower edge")->capture_default_str();
        app->add_option("--pass-hi", pass_hi, "Metrics passband upper edge")->capture_default_str();
        app->add_option("--stop-lo", stop_lo, "Metrics stopband lower edge")->capture_default_str();
        app->add_option("--stop-hi", stop_hi, "Metrics stopband upper edge")->capture_default_str();
        grid.attach(app);
        format.attach(app);
    }

    int run(const std::vector<std::string>& argv) const {
        require_file(filter);
        const auto def = load_filter_definition(filter);
        const auto topo = build_topology(def);
        print_warnings(topo);

        std::vector<fs::path> inputs{filter};
        LengthVector lv;
        if (!lengths.empty()) {
            lv = parse_length_list(lengths);
        } else if (!lengths_file.empty()) {
            require_file(lengths_file);
            inputs.emplace_back(lengths_file);
            lv = load_lengths_file(lengths_file);
        } else if (auto nominal = nominal_lengths(def)) {
            lv = *nominal;
        } else {
            throw InputError("no lengths given and the filter definition has no nominal lengths");
        }

        const auto g = grid.grid();
        const MetricBands bands{quantity_flag(pass_lo, Quantity::frequency, "--pass-lo"),
                                quantity_flag(pass_hi, Quantity::frequency, "--pass-hi"),
                                quantity_flag(stop_lo, Quantity::frequency, "--stop-lo"),
                                quantity_flag(stop_hi, Quantity::frequency, "--stop-hi")};
        const auto resp = response(topo, lv, g);
        const auto m = metrics(resp, bands, false);

        ensure_dir(out_dir);
        write_response(out_dir, resp, topo.ref(), format);
        const std::string text = metrics_text(m, bands, resp);
        write_text(fs::path(out_dir) / "metrics.txt", text);
        json lengths_json = json::array();
        for (double v : lv.values) lengths_json.push_back(v);
        write_manifest(fs::path(out_dir) / "manifest.json", "evaluate", argv, inputs,
                       {{"filter", to_json(def)}, {"lengths_m", lengths_json}, {"grid", grid.to_json()}}, std::nullopt);
        std::cout << text;
        return kExitOk;
    }
};

struct SynthesizeCmd {
    std::string problem;
    std::string out_dir = "synthesize_out";
    OutputFormat format;

    void attach(CLI::App* app) {
        app->add_option("problem", problem, "Optimization problem file")->required();
        app->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
        format.attach(app);
    }

    int run(const std::vector<std::string>& argv) const {
        require_file(problem);
        const auto prob = load_problem(problem);
        const auto topo = build_topology(prob.filter);
        print_warnings(topo);

        const auto res = optimize_filter(topo, prob.cost, prob.bounds, prob.de, worker_count());
        const auto report = metrics(res.response, prob.report, false);

        ensure_dir(out_dir);
        const fs::path dir(out_dir);
        json best = json::array();
        for (double v : res.opt.best) best.push_back(v);
        const json result{
            {"best_lengths_m", best},
            {"best_cost", res.opt.best_cost},
            {"generations", res.opt.generations},
            {"evaluations", res.opt.evaluations},
            {"converged", res.opt.converged},
            {"metrics",
             {{"worst_return_loss_db", report.worst_return_loss_db},
              {"worst_insertion_loss_db", report.worst_insertion_loss_db},
              {"min_rejection_db", report.min_rejection_db},
              {"cutoff_3db_hz", report.cutoff_hz ? json(*report.cutoff_hz) : json(nullptr)}}},
        };
        write_text(dir / "result.json", result.dump(2) + "\n");

        std::string history = "generation,best_cost\r\n";
        for (std::size_t g = 0; g < res.opt.cost_history.size(); ++g) {
            history += std::to_string(g + 1) + "," + format_double(res.opt.cost_history[g]) + "\r\n";
        }
        write_text(dir / "cost_history.csv", history);
        write_response(dir, res.response, topo.ref(), format);
        const std::string text = metrics_text(report, prob.report, res.response);
        write_text(dir / "metrics.txt", text);
        write_manifest(dir / "manifest.json", "synthesize", argv, {problem, prob.filter_path}, to_json(prob),
                       prob.de.seed);

        std::cout << "section  length_mm\n";
        for (std::size_t i = 0; i < res.opt.best.size(); ++i) {
            std::ostringstream row;
            row.precision(4);
            row << std::fixed << res.opt.best[i] * 1e3;
            std::cout << (i + 1 < 10 ? " " : "") << i + 1 << "       " << row.str() << "\n";
        }
        std::cout << "best_cost: " << format_double(res.opt.best_cost) << "\n"
                  << "generations: " << res.opt.generations << "\n"
                  << "converged: " << (res.opt.converged ? "true" : "false") << "\n"
                  << text;
        if (!res.opt.converged) {
            std::cerr << "herdfilt: error: not-converged: optimizer reached max_generations without meeting the "
                         "tolerance; results written to "
                      << dir.string() << "\n";
            return kExitNotConverged;
        }
        return kExitOk;
    }
};

struct SweepCmd {
    std::string filter;
    std::size_t section = 0;
    std::string from, to;
    std::size_t steps = 0;
    std::string out_dir = "sweep_out";
    GridOptions grid;
    OutputFormat format;

    void attach(CLI::App* app) {
        app->add_option("filter", filter, "Filter definition file")->required();
        app->add_option("--section", section, "1-based half-section index")->required();
        app->add_option("--from", from, "First length (e.g. 2.5mm)")->required();
        app->add_option("--to", to, "Last length")->required();
        app->add_option("--steps", steps, "Number of lengths (>= 2)")->required();
        app->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
        grid.attach(app);
        format.attach(app);
    }

    int run(const std::vector<std::string>& argv) const {
        require_file(filter);
        const auto def = load_filter_definition(filter);
        const auto topo = build_topology(def);
        if (section < 1 || section > topo.size()) {
            throw InputError("--section must be in 1.." + std::to_string(topo.size()));
        }
        if (steps < 2) {
            throw InputError("--steps must be >= 2");
        }
        const double lo = quantity_flag(from, Quantity::length, "--from");
        const double hi = quantity_flag(to, Quantity::length, "--to");
        if (!(lo >= 0.0) || !(hi > lo)) {
            throw InputError("sweep range needs 0 <= from < to");
        }
        const auto& spec = def.sections[section - 1];
        if (spec.bounds && (lo < spec.bounds->first || hi > spec.bounds->second)) {
            throw OutOfRange("sweep range leaves section " + std::to_string(section) + " bounds [" +
                             format_double(spec.bounds->first) + ", " + format_double(spec.bounds->second) + "] m");
        }
        const auto& model = topo.half_sections()[section - 1];
        const auto g = grid.grid();

        ensure_dir(out_dir);
        const fs::path dir(out_dir);
        std::string csv = "length_m,f_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im\r\n";
        json files = json::array();
        for (std::size_t k = 0; k < steps; ++k) {
            const double len =
                k + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
            TouchstoneRecord rec;
            rec.freqs = g;
            rec.ref = topo.ref();
            for (const double hz : g.hz()) {
                rec.sparams.push_back(abcd_to_s(section_abcd(model, Frequency(hz), len), topo.ref()));
            }
            char name[64];
            std::snprintf(name, sizeof name, "section%02zu_%02zu.s2p", section, k);
            const std::string text = "! section " + std::to_string(section) + " length_m " + format_double(len) +
                                     "\n" + write_touchstone(rec, format.data_format(), format.frequency_unit());
            write_text(dir / name, text);
            files.push_back({{"length", format_double(len)}, {"path", name}});
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto& s = rec.sparams[i];
                csv += format_double(len) + "," + format_double(g[i]);
                for (const Complex z : {s.s11, s.s21, s.s12, s.s22}) {
                    csv += "," + format_double(z.real()) + "," + format_double(z.imag());
                }
                csv += "\r\n";
            }
        }
        write_text(dir / "sweep.csv", csv);
        // ready to paste into a tabulated section's "family" entry
        write_text(dir / "family.json", json{{"family", files}}.dump(2) + "\n");
        write_manifest(dir / "manifest.json", "sweep", argv, {filter},
                       {{"filter", to_json(def)},
                        {"section", section},
                        {"from_m", lo},
                        {"to_m", hi},
                        {"steps", steps},
                        {"grid", grid.to_json()}},
                       std::nullopt);
        std::cout << "wrote " << steps << " files to " << dir.string() << "\n";
        return kExitOk;
    }
};

struct ConvertCmd {
    std::string input, output;
    OutputFormat format;

    void attach(CLI::App* app) {
        app->add_option("input", input, "Input .s2p file")->required();
        app->add_option("output", output, "Output .s2p file")->required();
        format.attach(app);
    }

    int run(const std::vector<std::string>& argv) const {
        require_file(input);
        if (fs::exists(output) && fs::equivalent(input, output)) {
            throw InputError("output would overwrite the input file");
        }
        const auto rec = read_touchstone_file(input);
        write_touchstone_file(output, rec, format.data_format(), format.frequency_unit());
        write_manifest(output + ".manifest.json", "convert", argv, {input},
                       {{"format", std::string(to_string(format.data_format()))},
                        {"unit", std::string(to_string(format.frequency_unit()))}},
                       std::nullopt);
        std::cout << "wrote " << rec.freqs.size() << " points to " << output << "\n";
        return kExitOk;
    }
};

int dispatch(const std::vector<std::string>& args);

struct ReplayCmd {
    std::string manifest;

    void attach(CLI::App* app) { app->add_option("manifest", manifest, "manifest.json written by a previous run")->required(); }

    int run() const {
        require_file(manifest);
        const json m = load_json(manifest);
        if (!m.contains("argv") || !m.at("argv").is_array() || !m.contains("cwd")) {
            throw InputError(manifest + ": not a run manifest");
        }
        const auto args = m.at("argv").get<std::vector<std::string>>();
        if (!args.empty() && args.front() == "replay") {
            throw InputError(manifest + ": refusing to replay a replay");
        }
        fs::current_path(m.at("cwd").get<std::string>());
        return dispatch(args);
    }
};

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Stepped-impedance low-pass filter synthesis toolkit", "herdfilt"};
    app.set_version_flag("--version", HERD_VERSION);
    app.require_subcommand(1);

    EvaluateCmd evaluate;
    SynthesizeCmd synthesize;
    SweepCmd sweep;
    ConvertCmd convert;
    ReplayCmd replay;
    auto* ev = app.add_subcommand("evaluate", "Evaluate a filter for given section lengths");
    evaluate.attach(ev);
    auto* sy = app.add_subcommand("synthesize", "Optimize section lengths for a problem file");
    synthesize.attach(sy);
    auto* sw = app.add_subcommand("sweep", "Sweep one section's length and write a Touchstone family");
    sweep.attach(sw);
    auto* cv = app.add_subcommand("convert", "Rewrite a Touchstone file in another format/unit");
    convert.attach(cv);
    auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay.attach(rp);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        throw InputError(e.what());
    }

    if (ev->parsed()) return evaluate.run(args);
    if (sy->parsed()) return synthesize.run(args);
    if (sw->parsed()) return sweep.run(args);
    if (cv->parsed()) return convert.run(args);
    return replay.run();
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

const char* error_tag(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const OutOfRange*>(&e)) return "out-of-range";
    if (dynamic_cast<const FamilyError*>(&e)) return "family";
    return "input";
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(true);
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dispatch(args);
    } catch (const std::exception& e) {
        std::cerr << "herdfilt: error: " << error_tag(e) << ": " << one_line(e.what()) << "\n";
        return kExitInput;
    }
}
