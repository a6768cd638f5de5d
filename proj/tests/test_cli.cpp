// Drives the herdfilt binary end to end through the shell.
#include "herd/config.hpp"
#include "herd/touchstone.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace herd;
namespace fs = std::filesystem;

namespace {

const fs::path kData = HERD_DATA_DIR;
const fs::path kExe = HERDFILT_EXE;

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Sandbox {
public:
    explicit Sandbox(const std::string& name) : dir_(fs::temp_directory_path() / ("herd_cli_" + name)) {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }
    const fs::path& dir() const { return dir_; }
    fs::path operator/(const std::string& p) const { return dir_ / p; }

    Run run(const std::string& args) const {
        const fs::path out = dir_ / ".stdout", err = dir_ / ".stderr";
        const std::string cmd = "cd '" + dir_.string() + "' && HERD_WORKERS=1 '" + kExe.string() + "' " + args +
                                " >'" + out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

private:
    fs::path dir_;
};

std::string filter_path() { return "'" + (kData / "filters" / "analytic_21.json").string() + "'"; }

std::string metric(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + ": ");
    REQUIRE(pos != std::string::npos);
    const auto end = text.find('\n', pos);
    return text.substr(pos + key.size() + 2, end - pos - key.size() - 2);
}

void write_small_problem(const Sandbox& box, const std::string& bounds, std::size_t max_gen) {
    std::ofstream(box / "filter.json") << R"({
        "schema_version": 1,
        "sections": [
            {"kind": "C", "z0": 22.1, "bounds": ["0.5 mm", "3 mm"]},
            {"kind": "L", "z0": 85.9, "bounds": ["0.5 mm", "5 mm"]},
            {"kind": "C", "z0": 22.1, "bounds": ["0.5 mm", "3 mm"]}
        ]
    })";
    std::ofstream(box / "problem.json") << R"({
        "schema_version": 1,
        "filter": "filter.json",
        "grid": {"start": "0.5 GHz", "stop": "40 GHz", "points": 60},
        "de": {"max_generations": )" << max_gen << R"(},
        "seed": 3)" << bounds << R"(
    })";
}

}  // namespace

TEST_CASE("evaluate the bundled design") {
    Sandbox box("evaluate");
    const auto r = box.run("evaluate " + filter_path() + " -o out");
    REQUIRE(r.code == 0);
    const auto csv = slurp(box / "out/response.csv");
    CHECK(count_lines(csv) == 401);
    CHECK(csv.rfind("f_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im\r\n", 0) == 0);
    const auto m = slurp(box / "out/metrics.txt");
    const double fc = std::stod(metric(m, "cutoff_3db_hz"));
    CHECK(fc > 10e9);
    CHECK(fc < 20e9);
    CHECK(std::stod(metric(m, "max_energy_deviation")) < 1e-9);
    CHECK(r.out == m);
    CHECK(fs::exists(box / "out/manifest.json"));

    const auto rec = read_touchstone_file(box / "out/response.s2p");
    CHECK(rec.freqs.size() == 400);
    CHECK(rec.freqs.front() == doctest::Approx(0.1e9));
    CHECK(rec.freqs.back() == doctest::Approx(40e9));

    // explicit lengths equal to the nominal ones give the same output
    const auto r2 = box.run("evaluate " + filter_path() +
                            " --lengths 1.06mm,2.30mm,2.05mm,2.54mm,1.91mm,3.16mm,1.91mm,4.28mm,1.77mm,4.63mm,0.80mm -o out2");
    REQUIRE(r2.code == 0);
    CHECK(slurp(box / "out2/response.s2p") == slurp(box / "out/response.s2p"));
}

TEST_CASE("evaluate a zero-length filter") {
    Sandbox box("zero");
    const auto r = box.run("evaluate " + filter_path() + " --lengths 0,0,0,0,0,0,0,0,0,0,0 -o out");
    REQUIRE(r.code == 0);
    CHECK(metric(r.out, "worst_insertion_loss_db") == "0.000000");
    CHECK(metric(r.out, "cutoff_3db_hz") == "none");
}

TEST_CASE("input errors exit 2 with one line") {
    Sandbox box("errors");
    auto r = box.run("evaluate no_such_filter.json");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("herdfilt: error: ", 0) == 0);
    CHECK(r.err.find("no_such_filter.json") != std::string::npos);
    CHECK(count_lines(r.err) == 1);

    CHECK(box.run("evaluate " + filter_path() + " --lengths 1mm,2mm").code == 2);
    CHECK(box.run("evaluate " + filter_path() + " --fstart banana").code == 2);
    CHECK(box.run("frobnicate").code == 2);
    CHECK(box.run("").code == 2);
    CHECK(box.run("--help").code == 0);
    CHECK(box.run("--version").out.find("0.1.0") != std::string::npos);

    std::ofstream(box / "bad.s2p") << "# GHz S RI R 50\n2 0 0 1 0 1 0 0 0\n1 0 0 1 0 1 0 0 0\n";
    r = box.run("convert bad.s2p out.s2p");
    CHECK(r.code == 2);
    CHECK(r.err.find("error: parse:") != std::string::npos);
}

TEST_CASE("sweep") {
    Sandbox box("sweep");
    auto r = box.run("sweep " + filter_path() + " --section 6 --from 2.5mm --to 5.0mm --steps 11 --points 41 -o fam");
    REQUIRE(r.code == 0);
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(box / "fam")) n += e.path().extension() == ".s2p";
    CHECK(n == 11);
    CHECK(count_lines(slurp(box / "fam/sweep.csv")) == 1 + 11 * 41);
    CHECK(slurp(box / "fam/section06_00.s2p").rfind("! section 6 length_m 0.0025\n", 0) == 0);

    // phase delay of s21 grows with length at fixed frequency
    double last = 0.0;
    for (int k = 0; k < 11; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "fam/section06_%02d.s2p", k);
        const auto rec = read_touchstone_file(box / name);
        const double delay = -std::arg(rec.sparams[5].s21);  // 5 GHz
        CHECK(delay > last);
        last = delay;
    }

    CHECK(box.run("sweep " + filter_path() + " --section 6 --from 2.5mm --to 5.0mm --steps 1").code == 2);
    CHECK(box.run("sweep " + filter_path() + " --section 6 --from 5.1mm --to 7mm --steps 3").code == 2);
    CHECK(box.run("sweep " + filter_path() + " --section 12 --from 2.5mm --to 5mm --steps 3").code == 2);
}

TEST_CASE("swept families feed the tabulated template") {
    Sandbox box("template");
    for (int s = 2; s <= 10; s += 2) {
        const auto r = box.run("sweep " + filter_path() + " --section " + std::to_string(s) +
                               " --from 2.5mm --to 5mm --steps 6 -o families");
        REQUIRE(r.code == 0);
    }
    fs::copy_file(kData / "filters" / "tabulated_template.json", box / "tabulated.json");
    const std::string lengths = " --lengths 1.06mm,2.6mm,2.05mm,2.54mm,1.91mm,3.16mm,1.91mm,4.28mm,1.77mm,4.63mm,0.80mm";
    const auto tab = box.run("evaluate tabulated.json" + lengths + " -o tab");
    REQUIRE(tab.code == 0);
    const auto ana = box.run("evaluate " + filter_path() + lengths + " -o ana");
    REQUIRE(ana.code == 0);
    const double fc_tab = std::stod(metric(tab.out, "cutoff_3db_hz"));
    const double fc_ana = std::stod(metric(ana.out, "cutoff_3db_hz"));
    CHECK(std::abs(fc_tab - fc_ana) / fc_ana < 0.03);

    // section 2's nominal 2.30 mm lies below the swept range
    const auto r = box.run("evaluate tabulated.json -o nominal");
    CHECK(r.code == 2);
    CHECK(r.err.find("out-of-range") != std::string::npos);
}

TEST_CASE("convert") {
    Sandbox box("convert");
    const auto ev = box.run("evaluate " + filter_path() + " --points 50 -o ev");
    REQUIRE(ev.code == 0);
    const auto orig = read_touchstone_file(box / "ev/response.s2p");

    REQUIRE(box.run("convert ev/response.s2p ma.s2p --format MA").code == 0);
    REQUIRE(box.run("convert ma.s2p ri.s2p --format RI --unit Hz").code == 0);
    CHECK(slurp(box / "ma.s2p").find("# GHz S MA R 50") != std::string::npos);
    CHECK(slurp(box / "ri.s2p").find("# Hz S RI R 50") != std::string::npos);
    CHECK(fs::exists(box / "ri.s2p.manifest.json"));
    const auto back = read_touchstone_file(box / "ri.s2p");
    REQUIRE(back.freqs.size() == orig.freqs.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < orig.freqs.size(); ++i) {
        worst = std::max(worst, std::abs(back.freqs[i] - orig.freqs[i]) / orig.freqs[i]);
        worst = std::max(worst, std::abs(back.sparams[i].s11 - orig.sparams[i].s11));
        worst = std::max(worst, std::abs(back.sparams[i].s21 - orig.sparams[i].s21));
    }
    CHECK(worst <= 1e-12);

    std::ofstream(box / "thru.s2p") << "# GHz S RI R 50\n1 0 0 1 0 1 0 0 0\n";
    REQUIRE(box.run("convert thru.s2p thru_db.s2p --format DB").code == 0);
    CHECK(slurp(box / "thru_db.s2p").find("\n1 -999 0 0 0 0 0 -999 0\n") != std::string::npos);

    const auto before = slurp(box / "thru.s2p");
    CHECK(box.run("convert thru.s2p thru.s2p").code == 2);
    CHECK(slurp(box / "thru.s2p") == before);
}

TEST_CASE("synthesize") {
    SUBCASE("point-collapsed bounds return immediately") {
        Sandbox box("collapsed");
        write_small_problem(box, R"(, "bounds": [["1 mm", "1 mm"], ["3 mm", "3 mm"], ["1 mm", "1 mm"]])", 3000);
        const auto r = box.run("synthesize problem.json -o out");
        REQUIRE(r.code == 0);
        const auto res = load_json(box / "out/result.json");
        CHECK(res.at("converged") == true);
        CHECK(res.at("generations") == 1);
        CHECK(res.at("best_lengths_m")[1].get<double>() == doctest::Approx(3e-3));
        CHECK(r.out.find("converged: true") != std::string::npos);
    }
    SUBCASE("same seed, same files; unconverged exits 3; replay reproduces") {
        Sandbox box("seeded");
        write_small_problem(box, "", 15);
        const auto a = box.run("synthesize problem.json -o a");
        CHECK(a.code == 3);
        CHECK(a.err.find("not-converged") != std::string::npos);
        const auto res = load_json(box / "a/result.json");
        CHECK(res.at("converged") == false);
        CHECK(res.at("generations") == 15);
        CHECK(count_lines(slurp(box / "a/cost_history.csv")) == 16);

        CHECK(box.run("synthesize problem.json -o b").code == 3);
        for (const char* f : {"result.json", "cost_history.csv", "response.s2p", "response.csv", "metrics.txt"}) {
            CHECK(slurp(box / "a" / f) == slurp(box / "b" / f));
        }

        const auto saved = slurp(box / "a/result.json");
        fs::remove(box / "a/result.json");
        fs::remove(box / "a/response.s2p");
        CHECK(box.run("replay a/manifest.json").code == 3);
        CHECK(slurp(box / "a/result.json") == saved);
        CHECK(slurp(box / "a/response.s2p") == slurp(box / "b/response.s2p"));
    }
}

TEST_CASE("replay an evaluate run from another directory") {
    Sandbox box("replay");
    REQUIRE(box.run("evaluate " + filter_path() + " --points 30 -o out").code == 0);
    const auto csv = slurp(box / "out/response.csv");
    fs::remove(box / "out/response.csv");
    fs::create_directories(box / "elsewhere");
    const std::string cmd = "cd '" + (box / "elsewhere").string() + "' && '" + kExe.string() + "' replay ../out/manifest.json >/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(slurp(box / "out/response.csv") == csv);
}
