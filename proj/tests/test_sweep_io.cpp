#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "nhse/config.hpp"
#include "nhse/csv.hpp"
#include "nhse/errors.hpp"
#include "nhse/run.hpp"
#include "nhse/svg.hpp"

using namespace nhse;
namespace fs = std::filesystem;

namespace {

const std::string minimal_hn = R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50, "N_d": 25})";

struct TempDir {
    fs::path path;
    TempDir() {
        char buf[] = "/tmp/nhse_test_XXXXXX";
        path = mkdtemp(buf);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run_cli(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + " " + NHSE_CLI + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string key_of(const std::string& expr) {
    try {
        parse_config(expr);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<accepted>";
}

} // namespace

TEST_CASE("minimal HN config gets defaults") {
    const auto c = parse_config(minimal_hn);
    CHECK(c.model == ModelKind::hn);
    CHECK(c.defect == DefectMode::strong);
    CHECK(c.n_k == 512);
    CHECK(c.thresholds == Thresholds{});
    CHECK(c.thresholds.window == 5);
    CHECK(c.thresholds.theta_b == 0.25);
    CHECK(c.hn.n_sites == 50);
    CHECK(c.hn.defect_site == 25);
    CHECK_FALSE(c.defect_site_auto);
    CHECK_FALSE(c.sweep.has_value());
    CHECK(c.outputs.size() == output_kinds.size());
}

TEST_CASE("gamma sweep yields a four-row plan") {
    const auto c = parse_config(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 25, "N_R": 25,
                                    "sweep": {"parameter": "gamma", "values": [0.2, 0.4, 0.49, 0.6]}})");
    REQUIRE(c.sweep.has_value());
    CHECK(c.sweep->parameter == "gamma");
    CHECK(c.sweep->values == std::vector<double>{0.2, 0.4, 0.49, 0.6});
    CHECK(c.defect == DefectMode::strength);
    CHECK(with_parameter(c, "gamma", 0.49).ssh.gamma == 0.49);
}

TEST_CASE("schema violations name the key") {
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50, "t5": 2})") == "t5");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "N": 50})") == "t4");
    CHECK(key_of(R"({"model": "xy"})") == "model");
    CHECK(key_of(R"({"schema": 2, "model": "hn"})") == "schema");
    CHECK(key_of(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 3, "N_R": 3, "p": 2})") == "p");
    CHECK(key_of(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 3, "N_R": 3, "thresholds": {"x": 1}})") ==
          "thresholds.x");
    CHECK(key_of(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 3, "N_R": 3,
                     "sweep": {"parameter": "t1", "values": [1]}})") == "sweep.parameter");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50,
                     "outputs": {"states_csv": "a.csv", "loop_csv": "a.csv"}})") == "outputs.states_csv");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50, "N_d": 2})") == "N_d");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50, "n_k": 10})") == "n_k");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50,
                     "critical_size": {"n_min": 20}})") == "critical_size.n_min");
    CHECK(key_of(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50,
                     "thresholds": {"w": 6}})") == "critical_size.n_min");
}

TEST_CASE("JSON syntax errors report line and column") {
    try {
        parse_config("{\n  \"model\": \"hn\",\n  \"t1\": ,\n}");
        FAIL("accepted broken JSON");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 9);
    }
}

TEST_CASE("write_config round trips") {
    std::vector<RunConfig> configs;
    configs.push_back(parse_config(minimal_hn));
    configs.push_back(parse_config(R"({"model": "hn", "defect": "custom", "t1": [1, 0.25], "t2": 0.6, "t3": 1,
        "t4": 0.75, "N": 40, "t2p": 0.1, "t4pp": [0, 1], "n_k": 128, "thresholds": {"theta_d": 0.3, "w": 4},
        "profiles": [0, [-0.6174, 0.0396]], "outputs": {"states_csv": "s.csv"},
        "sweep": {"parameter": "N", "values": [40, 60]}, "critical_size": {"n_min": 30, "n_max": 90, "n_step": 4}})"));
    configs.push_back(parse_config(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 25, "N_R": 20, "p": 0.3,
        "bc": "pbc", "gap_scan": {"t_min": -1.5, "t_max": -0.5, "step": 0.1}})"));
    configs.push_back(parse_config(R"({"model": "ssh", "defect": "custom", "t": -0.7, "gamma": 0.1, "t0": 0.9,
        "N_L": 4, "N_R": 4, "t0p": 0.3, "t3pp": -0.2, "thresholds": {"eps_loop": 0.001, "eps_deg": 1e-9}})"));
    configs.push_back(parse_config(R"({"model": "ssh", "defect": "none", "t": -1, "gamma": 0.2, "N_L": 15,
        "N_R": 15})"));
    for (const auto& c : configs) {
        const std::string text = write_config(c);
        INFO(text);
        CHECK(parse_config(text) == c);
        CHECK(write_config(parse_config(text)) == text);
    }
}

TEST_CASE("sweep parameters follow the model and defect mode") {
    auto c = parse_config(R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 5, "N_R": 5})");
    const auto names = sweep_parameters(c);
    CHECK(std::find(names.begin(), names.end(), "p") != names.end());
    CHECK_THROWS_AS(with_parameter(c, "N_L", 2.5), ConfigError);
    CHECK(with_parameter(c, "N_L", 7).ssh.n_cells_left == 7);
    auto h = parse_config(R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50})");
    CHECK(h.defect_site_auto);
    CHECK(with_parameter(h, "N", 120).hn.defect_site == 60);
    CHECK(with_parameter(h, "t4", 0.5).hn.t4 == cplx(0.5));
}

TEST_CASE("shortest round-trip number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-1.4978) == "-1.4978");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(0.0) == "0");
    for (double x : {1.0 / 3.0, 2.0 / 7.0, -1e-17, 6.02214076e23})
        CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("quoted chain: states table, plots and a single sweep row") {
    TempDir tmp;
    RunConfig c = parse_config(minimal_hn);
    const auto r = run_classify(c, tmp.path);
    REQUIRE(r.rows.size() == 1);
    CHECK_FALSE(r.rows[0].value.has_value());

    const auto rows = lines(slurp(tmp.path / "states.csv"));
    REQUIRE(rows.size() == 51);
    CHECK(rows[0] == "index,re_energy,im_energy,label,enclosure,ipr,com,w_left,w_right,w_defect,residual");
    bool defect_at_zero = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(count(rows[i], ",") == 10);
        if (rows[i].find(",defect,") != std::string::npos) {
            double re = 0, im = 0;
            std::sscanf(rows[i].c_str(), "%*d,%lf,%lf", &re, &im);
            defect_at_zero = defect_at_zero || std::abs(cplx(re, im)) < 1e-8;
        }
    }
    CHECK(defect_at_zero);

    const std::string svg = slurp(tmp.path / "spectrum.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("Re E") != std::string::npos);
    CHECK(svg.find("Im E") != std::string::npos);
    const auto states_group = svg.substr(svg.find("<g id=\"states\""));
    CHECK(count(states_group.substr(0, states_group.find("</g>")), "<circle") == 50);
    const auto loops_group = svg.substr(svg.find("<g id=\"loops\""));
    CHECK(count(loops_group.substr(0, loops_group.find("</g>")), "<path") >= 2);

    const std::string sweep = slurp(tmp.path / "sweep.csv");
    CHECK(lines(sweep).size() == 2);
    for (const char* f : {"spectrum.csv", "loop.csv", "profiles.svg"}) CHECK(fs::exists(tmp.path / f));
}

TEST_CASE("profile of the zero mode peaks at the defect") {
    RunConfig c = parse_config(minimal_hn);
    c.profiles = {0.0};
    const auto pt = analyse(c);
    const auto sel = profile_selection(c, pt);
    REQUIRE(sel.size() == 1);
    const auto& s = pt.states[sel[0]];
    CHECK(std::abs(s.energy) < 1e-8);
    CHECK(s.metrics.peak_site + 5 >= 24);
    CHECK(s.metrics.peak_site <= 24 + 5);
    const std::string svg = profiles_svg(pt.obc, sel, 24, "zero mode");
    const auto group = svg.substr(svg.find("<g id=\"profiles\""));
    CHECK(count(group.substr(0, group.find("</g>")), "<path") == 1);
    CHECK(svg.find("site") != std::string::npos);
}

TEST_CASE("empty profile selection is still a valid document") {
    const auto pt = analyse(parse_config(minimal_hn));
    const std::string svg = profiles_svg(pt.obc, {}, 24, "nothing");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<g id=\"profiles\"") != std::string::npos);
    CHECK(svg.find("<path") == std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("CLI exit codes") {
    TempDir tmp;
    const fs::path good = tmp.path / "good.json";
    const fs::path bad = tmp.path / "bad.json";
    const fs::path huge = tmp.path / "huge.json";
    put(good, R"({"model": "ssh", "defect": "none", "t": -1, "gamma": 0.2, "N_L": 5, "N_R": 5,
                  "gap_scan": {"t_min": -1, "t_max": -1, "step": 0.1}})");
    put(bad, R"({"model": "hn", "t1": 1, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 50, "t5": 1})");
    // finite, but the eigensolver overflows
    put(huge, R"({"model": "hn", "t1": 1.7e308, "t2": 1.7e308, "t3": 1, "t4": 0.75, "N": 30})");

    CHECK(run_cli("gap-scan --config " + good.string() + " --out " + (tmp.path / "a").string()) == 0);
    CHECK(fs::exists(tmp.path / "a" / "gap_scan.csv"));
    CHECK(run_cli("spectrum --config " + bad.string() + " --out " + (tmp.path / "b").string()) == 2);
    CHECK(run_cli("critical-size --config " + good.string() + " --out " + (tmp.path / "c").string()) == 2);
    CHECK(run_cli("spectrum --config " + huge.string() + " --out " + (tmp.path / "d").string()) == 3);
    CHECK_FALSE(fs::exists(tmp.path / "d"));
    CHECK(run_cli("nonsense") == 2);
    CHECK(run_cli("spectrum --out x") == 2);
    CHECK(run_cli("spectrum --config /nonexistent.json --out x") == 2);
    CHECK(run_cli("gap-scan --config " + good.string() + " --out x", "NHSE_WORKERS=zero") == 2);
}

TEST_CASE("a failing sweep point removes partial outputs") {
    TempDir tmp;
    // the second point overflows in the eigensolver; the first one succeeds
    RunConfig c = parse_config(R"({"model": "hn", "t1": 1.7e308, "t2": 0.6, "t3": 1, "t4": 0.75, "N": 30,
                                   "sweep": {"parameter": "t2", "values": [0.6, 1.7e308]}})");
    const fs::path out = tmp.path / "sweep";
    CHECK_THROWS_AS(run_sweep(c, out), NumericalError);
    CHECK_FALSE(fs::exists(out));

    fs::create_directory(out);
    put(out / "keep.txt", "x");
    try {
        run_sweep(c, out);
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("t2 = 1.7e+308") != std::string::npos);
    }
    CHECK(fs::exists(out / "keep.txt"));
    CHECK_FALSE(fs::exists(out / "point_000"));
}

TEST_CASE("CSV output is byte-identical across worker counts") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "p.json";
    put(cfg, R"({"model": "ssh", "t": -1, "gamma": 0.4, "N_L": 10, "N_R": 10, "n_k": 128,
                 "sweep": {"parameter": "p", "values": [0.3, 0.6, 0.9]},
                 "outputs": {"states_csv": "states.csv", "loop_csv": "loop.csv", "spectrum_csv": "spectrum.csv"}})");
    const fs::path one = tmp.path / "one", three = tmp.path / "three";
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + one.string(), "NHSE_WORKERS=1") == 0);
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + three.string(), "NHSE_WORKERS=3") == 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(one)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), one);
        INFO(rel.string());
        CHECK(slurp(e.path()) == slurp(three / rel));
        ++files;
    }
    CHECK(files == 10);
    CHECK(lines(slurp(one / "sweep.csv")).size() == 4);
    CHECK(lines(slurp(one / "point_001" / "states.csv")).size() == 42);
}
