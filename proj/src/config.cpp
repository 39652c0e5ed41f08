#include "nhse/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nhse/errors.hpp"

namespace nhse {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> hn_primed{"t1p", "t2p", "t1pp", "t2pp", "t3p", "t4p", "t3pp", "t4pp"};
const std::vector<std::string> ssh_couplings{"t0p", "t1pp", "t2pp", "t3pp", "t4pp"};

cplx* hn_field(HnParams& p, const std::string& name) {
    if (name == "t1") return &p.t1;
    if (name == "t2") return &p.t2;
    if (name == "t3") return &p.t3;
    if (name == "t4") return &p.t4;
    if (name == "t1p") return &p.t1p;
    if (name == "t2p") return &p.t2p;
    if (name == "t1pp") return &p.t1pp;
    if (name == "t2pp") return &p.t2pp;
    if (name == "t3p") return &p.t3p;
    if (name == "t4p") return &p.t4p;
    if (name == "t3pp") return &p.t3pp;
    if (name == "t4pp") return &p.t4pp;
    return nullptr;
}

double* ssh_field(SshParams& p, const std::string& name) {
    if (name == "t") return &p.t;
    if (name == "gamma") return &p.gamma;
    if (name == "t0") return &p.t0;
    if (name == "p") return &p.p;
    if (name == "t0p") return &p.t0p;
    if (name == "t1pp") return &p.t1pp;
    if (name == "t2pp") return &p.t2pp;
    if (name == "t3pp") return &p.t3pp;
    if (name == "t4pp") return &p.t4pp;
    return nullptr;
}

std::string_view mode_name(DefectMode m) {
    switch (m) {
    case DefectMode::strong: return "strong";
    case DefectMode::strength: return "strength";
    case DefectMode::custom: return "custom";
    case DefectMode::none: return "none";
    }
    return "?";
}

// Reads keys from one JSON object and remembers which were used.
class Reader {
public:
    Reader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError("'" + prefix_ + "' must be an object", prefix_);
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
    double number(const std::string& key) {
        need(key);
        const json& v = raw(key);
        if (!v.is_number()) fail(key, "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    cplx complex(const std::string& key, cplx fallback) { return has(key) ? complex(key) : fallback; }
    cplx complex(const std::string& key) {
        need(key);
        return to_complex(raw(key), path(key));
    }

    std::size_t count(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }
    std::size_t count(const std::string& key) {
        need(key);
        const json& v = raw(key);
        if (v.is_number_unsigned()) return v.get<std::size_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0 && std::floor(d) == d && d < 1e15) return static_cast<std::size_t>(d);
        }
        fail(key, "must be a non-negative integer");
    }

    std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }
    std::string text(const std::string& key) {
        need(key);
        const json& v = raw(key);
        if (!v.is_string()) fail(key, "must be a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(key, "must be true or false");
        return v.get<bool>();
    }

    void forbid(const std::string& key, const std::string& why) {
        if (has(key)) fail(key, why);
    }

    void finish() const {
        for (const auto& [k, v] : obj_.items())
            if (!used_.count(k)) throw ConfigError("unknown key '" + path(k) + "'", path(k));
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("'" + path(key) + "' " + what, path(key));
    }

    static cplx to_complex(const json& v, const std::string& where) {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw ConfigError("'" + where + "' must be a number or a [re, im] pair", where);
    }

private:
    void need(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing key '" + path(key) + "'", path(key));
    }

    const json& obj_;
    std::string prefix_;
    std::set<std::string> used_;
};

ordered_json complex_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return ordered_json::array({z.real(), z.imag()});
}

void check_model(const RunConfig& c, const std::string& key) {
    try {
        (void)build_model(c);
    } catch (const SpecificationError& e) {
        throw ConfigError(e.what(), key);
    }
}

void check_integer(const std::string& name, double value) {
    if (!(value >= 1.0) || std::floor(value) != value || value > 1e9)
        throw ConfigError("'" + name + "' needs a positive integer, got " + std::to_string(value), name);
}

} // namespace

std::vector<std::size_t> SizeRange::sizes() const {
    std::vector<std::size_t> out;
    for (std::size_t n = n_min; n <= n_max; n += n_step) out.push_back(n);
    return out;
}

bool has_defect(const RunConfig& c) { return c.defect != DefectMode::none; }

HnParams resolved_hn(const RunConfig& c) {
    HnParams p = c.hn;
    if (c.defect_site_auto) p.defect_site = p.n_sites / 2;
    if (c.defect == DefectMode::strong) p.set_strong_defect();
    return p;
}

SshParams resolved_ssh(const RunConfig& c) {
    if (c.defect == DefectMode::strength) return apply_defect_strength(c.ssh);
    return c.ssh;
}

LatticeSpec build_model(const RunConfig& c) {
    if (c.model == ModelKind::hn) return build_hn(resolved_hn(c), has_defect(c));
    return build_ssh(resolved_ssh(c), has_defect(c));
}

std::size_t defect_index(const RunConfig& c) {
    if (c.model == ModelKind::hn) return resolved_hn(c).defect_site - (has_defect(c) ? 1 : 0);
    return 2 * c.ssh.n_cells_left;
}

std::vector<std::string> sweep_parameters(const RunConfig& c) {
    std::vector<std::string> out;
    if (c.model == ModelKind::hn) {
        out = {"t1", "t2", "t3", "t4", "N", "N_d"};
        if (c.defect == DefectMode::custom) out.insert(out.end(), hn_primed.begin(), hn_primed.end());
    } else {
        out = {"t", "gamma", "t0", "N_L", "N_R"};
        if (c.defect == DefectMode::strength) out.push_back("p");
        if (c.defect == DefectMode::custom) out.insert(out.end(), ssh_couplings.begin(), ssh_couplings.end());
    }
    return out;
}

RunConfig with_parameter(const RunConfig& config, const std::string& name, double value) {
    const auto allowed = sweep_parameters(config);
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
        throw ConfigError("'" + name + "' is not a sweepable parameter of this model", "sweep.parameter");
    if (!std::isfinite(value)) throw ConfigError("sweep value is not finite", "sweep.values");
    RunConfig c = config;
    if (c.model == ModelKind::hn) {
        if (name == "N") {
            check_integer(name, value);
            c.hn.n_sites = static_cast<std::size_t>(value);
            if (c.defect_site_auto) c.hn.defect_site = c.hn.n_sites / 2;
        } else if (name == "N_d") {
            check_integer(name, value);
            c.hn.defect_site = static_cast<std::size_t>(value);
            c.defect_site_auto = false;
        } else {
            *hn_field(c.hn, name) = value;
        }
    } else if (name == "N_L" || name == "N_R") {
        check_integer(name, value);
        (name == "N_L" ? c.ssh.n_cells_left : c.ssh.n_cells_right) = static_cast<std::size_t>(value);
    } else {
        *ssh_field(c.ssh, name) = value;
    }
    return c;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + e.what(),
                          {}, line, column);
    }

    Reader r(doc, "");
    RunConfig c;
    if (r.has("schema")) {
        const json& s = r.raw("schema");
        if (!s.is_number_integer() || s.get<long>() != 1) r.fail("schema", "must be 1");
    }

    const std::string model = r.text("model");
    if (model == "hn") {
        c.model = ModelKind::hn;
    } else if (model == "ssh") {
        c.model = ModelKind::ssh;
    } else {
        r.fail("model", "must be \"hn\" or \"ssh\"");
    }

    const std::string defect = r.text("defect", c.model == ModelKind::hn ? "strong" : "strength");
    if (defect == "none") {
        c.defect = DefectMode::none;
    } else if (defect == "custom") {
        c.defect = DefectMode::custom;
    } else if (defect == "strong" && c.model == ModelKind::hn) {
        c.defect = DefectMode::strong;
    } else if (defect == "strength" && c.model == ModelKind::ssh) {
        c.defect = DefectMode::strength;
    } else {
        r.fail("defect", c.model == ModelKind::hn ? "must be \"strong\", \"custom\" or \"none\""
                                                  : "must be \"strength\", \"custom\" or \"none\"");
    }

    if (c.model == ModelKind::hn) {
        for (const char* k : {"t1", "t2", "t3", "t4"}) *hn_field(c.hn, k) = r.complex(k);
        c.hn.n_sites = r.count("N");
        c.defect_site_auto = !r.has("N_d");
        c.hn.defect_site = r.count("N_d", c.hn.n_sites / 2);
        if (c.defect == DefectMode::custom) {
            HnParams bulk = c.hn;
            bulk.set_bulk_defect();
            for (const auto& k : hn_primed) *hn_field(c.hn, k) = r.complex(k, *hn_field(bulk, k));
        } else {
            for (const auto& k : hn_primed) r.forbid(k, "needs \"defect\": \"custom\"");
        }
    } else {
        c.ssh.t = r.number("t");
        c.ssh.gamma = r.number("gamma");
        c.ssh.t0 = r.number("t0", 1.0);
        c.ssh.n_cells_left = r.count("N_L");
        c.ssh.n_cells_right = r.count("N_R");
        c.ssh.t0p = c.ssh.t1pp = c.ssh.t2pp = c.ssh.t3pp = c.ssh.t4pp = 0.0;
        if (c.defect == DefectMode::strength) {
            c.ssh.p = r.number("p", 0.0);
            if (!(c.ssh.p >= 0.0 && c.ssh.p <= 1.0)) r.fail("p", "must lie in [0, 1]");
        } else {
            r.forbid("p", "needs \"defect\": \"strength\"");
        }
        if (c.defect == DefectMode::custom) {
            for (const auto& k : ssh_couplings) *ssh_field(c.ssh, k) = r.number(k, 0.0);
        } else {
            for (const auto& k : ssh_couplings) r.forbid(k, "needs \"defect\": \"custom\"");
        }
    }

    const std::string bc = r.text("bc", "obc");
    if (bc != "obc" && bc != "pbc") r.fail("bc", "must be \"obc\" or \"pbc\"");
    c.periodic = bc == "pbc";

    const std::size_t n_k = r.count("n_k", 512);
    if (n_k < 64 || n_k > (1u << 20)) r.fail("n_k", "must be at least 64");
    c.n_k = static_cast<int>(n_k);

    if (r.has("thresholds")) {
        Reader t(r.raw("thresholds"), "thresholds");
        Thresholds& th = c.thresholds;
        th.theta_b = t.number("theta_b", th.theta_b);
        th.theta_d = t.number("theta_d", th.theta_d);
        th.window = t.count("w", th.window);
        th.eps_loop = t.number("eps_loop", th.eps_loop);
        th.eps_deg = t.number("eps_deg", th.eps_deg);
        th.collapse = t.number("collapse", th.collapse);
        t.finish();
        if (!(th.theta_b > 0 && th.theta_b < 1)) t.fail("theta_b", "must lie in (0, 1)");
        if (!(th.theta_d > 0 && th.theta_d < 1)) t.fail("theta_d", "must lie in (0, 1)");
        if (th.window == 0) t.fail("w", "must be positive");
        if (!(th.eps_loop > 0)) t.fail("eps_loop", "must be positive");
        if (!(th.eps_deg > 0)) t.fail("eps_deg", "must be positive");
        if (!(th.collapse >= 0)) t.fail("collapse", "must not be negative");
    }

    if (r.has("outputs")) {
        const json& o = r.raw("outputs");
        if (!o.is_object()) r.fail("outputs", "must be an object");
        std::set<std::string> names;
        for (const auto& [k, v] : o.items()) {
            const std::string key = "outputs." + k;
            if (std::find(output_kinds.begin(), output_kinds.end(), k) == output_kinds.end())
                throw ConfigError("unknown key '" + key + "'", key);
            if (!v.is_string() || v.get<std::string>().empty())
                throw ConfigError("'" + key + "' must be a non-empty file name", key);
            if (!names.insert(v.get<std::string>()).second)
                throw ConfigError("'" + key + "' repeats the file name '" + v.get<std::string>() + "'", key);
            c.outputs[k] = v.get<std::string>();
        }
    } else {
        c.outputs = {{"spectrum_csv", "spectrum.csv"}, {"states_csv", "states.csv"}, {"loop_csv", "loop.csv"},
                     {"svg_spectrum", "spectrum.svg"}, {"svg_profiles", "profiles.svg"}};
    }

    if (r.has("profiles")) {
        const json& p = r.raw("profiles");
        if (!p.is_array()) r.fail("profiles", "must be a list of energies");
        for (std::size_t i = 0; i < p.size(); ++i)
            c.profiles.push_back(Reader::to_complex(p[i], "profiles[" + std::to_string(i) + "]"));
    }

    if (r.has("gap_scan")) {
        Reader g(r.raw("gap_scan"), "gap_scan");
        c.gap_scan.t_min = g.number("t_min", c.gap_scan.t_min);
        c.gap_scan.t_max = g.number("t_max", c.gap_scan.t_max);
        c.gap_scan.step = g.number("step", c.gap_scan.step);
        g.finish();
        if (!(c.gap_scan.step > 0)) g.fail("step", "must be positive");
        if (c.gap_scan.t_max < c.gap_scan.t_min) g.fail("t_max", "must not be below t_min");
    }

    if (r.has("critical_size")) {
        Reader g(r.raw("critical_size"), "critical_size");
        c.critical_size.n_min = g.count("n_min", c.critical_size.n_min);
        c.critical_size.n_max = g.count("n_max", c.critical_size.n_max);
        c.critical_size.n_step = g.count("n_step", c.critical_size.n_step);
        g.finish();
        if (c.critical_size.n_step == 0) g.fail("n_step", "must be positive");
        if (c.critical_size.n_max < c.critical_size.n_min) g.fail("n_max", "must not be below n_min");
    }

    // the localization windows must not overlap on the shortest chain
    const std::size_t shortest = 4 * c.thresholds.window + 2;
    if (c.model == ModelKind::hn && c.critical_size.n_min < shortest)
        throw ConfigError("'critical_size.n_min' must be at least 4w + 2 = " + std::to_string(shortest),
                          "critical_size.n_min");

    if (r.has("sweep")) {
        Reader s(r.raw("sweep"), "sweep");
        SweepPlan plan;
        plan.parameter = s.text("parameter");
        const json& values = s.raw("values");
        if (!values.is_array() || values.empty()) s.fail("values", "must be a non-empty list");
        for (const auto& v : values) {
            if (!v.is_number()) s.fail("values", "must hold numbers only");
            plan.values.push_back(v.get<double>());
        }
        s.finish();
        for (double v : plan.values) check_model(with_parameter(c, plan.parameter, v), "sweep.values");
        c.sweep = std::move(plan);
    }

    r.finish();
    check_model(c, c.model == ModelKind::hn ? "N_d" : "N_L");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'", "config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string write_config(const RunConfig& c) {
    ordered_json j;
    j["schema"] = 1;
    j["model"] = c.model == ModelKind::hn ? "hn" : "ssh";
    j["defect"] = std::string(mode_name(c.defect));
    if (c.model == ModelKind::hn) {
        HnParams p = c.hn;
        for (const char* k : {"t1", "t2", "t3", "t4"}) j[k] = complex_json(*hn_field(p, k));
        j["N"] = c.hn.n_sites;
        if (!c.defect_site_auto) j["N_d"] = c.hn.defect_site;
        if (c.defect == DefectMode::custom)
            for (const auto& k : hn_primed) j[k] = complex_json(*hn_field(p, k));
    } else {
        j["t"] = c.ssh.t;
        j["gamma"] = c.ssh.gamma;
        j["t0"] = c.ssh.t0;
        j["N_L"] = c.ssh.n_cells_left;
        j["N_R"] = c.ssh.n_cells_right;
        if (c.defect == DefectMode::strength) j["p"] = c.ssh.p;
        if (c.defect == DefectMode::custom) {
            SshParams p = c.ssh;
            for (const auto& k : ssh_couplings) j[k] = *ssh_field(p, k);
        }
    }
    j["bc"] = c.periodic ? "pbc" : "obc";
    j["n_k"] = c.n_k;
    j["thresholds"] = {{"theta_b", c.thresholds.theta_b}, {"theta_d", c.thresholds.theta_d},
                       {"w", c.thresholds.window},        {"eps_loop", c.thresholds.eps_loop},
                       {"eps_deg", c.thresholds.eps_deg}, {"collapse", c.thresholds.collapse}};
    if (c.sweep) j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
    ordered_json outputs = ordered_json::object();
    for (const auto& [k, v] : c.outputs) outputs[k] = v;
    j["outputs"] = outputs;
    if (!c.profiles.empty()) {
        ordered_json p = ordered_json::array();
        for (const auto& z : c.profiles) p.push_back(ordered_json::array({z.real(), z.imag()}));
        j["profiles"] = p;
    }
    j["gap_scan"] = {{"t_min", c.gap_scan.t_min}, {"t_max", c.gap_scan.t_max}, {"step", c.gap_scan.step}};
    j["critical_size"] = {
        {"n_min", c.critical_size.n_min}, {"n_max", c.critical_size.n_max}, {"n_step", c.critical_size.n_step}};
    return j.dump(2) + "\n";
}

} // namespace nhse
