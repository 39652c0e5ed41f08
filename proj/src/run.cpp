#include "nhse/run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "nhse/errors.hpp"
#include "nhse/parallel.hpp"
#include "nhse/svg.hpp"

namespace fs = std::filesystem;

namespace nhse {

namespace {

std::string describe(const RunConfig& c) {
    char buf[160];
    if (c.model == ModelKind::hn) {
        const HnParams p = resolved_hn(c);
        std::snprintf(buf, sizeof buf, "HN  N=%zu  N_d=%zu", p.n_sites, p.defect_site);
    } else {
        std::snprintf(buf, sizeof buf, "SSH  t=%g  gamma=%g  p=%g", c.ssh.t, c.ssh.gamma, c.ssh.p);
    }
    return buf;
}

std::string point_dir(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%03zu", i);
    return buf;
}

[[noreturn]] void rethrow_at(const std::string& where) {
    try {
        throw;
    } catch (const SolverError& e) {
        throw SolverError(e.dimension(), e.iterations(), where + ": " + e.what());
    } catch (const ResolutionError& e) {
        throw ResolutionError(e.phi(), where + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(where + ": " + e.what());
    } catch (const SpecificationError& e) {
        throw SpecificationError(where + ": " + e.what());
    }
}

std::string sweep_label(const SweepPlan& plan, std::size_t i) {
    return "sweep point " + std::to_string(i) + " (" + plan.parameter + " = " + format_number(plan.values[i]) + ")";
}

void write_point(const RunConfig& c, const PointResult& pt, OutputDir& dir, const fs::path& sub) {
    const auto& o = c.outputs;
    const std::string title = describe(c);
    if (auto it = o.find("spectrum_csv"); it != o.end()) dir.write(sub / it->second, spectrum_table(pt.obc).str());
    if (auto it = o.find("states_csv"); it != o.end()) dir.write(sub / it->second, states_table(pt.states).str());
    if (auto it = o.find("loop_csv"); it != o.end()) dir.write(sub / it->second, loop_table(pt.loop).str());
    if (auto it = o.find("svg_spectrum"); it != o.end())
        dir.write(sub / it->second, spectrum_svg(pt.states, &pt.loop, title));
    if (auto it = o.find("svg_profiles"); it != o.end())
        dir.write(sub / it->second, profiles_svg(pt.obc, profile_selection(c, pt), defect_index(c), title));
}

std::string output_name(const RunConfig& c, const std::string& kind, const std::string& fallback) {
    const auto it = c.outputs.find(kind);
    return it == c.outputs.end() ? fallback : it->second;
}

} // namespace

PointResult analyse(const RunConfig& c) {
    PointResult pt;
    pt.spec = build_model(c);
    pt.obc = obc_spectrum(pt.spec);
    pt.loop = spectral_loop(pt.spec, c.n_k);
    pt.states = classify(pt.obc, pt.loop, defect_index(c), c.thresholds);
    pt.gap = line_gap_states(pt.obc, pt.loop, c.thresholds);
    return pt;
}

SweepRow summarize(const PointResult& pt, std::size_t defect, std::optional<double> value) {
    SweepRow row;
    row.value = value;
    row.counts = count_labels(pt.states);
    row.in_gap = pt.gap.in_gap_energies.size();
    for (const auto& s : pt.states) {
        if (s.label != Label::defect) continue;
        (s.metrics.peak_site == defect ? row.trivial_defect : row.nontrivial_defect) += 1;
    }
    const auto [lo, hi] = std::minmax_element(pt.obc.residuals.begin(), pt.obc.residuals.end());
    row.min_residual = *lo;
    row.max_residual = *hi;
    return row;
}

CsvTable SweepResult::table() const {
    CsvTable t{{parameter.empty() ? "value" : parameter, "skin", "defect", "hybrid", "edge", "extended", "in_gap",
                "trivial_defect", "nontrivial_defect", "n_c", "min_residual", "max_residual"},
               {}};
    for (const auto& r : rows) {
        std::vector<std::string> cells{r.value ? format_number(*r.value) : ""};
        for (Label l : all_labels) cells.push_back(std::to_string(r.counts[l]));
        cells.push_back(std::to_string(r.in_gap));
        cells.push_back(std::to_string(r.trivial_defect));
        cells.push_back(std::to_string(r.nontrivial_defect));
        cells.push_back(r.n_c ? std::to_string(*r.n_c) : "");
        cells.push_back(format_number(r.min_residual));
        cells.push_back(format_number(r.max_residual));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
    fs::path probe;
    for (const auto& part : dir_) {
        probe /= part;
        if (!probe.empty() && !fs::exists(probe)) {
            fs::create_directory(probe);
            created_.push_back(probe);
        }
    }
}

OutputDir::~OutputDir() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = written_.rbegin(); it != written_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = created_.rbegin(); it != created_.rend(); ++it) fs::remove(*it, ec); // only if empty
}

void OutputDir::write(const fs::path& relative, const std::string& content) {
    const fs::path target = dir_ / relative;
    fs::path probe = dir_;
    for (const auto& part : relative.parent_path()) {
        probe /= part;
        if (!fs::exists(probe)) {
            fs::create_directory(probe);
            created_.push_back(probe);
        }
    }
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + target.string());
    written_.push_back(target);
    f << content;
    if (!f) throw std::runtime_error("failed writing " + target.string());
}

std::vector<std::size_t> profile_selection(const RunConfig& c, const PointResult& pt) {
    std::vector<std::size_t> out;
    if (!c.profiles.empty()) {
        for (const auto& e : c.profiles) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < pt.obc.size(); ++i)
                if (std::abs(pt.obc.eigenvalues[i] - e) < std::abs(pt.obc.eigenvalues[best] - e)) best = i;
            if (std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
        }
        return out;
    }
    for (const auto& s : pt.states)
        if ((s.label == Label::defect || s.label == Label::hybrid || s.label == Label::edge) && out.size() < 8)
            out.push_back(s.index);
    return out;
}

void run_spectrum(const RunConfig& c, const fs::path& out) {
    OutputDir dir(out);
    const LatticeSpec spec = build_model(c);
    const Spectrum s =
        c.periodic ? eigensolve(assemble(spec, BoundaryCondition::periodic())) : obc_spectrum(spec);
    dir.write(output_name(c, "spectrum_csv", "spectrum.csv"), spectrum_table(s).str());
    dir.commit();
}

void run_loop(const RunConfig& c, const fs::path& out) {
    OutputDir dir(out);
    const SpectralLoop loop = spectral_loop(build_model(c), c.n_k);
    dir.write(output_name(c, "loop_csv", "loop.csv"), loop_table(loop).str());
    if (c.outputs.count("svg_spectrum")) dir.write(c.outputs.at("svg_spectrum"), spectrum_svg({}, &loop, describe(c)));
    dir.commit();
}

WindingResult run_winding(const RunConfig& c, cplx e_ref, const fs::path& out) {
    OutputDir dir(out);
    const LatticeSpec spec = build_model(c);
    const WindingResult w = winding_number(spec, spectral_loop(spec, c.n_k), e_ref, c.thresholds);
    CsvTable t{{"re_ref", "im_ref", "winding", "on_loop", "phase_trace"}, {}};
    t.rows.push_back({format_number(e_ref.real()), format_number(e_ref.imag()),
                      w.value ? std::to_string(*w.value) : "", w.on_loop ? "1" : "0", format_number(w.phase_trace)});
    dir.write("winding.csv", t.str());
    dir.commit();
    return w;
}

SweepResult run_classify(const RunConfig& c, const fs::path& out) {
    RunConfig single = c;
    single.sweep.reset();
    return run_sweep(single, out);
}

SweepResult run_sweep(const RunConfig& c, const fs::path& out) {
    OutputDir dir(out);
    SweepResult result;
    if (!c.sweep) {
        PointResult pt;
        try {
            pt = analyse(c);
        } catch (...) {
            rethrow_at(describe(c));
        }
        write_point(c, pt, dir, {});
        result.rows.push_back(summarize(pt, defect_index(c), std::nullopt));
    } else {
        const SweepPlan& plan = *c.sweep;
        result.parameter = plan.parameter;
        std::vector<RunConfig> configs;
        for (double v : plan.values) configs.push_back(with_parameter(c, plan.parameter, v));
        std::vector<PointResult> points(configs.size());
        parallel_for(configs.size(), [&](std::size_t i) {
            try {
                points[i] = analyse(configs[i]);
            } catch (...) {
                rethrow_at(sweep_label(plan, i));
            }
        });
        for (std::size_t i = 0; i < points.size(); ++i) {
            write_point(configs[i], points[i], dir, point_dir(i));
            result.rows.push_back(summarize(points[i], defect_index(configs[i]), plan.values[i]));
        }
    }
    dir.write("sweep.csv", result.table().str());
    dir.commit();
    return result;
}

SweepResult run_critical_size(const RunConfig& c, const fs::path& out) {
    if (c.model != ModelKind::hn) throw ConfigError("critical-size needs model \"hn\"", "model");
    OutputDir dir(out);
    SweepResult result;
    std::vector<RunConfig> configs;
    std::vector<std::optional<double>> values;
    if (c.sweep) {
        result.parameter = c.sweep->parameter;
        for (double v : c.sweep->values) {
            configs.push_back(with_parameter(c, c.sweep->parameter, v));
            values.emplace_back(v);
        }
    } else {
        configs.push_back(c);
        values.emplace_back(std::nullopt);
    }
    const auto sizes = c.critical_size.sizes();
    std::vector<CriticalSizeResult> found(configs.size());
    parallel_for(configs.size(), [&](std::size_t i) {
        try {
            found[i] = critical_size(resolved_hn(configs[i]), sizes, configs[i].thresholds);
        } catch (...) {
            rethrow_at(c.sweep ? sweep_label(*c.sweep, i) : describe(c));
        }
    });

    CsvTable scan{{result.parameter.empty() ? "value" : result.parameter, "N", "hybrids"}, {}};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        SweepRow row;
        row.value = values[i];
        row.n_c = found[i].n_c;
        result.rows.push_back(row);
        for (const auto& p : found[i].scanned)
            scan.rows.push_back({values[i] ? format_number(*values[i]) : "", std::to_string(p.n_sites),
                                 std::to_string(p.hybrids)});
    }
    CsvTable t{{result.parameter.empty() ? "value" : result.parameter, "n_c"}, {}};
    for (const auto& r : result.rows)
        t.rows.push_back({r.value ? format_number(*r.value) : "", r.n_c ? std::to_string(*r.n_c) : ""});
    dir.write("critical_size.csv", t.str());
    dir.write("critical_scan.csv", scan.str());
    dir.commit();
    return result;
}

std::vector<GapScanRow> run_gap_scan(const RunConfig& c, const fs::path& out) {
    if (c.model != ModelKind::ssh) throw ConfigError("gap-scan needs model \"ssh\"", "model");
    OutputDir dir(out);
    const auto rows = gap_scan(c.ssh, c.gap_scan.t_min, c.gap_scan.t_max, c.gap_scan.step, c.thresholds);
    dir.write("gap_scan.csv", gap_scan_table(rows).str());
    dir.commit();
    return rows;
}

double run_check_symmetry(const RunConfig& c, const fs::path& out) {
    RunConfig clean = c;
    clean.defect = DefectMode::none;
    const LatticeSpec spec = build_model(clean);
    const auto h = assemble(spec, c.periodic ? BoundaryCondition::periodic() : BoundaryCondition::open());
    const double dev = symmetry_defect(h, time_reversal_operator(spec.n_sites));
    OutputDir dir(out);
    CsvTable t{{"dimension", "bc", "deviation"}, {}};
    t.rows.push_back({std::to_string(spec.n_sites), c.periodic ? "pbc" : "obc", format_number(dev)});
    dir.write("symmetry.csv", t.str());
    dir.commit();
    return dev;
}

} // namespace nhse
