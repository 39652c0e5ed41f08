#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhse/builders.hpp"
#include "nhse/thresholds.hpp"

namespace nhse {

enum class ModelKind { hn, ssh };
enum class DefectMode { strong, strength, custom, none };

struct SweepPlan {
    std::string parameter;
    std::vector<double> values;

    bool operator==(const SweepPlan&) const = default;
};

struct GapScanRange {
    double t_min = -2.0;
    double t_max = 0.0;
    double step = 0.02;

    bool operator==(const GapScanRange&) const = default;
};

struct SizeRange {
    std::size_t n_min = 22; // 4w + 2 for the default window
    std::size_t n_max = 240;
    std::size_t n_step = 2;

    std::vector<std::size_t> sizes() const;
    bool operator==(const SizeRange&) const = default;
};

inline const std::vector<std::string> output_kinds{"spectrum_csv", "states_csv", "loop_csv", "svg_spectrum",
                                                   "svg_profiles"};

struct RunConfig {
    ModelKind model = ModelKind::hn;
    DefectMode defect = DefectMode::strong;
    HnParams hn;                 // primed amplitudes meaningful only for custom
    bool defect_site_auto = true; // N_d = N / 2
    SshParams ssh;               // defect couplings meaningful only for custom
    bool periodic = false;       // bc of the spectrum subcommand
    int n_k = 512;
    Thresholds thresholds;
    std::optional<SweepPlan> sweep;
    std::map<std::string, std::string> outputs; // kind -> file name
    std::vector<std::complex<double>> profiles;  // energies to plot; empty selects non-skin states
    GapScanRange gap_scan;
    SizeRange critical_size;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string write_config(const RunConfig& config);

/// Names accepted as a sweep parameter for the config's model.
std::vector<std::string> sweep_parameters(const RunConfig& config);
/// Copy with one parameter set; integer parameters need integral values.
RunConfig with_parameter(const RunConfig& config, const std::string& name, double value);

bool has_defect(const RunConfig& config);
HnParams resolved_hn(const RunConfig& config);
SshParams resolved_ssh(const RunConfig& config);
LatticeSpec build_model(const RunConfig& config);
/// 0-based site of the defect (the chain centre when there is none).
std::size_t defect_index(const RunConfig& config);

} // namespace nhse
