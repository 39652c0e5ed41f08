#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nhse/classifier.hpp"
#include "nhse/config.hpp"
#include "nhse/csv.hpp"

namespace nhse {

/// Everything computed for one parameter point.
struct PointResult {
    LatticeSpec spec;
    Spectrum obc;
    SpectralLoop loop;
    std::vector<StateRecord> states;
    LineGapReport gap;
};

PointResult analyse(const RunConfig& config);

struct SweepRow {
    std::optional<double> value;
    LabelCounts counts;
    std::size_t in_gap = 0;
    std::size_t trivial_defect = 0;    // defect label, probability peak on the defect site
    std::size_t nontrivial_defect = 0; // defect label, peak elsewhere
    std::optional<std::size_t> n_c;
    double min_residual = 0.0;
    double max_residual = 0.0;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;

    CsvTable table() const;
};

SweepRow summarize(const PointResult& point, std::size_t defect, std::optional<double> value);

/// Files written through this object are deleted again unless commit() is called.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);
    ~OutputDir();
    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    const std::filesystem::path& path() const { return dir_; }
    void write(const std::filesystem::path& relative, const std::string& content);
    void commit() { committed_ = true; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    std::vector<std::filesystem::path> created_;
    bool committed_ = false;
};

/// Indices of the states drawn in the profile plot.
std::vector<std::size_t> profile_selection(const RunConfig& config, const PointResult& point);

// Subcommands. Each writes into `out` and leaves nothing behind on failure.
void run_spectrum(const RunConfig& config, const std::filesystem::path& out);
void run_loop(const RunConfig& config, const std::filesystem::path& out);
WindingResult run_winding(const RunConfig& config, cplx e_ref, const std::filesystem::path& out);
SweepResult run_classify(const RunConfig& config, const std::filesystem::path& out);
SweepResult run_sweep(const RunConfig& config, const std::filesystem::path& out);
SweepResult run_critical_size(const RunConfig& config, const std::filesystem::path& out);
std::vector<GapScanRow> run_gap_scan(const RunConfig& config, const std::filesystem::path& out);
double run_check_symmetry(const RunConfig& config, const std::filesystem::path& out);

} // namespace nhse
