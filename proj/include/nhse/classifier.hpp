#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nhse/builders.hpp"
#include "nhse/spectrum.hpp"
#include "nhse/thresholds.hpp"
#include "nhse/topology.hpp"

namespace nhse {

struct LocalizationMetrics {
    double ipr = 0.0;
    double com = 0.0;           // sum n |psi_n|^2, 0-based n
    double w_left = 0.0;        // first w sites
    double w_right = 0.0;       // last w sites
    double w_defect = 0.0;      // sites [d - w, d + w]
    std::size_t peak_site = 0;  // argmax |psi_n|

    double boundary() const { return w_left > w_right ? w_left : w_right; }
};

/// psi must have unit norm; defect is a 0-based site index. Requires N >= 4w + 2.
LocalizationMetrics localization_metrics(const Eigen::VectorXcd& psi, std::size_t defect, std::size_t w);

enum class Label { skin, defect, hybrid, edge, extended };
inline constexpr std::array<Label, 5> all_labels{Label::skin, Label::defect, Label::hybrid, Label::edge,
                                                 Label::extended};

std::string_view to_string(Label l);

struct StateInputs {
    cplx energy{};
    LocalizationMetrics metrics;
    Enclosure enclosure = Enclosure::inside;
    bool degenerate = false; // member of a degenerate group of line-gap energies
};

/// First match wins: edge, defect, hybrid, skin, extended.
Label classify_state(const StateInputs& in, const Thresholds& th);

struct StateRecord {
    std::size_t index = 0;
    cplx energy{};
    LocalizationMetrics metrics;
    Enclosure enclosure = Enclosure::inside;
    Label label = Label::extended;
    double residual = 0.0;
};

std::vector<StateRecord> classify(const Spectrum& obc, const SpectralLoop& loop, std::size_t defect,
                                  const Thresholds& th);

struct LabelCounts {
    std::array<std::size_t, 5> n{};

    std::size_t operator[](Label l) const { return n[static_cast<std::size_t>(l)]; }
    std::size_t& operator[](Label l) { return n[static_cast<std::size_t>(l)]; }
    std::size_t total() const;
};

LabelCounts count_labels(const std::vector<StateRecord>& states);

/// |E| below this is the exact zero mode of a cut defect.
inline constexpr double zero_mode_tolerance = 1e-8;

struct CriticalSizePoint {
    std::size_t n_sites = 0;
    std::size_t hybrids = 0; // zero mode excluded
};

struct CriticalSizeResult {
    std::optional<std::size_t> n_c;
    std::vector<CriticalSizePoint> scanned; // up to and including n_c
};

/// Smallest N in `sizes` (ascending) whose OBC spectrum has no hybrid state
/// besides the zero mode, with N_d = N / 2.
CriticalSizeResult critical_size(const HnParams& family, const std::vector<std::size_t>& sizes, const Thresholds& th);

struct GapScanRow {
    double t = 0.0;
    double gap_width = 0.0;   // min Re(upper bulk) - max Re(lower bulk)
    double max_abs_im = 0.0;
    bool edge = false;        // degenerate pair at the middle of the spectrum
    cplx edge_energy{};       // mean of the pair when present
    double edge_split = 0.0;
    double edge_abs_im = 0.0; // largest |Im| of the pair
    double max_residual = 0.0;
};

/// Defect-free OBC chain over t = t_min + i * step, i = 0 .. round((t_max - t_min) / step).
std::vector<GapScanRow> gap_scan(const SshParams& family, double t_min, double t_max, double step,
                                 const Thresholds& th);

} // namespace nhse
