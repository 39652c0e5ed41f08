#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nhse/lattice.hpp"
#include "nhse/spectrum.hpp"
#include "nhse/thresholds.hpp"

namespace nhse {

enum class Enclosure { inside, on, outside };

std::string_view to_string(Enclosure e);

struct WindingResult {
    std::optional<int> value; // empty when on_loop
    bool on_loop = false;
    double phase_trace = 0.0; // unwrapped change of arg det(H(phi) - E), radians
};

struct EnclosureResult {
    Enclosure kind = Enclosure::outside;
    int crossings = 0;        // summed winding of the non-collapsed loops
    double distance = 0.0;    // to the nearest loop
    bool in_line_gap = false; // isolated level, see enclosure()
};

struct LineGapReport {
    std::vector<std::size_t> indices;                 // into the OBC spectrum
    std::vector<cplx> in_gap_energies;
    std::vector<std::vector<std::size_t>> degenerate_groups; // positions in in_gap_energies
};

/// arg det(H - e) from an LU factorisation; nullopt when the factor is exactly singular.
std::optional<double> det_phase(const HamiltonianMatrix& h, cplx e);

/// Winding of det(H(phi) - E) over one period. Steps with a phase jump of
/// pi/2 or more are bisected; throws ResolutionError if that does not settle.
WindingResult winding_number(const LatticeSpec& spec, cplx e_ref, int n_k, const Thresholds& th = {});
WindingResult winding_number(const LatticeSpec& spec, const SpectralLoop& loop, cplx e_ref, const Thresholds& th = {});

/// Loops whose |area| is below th.collapse * diameter^2.
std::vector<bool> collapsed_loops(const SpectralLoop& loop, const Thresholds& th = {});

/// on: closer than eps_loop * diameter to any loop. Otherwise inside when a
/// non-collapsed loop winds around e_ref, else outside.
/// in_line_gap: no loop wider than eps_loop * diameter passes within that
/// distance, and e_ref is either on a narrower (point-like) loop or outside.
/// Point-like loops are bound levels the twist barely moves.
EnclosureResult enclosure(const SpectralLoop& loop, cplx e_ref, const Thresholds& th = {});
std::vector<EnclosureResult> enclosure(const SpectralLoop& loop, const std::vector<cplx>& e_ref, const Thresholds& th = {});

/// OBC eigenvalues with in_line_gap set, grouped by eps_deg.
LineGapReport line_gap_states(const Spectrum& obc, const SpectralLoop& loop, const Thresholds& th = {});

/// Partition into connected components of |a - b| < eps.
std::vector<std::vector<std::size_t>> degenerate_groups(const std::vector<cplx>& energies, double eps);

/// I_{n/2} (x) sigma_y; n must be even.
Eigen::MatrixXcd time_reversal_operator(std::size_t n);

/// || T H^T T^{-1} - H ||_F
double symmetry_defect(const HamiltonianMatrix& h, const Eigen::MatrixXcd& t);

} // namespace nhse
