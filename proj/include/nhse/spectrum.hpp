#pragma once

#include <cstddef>
#include <vector>

#include "nhse/lattice.hpp"

namespace nhse {

struct Spectrum {
    std::vector<cplx> eigenvalues;   // sorted by (real, imag)
    Eigen::MatrixXcd eigenvectors;   // column j belongs to eigenvalues[j], unit 2-norm
    std::vector<double> residuals;   // ||H v - E v||_2
    double spectral_radius = 0.0;    // power-iteration estimate

    std::size_t size() const { return eigenvalues.size(); }
    /// 1e-10 * max(1, rho)
    double residual_bound() const;
};

/// Dense complex non-symmetric eigendecomposition (LAPACK zgeev) with
/// inverse-iteration polishing of any pair above the residual bound.
Spectrum eigensolve(const HamiltonianMatrix& h);

/// Eigenvalues only, sorted by (real, imag).
std::vector<cplx> eigenvalues(const HamiltonianMatrix& h);

double spectral_radius_estimate(const HamiltonianMatrix& h, int iterations = 50);

Spectrum obc_spectrum(const LatticeSpec& spec);

/// Lexicographic (real, imag) order used for every sorted spectrum.
bool energy_less(cplx a, cplx b);

struct LoopOptions {
    int max_doublings = 3;
    /// a step moving an eigenvalue further than this fraction of the loop
    /// diameter counts as under-resolved
    double max_step_fraction = 0.05;
};

/// PBC spectrum of a supercell swept over the twist angle.
struct SpectralLoop {
    std::vector<double> twist_samples;            // 2 pi k / n_k
    std::vector<std::vector<cplx>> energies;      // [k] sorted spectrum at twist_samples[k]
    std::vector<std::vector<cplx>> band_paths;    // [band][k], continuous in k
    /// band b at the end of the sweep continues as band monodromy[b] at its start
    std::vector<std::size_t> monodromy;
    /// closed curves: bands of one monodromy cycle laid end to end
    std::vector<std::vector<std::size_t>> loop_bands;
    std::vector<std::vector<cplx>> loops;
    double diameter = 0.0;

    std::size_t n_k() const { return twist_samples.size(); }
    std::size_t n_bands() const { return band_paths.size(); }
};

/// n_k >= 64; doubles n_k when tracking is ambiguous or under-resolved.
SpectralLoop spectral_loop(const LatticeSpec& spec, int n_k, const LoopOptions& options = {});

/// Matching of `from` onto `to`: result[i] is the index in `to` paired with from[i].
/// Sets *ambiguous when a pick was a tie between two distinct candidates.
std::vector<std::size_t> greedy_match(const std::vector<cplx>& from, const std::vector<cplx>& to,
                                      bool* ambiguous = nullptr);

} // namespace nhse
