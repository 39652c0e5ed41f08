#pragma once

#include <cstddef>

#include "nhse/lattice.hpp"

namespace nhse {

/// Hatano-Nelson chain with next-nearest-neighbour hopping and one defect site.
/// Sites are 1-based here, as in the usual notation; LatticeSpec indices are 0-based.
struct HnParams {
    cplx t1{1.0}, t2{0.6};  // NN, forward / backward
    cplx t3{1.0}, t4{0.75}; // NNN, forward / backward

    // defect region: primed couple N_d to its left, double-primed to its right
    cplx t1p{}, t2p{}, t1pp{}, t2pp{};
    cplx t3p{}, t4p{}, t3pp{}, t4pp{};

    std::size_t n_sites = 50;
    std::size_t defect_site = 25;

    /// Cut the outgoing bonds of N_d, keep the incoming ones.
    void set_strong_defect();
    /// Defect amplitudes equal to the bulk ones (defect removed).
    void set_bulk_defect();

    bool operator==(const HnParams&) const = default;
};

/// Non-reciprocal SSH chain: N_L cells, a bare defect site, N_R cells.
struct SshParams {
    double t = -1.0;
    double gamma = 0.4;
    double t0 = 1.0;

    double t0p = 0.0;
    double t1pp = 0.0, t2pp = 0.0, t3pp = 0.0, t4pp = 0.0;
    double p = 0.0;

    std::size_t n_cells_left = 25;
    std::size_t n_cells_right = 25;

    double t1() const;
    double t2() const;
    double t3() const { return t1(); }
    double t4() const { return t2(); }

    std::size_t n_sites(bool with_defect = true) const;
    /// 1-based, equal to 2 N_L + 1.
    std::size_t defect_site() const { return 2 * n_cells_left + 1; }

    bool operator==(const SshParams&) const = default;
};

LatticeSpec build_hn(const HnParams& params, bool with_defect);
LatticeSpec build_ssh(const SshParams& params, bool with_defect);

/// t1''=t3''=p t3, t2''=t4''=p t4, t0'=p t0.
SshParams apply_defect_strength(SshParams params);

} // namespace nhse
