#include "nhse/builders.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "nhse/errors.hpp"

namespace nhse {

void HnParams::set_strong_defect() {
    t1p = t1;
    t2p = 0.0;
    t1pp = 0.0;
    t2pp = t2;
    t3p = t3;
    t4p = 0.0;
    t3pp = 0.0;
    t4pp = t4;
}

void HnParams::set_bulk_defect() {
    t1p = t1pp = t1;
    t2p = t2pp = t2;
    t3p = t3pp = t3;
    t4p = t4pp = t4;
}

double SshParams::t1() const { return t + std::exp(gamma); }
double SshParams::t2() const { return t + std::exp(-gamma); }

std::size_t SshParams::n_sites(bool with_defect) const {
    return 2 * (n_cells_left + n_cells_right) + (with_defect ? 1 : 0);
}

namespace {

// Ordered bond list with in-place amplitude overrides.
class BondList {
public:
    void add(std::size_t from, std::size_t to, cplx a, bool wraps = false) {
        index_[{from, to, wraps}] = spec_.hoppings.size();
        spec_.hoppings.push_back({from, to, a, wraps});
    }
    void set(std::size_t from, std::size_t to, cplx a) {
        spec_.hoppings.at(index_.at({from, to, false})).amplitude = a;
    }
    LatticeSpec finish(std::size_t n) {
        spec_.n_sites = n;
        return std::move(spec_);
    }

private:
    struct Key {
        std::size_t from, to;
        bool wraps;
        auto operator<=>(const Key&) const = default;
    };
    LatticeSpec spec_;
    std::map<Key, std::size_t> index_;
};

} // namespace

LatticeSpec build_hn(const HnParams& p, bool with_defect) {
    const std::size_t n = p.n_sites;
    if (n == 0) throw SpecificationError("HN chain needs at least one site");
    if (with_defect) {
        if (n < 7) throw SpecificationError("HN chain with a defect needs N >= 7, got " + std::to_string(n));
        if (p.defect_site < 3 || p.defect_site + 2 > n)
            throw SpecificationError("defect site " + std::to_string(p.defect_site) +
                                     " needs two sites on each side in a chain of " + std::to_string(n));
    }

    BondList bonds;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bonds.add(i, i + 1, p.t1);
        bonds.add(i + 1, i, p.t2);
    }
    for (std::size_t i = 0; i + 2 < n; ++i) {
        bonds.add(i, i + 2, p.t3);
        bonds.add(i + 2, i, p.t4);
    }
    if (n >= 3) {
        bonds.add(n - 1, 0, p.t1, true);
        bonds.add(0, n - 1, p.t2, true);
    }
    if (n >= 5) {
        bonds.add(n - 2, 0, p.t3, true);
        bonds.add(0, n - 2, p.t4, true);
        bonds.add(n - 1, 1, p.t3, true);
        bonds.add(1, n - 1, p.t4, true);
    }

    if (with_defect) {
        const std::size_t d = p.defect_site - 1;
        bonds.set(d - 1, d, p.t1p);
        bonds.set(d, d - 1, p.t2p);
        bonds.set(d, d + 1, p.t1pp);
        bonds.set(d + 1, d, p.t2pp);
        bonds.set(d - 2, d, p.t3p);
        bonds.set(d, d - 2, p.t4p);
        bonds.set(d, d + 2, p.t3pp);
        bonds.set(d + 2, d, p.t4pp);
    }
    return bonds.finish(n);
}

LatticeSpec build_ssh(const SshParams& p, bool with_defect) {
    if (p.n_cells_left == 0 || p.n_cells_right == 0)
        throw SpecificationError("SSH chain needs at least one cell on each side of the defect");
    for (double v : {p.t, p.gamma, p.t0, p.t0p, p.t1pp, p.t2pp, p.t3pp, p.t4pp})
        if (!std::isfinite(v)) throw SpecificationError("SSH parameter is not finite");

    const double t1 = p.t1(), t2 = p.t2(), t3 = p.t3(), t4 = p.t4();
    const std::size_t cells = p.n_cells_left + p.n_cells_right;
    const std::size_t n = p.n_sites(with_defect);
    const std::size_t d = 2 * p.n_cells_left;

    // A site of cell c (0-based over both branches); B is A + 1
    auto a_site = [&](std::size_t c) {
        return 2 * c + (with_defect && c >= p.n_cells_left ? 1 : 0);
    };

    BondList bonds;
    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t a = a_site(c);
        bonds.add(a, a + 1, t1);
        bonds.add(a + 1, a, t2);
    }
    for (std::size_t c = 0; c + 1 < cells; ++c) {
        const bool across = with_defect && c + 1 == p.n_cells_left;
        const std::size_t a = a_site(c), next = a_site(c + 1);
        if (across) {
            bonds.add(d, a + 1, p.t0p);
            bonds.add(a + 1, d, p.t0p);
            bonds.add(d, next, p.t0p);
            bonds.add(next, d, p.t0p);
            bonds.add(a, d, p.t1pp);
            bonds.add(d, a, p.t2pp);
            bonds.add(next + 1, d, p.t4pp);
            bonds.add(d, next + 1, p.t3pp);
            bonds.add(a + 1, next, t3);
            bonds.add(next, a + 1, t4);
        } else {
            bonds.add(a + 1, next, p.t0);
            bonds.add(next, a + 1, p.t0);
            for (std::size_t s = 0; s < 2; ++s) {
                bonds.add(a + s, next + s, t3);
                bonds.add(next + s, a + s, t4);
            }
        }
    }
    if (cells >= 2) {
        const std::size_t last = a_site(cells - 1);
        bonds.add(last + 1, 0, p.t0, true);
        bonds.add(0, last + 1, p.t0, true);
        if (cells >= 3) {
            for (std::size_t s = 0; s < 2; ++s) {
                bonds.add(last + s, s, t3, true);
                bonds.add(s, last + s, t4, true);
            }
        }
    }
    return bonds.finish(n);
}

SshParams apply_defect_strength(SshParams params) {
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw SpecificationError("defect strength p must lie in [0, 1], got " + std::to_string(params.p));
    const double p = params.p;
    params.t1pp = params.t3pp = p * params.t3();
    params.t2pp = params.t4pp = p * params.t4();
    params.t0p = p * params.t0;
    return params;
}

} // namespace nhse
