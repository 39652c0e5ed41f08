#include "nhse/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "nhse/errors.hpp"

namespace nhse {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string bond_text(std::size_t from, std::size_t to) {
    std::ostringstream os;
    os << "(" << from << " -> " << to << ")";
    return os.str();
}

} // namespace

bool LatticeSpec::has_wraps() const {
    return std::any_of(hoppings.begin(), hoppings.end(), [](const Hopping& h) { return h.wraps; });
}

std::vector<Diagnostic> validate(const LatticeSpec& spec) {
    std::vector<Diagnostic> out;
    const std::size_t n = spec.n_sites;
    if (n == 0) out.push_back({Diagnostic::Kind::empty_lattice, 0, 0, "lattice has no sites"});

    for (const auto& h : spec.hoppings) {
        if (h.from >= n || h.to >= n) {
            out.push_back({Diagnostic::Kind::out_of_range, h.from, h.to,
                           "hopping " + bond_text(h.from, h.to) + " outside [0, " + std::to_string(n) + ")"});
            continue;
        }
        if (!finite(h.amplitude))
            out.push_back({Diagnostic::Kind::non_finite, h.from, h.to,
                           "non-finite amplitude on " + bond_text(h.from, h.to)});
        if (h.wraps) {
            const std::size_t span = h.from > h.to ? h.from - h.to : h.to - h.from;
            if (2 * span <= n)
                out.push_back({Diagnostic::Kind::bad_wrap, h.from, h.to,
                               "wrapped hopping " + bond_text(h.from, h.to) + " does not cross the chain end"});
        }
    }
    for (const auto& o : spec.onsite) {
        if (o.site >= n)
            out.push_back({Diagnostic::Kind::out_of_range, o.site, o.site,
                           "onsite term at " + std::to_string(o.site) + " outside [0, " + std::to_string(n) + ")"});
        else if (!finite(o.energy))
            out.push_back({Diagnostic::Kind::non_finite, o.site, o.site,
                           "non-finite onsite energy at " + std::to_string(o.site)});
    }

    // Duplicates: the same directed pair twice in the same boundary class.
    std::vector<std::tuple<std::size_t, std::size_t, bool>> keys;
    keys.reserve(spec.hoppings.size());
    for (const auto& h : spec.hoppings) keys.emplace_back(h.from, h.to, h.wraps);
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (keys[i] == keys[i - 1] && (i < 2 || keys[i] != keys[i - 2])) {
            const auto [f, t, w] = keys[i];
            out.push_back({Diagnostic::Kind::duplicate, f, t,
                           std::string("duplicate ") + (w ? "wrapped " : "") + "hopping " + bond_text(f, t)});
        }
    }
    std::vector<std::size_t> sites;
    for (const auto& o : spec.onsite) sites.push_back(o.site);
    std::sort(sites.begin(), sites.end());
    for (std::size_t i = 1; i < sites.size(); ++i)
        if (sites[i] == sites[i - 1] && (i < 2 || sites[i] != sites[i - 2]))
            out.push_back({Diagnostic::Kind::duplicate, sites[i], sites[i],
                           "duplicate onsite term at " + std::to_string(sites[i])});
    return out;
}

HamiltonianMatrix assemble(const LatticeSpec& spec, const BoundaryCondition& bc) {
    const auto diags = validate(spec);
    if (!diags.empty()) throw SpecificationError(diags.front().message);
    if (!std::isfinite(bc.phi())) throw SpecificationError("twist angle is not finite");

    const auto n = static_cast<Eigen::Index>(spec.n_sites);
    HamiltonianMatrix h = HamiltonianMatrix::Zero(n, n);
    const cplx forward = std::polar(1.0, bc.phi());
    const cplx backward = std::conj(forward);
    for (const auto& b : spec.hoppings) {
        cplx a = b.amplitude;
        if (b.wraps) {
            if (bc.is_open()) continue;
            a *= b.to > b.from ? forward : backward;
        }
        h(static_cast<Eigen::Index>(b.to), static_cast<Eigen::Index>(b.from)) += a;
    }
    for (const auto& o : spec.onsite) {
        const auto i = static_cast<Eigen::Index>(o.site);
        h(i, i) += o.energy;
    }
    return h;
}

LatticeSpec strip_wraps(const LatticeSpec& spec) {
    LatticeSpec out = spec;
    std::erase_if(out.hoppings, [](const Hopping& h) { return h.wraps; });
    return out;
}

LatticeSpec tile_ring(const LatticeSpec& cell, std::size_t copies) {
    if (copies == 0) throw SpecificationError("tile_ring needs at least one copy");
    const std::size_t n = cell.n_sites;
    LatticeSpec ring;
    ring.n_sites = n * copies;
    for (std::size_t m = 0; m < copies; ++m) {
        for (const auto& h : cell.hoppings) {
            Hopping b = h;
            b.from = m * n + h.from;
            if (!h.wraps) {
                b.to = m * n + h.to;
            } else {
                // from > to leaves through the right end into the next cell
                const bool right = h.from > h.to;
                const std::size_t target = right ? (m + 1) % copies : (m + copies - 1) % copies;
                b.to = target * n + h.to;
                b.wraps = right ? m + 1 == copies : m == 0;
            }
            ring.hoppings.push_back(b);
        }
        for (const auto& o : cell.onsite) ring.onsite.push_back({m * n + o.site, o.energy});
    }
    return ring;
}

} // namespace nhse
