#include "nhse/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "nhse/errors.hpp"
#include "nhse/geometry.hpp"
#include "nhse/parallel.hpp"

namespace nhse {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_bisections = 20;

double wrap_angle(double d) { return std::remainder(d, 2.0 * pi); }

struct Box {
    double x0, x1, y0, y1;

    double distance(cplx z) const {
        const double dx = std::max({x0 - z.real(), 0.0, z.real() - x1});
        const double dy = std::max({y0 - z.imag(), 0.0, z.imag() - y1});
        return std::hypot(dx, dy);
    }
};

Box bounding_box(const std::vector<cplx>& c) {
    Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& z : c) {
        b.x0 = std::min(b.x0, z.real());
        b.x1 = std::max(b.x1, z.real());
        b.y0 = std::min(b.y0, z.imag());
        b.y1 = std::max(b.y1, z.imag());
    }
    return b;
}

double phase_at(const LatticeSpec& spec, double phi, cplx e) {
    const auto p = det_phase(assemble(spec, BoundaryCondition::twisted(phi)), e);
    if (!p) throw ResolutionError(phi, "det(H - E) vanishes exactly at phi = " + std::to_string(phi));
    return *p;
}

double segment_phase(const LatticeSpec& spec, cplx e, double a, double b, double pa, double pb, int depth) {
    const double d = wrap_angle(pb - pa);
    if (std::abs(d) < pi / 2) return d;
    if (depth >= max_bisections)
        throw ResolutionError(a, "phase of det(H - E) still jumps by " + std::to_string(d) + " rad near phi = " +
                                     std::to_string(a) + " after refinement");
    const double mid = 0.5 * (a + b);
    const double pm = phase_at(spec, mid, e);
    return segment_phase(spec, e, a, mid, pa, pm, depth + 1) + segment_phase(spec, e, mid, b, pm, pb, depth + 1);
}

double phase_trace(const LatticeSpec& spec, cplx e, std::size_t m) {
    std::vector<double> phi(m + 1), ph(m + 1);
    for (std::size_t k = 0; k <= m; ++k) phi[k] = 2.0 * pi * static_cast<double>(k) / static_cast<double>(m);
    parallel_for(m, [&](std::size_t k) { ph[k] = phase_at(spec, phi[k], e); });
    ph[m] = ph[0];
    std::vector<double> parts(m);
    parallel_for(m, [&](std::size_t k) { parts[k] = segment_phase(spec, e, phi[k], phi[k + 1], ph[k], ph[k + 1], 0); });
    return std::accumulate(parts.begin(), parts.end(), 0.0);
}

struct LoopIndex {
    std::vector<Box> boxes;
    std::vector<bool> collapsed;
    std::vector<bool> point_like; // extent below eps: a level the twist barely moves
    double eps = 0.0;
};

LoopIndex index_loop(const SpectralLoop& loop, const Thresholds& th) {
    if (loop.loops.empty()) throw SpecificationError("spectral loop has no closed curves");
    LoopIndex ix;
    for (const auto& c : loop.loops) ix.boxes.push_back(bounding_box(c));
    ix.collapsed = collapsed_loops(loop, th);
    ix.eps = th.eps_loop * loop.diameter;
    for (const auto& c : loop.loops) ix.point_like.push_back(geometry::diameter(c) < ix.eps);
    return ix;
}

EnclosureResult classify_point(const SpectralLoop& loop, const LoopIndex& ix, cplx z) {
    EnclosureResult r;
    double best = std::numeric_limits<double>::infinity();
    double best_band = best; // over loops that are not point-like
    bool winds = false;
    for (std::size_t l = 0; l < loop.loops.size(); ++l) {
        const Box& b = ix.boxes[l];
        if (!ix.collapsed[l] && z.real() >= b.x0 && z.real() <= b.x1 && z.imag() >= b.y0 && z.imag() <= b.y1) {
            const int w = geometry::winding(loop.loops[l], z);
            r.crossings += w;
            winds = winds || w != 0;
        }
        const double bound = ix.point_like[l] ? best : best_band;
        if (b.distance(z) >= bound) continue;
        const double d = geometry::distance(loop.loops[l], z);
        best = std::min(best, d);
        if (!ix.point_like[l]) best_band = std::min(best_band, d);
    }
    r.distance = best;
    if (best < ix.eps)
        r.kind = Enclosure::on;
    else
        r.kind = winds ? Enclosure::inside : Enclosure::outside;
    // an isolated level: clear of every extended band, and either sitting on a
    // point-like loop or not enclosed at all
    r.in_line_gap = best_band >= ix.eps && (best < ix.eps || !winds);
    return r;
}

} // namespace

std::string_view to_string(Enclosure e) {
    switch (e) {
    case Enclosure::inside: return "inside";
    case Enclosure::on: return "on";
    case Enclosure::outside: return "outside";
    }
    return "?";
}

std::optional<double> det_phase(const HamiltonianMatrix& h, cplx e) {
    const auto n = h.rows();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h - e * Eigen::MatrixXcd::Identity(n, n));
    const auto& f = lu.matrixLU();
    double phase = lu.permutationP().determinant() < 0 ? pi : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx u = f(i, i);
        if (u == cplx(0.0, 0.0)) return std::nullopt;
        phase += std::arg(u);
    }
    return phase;
}

WindingResult winding_number(const LatticeSpec& spec, cplx e_ref, int n_k, const Thresholds& th) {
    return winding_number(spec, spectral_loop(spec, n_k), e_ref, th);
}

WindingResult winding_number(const LatticeSpec& spec, const SpectralLoop& loop, cplx e_ref, const Thresholds& th) {
    if (!std::isfinite(e_ref.real()) || !std::isfinite(e_ref.imag()))
        throw SpecificationError("reference energy is not finite");
    if (!spec.has_wraps()) throw SpecificationError("winding number needs a spec with wrapped bonds");

    WindingResult out;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : loop.loops) d = std::min(d, geometry::distance(c, e_ref));
    out.on_loop = d < th.eps_loop * loop.diameter;

    try {
        out.phase_trace = phase_trace(spec, e_ref, std::max<std::size_t>(loop.n_k(), 64));
    } catch (const ResolutionError&) {
        if (!out.on_loop) throw;
        out.phase_trace = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (out.on_loop) return out;

    const long v = std::lround(out.phase_trace / (2.0 * pi));
    if (std::abs(out.phase_trace - 2.0 * pi * static_cast<double>(v)) >= 0.01)
        throw ResolutionError(0.0, "phase trace " + std::to_string(out.phase_trace) + " is not a multiple of 2 pi");
    out.value = static_cast<int>(v);
    return out;
}

std::vector<bool> collapsed_loops(const SpectralLoop& loop, const Thresholds& th) {
    const double floor = th.collapse * loop.diameter * loop.diameter;
    std::vector<bool> out;
    out.reserve(loop.loops.size());
    for (const auto& c : loop.loops) out.push_back(std::abs(geometry::signed_area(c)) < floor);
    return out;
}

EnclosureResult enclosure(const SpectralLoop& loop, cplx e_ref, const Thresholds& th) {
    return classify_point(loop, index_loop(loop, th), e_ref);
}

std::vector<EnclosureResult> enclosure(const SpectralLoop& loop, const std::vector<cplx>& e_ref, const Thresholds& th) {
    const LoopIndex ix = index_loop(loop, th);
    std::vector<EnclosureResult> out(e_ref.size());
    parallel_for(e_ref.size(), [&](std::size_t i) { out[i] = classify_point(loop, ix, e_ref[i]); });
    return out;
}

std::vector<std::vector<std::size_t>> degenerate_groups(const std::vector<cplx>& energies, double eps) {
    const std::size_t n = energies.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(energies[i] - energies[j]) < eps) parent[root(j)] = root(i);

    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = root(i);
        if (slot[r] == n) {
            slot[r] = groups.size();
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    return groups;
}

LineGapReport line_gap_states(const Spectrum& obc, const SpectralLoop& loop, const Thresholds& th) {
    const auto enc = enclosure(loop, obc.eigenvalues, th);
    LineGapReport r;
    for (std::size_t i = 0; i < enc.size(); ++i) {
        if (!enc[i].in_line_gap) continue;
        r.indices.push_back(i);
        r.in_gap_energies.push_back(obc.eigenvalues[i]);
    }
    r.degenerate_groups = degenerate_groups(r.in_gap_energies, th.eps_deg);
    return r;
}

Eigen::MatrixXcd time_reversal_operator(std::size_t n) {
    if (n % 2 != 0)
        throw SpecificationError("I (x) sigma_y needs an even dimension, got " + std::to_string(n));
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; i += 2) {
        t(i, i + 1) = cplx(0.0, -1.0);
        t(i + 1, i) = cplx(0.0, 1.0);
    }
    return t;
}

double symmetry_defect(const HamiltonianMatrix& h, const Eigen::MatrixXcd& t) {
    if (t.rows() != t.cols()) throw SpecificationError("T must be square");
    if (t.rows() != h.rows() || h.rows() != h.cols())
        throw SpecificationError("T is " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + " but H is " +
                                 std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
    const Eigen::MatrixXcd gram = t.adjoint() * t - Eigen::MatrixXcd::Identity(t.rows(), t.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-12) throw SpecificationError("T is not unitary");
    return (t * h.transpose() * t.adjoint() - h).norm();
}

} // namespace nhse
