#include "nhse/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nhse/errors.hpp"
#include "nhse/geometry.hpp"
#include "nhse/parallel.hpp"

namespace nhse {

namespace {

// zhseqr gives up after 30 * max(10, n) sweeps
long iteration_cap(std::size_t n) { return 30L * static_cast<long>(std::max<std::size_t>(10, n)); }

void check_input(const HamiltonianMatrix& h) {
    if (h.rows() != h.cols()) throw SpecificationError("eigensolve needs a square matrix");
    if (h.rows() == 0) throw SpecificationError("eigensolve needs a non-empty matrix");
    if (!h.allFinite()) throw SpecificationError("matrix has non-finite entries");
}

// zgeev can overflow on huge entries and still report success
void check_output(const std::vector<cplx>& w, std::size_t n) {
    for (const auto& z : w)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw SolverError(n, iteration_cap(n),
                              "zgeev returned non-finite eigenvalues on a " + std::to_string(n) + "x" +
                                  std::to_string(n) + " matrix (entries too large?)");
}

std::vector<std::size_t> sorted_order(const std::vector<cplx>& w) {
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energy_less(w[a], w[b]); });
    return order;
}

double residual(const HamiltonianMatrix& h, const Eigen::VectorXcd& v, cplx e) {
    return (h * v - e * v).stableNorm();
}

// Scale to unit norm and make the largest component real positive.
void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
    v /= v.norm();
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    const cplx c = v(at);
    if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

// A few steps of shifted inverse iteration; returns the improved residual.
double polish(const HamiltonianMatrix& h, cplx e, double scale, Eigen::Ref<Eigen::VectorXcd> v, double current) {
    const auto n = h.rows();
    const cplx shift = e + cplx(1.0, 1.0) * (1e-13 * scale);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h - shift * Eigen::MatrixXcd::Identity(n, n));
    Eigen::VectorXcd x = v;
    double best = current;
    for (int it = 0; it < 3; ++it) {
        x = lu.solve(x);
        const double nrm = x.norm();
        if (!std::isfinite(nrm) || nrm == 0.0) break;
        x /= nrm;
        const double r = residual(h, x, e);
        if (r < best) {
            best = r;
            v = x;
        }
    }
    return best;
}

} // namespace

bool energy_less(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

double Spectrum::residual_bound() const { return 1e-10 * std::max(1.0, spectral_radius); }

double spectral_radius_estimate(const HamiltonianMatrix& h, int iterations) {
    const auto n = h.rows();
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v /= v.norm();
    double growth = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd w = h * v;
        growth = w.stableNorm();
        if (growth == 0.0) return 0.0;
        v = w / growth;
    }
    return growth;
}

std::vector<cplx> eigenvalues(const HamiltonianMatrix& h) {
    check_input(h);
    const auto n = static_cast<lapack_int>(h.rows());
    Eigen::MatrixXcd a = h;
    std::vector<cplx> w(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw SolverError(static_cast<std::size_t>(n), iteration_cap(static_cast<std::size_t>(n)),
                          "zgeev failed (info " + std::to_string(info) + ") on a " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
    check_output(w, static_cast<std::size_t>(n));
    std::sort(w.begin(), w.end(), energy_less);
    return w;
}

Spectrum eigensolve(const HamiltonianMatrix& h) {
    check_input(h);
    const auto n = static_cast<lapack_int>(h.rows());
    Eigen::MatrixXcd a = h;
    Eigen::MatrixXcd vr(n, n);
    std::vector<cplx> w(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr, 1, vr.data(), n);
    if (info != 0)
        throw SolverError(static_cast<std::size_t>(n), iteration_cap(static_cast<std::size_t>(n)),
                          "zgeev failed (info " + std::to_string(info) + ") on a " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
    check_output(w, static_cast<std::size_t>(n));
    if (!vr.allFinite())
        throw SolverError(static_cast<std::size_t>(n), iteration_cap(static_cast<std::size_t>(n)),
                          "zgeev returned non-finite eigenvectors");

    Spectrum s;
    s.spectral_radius = spectral_radius_estimate(h);
    const auto order = sorted_order(w);
    s.eigenvalues.resize(order.size());
    s.eigenvectors.resize(n, n);
    for (std::size_t j = 0; j < order.size(); ++j) {
        s.eigenvalues[j] = w[order[j]];
        s.eigenvectors.col(static_cast<Eigen::Index>(j)) = vr.col(static_cast<Eigen::Index>(order[j]));
    }

    const Eigen::MatrixXcd r = h * s.eigenvectors -
                               s.eigenvectors * Eigen::Map<const Eigen::VectorXcd>(s.eigenvalues.data(), n).asDiagonal();
    const double bound = s.residual_bound();
    s.residuals.resize(order.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        auto v = s.eigenvectors.col(j);
        double res = r.col(j).stableNorm();
        if (res > bound) res = polish(h, s.eigenvalues[static_cast<std::size_t>(j)], std::max(1.0, s.spectral_radius), v, res);
        if (!std::isfinite(res))
            throw SolverError(static_cast<std::size_t>(n), iteration_cap(static_cast<std::size_t>(n)),
                              "eigenpair " + std::to_string(j) + " has a non-finite residual");
        fix_gauge(v);
        s.residuals[static_cast<std::size_t>(j)] = res;
    }
    return s;
}

Spectrum obc_spectrum(const LatticeSpec& spec) { return eigensolve(assemble(spec, BoundaryCondition::open())); }

std::vector<std::size_t> greedy_match(const std::vector<cplx>& from, const std::vector<cplx>& to, bool* ambiguous) {
    const std::size_t n = from.size();
    if (to.size() != n) throw SpecificationError("greedy_match needs equal-length lists");
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(from[i]), std::abs(to[i])});
    const double tie = 1e-12 * scale;
    const double same = 1e-9 * scale;

    struct Cand {
        double d;
        std::size_t i, j;
    };
    const std::size_t keep = std::min<std::size_t>(n, 8);
    std::vector<std::vector<Cand>> nearest(n);
    std::vector<Cand> all;
    all.reserve(n * keep);
    std::vector<Cand> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row[j] = {std::abs(from[i] - to[j]), i, j};
        auto by_d = [](const Cand& a, const Cand& b) { return a.d < b.d || (a.d == b.d && a.j < b.j); };
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(), by_d);
        nearest[i].assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep));
        all.insert(all.end(), nearest[i].begin(), nearest[i].end());
    }
    auto order = [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::sort(all.begin(), all.end(), order);

    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> result(n, none);
    std::vector<bool> taken(n, false);
    bool tied = false;

    auto has_twin = [&](std::size_t i) {
        for (std::size_t k = 0; k < n; ++k)
            if (k != i && std::abs(from[k] - from[i]) <= same) return true;
        return false;
    };
    auto assign = [&](const Cand& c, const std::vector<Cand>& options) {
        result[c.i] = c.j;
        taken[c.j] = true;
        for (const auto& o : options) {
            if (o.j == c.j || taken[o.j]) continue;
            if (o.d - c.d <= tie && std::abs(to[o.j] - to[c.j]) > same && !has_twin(c.i)) tied = true;
            break;
        }
    };

    for (const auto& c : all) {
        if (result[c.i] != none || taken[c.j]) continue;
        assign(c, nearest[c.i]);
    }

    // sources whose short lists ran dry: plain greedy over what is left
    std::vector<Cand> rest;
    for (std::size_t i = 0; i < n; ++i) {
        if (result[i] != none) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (!taken[j]) rest.push_back({std::abs(from[i] - to[j]), i, j});
    }
    std::sort(rest.begin(), rest.end(), order);
    for (const auto& c : rest) {
        if (result[c.i] != none || taken[c.j]) continue;
        result[c.i] = c.j;
        taken[c.j] = true;
    }

    if (ambiguous != nullptr) *ambiguous = tied;
    return result;
}

namespace {

struct Attempt {
    SpectralLoop loop;
    bool ok = true;
    double bad_phi = 0.0;
};

Attempt sweep(const LatticeSpec& spec, std::size_t m, const LoopOptions& options) {
    Attempt at;
    SpectralLoop& loop = at.loop;
    loop.twist_samples.resize(m);
    loop.energies.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        loop.twist_samples[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    parallel_for(m, [&](std::size_t k) {
        loop.energies[k] = eigenvalues(assemble(spec, BoundaryCondition::twisted(loop.twist_samples[k])));
    });

    const std::size_t n = spec.n_sites;
    loop.band_paths.assign(n, std::vector<cplx>(m));
    for (std::size_t b = 0; b < n; ++b) loop.band_paths[b][0] = loop.energies[0][b];

    std::vector<cplx> prev(n);
    double worst_step = 0.0;
    double worst_phi = 0.0;
    bool tied_any = false;
    double tied_phi = 0.0;
    auto step = [&](std::size_t k_from, const std::vector<cplx>& target) {
        for (std::size_t b = 0; b < n; ++b) prev[b] = loop.band_paths[b][k_from];
        bool tied = false;
        auto match = greedy_match(prev, target, &tied);
        if (tied && !tied_any) {
            tied_any = true;
            tied_phi = loop.twist_samples[k_from];
        }
        for (std::size_t b = 0; b < n; ++b) {
            const double d = std::abs(target[match[b]] - prev[b]);
            if (d > worst_step) {
                worst_step = d;
                worst_phi = loop.twist_samples[k_from];
            }
        }
        return match;
    };

    for (std::size_t k = 1; k < m; ++k) {
        const auto match = step(k - 1, loop.energies[k]);
        for (std::size_t b = 0; b < n; ++b) loop.band_paths[b][k] = loop.energies[k][match[b]];
    }
    loop.monodromy = step(m - 1, loop.energies[0]);

    std::vector<geometry::Point> all;
    all.reserve(n * m);
    for (const auto& path : loop.band_paths) all.insert(all.end(), path.begin(), path.end());
    loop.diameter = geometry::diameter(all);

    if (tied_any) {
        at.ok = false;
        at.bad_phi = tied_phi;
    } else if (loop.diameter > 0.0 && worst_step > options.max_step_fraction * loop.diameter) {
        at.ok = false;
        at.bad_phi = worst_phi;
    }

    std::vector<bool> seen(n, false);
    for (std::size_t b = 0; b < n; ++b) {
        if (seen[b]) continue;
        std::vector<std::size_t> cycle;
        std::vector<cplx> curve;
        for (std::size_t c = b; !seen[c]; c = loop.monodromy[c]) {
            seen[c] = true;
            cycle.push_back(c);
            curve.insert(curve.end(), loop.band_paths[c].begin(), loop.band_paths[c].end());
        }
        loop.loop_bands.push_back(std::move(cycle));
        loop.loops.push_back(std::move(curve));
    }
    return at;
}

} // namespace

SpectralLoop spectral_loop(const LatticeSpec& spec, int n_k, const LoopOptions& options) {
    if (n_k < 64) throw SpecificationError("spectral_loop needs n_k >= 64, got " + std::to_string(n_k));
    if (!spec.has_wraps()) throw SpecificationError("spectral_loop needs a spec with wrapped bonds");
    const auto diags = validate(spec);
    if (!diags.empty()) throw SpecificationError(diags.front().message);

    double bad_phi = 0.0;
    for (int attempt = 0; attempt <= options.max_doublings; ++attempt) {
        const std::size_t m = static_cast<std::size_t>(n_k) << attempt;
        Attempt at = sweep(spec, m, options);
        if (at.ok) return std::move(at.loop);
        bad_phi = at.bad_phi;
    }
    throw ResolutionError(bad_phi, "band tracking is ambiguous near phi = " + std::to_string(bad_phi) +
                                       " even at n_k = " +
                                       std::to_string(static_cast<long>(n_k) << options.max_doublings) +
                                       "; increase n_k");
}

} // namespace nhse
