#include "nhse/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nhse/errors.hpp"
#include "nhse/parallel.hpp"

namespace nhse {

LocalizationMetrics localization_metrics(const Eigen::VectorXcd& psi, std::size_t defect, std::size_t w) {
    const std::size_t n = static_cast<std::size_t>(psi.size());
    if (n < 4 * w + 2)
        throw SpecificationError("windows of " + std::to_string(w) + " sites overlap on a chain of " +
                                 std::to_string(n));
    if (defect >= n) throw SpecificationError("defect site " + std::to_string(defect) + " is outside the chain");

    const Eigen::VectorXd prob = psi.cwiseAbs2();
    LocalizationMetrics m;
    Eigen::Index peak = 0;
    prob.maxCoeff(&peak);
    m.peak_site = static_cast<std::size_t>(peak);
    m.ipr = prob.squaredNorm();
    for (std::size_t i = 0; i < n; ++i) m.com += static_cast<double>(i) * prob(static_cast<Eigen::Index>(i));
    const auto wi = static_cast<Eigen::Index>(w);
    m.w_left = prob.head(wi).sum();
    m.w_right = prob.tail(wi).sum();
    const std::size_t lo = defect >= w ? defect - w : 0;
    const std::size_t hi = std::min(n - 1, defect + w);
    m.w_defect = prob.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo + 1)).sum();
    return m;
}

std::string_view to_string(Label l) {
    switch (l) {
    case Label::skin: return "skin";
    case Label::defect: return "defect";
    case Label::hybrid: return "hybrid";
    case Label::edge: return "edge";
    case Label::extended: return "extended";
    }
    return "?";
}

Label classify_state(const StateInputs& in, const Thresholds& th) {
    const double b = in.metrics.boundary();
    const double d = in.metrics.w_defect;
    const bool boundary = b > th.theta_b;
    const bool at_defect = d > th.theta_d;
    if (in.enclosure == Enclosure::outside && in.degenerate && boundary && !at_defect) return Label::edge;
    if (in.enclosure != Enclosure::inside && at_defect && !boundary) return Label::defect;
    if (at_defect && boundary) return Label::hybrid;
    if (in.enclosure == Enclosure::inside && boundary) return Label::skin;
    return Label::extended;
}

std::vector<StateRecord> classify(const Spectrum& obc, const SpectralLoop& loop, std::size_t defect,
                                  const Thresholds& th) {
    const auto enc = enclosure(loop, obc.eigenvalues, th);

    std::vector<cplx> gap;
    std::vector<std::size_t> gap_index;
    for (std::size_t i = 0; i < enc.size(); ++i) {
        if (!enc[i].in_line_gap) continue;
        gap.push_back(obc.eigenvalues[i]);
        gap_index.push_back(i);
    }
    std::vector<bool> degenerate(obc.size(), false);
    for (const auto& g : degenerate_groups(gap, th.eps_deg))
        if (g.size() > 1)
            for (auto k : g) degenerate[gap_index[k]] = true;

    std::vector<StateRecord> out(obc.size());
    for (std::size_t i = 0; i < obc.size(); ++i) {
        StateRecord& r = out[i];
        r.index = i;
        r.energy = obc.eigenvalues[i];
        r.metrics = localization_metrics(obc.eigenvectors.col(static_cast<Eigen::Index>(i)), defect, th.window);
        r.enclosure = enc[i].kind;
        r.residual = obc.residuals[i];
        r.label = classify_state({r.energy, r.metrics, r.enclosure, degenerate[i]}, th);
    }
    return out;
}

std::size_t LabelCounts::total() const { return std::accumulate(n.begin(), n.end(), std::size_t{0}); }

LabelCounts count_labels(const std::vector<StateRecord>& states) {
    LabelCounts c;
    for (const auto& s : states) ++c[s.label];
    return c;
}

CriticalSizeResult critical_size(const HnParams& family, const std::vector<std::size_t>& sizes, const Thresholds& th) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw SpecificationError("critical_size needs ascending sizes");
    CriticalSizeResult out;
    for (std::size_t n : sizes) {
        HnParams p = family;
        p.n_sites = n;
        p.defect_site = n / 2;
        const Spectrum s = obc_spectrum(build_hn(p, true));
        // hybrid needs only the two weights, never the enclosure
        CriticalSizePoint pt{n, 0};
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (std::abs(s.eigenvalues[i]) < zero_mode_tolerance) continue;
            const auto m = localization_metrics(s.eigenvectors.col(static_cast<Eigen::Index>(i)), p.defect_site - 1,
                                                th.window);
            if (classify_state({s.eigenvalues[i], m, Enclosure::inside, false}, th) == Label::hybrid) ++pt.hybrids;
        }
        out.scanned.push_back(pt);
        if (pt.hybrids == 0) {
            out.n_c = n;
            break;
        }
    }
    return out;
}

std::vector<GapScanRow> gap_scan(const SshParams& family, double t_min, double t_max, double step,
                                 const Thresholds& th) {
    if (!(step > 0.0) || !(t_max >= t_min)) throw SpecificationError("gap_scan needs t_min <= t_max and step > 0");
    const auto count = static_cast<std::size_t>(std::llround((t_max - t_min) / step)) + 1;
    std::vector<GapScanRow> rows(count);
    parallel_for(count, [&](std::size_t i) {
        SshParams p = family;
        p.t = t_min + static_cast<double>(i) * step;
        const Spectrum s = obc_spectrum(build_ssh(p, false));
        GapScanRow& r = rows[i];
        r.t = p.t;
        r.max_residual = *std::max_element(s.residuals.begin(), s.residuals.end());

        const std::size_t n = s.size();
        std::vector<cplx> e = s.eigenvalues; // already ordered by real part
        for (const auto& z : e) r.max_abs_im = std::max(r.max_abs_im, std::abs(z.imag()));
        const std::size_t mid = n / 2;
        if (n >= 4) {
            const cplx a = e[mid - 1], b = e[mid];
            r.edge_split = std::abs(a - b);
            r.edge = r.edge_split < th.eps_deg;
            std::size_t lower_end = mid; // exclusive
            std::size_t upper_begin = mid;
            if (r.edge) {
                r.edge_energy = 0.5 * (a + b);
                r.edge_abs_im = std::max(std::abs(a.imag()), std::abs(b.imag()));
                lower_end = mid - 1;
                upper_begin = mid + 1;
            }
            double lower = -std::numeric_limits<double>::infinity();
            double upper = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < lower_end; ++k) lower = std::max(lower, e[k].real());
            for (std::size_t k = upper_begin; k < n; ++k) upper = std::min(upper, e[k].real());
            r.gap_width = upper - lower;
        }
    });
    return rows;
}

} // namespace nhse
