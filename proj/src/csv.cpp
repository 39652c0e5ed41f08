#include "nhse/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace nhse {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
}

CsvTable states_table(const std::vector<StateRecord>& states) {
    CsvTable t{states_columns, {}};
    for (const auto& s : states) {
        t.rows.push_back({std::to_string(s.index), format_number(s.energy.real()), format_number(s.energy.imag()),
                          std::string(to_string(s.label)), std::string(to_string(s.enclosure)),
                          format_number(s.metrics.ipr), format_number(s.metrics.com), format_number(s.metrics.w_left),
                          format_number(s.metrics.w_right), format_number(s.metrics.w_defect),
                          format_number(s.residual)});
    }
    return t;
}

CsvTable spectrum_table(const Spectrum& s) {
    CsvTable t{{"index", "re_energy", "im_energy", "residual"}, {}};
    for (std::size_t i = 0; i < s.size(); ++i)
        t.rows.push_back({std::to_string(i), format_number(s.eigenvalues[i].real()),
                          format_number(s.eigenvalues[i].imag()), format_number(s.residuals[i])});
    return t;
}

CsvTable loop_table(const SpectralLoop& loop) {
    CsvTable t{{"loop", "point", "band", "phi", "re_energy", "im_energy"}, {}};
    for (std::size_t l = 0; l < loop.loop_bands.size(); ++l) {
        std::size_t point = 0;
        for (std::size_t b : loop.loop_bands[l]) {
            for (std::size_t k = 0; k < loop.n_k(); ++k, ++point) {
                const cplx z = loop.band_paths[b][k];
                t.rows.push_back({std::to_string(l), std::to_string(point), std::to_string(b),
                                  format_number(loop.twist_samples[k]), format_number(z.real()),
                                  format_number(z.imag())});
            }
        }
    }
    return t;
}

CsvTable gap_scan_table(const std::vector<GapScanRow>& rows) {
    CsvTable t{{"t", "gap_width", "max_abs_im", "edge", "re_edge", "im_edge", "edge_split", "edge_abs_im",
                "max_residual"},
               {}};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.t), format_number(r.gap_width), format_number(r.max_abs_im),
                          r.edge ? "1" : "0", format_number(r.edge_energy.real()), format_number(r.edge_energy.imag()),
                          format_number(r.edge_split), format_number(r.edge_abs_im), format_number(r.max_residual)});
    return t;
}

} // namespace nhse
