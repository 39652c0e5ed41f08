#pragma once

#include <string>
#include <vector>

#include "nhse/classifier.hpp"
#include "nhse/spectrum.hpp"

namespace nhse {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

inline const std::vector<std::string> states_columns{"index",   "re_energy", "im_energy", "label",
                                                     "enclosure", "ipr",     "com",       "w_left",
                                                     "w_right", "w_defect",  "residual"};

CsvTable states_table(const std::vector<StateRecord>& states);
CsvTable spectrum_table(const Spectrum& s);
CsvTable loop_table(const SpectralLoop& loop);
CsvTable gap_scan_table(const std::vector<GapScanRow>& rows);

} // namespace nhse
