#pragma once

#include <cstddef>

namespace nhse {

struct Thresholds {
    double theta_b = 0.25;    // boundary weight
    double theta_d = 0.2;     // defect-window weight
    std::size_t window = 5;   // w
    double eps_loop = 3e-3;   // fraction of the loop diameter
    double eps_deg = 1e-8;    // absolute
    double collapse = 1e-9;   // loop area below collapse * diameter^2 winds zero

    bool operator==(const Thresholds&) const = default;
};

} // namespace nhse
