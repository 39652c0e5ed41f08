#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nhse/classifier.hpp"
#include "nhse/spectrum.hpp"

namespace nhse {

/// Complex-plane scatter of OBC energies coloured by label, plus one path per loop.
std::string spectrum_svg(const std::vector<StateRecord>& states, const SpectralLoop* loop, const std::string& title);

/// |psi_n| against site index for the selected eigenvector columns.
std::string profiles_svg(const Spectrum& s, const std::vector<std::size_t>& selected, std::size_t defect,
                         const std::string& title);

} // namespace nhse
