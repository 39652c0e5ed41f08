#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nhse {

using cplx = std::complex<double>;

/// Dense Hamiltonian; element (to, from) is the amplitude of the hop from -> to.
using HamiltonianMatrix = Eigen::MatrixXcd;

struct Hopping {
    std::size_t from = 0;
    std::size_t to = 0;
    cplx amplitude{};
    bool wraps = false;

    bool operator==(const Hopping&) const = default;
};

struct Onsite {
    std::size_t site = 0;
    cplx energy{};

    bool operator==(const Onsite&) const = default;
};

struct LatticeSpec {
    std::size_t n_sites = 0;
    std::vector<Hopping> hoppings;
    std::vector<Onsite> onsite;

    bool has_wraps() const;
    bool operator==(const LatticeSpec&) const = default;
};

class BoundaryCondition {
public:
    static BoundaryCondition open() { return BoundaryCondition(true, 0.0); }
    static BoundaryCondition periodic() { return BoundaryCondition(false, 0.0); }
    static BoundaryCondition twisted(double phi) { return BoundaryCondition(false, phi); }

    bool is_open() const noexcept { return open_; }
    double phi() const noexcept { return phi_; }

private:
    BoundaryCondition(bool open, double phi) : open_(open), phi_(phi) {}

    bool open_;
    double phi_;
};

struct Diagnostic {
    enum class Kind { empty_lattice, out_of_range, duplicate, bad_wrap, non_finite };

    Kind kind;
    std::size_t from = 0;
    std::size_t to = 0;
    std::string message;
};

std::vector<Diagnostic> validate(const LatticeSpec& spec);

/// Wrapped bonds with to > from are "forward" and pick up e^{i phi};
/// the reverse direction picks up e^{-i phi}. Open boundaries drop them.
/// Throws SpecificationError if validate() reports anything.
HamiltonianMatrix assemble(const LatticeSpec& spec, const BoundaryCondition& bc);

/// Copy of spec without its wrapped bonds.
LatticeSpec strip_wraps(const LatticeSpec& spec);

/// Ring of `copies` unit cells at twist 0; wrapped bonds of the cell become
/// inter-cell bonds. Used to cross-check twist sweeps against one large ring.
LatticeSpec tile_ring(const LatticeSpec& cell, std::size_t copies);

} // namespace nhse
