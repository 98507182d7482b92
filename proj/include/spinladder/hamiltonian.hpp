#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/linalg.hpp"
#include "spinladder/transform.hpp"

namespace spinladder {

/// Ladder couplings with the ratios frozen at construction. J_t is the
/// renormalizable strength g; the ratios never change during a reduction.
struct CouplingSet {
    double jt;        // rung
    double jl;        // leg
    double jc;        // diagonal cross coupling (both diagonals equal)
    double gamma_tl;  // jl / jt
    double gamma_c;   // jc / jt
    double j1;        // (jl + jc) / 2
    double j2;        // (jl - jc) / 2

    static CouplingSet make(double jt, double jl, double jc) {
        if (jt == 0.0) throw ConfigError("jt", "rung coupling must be nonzero");
        return CouplingSet{jt, jl, jc, jl / jt, jc / jt, 0.5 * (jl + jc), 0.5 * (jl - jc)};
    }
};

/// H = H0 + g*H1 as two sparse symmetric matrices. H0 is identically zero
/// for the ladder but is carried so the renormalization coefficients work
/// for a general split.
struct HamiltonianPair {
    SparseMatrix h0;
    SparseMatrix h1;
    Representation representation = Representation::SU2;

    Index dim() const noexcept { return h1.rows(); }
};

namespace detail {

struct Bond {
    int a;
    int b;
    double weight;
};

/// Open-boundary ladder bonds in H1 units (rung weight 1).
inline std::vector<Bond> ladder_bonds(int length, const CouplingSet& c) {
    std::vector<Bond> bonds;
    bonds.reserve(static_cast<std::size_t>(5 * length));
    for (int i = 0; i < length; ++i)
        bonds.push_back({site_bit(i, 0), site_bit(i, 1), 1.0});
    for (int i = 0; i + 1 < length; ++i) {
        bonds.push_back({site_bit(i, 0), site_bit(i + 1, 0), c.gamma_tl});
        bonds.push_back({site_bit(i, 1), site_bit(i + 1, 1), c.gamma_tl});
        bonds.push_back({site_bit(i, 0), site_bit(i + 1, 1), c.gamma_c});
        bonds.push_back({site_bit(i, 1), site_bit(i + 1, 0), c.gamma_c});
    }
    return bonds;
}

inline void check_basis(const Basis& basis, Representation expected, int length,
                        const char* where) {
    if (basis.representation() != expected)
        throw RepresentationMismatchError(std::string(where) + ": basis is in the " +
                                          to_string(basis.representation()) + " representation");
    if (basis.length() != length)
        throw DimensionMismatchError(std::string(where) + ": basis length " +
                                     std::to_string(basis.length()) + " != " +
                                     std::to_string(length));
}

}  // namespace detail

/// H1 of Heisenberg bonds s_a.s_b = sz sz + (s+ s- + s- s+)/2 over the
/// occupancy basis; flips stay inside the M_tot = 0 sector by construction.
inline HamiltonianPair build_su2(const Basis& basis, const CouplingSet& couplings, int length) {
    detail::check_basis(basis, Representation::SU2, length, "build_su2");
    const auto bonds = detail::ladder_bonds(length, couplings);
    const Index dim = static_cast<Index>(basis.size());

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim) * (bonds.size() + 1));
    for (Index p = 0; p < dim; ++p) {
        const StateCode s = basis.state(static_cast<std::size_t>(p));
        double diag = 0.0;
        for (const auto& bond : bonds) {
            const bool up_a = (s >> bond.a) & 1u;
            const bool up_b = (s >> bond.b) & 1u;
            diag += bond.weight * (up_a == up_b ? 0.25 : -0.25);
            if (up_a != up_b) {
                const StateCode flipped = s ^ ((1u << bond.a) | (1u << bond.b));
                const auto q = basis.index_of(flipped);
                if (!q) throw std::logic_error("build_su2: flip left the M_tot sector");
                // each unordered pair is produced from both sides with the
                // identical value, so the matrix is symmetric bit-exactly
                entries.emplace_back(p, static_cast<Index>(*q), 0.5 * bond.weight);
            }
        }
        if (diag != 0.0) entries.emplace_back(p, p, diag);
    }

    HamiltonianPair pair;
    pair.representation = Representation::SU2;
    pair.h0 = SparseMatrix(dim, dim);
    pair.h1 = SparseMatrix(dim, dim);
    pair.h1.setFromTriplets(entries.begin(), entries.end());
    pair.h1.makeCompressed();
    return pair;
}

/// Same operator in the rung basis, obtained by conjugating the SU2 matrix
/// with the Clebsch-Gordan transform. Tiny conjugation residue (analytic
/// zeros left as roundoff) is pruned; the result is symmetrized bit-exactly.
inline HamiltonianPair build_so4(const Basis& basis, const CouplingSet& couplings, int length) {
    detail::check_basis(basis, Representation::SO4, length, "build_so4");
    const Basis su2 = enumerate_su2(length);
    const HamiltonianPair site = build_su2(su2, couplings, length);
    const SparseMatrix u = su2_to_so4_matrix(length);

    // production SO4 states may be permuted relative to enumeration order;
    // realign the transform columns with the basis at hand
    const Basis canonical = enumerate_so4(length);
    SparseMatrix conjugated;
    if (basis.states() == canonical.states()) {
        conjugated = u.transpose() * site.h1 * u;
    } else {
        std::vector<std::size_t> cols(basis.size());
        for (std::size_t p = 0; p < basis.size(); ++p) {
            const auto c = canonical.index_of(basis.state(p));
            if (!c) throw DimensionMismatchError("build_so4: state missing from the M_tot sector");
            cols[p] = *c;
        }
        SparseMatrix full = u.transpose() * site.h1 * u;
        conjugated = permuted_symmetric(full, cols);
    }

    SparseMatrix sym = 0.5 * (conjugated + SparseMatrix(conjugated.transpose()));
    const double scale = max_abs_coeff(sym);
    HamiltonianPair pair;
    pair.representation = Representation::SO4;
    pair.h0 = SparseMatrix(sym.rows(), sym.cols());
    pair.h1 = pruned(sym, 1e-12 * scale);
    return pair;
}

/// (H0 + g*H1) x
inline Vector matvec(const HamiltonianPair& ham, double g, const Vector& x) {
    if (x.size() != ham.dim())
        throw DimensionMismatchError("matvec: vector size " + std::to_string(x.size()) +
                                     " != dimension " + std::to_string(ham.dim()));
    Vector y = g * (ham.h1 * x);
    if (ham.h0.nonZeros() != 0) y += ham.h0 * x;
    return y;
}

namespace detail {

inline SparseMatrix prefix_block(const SparseMatrix& m, Index count) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (Index r = 0; r < count; ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (it.col() < count) entries.emplace_back(it.row(), it.col(), it.value());
    SparseMatrix out(count, count);
    out.setFromTriplets(entries.begin(), entries.end());
    out.makeCompressed();
    return out;
}

}  // namespace detail

/// Deletes the trailing rows/columns, keeping the leading count x count block.
inline HamiltonianPair restricted_prefix(const HamiltonianPair& ham, Index count) {
    if (count < 1 || count > ham.dim())
        throw DimensionMismatchError("restricted_prefix: count out of range");
    return HamiltonianPair{detail::prefix_block(ham.h0, count),
                           detail::prefix_block(ham.h1, count), ham.representation};
}

/// Restriction to a kept index set; the set must be the prefix {0..m-1} of
/// the current order (elimination always removes the last ordered state).
inline HamiltonianPair restricted(const HamiltonianPair& ham, std::span<const std::size_t> keep) {
    if (keep.empty()) throw DimensionMismatchError("restricted: empty keep set");
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i] != i)
            throw DimensionMismatchError("restricted: keep set must be a prefix of the order");
    return restricted_prefix(ham, static_cast<Index>(keep.size()));
}

}  // namespace spinladder
