#pragma once

#include <cmath>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/linalg.hpp"

namespace spinladder {

/// Real orthogonal change of basis U with U[p][q] = <su2 state p | so4 state q>,
/// built as a product of per-rung Clebsch-Gordan factors (Condon-Shortley:
/// singlet = (ud - du)/sqrt2, triplet0 = (ud + du)/sqrt2, (1,+-1) = uu, dd).
/// Column q of U is the SO4 state q expressed in SU2 coordinates, so an
/// operator transforms as H_so4 = U^T H_su2 U.
inline SparseMatrix su2_to_so4_matrix(int length) {
    const Basis su2 = enumerate_su2(length);
    const Basis so4 = enumerate_so4(length);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    struct Term {
        StateCode pattern;  // bits for sites (i,1), (i,2)
        double coeff;
    };
    // per-rung expansion in site occupancy bits (bit0 = leg 1, bit1 = leg 2)
    const std::vector<Term> expansion[4] = {
        {{1u, inv_sqrt2}, {2u, -inv_sqrt2}},  // (0,0)
        {{0u, 1.0}},                          // (1,-1)
        {{1u, inv_sqrt2}, {2u, inv_sqrt2}},   // (1,0)
        {{3u, 1.0}},                          // (1,+1)
    };

    std::vector<Triplet> entries;
    std::vector<std::pair<StateCode, double>> terms, next;
    for (std::size_t q = 0; q < so4.size(); ++q) {
        const StateCode seq = so4.state(q);
        terms.assign(1, {0u, 1.0});
        for (int rung = 0; rung < length; ++rung) {
            next.clear();
            for (const auto& [mask, coeff] : terms)
                for (const Term& t : expansion[rung_code(seq, rung, length)])
                    next.emplace_back(mask | (t.pattern << site_bit(rung, 0)), coeff * t.coeff);
            terms.swap(next);
        }
        for (const auto& [mask, coeff] : terms) {
            const auto p = su2.index_of(mask);
            if (!p) throw std::logic_error("su2_to_so4_matrix: expansion left the M_tot sector");
            entries.emplace_back(static_cast<Index>(*p), static_cast<Index>(q), coeff);
        }
    }

    SparseMatrix u(static_cast<Index>(su2.size()), static_cast<Index>(so4.size()));
    u.setFromTriplets(entries.begin(), entries.end());
    u.makeCompressed();
    return u;
}

}  // namespace spinladder
