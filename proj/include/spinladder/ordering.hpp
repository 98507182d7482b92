#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/hamiltonian.hpp"

namespace spinladder {

/// Permutation p -> original index of the state placed at position p.
/// DiagonalAscending sorts by eps_i = <i|H0 + g H1|i>, AmplitudeDescending
/// by |a_1i|; both stable, ties keep the incoming order. Elimination always
/// removes the last state of the resulting order.
inline std::vector<std::size_t> ordering_permutation(const Basis& basis,
                                                     const HamiltonianPair& ham, double g,
                                                     OrderingStrategy strategy,
                                                     const Vector* amplitudes = nullptr) {
    const std::size_t n = basis.size();
    if (static_cast<Index>(n) != ham.dim())
        throw DimensionMismatchError("ordering_permutation: basis/matrix dimension mismatch");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    if (strategy == OrderingStrategy::DiagonalAscending) {
        Vector eps = diagonal_of(ham.h1);
        eps *= g;
        if (ham.h0.nonZeros() != 0) eps += diagonal_of(ham.h0);
        std::stable_sort(perm.begin(), perm.end(),
                         [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
    } else {
        if (amplitudes == nullptr)
            throw MissingAmplitudesError(
                "ordering_permutation: amplitude ordering needs ground-state amplitudes");
        if (amplitudes->size() != static_cast<Index>(n))
            throw DimensionMismatchError("ordering_permutation: amplitude vector size mismatch");
        const Vector& a = *amplitudes;
        std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
            return std::abs(a[x]) > std::abs(a[y]);
        });
    }
    return perm;
}

inline Basis order_basis(const Basis& basis, const HamiltonianPair& ham, double g,
                         OrderingStrategy strategy, const Vector* amplitudes = nullptr) {
    return basis.permuted(ordering_permutation(basis, ham, g, strategy, amplitudes));
}

}  // namespace spinladder
