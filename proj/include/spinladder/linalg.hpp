#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "spinladder/errors.hpp"

namespace spinladder {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double>;

/// Shortest decimal that round-trips a double ("%.17g").
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline Vector diagonal_of(const SparseMatrix& m) {
    Vector d = Vector::Zero(m.rows());
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (it.col() == r) d[r] = it.value();
    return d;
}

inline double max_abs_coeff(const SparseMatrix& m) {
    double mx = 0.0;
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            mx = std::max(mx, std::abs(it.value()));
    return mx;
}

/// Drops entries with |v| <= threshold.
inline SparseMatrix pruned(const SparseMatrix& m, double threshold) {
    std::vector<Triplet> kept;
    kept.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (std::abs(it.value()) > threshold)
                kept.emplace_back(it.row(), it.col(), it.value());
    SparseMatrix out(m.rows(), m.cols());
    out.setFromTriplets(kept.begin(), kept.end());
    out.makeCompressed();
    return out;
}

/// B with B[p][q] = A[perm[p]][perm[q]] (symmetric reordering).
inline SparseMatrix permuted_symmetric(const SparseMatrix& a, const std::vector<std::size_t>& perm) {
    if (static_cast<Index>(perm.size()) != a.rows())
        throw DimensionMismatchError("permuted_symmetric: permutation size != matrix size");
    std::vector<Index> inv(perm.size());
    for (std::size_t p = 0; p < perm.size(); ++p) inv[perm[p]] = static_cast<Index>(p);
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(a.nonZeros()));
    for (Index r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it)
            entries.emplace_back(inv[it.row()], inv[it.col()], it.value());
    SparseMatrix out(a.rows(), a.cols());
    out.setFromTriplets(entries.begin(), entries.end());
    out.makeCompressed();
    return out;
}

/// Debug dump: one `row col value` line per stored nonzero, row-major,
/// 0-based indices, values with 17 significant digits.
inline void dump_matrix(const SparseMatrix& m, std::ostream& os) {
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << format_g17(it.value()) << '\n';
}

}  // namespace spinladder
