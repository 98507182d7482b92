#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/hamiltonian.hpp"
#include "spinladder/linalg.hpp"

namespace spinladder {

struct SolverOptions {
    Index dense_threshold = 256;  // at or below this, diagonalize densely
    std::uint64_t seed = 1;       // start-vector seed, fixes the whole trajectory
    long max_iterations = 0;      // matvec budget; 0 = automatic
    int check_interval = 10;      // Ritz convergence test cadence
};

/// Lowest eigenpairs of H0 + g*H1. Eigenvalues ascending, eigenvector
/// columns orthonormal, residuals ||Hx - lambda x||_2 per pair.
struct EigenResult {
    Vector eigenvalues;
    Matrix eigenvectors;
    Vector residuals;
    long iterations = 0;  // matvec count; 0 for the dense path
};

namespace detail {

// splitmix64: bit-stable across platforms, unlike std:: distributions
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double symmetric() {  // uniform in [-1, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0;
    }

private:
    std::uint64_t state_;
};

inline Matrix densified(const HamiltonianPair& ham, double g) {
    Matrix h = g * Matrix(ham.h1);
    if (ham.h0.nonZeros() != 0) h += Matrix(ham.h0);
    return h;
}

inline Vector residual_norms(const HamiltonianPair& ham, double g, const Vector& values,
                             const Matrix& vectors) {
    Vector res(values.size());
    for (Index i = 0; i < values.size(); ++i)
        res[i] = (matvec(ham, g, vectors.col(i)) - values[i] * vectors.col(i)).norm();
    return res;
}

}  // namespace detail

/// Full spectrum by dense symmetric diagonalization (oracle / small systems).
inline Vector dense_spectrum(const HamiltonianPair& ham, double g) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::densified(ham, g),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline EigenResult dense_lowest(const HamiltonianPair& ham, double g, Index k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::densified(ham, g));
    EigenResult out;
    out.eigenvalues = solver.eigenvalues().head(k);
    out.eigenvectors = solver.eigenvectors().leftCols(k);
    out.residuals = detail::residual_norms(ham, g, out.eigenvalues, out.eigenvectors);
    out.iterations = 0;
    return out;
}

/// Lowest k eigenpairs of H0 + g*H1: dense below the threshold, otherwise
/// Lanczos with full reorthogonalization. Invariant-subspace breakdowns are
/// deflated and the iteration restarts in the orthogonal complement, so
/// degenerate multiplets are resolved. Deterministic for a fixed seed.
inline EigenResult lowest_eigenpairs(const HamiltonianPair& ham, double g, Index k, double tol,
                                     const SolverOptions& opts = {}) {
    const Index dim = ham.dim();
    if (k < 1 || k > dim)
        throw DimensionMismatchError("lowest_eigenpairs: k must be in [1, dim]");
    if (!(tol > 0.0)) throw std::invalid_argument("lowest_eigenpairs: tol must be positive");

    if (dim <= opts.dense_threshold) return dense_lowest(ham, g, k);

    const long max_iter =
        opts.max_iterations > 0 ? opts.max_iterations : 2 * static_cast<long>(dim) + 200;
    detail::DeterministicRng rng(opts.seed);

    Matrix deflated(dim, 0);      // converged eigenvectors from exhausted segments
    std::vector<double> deflated_values;

    std::vector<Vector> lanczos;  // orthonormal Krylov vectors of the running segment
    std::vector<double> alpha, beta;
    long total_matvecs = 0;
    double scale_estimate = 1.0;

    auto orthogonalize = [&](Vector& w) {
        for (int pass = 0; pass < 2; ++pass) {
            if (deflated.cols() > 0) w -= deflated * (deflated.transpose() * w);
            for (const Vector& v : lanczos) w -= v.dot(w) * v;
        }
    };

    auto fresh_start = [&]() -> bool {
        lanczos.clear();
        alpha.clear();
        beta.clear();
        Vector v(dim);
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (Index i = 0; i < dim; ++i) v[i] = rng.symmetric();
            orthogonalize(v);
            const double norm = v.norm();
            if (norm > 1e-8) {
                lanczos.push_back(v / norm);
                return true;
            }
        }
        return false;  // complement exhausted
    };

    // Ritz data of the current segment
    Vector ritz_values;
    Matrix ritz_coeffs;
    auto update_ritz = [&]() {
        const Index m = static_cast<Index>(lanczos.size());
        Vector diag = Eigen::Map<const Vector>(alpha.data(), m);
        Vector sub = m > 1 ? Eigen::Map<const Vector>(beta.data(), m - 1) : Vector();
        Eigen::SelfAdjointEigenSolver<Matrix> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        ritz_values = solver.eigenvalues();
        ritz_coeffs = solver.eigenvectors();
    };

    // merge deflated pairs and current Ritz pairs, lowest k first
    struct Candidate {
        double value;
        double residual_estimate;
        bool from_deflated;
        Index index;
    };
    auto lowest_candidates = [&](double beta_last) {
        std::vector<Candidate> all;
        for (std::size_t i = 0; i < deflated_values.size(); ++i)
            all.push_back({deflated_values[i], 0.0, true, static_cast<Index>(i)});
        const Index m = ritz_values.size();
        for (Index i = 0; i < m; ++i)
            all.push_back({ritz_values[i], std::abs(beta_last * ritz_coeffs(m - 1, i)), false, i});
        std::stable_sort(all.begin(), all.end(),
                         [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
        if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
        return all;
    };

    auto assemble = [&](const std::vector<Candidate>& picks) {
        EigenResult out;
        out.eigenvalues.resize(static_cast<Index>(picks.size()));
        out.eigenvectors.resize(dim, static_cast<Index>(picks.size()));
        for (std::size_t i = 0; i < picks.size(); ++i) {
            out.eigenvalues[static_cast<Index>(i)] = picks[i].value;
            if (picks[i].from_deflated) {
                out.eigenvectors.col(static_cast<Index>(i)) = deflated.col(picks[i].index);
            } else {
                Vector x = Vector::Zero(dim);
                for (std::size_t j = 0; j < lanczos.size(); ++j)
                    x += ritz_coeffs(static_cast<Index>(j), picks[i].index) * lanczos[j];
                x /= x.norm();
                out.eigenvectors.col(static_cast<Index>(i)) = x;
            }
        }
        out.residuals = detail::residual_norms(ham, g, out.eigenvalues, out.eigenvectors);
        out.iterations = total_matvecs;
        return out;
    };

    if (!fresh_start()) throw std::logic_error("lowest_eigenpairs: empty start space");

    while (true) {
        // one Lanczos step
        const Index m = static_cast<Index>(lanczos.size());
        Vector w = matvec(ham, g, lanczos.back());
        ++total_matvecs;
        if (m > 1) w -= beta.back() * lanczos[static_cast<std::size_t>(m - 2)];
        const double a = lanczos.back().dot(w);
        alpha.push_back(a);
        w -= a * lanczos.back();
        orthogonalize(w);
        const double b = w.norm();
        scale_estimate = std::max(scale_estimate, std::abs(a) + b);

        const bool breakdown = b <= 1e-13 * scale_estimate;
        const bool krylov_full = static_cast<Index>(lanczos.size()) + deflated.cols() >= dim;
        const bool budget_out = total_matvecs >= max_iter;
        const bool check_now = breakdown || krylov_full || budget_out ||
                               (static_cast<long>(lanczos.size()) % opts.check_interval == 0);

        if (!breakdown && !krylov_full) {
            beta.push_back(b);
            lanczos.push_back(w / b);
        }

        if (!check_now) continue;

        update_ritz();
        const double beta_last = (breakdown || krylov_full) ? 0.0 : beta.back();
        auto picks = lowest_candidates(beta_last);
        const bool enough = picks.size() == static_cast<std::size_t>(k);
        bool all_small = enough;
        for (const auto& c : picks) all_small = all_small && c.residual_estimate <= tol;

        if (all_small) {
            EigenResult out = assemble(picks);
            if ((out.residuals.array() <= tol).all()) return out;
        }

        if (budget_out) {
            EigenResult out = enough ? assemble(picks) : EigenResult{};
            std::vector<double> res;
            if (enough)
                res.assign(out.residuals.data(), out.residuals.data() + out.residuals.size());
            throw ConvergenceError("lowest_eigenpairs: no convergence within " +
                                       std::to_string(max_iter) + " matrix applications",
                                   res, total_matvecs);
        }

        if (breakdown || krylov_full) {
            // the segment span is (numerically) invariant: keep its Ritz pairs
            // and restart in the orthogonal complement
            const Index m_now = static_cast<Index>(lanczos.size());
            const Index keep = std::min<Index>(m_now, k + 8);
            Matrix grown(dim, deflated.cols() + keep);
            grown.leftCols(deflated.cols()) = deflated;
            for (Index i = 0; i < keep; ++i) {
                Vector x = Vector::Zero(dim);
                for (std::size_t j = 0; j < lanczos.size(); ++j)
                    x += ritz_coeffs(static_cast<Index>(j), i) * lanczos[j];
                x /= x.norm();
                grown.col(deflated.cols() + i) = x;
                deflated_values.push_back(ritz_values[i]);
            }
            deflated = std::move(grown);
            if (!fresh_start()) {
                // complement is empty: everything known is exact
                auto final_picks = lowest_candidates(0.0);
                std::vector<double> res;
                if (final_picks.size() == static_cast<std::size_t>(k)) {
                    EigenResult out = assemble(final_picks);
                    if ((out.residuals.array() <= tol).all()) return out;
                    res.assign(out.residuals.data(), out.residuals.data() + out.residuals.size());
                }
                throw ConvergenceError("lowest_eigenpairs: space exhausted before convergence",
                                       res, total_matvecs);
            }
        }
    }
}

/// Normalized ground-state coefficients a_1i = <Phi_i|Psi_1> with the global
/// sign fixed so the first largest-magnitude amplitude is positive.
inline Vector ground_amplitudes(const EigenResult& result, const Basis& basis) {
    if (result.eigenvalues.size() < 1)
        throw std::invalid_argument("ground_amplitudes: empty eigenresult");
    if (result.eigenvectors.rows() != static_cast<Index>(basis.size()))
        throw DimensionMismatchError("ground_amplitudes: basis/eigenvector dimension mismatch");
    Vector a = result.eigenvectors.col(0);
    a /= a.norm();
    Index imax = 0;
    for (Index i = 1; i < a.size(); ++i)
        if (std::abs(a[i]) > std::abs(a[imax])) imax = i;
    if (a[imax] < 0.0) a = -a;
    return a;
}

}  // namespace spinladder
