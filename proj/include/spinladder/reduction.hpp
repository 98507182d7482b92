#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/eigensolver.hpp"
#include "spinladder/hamiltonian.hpp"
#include "spinladder/observables.hpp"
#include "spinladder/ordering.hpp"

namespace spinladder {

/// Coefficients of the renormalization quadratic a*g^2 + b*g + c = 0,
/// with the intermediates kept for diagnostics. With H0 = 0 the alphas
/// vanish and c = -a11 * lambda1^2 exactly.
struct QuadraticCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double f_1n = 0.0;    // sum_{i<last} a_i <first|H1|i>
    double g_1n = 0.0;    // H1[first,last] * sum_{i<last} a_i <last|H1|i>
    double h_nn = 0.0;    // H1[last,last]
    double h_1n = 0.0;    // H1[first,last]
    double alpha_1 = 0.0; // H0[first,first]
    double alpha_n = 0.0; // H0[last,last]
    double a_11 = 0.0;    // amplitude of the first ordered state
};

enum class RootStatus { None, TwoReal, OneReal, NoRealRoot, ZeroLeadingCoeff };

inline const char* to_string(RootStatus s) {
    switch (s) {
        case RootStatus::None: return "None";
        case RootStatus::TwoReal: return "TwoReal";
        case RootStatus::OneReal: return "OneReal";
        case RootStatus::NoRealRoot: return "NoRealRoot";
        default: return "ZeroLeadingCoeff";
    }
}

struct RootSolution {
    double g;
    RootStatus status;
    bool tie_broken_larger = false;  // equidistant roots resolved to the larger one
};

enum class ReorderPolicy { OrderOnce, ReorderEachStep };
enum class Termination { ReachedMinDim, InstabilityStop, NoRealRootStop };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedMinDim: return "ReachedMinDim";
        case Termination::InstabilityStop: return "InstabilityStop";
        default: return "NoRealRootStop";
    }
}

struct ReductionConfig {
    OrderingStrategy ordering = OrderingStrategy::DiagonalAscending;
    ReorderPolicy reorder_policy = ReorderPolicy::OrderOnce;
    Index min_dim = 8;                     // unconditional dimension floor
    int track = 4;                         // eigenvalues recorded per step
    double instability_threshold = 10.0;   // percent, on p(1)
    int patience = 5;                      // consecutive unstable steps before stopping
    bool strict_no_real_root = false;      // stop instead of keeping g on a complex pair
    double epsilon = 1e-2;                 // relevant-amplitude cutoff
    double tol = 1e-9;                     // eigensolver residual tolerance
    Index dense_threshold = 256;
    std::uint64_t seed = 1;
    long max_iterations = 0;               // eigensolver budget, 0 = automatic
};

/// One elimination step. Step 0 is the full-space record: nothing is
/// eliminated and the root fields are None/-1/0.
struct ReductionStep {
    int step = 0;
    Index n = 0;               // dimension after this step
    double g_before = 0.0;
    double g_after = 0.0;
    RootStatus root_status = RootStatus::None;
    bool tie_broken_larger = false;
    std::int64_t eliminated_index = -1;  // original enumeration index
    double dropped_amp = 0.0;            // |a_1n| of the eliminated state
    std::vector<double> eigenvalues;     // lowest tracked levels at (n, g_after)
    QuadraticCoefficients coefficients;
    StepObservables observables;
};

struct ReductionTrajectory {
    Representation representation = Representation::SU2;
    int length = 0;
    Index initial_dim = 0;
    double g0 = 0.0;
    double lambda_fixed = 0.0;              // ground energy at full dimension, never updated
    std::vector<double> reference_e;        // e_i at full dimension, deviation baselines
    std::vector<ReductionStep> steps;       // steps[0] is the full-space record
    Termination termination = Termination::ReachedMinDim;
};

/// Eigensolver failure mid-trajectory; carries everything recorded so far.
class ReductionAbortedError : public std::runtime_error {
public:
    ReductionAbortedError(const std::string& what, ReductionTrajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    const ReductionTrajectory& partial() const noexcept { return partial_; }

private:
    ReductionTrajectory partial_;
};

namespace detail {

inline double row_dot_excluding(const SparseMatrix& m, Index row, const Vector& x, Index skip) {
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(m, row); it; ++it)
        if (it.col() != skip) acc += it.value() * x[it.col()];
    return acc;
}

}  // namespace detail

/// Coefficients of the quadratic fixing g so that lambda1 stays an
/// eigenvalue after the state at `last` is removed. `amplitudes` is the
/// current normalized ground state; `first` is the position of Phi_1 in the
/// current order (0 in a reduction run).
inline QuadraticCoefficients quadratic_coefficients(const HamiltonianPair& ham,
                                                    const Vector& amplitudes, double lambda1,
                                                    Index first, Index last) {
    const Index n = ham.dim();
    if (first < 0 || first >= n || last < 0 || last >= n || first == last)
        throw DimensionMismatchError("quadratic_coefficients: state index out of range");
    if (amplitudes.size() != n)
        throw DimensionMismatchError("quadratic_coefficients: amplitude vector size mismatch");

    QuadraticCoefficients q;
    q.f_1n = detail::row_dot_excluding(ham.h1, first, amplitudes, last);
    const double t = detail::row_dot_excluding(ham.h1, last, amplitudes, last);
    q.h_1n = ham.h1.coeff(first, last);
    q.h_nn = ham.h1.coeff(last, last);
    q.g_1n = q.h_1n * t;
    q.alpha_1 = ham.h0.coeff(first, first);
    q.alpha_n = ham.h0.coeff(last, last);
    q.a_11 = amplitudes[first];

    q.a = q.g_1n - q.h_nn * q.f_1n;
    q.b = q.a_11 * q.h_nn * (lambda1 - q.alpha_1) + q.f_1n * (lambda1 - q.alpha_n);
    q.c = -(q.a_11 * (lambda1 - q.alpha_1)) * (lambda1 - q.alpha_n);
    if (!std::isfinite(q.a) || !std::isfinite(q.b) || !std::isfinite(q.c))
        throw std::domain_error("quadratic_coefficients: non-finite coefficients");
    return q;
}

/// Solves the quadratic and picks the root closest to the current g.
/// Near-zero leading coefficient falls back to the linear solve; a negative
/// discriminant keeps g unchanged; equidistant roots resolve to the larger.
inline RootSolution renormalize_g(const QuadraticCoefficients& q, double g_current) {
    const double scale = std::max({std::abs(q.b), std::abs(q.c), 1.0});
    if (std::abs(q.a) <= 1e-14 * scale) {
        if (std::abs(q.b) <= 1e-14 * std::max(std::abs(q.c), 1.0)) {
            if (std::abs(q.c) <= 1e-14)
                throw DegenerateQuadraticError("renormalize_g: all coefficients vanish");
            return {g_current, RootStatus::NoRealRoot, false};  // c = 0 has no solution
        }
        return {-q.c / q.b, RootStatus::ZeroLeadingCoeff, false};
    }

    const double disc = q.b * q.b - 4.0 * q.a * q.c;
    if (disc < 0.0) return {g_current, RootStatus::NoRealRoot, false};

    const double sq = std::sqrt(disc);
    const double core = -0.5 * (q.b + std::copysign(sq, q.b));
    double r1, r2;
    if (core == 0.0) {
        r1 = r2 = 0.0;  // b = 0 and disc = 0
    } else {
        r1 = core / q.a;
        r2 = q.c / core;
    }
    if (disc == 0.0) return {r1, RootStatus::OneReal, false};

    const double d1 = std::abs(r1 - g_current);
    const double d2 = std::abs(r2 - g_current);
    if (d1 == d2 && r1 != r2)
        return {std::max(r1, r2), RootStatus::TwoReal, true};
    return {d1 <= d2 ? r1 : r2, RootStatus::TwoReal, false};
}

/// Full reduction run: order the basis once (or each step), then repeatedly
/// renormalize g against the fixed full-space ground energy, drop the last
/// ordered state, and re-diagonalize. Stops at the dimension floor, on a
/// strict complex-root policy, or when p(1) stays above the instability
/// threshold for `patience` consecutive steps.
inline ReductionTrajectory run_reduction(const HamiltonianPair& ham0, const Basis& basis0,
                                         double g0, const ReductionConfig& cfg) {
    if (static_cast<Index>(basis0.size()) != ham0.dim())
        throw DimensionMismatchError("run_reduction: basis/matrix dimension mismatch");
    if (cfg.min_dim < 1) throw ConfigError("min_dim", "must be at least 1");
    if (cfg.track < 1) throw ConfigError("track", "must be at least 1");
    if (cfg.patience < 1) throw ConfigError("patience", "must be at least 1");
    if (!(cfg.instability_threshold > 0.0)) throw ConfigError("instability_threshold", "must be positive");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be positive");

    const int length = basis0.length();
    SolverOptions solver_opts;
    solver_opts.dense_threshold = cfg.dense_threshold;
    solver_opts.seed = cfg.seed;
    solver_opts.max_iterations = cfg.max_iterations;

    HamiltonianPair ham = ham0;
    Basis basis = basis0;
    Index n = ham.dim();
    std::vector<std::int64_t> original(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) original[static_cast<std::size_t>(i)] = i;

    ReductionTrajectory traj;
    traj.representation = basis.representation();
    traj.length = length;
    traj.initial_dim = n;
    traj.g0 = g0;

    auto solve = [&](double g) {
        return lowest_eigenpairs(ham, g, std::min<Index>(cfg.track, ham.dim()), cfg.tol,
                                 solver_opts);
    };

    auto apply_order = [&](double g, const Vector& amps) {
        const auto perm = ordering_permutation(
            basis, ham, g, cfg.ordering,
            cfg.ordering == OrderingStrategy::AmplitudeDescending ? &amps : nullptr);
        basis = basis.permuted(perm);
        ham.h0 = permuted_symmetric(ham.h0, perm);
        ham.h1 = permuted_symmetric(ham.h1, perm);
        std::vector<std::int64_t> orig_new(perm.size());
        Vector amps_new(static_cast<Index>(perm.size()));
        for (std::size_t p = 0; p < perm.size(); ++p) {
            orig_new[p] = original[perm[p]];
            amps_new[static_cast<Index>(p)] = amps[static_cast<Index>(perm[p])];
        }
        original = std::move(orig_new);
        return amps_new;
    };

    EigenResult result;
    try {
        result = solve(g0);
    } catch (const ConvergenceError& e) {
        throw ReductionAbortedError(
            "run_reduction: eigensolver failed at the full dimension: " + std::string(e.what()),
            std::move(traj));
    }
    Vector amps = ground_amplitudes(result, basis);
    amps = apply_order(g0, amps);

    traj.lambda_fixed = result.eigenvalues[0];
    traj.reference_e.assign(static_cast<std::size_t>(cfg.track),
                            std::numeric_limits<double>::quiet_NaN());
    for (Index i = 0; i < result.eigenvalues.size(); ++i)
        traj.reference_e[static_cast<std::size_t>(i)] = result.eigenvalues[i] / (2.0 * length);

    ReductionStep step0;
    step0.step = 0;
    step0.n = n;
    step0.g_before = g0;
    step0.g_after = g0;
    step0.eigenvalues.assign(result.eigenvalues.data(),
                             result.eigenvalues.data() + result.eigenvalues.size());
    step0.observables =
        make_observables(result.eigenvalues, amps, length, traj.reference_e, cfg.epsilon);
    traj.steps.push_back(std::move(step0));

    double g = g0;
    int unstable_streak = 0;
    traj.termination = Termination::ReachedMinDim;

    for (int k = 1; n > cfg.min_dim; ++k) {
        const Index last = n - 1;
        const QuadraticCoefficients coeffs =
            quadratic_coefficients(ham, amps, traj.lambda_fixed, 0, last);
        RootSolution root;
        try {
            root = renormalize_g(coeffs, g);
        } catch (const DegenerateQuadraticError&) {
            // identically-zero equation: the ground state decoupled from both
            // pivot rows, any g satisfies the constraint; keep the current one
            root = {g, RootStatus::NoRealRoot, false};
        }
        if (root.status == RootStatus::NoRealRoot && cfg.strict_no_real_root) {
            traj.termination = Termination::NoRealRootStop;
            break;
        }

        ReductionStep step;
        step.step = k;
        step.g_before = g;
        step.g_after = root.g;
        step.root_status = root.status;
        step.tie_broken_larger = root.tie_broken_larger;
        step.eliminated_index = original[static_cast<std::size_t>(last)];
        step.dropped_amp = std::abs(amps[last]);
        step.coefficients = coeffs;

        ham = restricted_prefix(ham, n - 1);
        basis = basis.prefix(static_cast<std::size_t>(n - 1));
        original.resize(static_cast<std::size_t>(n - 1));
        --n;
        g = root.g;
        step.n = n;

        try {
            result = solve(g);
        } catch (const ConvergenceError& e) {
            traj.steps.push_back(std::move(step));
            throw ReductionAbortedError(
                "run_reduction: eigensolver failed at dimension " + std::to_string(n) + ": " +
                    e.what(),
                std::move(traj));
        }
        amps = ground_amplitudes(result, basis);
        step.eigenvalues.assign(result.eigenvalues.data(),
                                result.eigenvalues.data() + result.eigenvalues.size());
        step.observables =
            make_observables(result.eigenvalues, amps, length, traj.reference_e, cfg.epsilon);
        const double p1 = step.observables.p.empty() ? 0.0 : step.observables.p[0];
        traj.steps.push_back(std::move(step));

        if (cfg.reorder_policy == ReorderPolicy::ReorderEachStep) amps = apply_order(g, amps);

        if (std::isfinite(p1) && p1 > cfg.instability_threshold) {
            if (++unstable_streak >= cfg.patience) {
                traj.termination = Termination::InstabilityStop;
                break;
            }
        } else {
            unstable_streak = 0;
        }
    }
    return traj;
}

}  // namespace spinladder
