#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "spinladder/errors.hpp"
#include "spinladder/linalg.hpp"

namespace spinladder {

/// Percentage deviation |(e_full - e_reduced)/e_full| * 100.
inline double deviation_p(double e_full, double e_reduced) {
    if (e_full == 0.0)
        throw UndefinedDeviationError("deviation_p: reference energy is zero");
    return std::abs((e_full - e_reduced) / e_full) * 100.0;
}

/// Shannon entropy of the squared amplitudes per site,
/// s = -(1/2L) sum P_i ln P_i with P_i = a_i^2; zero terms contribute zero.
inline double entropy_per_site(const Vector& amplitudes, int length) {
    if (length < 1) throw std::invalid_argument("entropy_per_site: length must be positive");
    const double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw UnnormalizedAmplitudesError("entropy_per_site: amplitudes not normalized");
    double acc = 0.0;
    for (Index i = 0; i < amplitudes.size(); ++i) {
        const double p = amplitudes[i] * amplitudes[i];
        if (p > 0.0) acc += p * std::log(p);
    }
    if (acc == 0.0) return 0.0;  // keep +0 for a point distribution
    return -acc / (2.0 * length);
}

struct AmplitudeCounts {
    std::int64_t relevant;
    std::int64_t irrelevant;
};

/// Counts amplitudes with |a_i| strictly above epsilon (boundary counts as
/// irrelevant).
inline AmplitudeCounts relevant_count(const Vector& amplitudes, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("relevant_count: epsilon must be positive");
    std::int64_t relevant = 0;
    for (Index i = 0; i < amplitudes.size(); ++i)
        if (std::abs(amplitudes[i]) > epsilon) ++relevant;
    return {relevant, amplitudes.size() - relevant};
}

/// Per-step diagnostics: energies per site, percentage deviations from the
/// full-space reference, amplitude entropy and relevant/irrelevant counts.
struct StepObservables {
    Index n = 0;
    std::vector<double> e;  // lambda_i / 2L, tracked levels, nan when absent
    std::vector<double> p;  // percent deviations, nan when undefined
    double entropy = 0.0;
    std::int64_t relevant = 0;
    std::int64_t irrelevant = 0;
};

inline StepObservables make_observables(const Vector& eigenvalues, const Vector& amplitudes,
                                        int length, const std::vector<double>& reference_e,
                                        double epsilon) {
    StepObservables obs;
    obs.n = amplitudes.size();
    const std::size_t track = reference_e.size();
    obs.e.assign(track, std::numeric_limits<double>::quiet_NaN());
    obs.p.assign(track, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < track; ++i) {
        if (static_cast<Index>(i) >= eigenvalues.size()) break;
        obs.e[i] = eigenvalues[static_cast<Index>(i)] / (2.0 * length);
        const double ref = reference_e[i];
        if (std::isfinite(ref) && ref != 0.0) obs.p[i] = deviation_p(ref, obs.e[i]);
    }
    obs.entropy = entropy_per_site(amplitudes, length);
    const AmplitudeCounts counts = relevant_count(amplitudes, epsilon);
    obs.relevant = counts.relevant;
    obs.irrelevant = counts.irrelevant;
    return obs;
}

}  // namespace spinladder
