#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/eigensolver.hpp"
#include "spinladder/hamiltonian.hpp"
#include "spinladder/reduction.hpp"

namespace spinladder {

inline constexpr int kTrajectoryCsvSchemaVersion = 1;

/// Everything one run needs. Defaults are the L=6 ladder at the strong-rung
/// working point.
struct RunConfig {
    int length = 6;
    Representation representation = Representation::SU2;
    double jt = 15.0;
    double jl = 5.0;
    double jc = 3.0;
    OrderingStrategy ordering = OrderingStrategy::DiagonalAscending;
    ReorderPolicy reorder_policy = ReorderPolicy::OrderOnce;
    double epsilon = 1e-2;
    Index min_dim = 8;
    double instability_threshold = 10.0;
    int patience = 5;
    int track = 4;
    Index dense_threshold = 256;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::string out = "trajectory.csv";
};

inline void validate(const RunConfig& cfg) {
    if (cfg.length < 1 || cfg.length > kMaxLegLength)
        throw ConfigError("length", "must be in [1, " + std::to_string(kMaxLegLength) + "]");
    if (cfg.jt == 0.0) throw ConfigError("jt", "must be nonzero");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
    if (cfg.min_dim < 1) throw ConfigError("min_dim", "must be at least 1");
    if (!(cfg.instability_threshold > 0.0))
        throw ConfigError("instability_threshold", "must be positive");
    if (cfg.patience < 1) throw ConfigError("patience", "must be at least 1");
    if (cfg.track < 1) throw ConfigError("track", "must be at least 1");
    if (cfg.dense_threshold < 1) throw ConfigError("dense_threshold", "must be at least 1");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (cfg.out.empty()) throw ConfigError("out", "must not be empty");
}

/// Named parameter sets for the four standard experiments.
inline RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "paper-su2-strong") {
        cfg.representation = Representation::SU2;
        cfg.jt = 15.0;
    } else if (name == "paper-su2-weak") {
        cfg.representation = Representation::SU2;
        cfg.jt = 5.5;
    } else if (name == "paper-so4-strong") {
        cfg.representation = Representation::SO4;
        cfg.jt = 15.0;
    } else if (name == "paper-so4-weak") {
        cfg.representation = Representation::SO4;
        cfg.jt = 5.5;
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return cfg;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "paper-su2-strong", "paper-su2-weak", "paper-so4-strong", "paper-so4-weak"};
    return names;
}

inline ReductionConfig reduction_config(const RunConfig& cfg) {
    ReductionConfig rc;
    rc.ordering = cfg.ordering;
    rc.reorder_policy = cfg.reorder_policy;
    rc.min_dim = cfg.min_dim;
    rc.track = cfg.track;
    rc.instability_threshold = cfg.instability_threshold;
    rc.patience = cfg.patience;
    rc.epsilon = cfg.epsilon;
    rc.tol = cfg.tol;
    rc.dense_threshold = cfg.dense_threshold;
    rc.seed = cfg.seed;
    return rc;
}

/// Fixed v1 column layout; floats carry 17 significant digits so the file
/// round-trips bit-exactly.
inline std::string trajectory_csv_header(int track) {
    std::ostringstream os;
    os << "step,n,g";
    for (int i = 1; i <= track; ++i) os << ",lambda" << i;
    for (int i = 1; i <= track; ++i) os << ",e" << i;
    for (int i = 1; i <= track; ++i) os << ",p" << i;
    os << ",entropy,relevant,irrelevant,dropped_amp,root_status,eliminated_index";
    return os.str();
}

inline void write_trajectory_csv(const ReductionTrajectory& traj, int track, std::ostream& os) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    os << trajectory_csv_header(track) << '\n';
    for (const ReductionStep& s : traj.steps) {
        os << s.step << ',' << s.n << ',' << format_g17(s.g_after);
        for (int i = 0; i < track; ++i)
            os << ','
               << format_g17(i < static_cast<int>(s.eigenvalues.size()) ? s.eigenvalues[i] : nan);
        for (int i = 0; i < track; ++i)
            os << ','
               << format_g17(i < static_cast<int>(s.observables.e.size()) ? s.observables.e[i]
                                                                          : nan);
        for (int i = 0; i < track; ++i)
            os << ','
               << format_g17(i < static_cast<int>(s.observables.p.size()) ? s.observables.p[i]
                                                                          : nan);
        os << ',' << format_g17(s.observables.entropy) << ',' << s.observables.relevant << ','
           << s.observables.irrelevant << ',' << format_g17(s.dropped_amp) << ','
           << to_string(s.root_status) << ',' << s.eliminated_index << '\n';
    }
}

inline std::string trajectory_csv(const ReductionTrajectory& traj, int track) {
    std::ostringstream os;
    write_trajectory_csv(traj, track, os);
    return os.str();
}

struct RunOutcome {
    ReductionTrajectory trajectory;
    std::string csv;
};

/// build -> order -> reduce -> observe, with the CSV written to cfg.out.
inline RunOutcome run(const RunConfig& cfg) {
    validate(cfg);
    const CouplingSet couplings = CouplingSet::make(cfg.jt, cfg.jl, cfg.jc);
    const Basis basis = cfg.representation == Representation::SU2 ? enumerate_su2(cfg.length)
                                                                  : enumerate_so4(cfg.length);
    const HamiltonianPair ham = cfg.representation == Representation::SU2
                                    ? build_su2(basis, couplings, cfg.length)
                                    : build_so4(basis, couplings, cfg.length);

    RunOutcome outcome;
    outcome.trajectory = run_reduction(ham, basis, cfg.jt, reduction_config(cfg));
    outcome.csv = trajectory_csv(outcome.trajectory, cfg.track);

    std::ofstream file(cfg.out, std::ios::binary);  // binary keeps LF endings everywhere
    if (!file) throw IoError("cannot open '" + cfg.out + "' for writing");
    file << outcome.csv;
    file.flush();
    if (!file) throw IoError("failed writing '" + cfg.out + "'");
    return outcome;
}

/// Deepest (smallest) dimension for which p(1) stayed strictly below the
/// threshold on every step from the start of the trajectory.
inline Index deepest_stable_dim(const ReductionTrajectory& traj, double threshold_percent) {
    Index deepest = traj.initial_dim;
    for (const ReductionStep& s : traj.steps) {
        const double p1 = s.observables.p.empty() ? 0.0 : s.observables.p[0];
        if (!std::isfinite(p1) || p1 >= threshold_percent) break;
        deepest = s.n;
    }
    return deepest;
}

struct ComparisonRow {
    Index n = 0;
    double p1_su2, p1_so4, s_su2, s_so4;
    std::int64_t relevant_su2 = -1, irrelevant_su2 = -1;
    std::int64_t relevant_so4 = -1, irrelevant_so4 = -1;
};

struct ComparisonReport {
    ReductionTrajectory su2;
    ReductionTrajectory so4;
    std::vector<ComparisonRow> rows;
    double stability_threshold = 1.0;  // percent
    Index deepest_stable_su2 = 0;
    Index deepest_stable_so4 = 0;
};

inline void write_comparison_csv(const ComparisonReport& report, std::ostream& os) {
    os << "n,p1_su2,p1_so4,s_su2,s_so4,relevant_su2,irrelevant_su2,relevant_so4,irrelevant_so4\n";
    for (const ComparisonRow& r : report.rows) {
        os << r.n << ',' << format_g17(r.p1_su2) << ',' << format_g17(r.p1_so4) << ','
           << format_g17(r.s_su2) << ',' << format_g17(r.s_so4) << ',' << r.relevant_su2 << ','
           << r.irrelevant_su2 << ',' << r.relevant_so4 << ',' << r.irrelevant_so4 << '\n';
    }
}

inline std::string comparison_summary(const ComparisonReport& report) {
    std::ostringstream os;
    os << "deepest n with p(1) < " << report.stability_threshold
       << "%: su2=" << report.deepest_stable_su2 << " so4=" << report.deepest_stable_so4;
    return os.str();
}

/// Runs both representations at identical couplings and joins the stability
/// observables per dimension. Rows where one side already stopped carry
/// nan / -1 placeholders.
inline ComparisonReport compare_representations(const RunConfig& config_su2,
                                                const RunConfig& config_so4,
                                                double stability_threshold = 1.0) {
    if (config_su2.representation != Representation::SU2)
        throw ConfigError("representation", "first config must be su2");
    if (config_so4.representation != Representation::SO4)
        throw ConfigError("representation", "second config must be so4");
    if (config_su2.length != config_so4.length)
        throw ConfigError("length", "configs must share the leg length");
    if (config_su2.jt != config_so4.jt || config_su2.jl != config_so4.jl ||
        config_su2.jc != config_so4.jc)
        throw ConfigError("jt", "configs must share the couplings");

    ComparisonReport report;
    report.stability_threshold = stability_threshold;
    report.su2 = run(config_su2).trajectory;
    report.so4 = run(config_so4).trajectory;
    report.deepest_stable_su2 = deepest_stable_dim(report.su2, stability_threshold);
    report.deepest_stable_so4 = deepest_stable_dim(report.so4, stability_threshold);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::map<Index, const ReductionStep*> su2_by_n, so4_by_n;
    for (const auto& s : report.su2.steps) su2_by_n[s.n] = &s;
    for (const auto& s : report.so4.steps) so4_by_n[s.n] = &s;

    for (Index n = report.su2.initial_dim; n >= 1; --n) {
        const auto a = su2_by_n.find(n);
        const auto b = so4_by_n.find(n);
        if (a == su2_by_n.end() && b == so4_by_n.end()) break;
        ComparisonRow row;
        row.n = n;
        row.p1_su2 = row.s_su2 = row.p1_so4 = row.s_so4 = nan;
        if (a != su2_by_n.end()) {
            const StepObservables& o = a->second->observables;
            row.p1_su2 = o.p.empty() ? nan : o.p[0];
            row.s_su2 = o.entropy;
            row.relevant_su2 = o.relevant;
            row.irrelevant_su2 = o.irrelevant;
        }
        if (b != so4_by_n.end()) {
            const StepObservables& o = b->second->observables;
            row.p1_so4 = o.p.empty() ? nan : o.p[0];
            row.s_so4 = o.entropy;
            row.relevant_so4 = o.relevant;
            row.irrelevant_so4 = o.irrelevant;
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace spinladder
