// Command line front end: runs reduction trajectories for the two-leg
// frustrated spin ladder and writes them as CSV.
//
// Exit codes: 0 clean stop (dimension floor or instability stop),
//             2 strict no-real-root stop, 3 eigensolver failure,
//             4 output I/O failure, 1 invalid configuration.

#include <CLI11.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "spinladder/spinladder.hpp"

namespace {

using spinladder::ConfigError;
using spinladder::RunConfig;

// raw option storage; only values the user (or config file / environment)
// actually set are copied onto the final config, so presets stay overridable
struct RawOptions {
    int length = 6;
    std::string representation = "su2";
    double jt = 15.0, jl = 5.0, jc = 3.0;
    std::string ordering = "diagonal";
    std::string reorder_policy = "once";
    double epsilon = 1e-2;
    std::int64_t min_dim = 8;
    double instability_threshold = 10.0;
    int patience = 5;
    int track = 4;
    std::int64_t dense_threshold = 256;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::string out;
    std::string preset;
    std::string config_path;
};

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// Flat key=value file, one entry per line; '#' starts a comment. Keys are
/// the long flag names without the leading dashes.
std::map<std::string, std::string> parse_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::map<std::string, std::string> values;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trimmed(line);
        if (entry.empty()) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "expected key=value, got '" + entry + "'");
        values[trimmed(entry.substr(0, eq))] = trimmed(entry.substr(eq + 1));
    }
    return values;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "not an integer: '" + value + "'");
    }
}

spinladder::Representation parse_representation(const std::string& key,
                                                const std::string& value) {
    if (value == "su2") return spinladder::Representation::SU2;
    if (value == "so4") return spinladder::Representation::SO4;
    throw ConfigError(key, "expected su2 or so4, got '" + value + "'");
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "length") cfg.length = static_cast<int>(parse_int(key, value));
    else if (key == "representation") cfg.representation = parse_representation(key, value);
    else if (key == "jt") cfg.jt = parse_double(key, value);
    else if (key == "jl") cfg.jl = parse_double(key, value);
    else if (key == "jc") cfg.jc = parse_double(key, value);
    else if (key == "ordering") {
        if (value == "diagonal") cfg.ordering = spinladder::OrderingStrategy::DiagonalAscending;
        else if (value == "amplitude")
            cfg.ordering = spinladder::OrderingStrategy::AmplitudeDescending;
        else throw ConfigError(key, "expected diagonal or amplitude, got '" + value + "'");
    } else if (key == "reorder-policy") {
        if (value == "once") cfg.reorder_policy = spinladder::ReorderPolicy::OrderOnce;
        else if (value == "each-step")
            cfg.reorder_policy = spinladder::ReorderPolicy::ReorderEachStep;
        else throw ConfigError(key, "expected once or each-step, got '" + value + "'");
    } else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "min-dim") cfg.min_dim = parse_int(key, value);
    else if (key == "instability-threshold") cfg.instability_threshold = parse_double(key, value);
    else if (key == "patience") cfg.patience = static_cast<int>(parse_int(key, value));
    else if (key == "track") cfg.track = static_cast<int>(parse_int(key, value));
    else if (key == "dense-threshold") cfg.dense_threshold = parse_int(key, value);
    else if (key == "tol") cfg.tol = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "out") cfg.out = value;
    else if (key != "preset") throw ConfigError(key, "unknown configuration key");
}

void add_common_options(CLI::App* cmd, RawOptions& raw, bool with_representation) {
    cmd->add_option("--config", raw.config_path,
                    "flat key=value configuration file; flags win over the file")
        ->envname("LADDER_CONFIG");
    cmd->add_option("--length", raw.length, "sites per leg (rungs)")
        ->envname("LADDER_LENGTH")
        ->check(CLI::Range(1, spinladder::kMaxLegLength));
    if (with_representation)
        cmd->add_option("--representation", raw.representation, "basis representation")
            ->envname("LADDER_REPRESENTATION")
            ->check(CLI::IsMember({"su2", "so4"}));
    cmd->add_option("--jt", raw.jt, "rung coupling (renormalized strength g)")
        ->envname("LADDER_JT");
    cmd->add_option("--jl", raw.jl, "leg coupling")->envname("LADDER_JL");
    cmd->add_option("--jc", raw.jc, "diagonal cross coupling")->envname("LADDER_JC");
    cmd->add_option("--ordering", raw.ordering, "basis ordering: diagonal | amplitude")
        ->envname("LADDER_ORDERING")
        ->check(CLI::IsMember({"diagonal", "amplitude"}));
    cmd->add_option("--reorder-policy", raw.reorder_policy, "once | each-step")
        ->envname("LADDER_REORDER_POLICY")
        ->check(CLI::IsMember({"once", "each-step"}));
    cmd->add_option("--epsilon", raw.epsilon, "relevant-amplitude cutoff")
        ->envname("LADDER_EPSILON");
    cmd->add_option("--min-dim", raw.min_dim, "dimension floor")->envname("LADDER_MIN_DIM");
    cmd->add_option("--instability-threshold", raw.instability_threshold,
                    "p(1) percent level that counts as unstable")
        ->envname("LADDER_INSTABILITY_THRESHOLD");
    cmd->add_option("--patience", raw.patience, "consecutive unstable steps before stopping")
        ->envname("LADDER_PATIENCE");
    cmd->add_option("--track", raw.track, "number of tracked eigenvalues")
        ->envname("LADDER_TRACK");
    cmd->add_option("--dense-threshold", raw.dense_threshold,
                    "dimension at or below which the dense solver is used")
        ->envname("LADDER_DENSE_THRESHOLD");
    cmd->add_option("--tol", raw.tol, "eigensolver residual tolerance")->envname("LADDER_TOL");
    cmd->add_option("--seed", raw.seed, "start-vector seed")->envname("LADDER_SEED");
    cmd->add_option("--out", raw.out, "output CSV path")->envname("LADDER_OUT");
    cmd->add_option("--preset", raw.preset, "named parameter set")
        ->envname("LADDER_PRESET")
        ->check(CLI::IsMember(spinladder::preset_names()));
}

RunConfig assemble_config(const CLI::App* cmd, const RawOptions& raw) {
    auto given = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    std::map<std::string, std::string> file_values;
    if (!raw.config_path.empty()) file_values = parse_flat_config(raw.config_path);

    // precedence: flag > config file > preset > built-in default
    std::string preset = raw.preset;
    if (preset.empty() && file_values.count("preset")) preset = file_values.at("preset");
    RunConfig cfg = preset.empty() ? RunConfig{} : spinladder::preset_config(preset);
    for (const auto& [key, value] : file_values) apply_config_entry(cfg, key, value);
    if (given("--length")) cfg.length = raw.length;
    if (given("--representation"))
        cfg.representation = raw.representation == "su2" ? spinladder::Representation::SU2
                                                         : spinladder::Representation::SO4;
    if (given("--jt")) cfg.jt = raw.jt;
    if (given("--jl")) cfg.jl = raw.jl;
    if (given("--jc")) cfg.jc = raw.jc;
    if (given("--ordering"))
        cfg.ordering = raw.ordering == "diagonal"
                           ? spinladder::OrderingStrategy::DiagonalAscending
                           : spinladder::OrderingStrategy::AmplitudeDescending;
    if (given("--reorder-policy"))
        cfg.reorder_policy = raw.reorder_policy == "once"
                                 ? spinladder::ReorderPolicy::OrderOnce
                                 : spinladder::ReorderPolicy::ReorderEachStep;
    if (given("--epsilon")) cfg.epsilon = raw.epsilon;
    if (given("--min-dim")) cfg.min_dim = raw.min_dim;
    if (given("--instability-threshold")) cfg.instability_threshold = raw.instability_threshold;
    if (given("--patience")) cfg.patience = raw.patience;
    if (given("--track")) cfg.track = raw.track;
    if (given("--dense-threshold")) cfg.dense_threshold = raw.dense_threshold;
    if (given("--tol")) cfg.tol = raw.tol;
    if (given("--seed")) cfg.seed = raw.seed;
    if (given("--out")) cfg.out = raw.out;
    return cfg;
}

int exit_code_for(spinladder::Termination t) {
    return t == spinladder::Termination::NoRealRootStop ? 2 : 0;
}

int do_run(const CLI::App* cmd, const RawOptions& raw) {
    RunConfig cfg = assemble_config(cmd, raw);
    if (cfg.out.empty()) cfg.out = "trajectory.csv";
    const auto outcome = spinladder::run(cfg);
    const auto& traj = outcome.trajectory;
    std::cout << "representation=" << to_string(traj.representation) << " n0=" << traj.initial_dim
              << " steps=" << traj.steps.size() - 1 << " final_n=" << traj.steps.back().n
              << " termination=" << to_string(traj.termination) << " out=" << cfg.out << '\n';
    return exit_code_for(traj.termination);
}

int do_compare(const CLI::App* cmd, const RawOptions& raw) {
    RunConfig base = assemble_config(cmd, raw);
    const std::string out = base.out.empty() ? "comparison.csv" : base.out;
    const std::string stem = out.size() > 4 && out.ends_with(".csv")
                                 ? out.substr(0, out.size() - 4)
                                 : out;
    RunConfig su2 = base;
    su2.representation = spinladder::Representation::SU2;
    su2.out = stem + ".su2.csv";
    RunConfig so4 = base;
    so4.representation = spinladder::Representation::SO4;
    so4.out = stem + ".so4.csv";

    const auto report = spinladder::compare_representations(su2, so4);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw spinladder::IoError("cannot open '" + out + "' for writing");
    spinladder::write_comparison_csv(report, file);
    file.flush();
    if (!file) throw spinladder::IoError("failed writing '" + out + "'");

    std::cout << spinladder::comparison_summary(report) << '\n';
    std::cout << "su2 termination=" << to_string(report.su2.termination)
              << " final_n=" << report.su2.steps.back().n << '\n';
    std::cout << "so4 termination=" << to_string(report.so4.termination)
              << " final_n=" << report.so4.steps.back().n << '\n';
    const int a = exit_code_for(report.su2.termination);
    const int b = exit_code_for(report.so4.termination);
    return a != 0 ? a : b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert-space reduction with coupling renormalization for two-leg "
                 "frustrated spin ladders"};
    app.set_version_flag("--version", "ladder-reduce 1.0.0 (trajectory csv schema v1)");
    app.require_subcommand(1);

    RawOptions run_raw, cmp_raw;
    CLI::App* run_cmd = app.add_subcommand("run", "run one reduction trajectory");
    add_common_options(run_cmd, run_raw, true);
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "run both representations and emit a side-by-side CSV");
    add_common_options(cmp_cmd, cmp_raw, false);

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return do_run(run_cmd, run_raw);
        return do_compare(cmp_cmd, cmp_raw);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const spinladder::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const spinladder::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const spinladder::ReductionAbortedError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const spinladder::ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
