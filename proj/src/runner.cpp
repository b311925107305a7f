#include "liesys/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include "liesys/error.hpp"
#include "liesys/sl2.hpp"
#include "liesys/version.hpp"

namespace liesys {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, "cli", "run", msg);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const std::vector<double>& named_list(const RunConfig& config, const std::string& name) {
    auto it = config.initial_data.find(name);
    if (it == config.initial_data.end())
        fail(ErrorKind::Config, "initial_data is missing the '" + name + "' list");
    return it->second;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

void emit_summary(const fs::path& dir, const RunConfig& config, ordered_json results) {
    ordered_json summary;
    summary["tool"] = kToolName;
    summary["version"] = kToolVersion;
    summary["command"] = command_name(config.command);
    summary["config"] = config_to_json(config);
    summary["results"] = std::move(results);
    summary["timestamp"] = utc_timestamp();
    write_file(dir / "summary.json", summary.dump(2) + "\n");
}

ordered_json termination_json(const Trajectory& traj) {
    if (!traj.terminated_early()) return nullptr;
    ordered_json j;
    j["t_stop"] = traj.terminated_early()->t_stop;
    j["reason"] = stop_reason_name(traj.terminated_early()->reason);
    return j;
}

int run_integrate(const RunConfig& config, const fs::path& dir) {
    if (!config.system) fail(ErrorKind::Config, "integrate needs a 'system'");
    const auto& state0 = named_list(config, "state");
    const Trajectory traj =
        integrate(*config.system, state0, config.t0, config.t1, config.rel_tol, config.abs_tol);
    {
        std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
        if (!csv) fail(ErrorKind::Io, "cannot write trajectory.csv");
        traj.write_csv(csv);
    }
    ordered_json results;
    results["n_nodes"] = traj.times().size();
    results["t_final"] = traj.t_back();
    results["final_state"] = traj.states().back();
    results["terminated_early"] = termination_json(traj);
    emit_summary(dir, config, std::move(results));
    return 0;
}

int run_invariants(const RunConfig& config, const fs::path& dir) {
    if (!config.system) fail(ErrorKind::Config, "invariants needs a 'system'");
    if (config.invariants.empty())
        fail(ErrorKind::Config, "invariants needs at least one invariant binding");
    const auto& state0 = named_list(config, "state");
    const Trajectory traj =
        integrate(*config.system, state0, config.t0, config.t1, config.rel_tol, config.abs_tol);
    {
        std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
        if (!csv) fail(ErrorKind::Io, "cannot write trajectory.csv");
        traj.write_csv(csv);
    }
    bool bound_exceeded = false;
    auto reports = ordered_json::array();
    for (const auto& binding : config.invariants) {
        const InvariantReport report = invariant_drift(traj, binding);
        std::ofstream csv(dir / ("invariant_" + binding.name + ".csv"), std::ios::binary);
        if (!csv) fail(ErrorKind::Io, "cannot write invariant_" + binding.name + ".csv");
        report.write_csv(csv);
        ordered_json r;
        r["name"] = report.name;
        r["reference"] = report.reference;
        r["max_abs_drift"] = report.max_abs_drift;
        r["max_rel_drift"] = report.max_rel_drift;
        reports.push_back(std::move(r));
        if (config.drift_bound && report.max_rel_drift > *config.drift_bound)
            bound_exceeded = true;
    }
    ordered_json results;
    results["invariants"] = std::move(reports);
    results["terminated_early"] = termination_json(traj);
    if (config.drift_bound) {
        results["drift_bound"] = *config.drift_bound;
        results["bound_exceeded"] = bound_exceeded;
    }
    emit_summary(dir, config, std::move(results));
    return bound_exceeded ? 2 : 0;
}

int run_superpose_verify(const RunConfig& config, const fs::path& dir) {
    if (!config.omega) fail(ErrorKind::Config, "superpose-verify needs an 'omega'");
    if (!config.rule) fail(ErrorKind::Config, "superpose-verify needs a 'rule'");
    const std::size_t n_bases = *config.rule == RuleKind::PinneyRiccati ? 3 : 2;
    std::vector<std::vector<double>> bases;
    for (std::size_t i = 1; i <= n_bases; ++i)
        bases.push_back(named_list(config, "base" + std::to_string(i)));
    const auto& target = named_list(config, "target");

    const VerificationReport report =
        verify_superposition(*config.rule, *config.omega, bases, target, config.k, config.t0,
                             config.t1, Tolerances{config.rel_tol, config.abs_tol});

    ordered_json results;
    results["rule"] = rule_kind_name(report.rule);
    results["omega"] = omega_to_json(*config.omega);
    results["k"] = config.k;
    results["t0"] = report.t0;
    results["t1"] = report.t1;
    results["max_abs_error"] = report.max_abs_error;
    results["max_rel_error"] = report.max_rel_error;
    results["n_points"] = report.n_points;
    results["constants"] = constants_to_json(report.constants);
    results["window_clipped"] = report.window_clipped;
    bool bound_exceeded = false;
    if (config.error_bound) {
        results["error_bound"] = *config.error_bound;
        bound_exceeded = report.max_rel_error > *config.error_bound;
        results["bound_exceeded"] = bound_exceeded;
    }
    emit_summary(dir, config, std::move(results));
    return bound_exceeded ? 2 : 0;
}

int run_bracket_check(const RunConfig& config, const fs::path& dir) {
    if (!config.system) fail(ErrorKind::Config, "bracket-check needs a 'system'");
    const SystemSpec& spec = *config.system;
    const std::size_t n = spec.dimension();

    std::vector<double> low(n, -3.0), high(n, 3.0);
    for (std::size_t i : spec.positive_components()) {
        low[i] = 0.5;
        high[i] = 3.0;
    }
    if (config.bracket.sample_low) {
        if (config.bracket.sample_low->size() != n)
            fail(ErrorKind::Config, "sample_low must have the system dimension");
        low = *config.bracket.sample_low;
    }
    if (config.bracket.sample_high) {
        if (config.bracket.sample_high->size() != n)
            fail(ErrorKind::Config, "sample_high must have the system dimension");
        high = *config.bracket.sample_high;
    }

    std::mt19937_64 rng(config.seed);
    std::vector<std::vector<double>> points(static_cast<std::size_t>(config.bracket.points));
    for (auto& p : points) {
        p.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            p[i] = std::uniform_real_distribution<double>(low[i], high[i])(rng);
    }

    const auto structure = config.bracket.structure_override
                               ? *config.bracket.structure_override
                               : structure_relations(spec);
    const sl2::BracketMode mode =
        config.bracket.finite_difference
            ? sl2::BracketMode{sl2::FiniteDifference{config.bracket.fd_step}}
            : sl2::BracketMode{sl2::AnalyticJacobian{}};
    const double residual = sl2::bracket_residual(fundamental_fields(spec), structure, points, mode);
    const double bound =
        config.bracket.bound.value_or(config.bracket.finite_difference ? 1e-6 : 1e-12);

    ordered_json results;
    results["mode"] = config.bracket.finite_difference ? "finite-difference" : "analytic";
    results["points"] = config.bracket.points;
    results["max_residual"] = residual;
    results["bound"] = bound;
    const bool bound_exceeded = residual > bound;
    results["bound_exceeded"] = bound_exceeded;
    emit_summary(dir, config, std::move(results));
    return bound_exceeded ? 2 : 0;
}

int run_action_check(const RunConfig& config, const fs::path& dir) {
    const sl2::ActionCheckResult result =
        sl2::action_consistency(config.k, config.trials, config.seed);
    ordered_json results;
    results["k"] = config.k;
    results["trials"] = config.trials;
    results["max_composition_residual"] = result.max_composition_residual;
    results["max_generator_residual"] = result.max_generator_residual;
    results["composition_bound"] = config.composition_bound;
    results["generator_bound"] = config.generator_bound;
    const bool bound_exceeded = result.max_composition_residual > config.composition_bound ||
                                result.max_generator_residual > config.generator_bound;
    results["bound_exceeded"] = bound_exceeded;
    emit_summary(dir, config, std::move(results));
    return bound_exceeded ? 2 : 0;
}

}  // namespace

int run(const RunConfig& config) {
    if (config.output_dir.empty()) fail(ErrorKind::Config, "output_dir must not be empty");
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output_dir '" + config.output_dir + "': " + ec.message());

    switch (config.command) {
        case Command::Integrate: return run_integrate(config, dir);
        case Command::Invariants: return run_invariants(config, dir);
        case Command::SuperposeVerify: return run_superpose_verify(config, dir);
        case Command::BracketCheck: return run_bracket_check(config, dir);
        case Command::ActionCheck: return run_action_check(config, dir);
    }
    fail(ErrorKind::Config, "unknown command");
}

}  // namespace liesys
