#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liesys/coefficients.hpp"
#include "liesys/invariants.hpp"
#include "liesys/superposition.hpp"
#include "liesys/systems.hpp"

namespace liesys {

enum class Command { Integrate, Invariants, SuperposeVerify, BracketCheck, ActionCheck };

std::string command_name(Command command);

struct BracketCheckConfig {
    bool finite_difference = false;
    double fd_step = 1e-5;
    int points = 100;
    std::optional<double> bound;  // default 1e-12 analytic, 1e-6 finite-difference
    std::optional<std::vector<BracketRelation>> structure_override;
    std::optional<std::vector<double>> sample_low, sample_high;
};

/// One run = one JSON document. Fields irrelevant to the selected command are
/// simply unused.
struct RunConfig {
    Command command;
    std::optional<OmegaProfile> omega;
    std::optional<SystemSpec> system;
    std::map<std::string, std::vector<double>> initial_data;
    double t0 = 0.0, t1 = 0.0;
    double rel_tol = 1e-10, abs_tol = 1e-12;
    std::optional<RuleKind> rule;
    double k = 1.0;
    std::vector<InvariantBinding> invariants;
    std::optional<double> drift_bound;  // invariants: exit 2 when exceeded
    std::optional<double> error_bound;  // superpose-verify: exit 2 when exceeded
    BracketCheckConfig bracket;
    int trials = 1000;
    double composition_bound = 1e-9;
    double generator_bound = 1e-5;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

OmegaProfile omega_from_json(const nlohmann::json& j);
SystemSpec system_from_json(const nlohmann::json& j, const OmegaProfile& omega);
Coupling coupling_from_json(const nlohmann::json& j);
InvariantBinding invariant_from_json(const nlohmann::json& j);
RuleKind rule_from_json(const nlohmann::json& j);

nlohmann::ordered_json omega_to_json(const OmegaProfile& profile);
nlohmann::ordered_json system_to_json(const SystemSpec& spec);
nlohmann::ordered_json coupling_to_json(const Coupling& coupling);
nlohmann::ordered_json constants_to_json(const SuperpositionConstants& consts);

RunConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a config file; syntax errors carry the parser position,
/// semantic errors the offending field.
RunConfig parse_config_file(const std::string& path);

/// The fully-resolved configuration as echoed into summary.json.
nlohmann::ordered_json config_to_json(const RunConfig& config);

}  // namespace liesys
