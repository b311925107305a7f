#include "liesys/config.hpp"

#include <fstream>

#include "liesys/error.hpp"

namespace liesys {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::Config, "cli", "parse_config", msg);
}

const json& require(const json& j, const char* field, const char* context) {
    auto it = j.find(field);
    if (it == j.end())
        fail(std::string("missing field '") + field + "' in " + context);
    return *it;
}

double require_number(const json& j, const char* field, const char* context) {
    const json& v = require(j, field, context);
    if (!v.is_number()) fail(std::string("field '") + field + "' in " + context + " must be a number");
    return v.get<double>();
}

std::string require_string(const json& j, const char* field, const char* context) {
    const json& v = require(j, field, context);
    if (!v.is_string()) fail(std::string("field '") + field + "' in " + context + " must be a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const char* what) {
    if (!v.is_array()) fail(std::string(what) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) fail(std::string(what) + " must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

std::string command_name(Command command) {
    switch (command) {
        case Command::Integrate: return "integrate";
        case Command::Invariants: return "invariants";
        case Command::SuperposeVerify: return "superpose-verify";
        case Command::BracketCheck: return "bracket-check";
        case Command::ActionCheck: return "action-check";
    }
    return "unknown";
}

OmegaProfile omega_from_json(const json& j) {
    const std::string kind = require_string(j, "kind", "omega");
    if (kind == "constant") return OmegaProfile::constant(require_number(j, "omega0", "omega"));
    if (kind == "chirp")
        return OmegaProfile::chirp(require_number(j, "a", "omega"), require_number(j, "b", "omega"));
    if (kind == "sinusoidal") {
        const double phase = j.contains("phase") ? require_number(j, "phase", "omega") : 0.0;
        return OmegaProfile::sinusoidal(require_number(j, "a", "omega"),
                                        require_number(j, "b", "omega"),
                                        require_number(j, "c", "omega"), phase);
    }
    if (kind == "tabulated") {
        const json& samples = require(j, "samples", "omega");
        if (!samples.is_array()) fail("omega samples must be an array of [t, omega] pairs");
        std::vector<std::pair<double, double>> table;
        for (const auto& s : samples) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
                fail("omega samples must be [t, omega] number pairs");
            table.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
        return OmegaProfile::tabulated(std::move(table));
    }
    fail("unknown omega kind '" + kind + "'");
}

Coupling coupling_from_json(const json& j) {
    const std::string kind = require_string(j, "kind", "coupling");
    if (kind == "constant") return Coupling::constant(require_number(j, "c", "coupling"));
    if (kind == "power-law")
        return Coupling::power_law(require_number(j, "c", "coupling"),
                                   require_number(j, "p", "coupling"));
    fail("unknown coupling kind '" + kind + "'");
}

SystemSpec system_from_json(const json& j, const OmegaProfile& omega) {
    const std::string kind = require_string(j, "kind", "system");
    if (kind == "oscillator") return SystemSpec(SystemSpec::Kind{Oscillator{}}, omega);
    if (kind == "milne-pinney")
        return SystemSpec(SystemSpec::Kind{MilnePinney{require_number(j, "k", "system")}}, omega);
    if (kind == "riccati") return SystemSpec(SystemSpec::Kind{Riccati{}}, omega);
    if (kind == "ermakov") return SystemSpec(SystemSpec::Kind{Ermakov{}}, omega);
    if (kind == "generalized-ermakov")
        return SystemSpec(SystemSpec::Kind{GeneralizedErmakov{
                              coupling_from_json(require(j, "f", "system")),
                              coupling_from_json(require(j, "g", "system"))}},
                          omega);
    if (kind == "prolongation") {
        const json& members = require(j, "members", "system");
        if (!members.is_array() || members.empty())
            fail("prolongation members must be a non-empty array");
        Prolongation prol;
        for (const auto& m : members) prol.members.push_back(system_from_json(m, omega));
        return SystemSpec(SystemSpec::Kind{std::move(prol)}, omega);
    }
    fail("unknown system kind '" + kind + "'");
}

InvariantBinding invariant_from_json(const json& j) {
    InvariantBinding b;
    b.name = require_string(j, "name", "invariant");
    if (b.name.empty() || b.name.find_first_not_of(
                              "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                              std::string::npos)
        fail("invariant name '" + b.name + "' must match [A-Za-z0-9_-]+");
    const std::string kind = require_string(j, "kind", "invariant");
    if (kind == "wronskian") b.kind = InvariantKind::Wronskian;
    else if (kind == "oscillator-pair") b.kind = InvariantKind::OscillatorPair;
    else if (kind == "ermakov-lewis") b.kind = InvariantKind::ErmakovLewis;
    else if (kind == "pinney-pair") b.kind = InvariantKind::PinneyPair;
    else if (kind == "riccati-pinney") b.kind = InvariantKind::RiccatiPinney;
    else if (kind == "generalized-ermakov") b.kind = InvariantKind::GeneralizedErmakov;
    else fail("unknown invariant kind '" + kind + "'");
    const json& args = require(j, "args", "invariant");
    if (!args.is_array()) fail("invariant args must be an array of component indices");
    for (const auto& a : args) {
        if (!a.is_number_unsigned()) fail("invariant args must be nonnegative integers");
        b.args.push_back(a.get<std::size_t>());
    }
    if (j.contains("k")) b.k = require_number(j, "k", "invariant");
    if (j.contains("f")) b.f = coupling_from_json(j.at("f"));
    if (j.contains("g")) b.g = coupling_from_json(j.at("g"));
    return b;
}

RuleKind rule_from_json(const json& j) {
    if (!j.is_string()) fail("rule must be a string");
    const std::string rule = j.get<std::string>();
    if (rule == "linear") return RuleKind::Linear;
    if (rule == "pinney-osc") return RuleKind::PinneyOsc;
    if (rule == "pinney-riccati") return RuleKind::PinneyRiccati;
    fail("unknown rule '" + rule + "'");
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("config document must be a JSON object");
    RunConfig config;

    const std::string cmd = require_string(doc, "command", "config");
    if (cmd == "integrate") config.command = Command::Integrate;
    else if (cmd == "invariants") config.command = Command::Invariants;
    else if (cmd == "superpose-verify") config.command = Command::SuperposeVerify;
    else if (cmd == "bracket-check") config.command = Command::BracketCheck;
    else if (cmd == "action-check") config.command = Command::ActionCheck;
    else fail("unknown command '" + cmd + "'");

    if (doc.contains("omega")) config.omega = omega_from_json(doc.at("omega"));
    if (doc.contains("system")) {
        if (!config.omega) fail("'system' requires an 'omega' profile");
        config.system = system_from_json(doc.at("system"), *config.omega);
    }
    if (doc.contains("initial_data")) {
        const json& init = doc.at("initial_data");
        if (!init.is_object()) fail("initial_data must map names to number lists");
        for (const auto& [name, value] : init.items())
            config.initial_data[name] = number_list(value, ("initial_data." + name).c_str());
    }
    if (doc.contains("t0")) config.t0 = require_number(doc, "t0", "config");
    if (doc.contains("t1")) config.t1 = require_number(doc, "t1", "config");
    if (doc.contains("rel_tol")) config.rel_tol = require_number(doc, "rel_tol", "config");
    if (doc.contains("abs_tol")) config.abs_tol = require_number(doc, "abs_tol", "config");
    if (doc.contains("rule")) config.rule = rule_from_json(doc.at("rule"));
    if (doc.contains("k")) config.k = require_number(doc, "k", "config");
    if (doc.contains("invariants")) {
        const json& invs = doc.at("invariants");
        if (!invs.is_array()) fail("invariants must be an array");
        for (const auto& inv : invs) config.invariants.push_back(invariant_from_json(inv));
    }
    if (doc.contains("drift_bound")) config.drift_bound = require_number(doc, "drift_bound", "config");
    if (doc.contains("error_bound")) config.error_bound = require_number(doc, "error_bound", "config");
    if (doc.contains("mode")) {
        const std::string mode = require_string(doc, "mode", "config");
        if (mode == "analytic") config.bracket.finite_difference = false;
        else if (mode == "finite-difference") config.bracket.finite_difference = true;
        else fail("unknown bracket mode '" + mode + "'");
    }
    if (doc.contains("fd_step")) config.bracket.fd_step = require_number(doc, "fd_step", "config");
    if (doc.contains("points")) {
        const json& p = doc.at("points");
        if (!p.is_number_integer() || p.get<int>() < 1) fail("points must be a positive integer");
        config.bracket.points = p.get<int>();
    }
    if (doc.contains("bound")) config.bracket.bound = require_number(doc, "bound", "config");
    if (doc.contains("structure")) {
        const json& rels = doc.at("structure");
        if (!rels.is_array()) fail("structure must be an array of relations");
        std::vector<BracketRelation> structure;
        for (const auto& rel : rels) {
            const json& pair = require(rel, "pair", "structure relation");
            const json& coeffs = require(rel, "coeffs", "structure relation");
            if (!pair.is_array() || pair.size() != 2 || !coeffs.is_array() || coeffs.size() != 3)
                fail("structure relation needs 'pair' [a, b] and 'coeffs' [c1, c2, c3]");
            BracketRelation r;
            r.a = pair[0].get<int>();
            r.b = pair[1].get<int>();
            for (int g = 0; g < 3; ++g) r.coeffs[static_cast<std::size_t>(g)] = coeffs[static_cast<std::size_t>(g)].get<double>();
            if (r.a < 1 || r.a > 3 || r.b < 1 || r.b > 3)
                fail("structure relation pair entries must be in {1, 2, 3}");
            structure.push_back(r);
        }
        config.bracket.structure_override = std::move(structure);
    }
    if (doc.contains("sample_low"))
        config.bracket.sample_low = number_list(doc.at("sample_low"), "sample_low");
    if (doc.contains("sample_high"))
        config.bracket.sample_high = number_list(doc.at("sample_high"), "sample_high");
    if (doc.contains("trials")) {
        const json& trials = doc.at("trials");
        if (!trials.is_number_integer() || trials.get<int>() < 1)
            fail("trials must be a positive integer");
        config.trials = trials.get<int>();
    }
    if (doc.contains("composition_bound"))
        config.composition_bound = require_number(doc, "composition_bound", "config");
    if (doc.contains("generator_bound"))
        config.generator_bound = require_number(doc, "generator_bound", "config");
    if (doc.contains("output_dir")) config.output_dir = require_string(doc, "output_dir", "config");
    if (doc.contains("seed")) {
        const json& seed = doc.at("seed");
        if (!seed.is_number_unsigned()) fail("seed must be a nonnegative integer");
        config.seed = seed.get<std::uint64_t>();
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cli", "parse_config", "cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("config file '") + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

ordered_json omega_to_json(const OmegaProfile& profile) {
    ordered_json j;
    if (const auto* c = std::get_if<ConstantOmega>(&profile.kind())) {
        j["kind"] = "constant";
        j["omega0"] = c->omega0;
    } else if (const auto* c = std::get_if<ChirpOmega>(&profile.kind())) {
        j["kind"] = "chirp";
        j["a"] = c->a;
        j["b"] = c->b;
    } else if (const auto* s = std::get_if<SinusoidalOmega>(&profile.kind())) {
        j["kind"] = "sinusoidal";
        j["a"] = s->a;
        j["b"] = s->b;
        j["c"] = s->c;
        j["phase"] = s->phase;
    } else {
        const auto& tab = std::get<TabulatedOmega>(profile.kind());
        j["kind"] = "tabulated";
        auto samples = ordered_json::array();
        for (const auto& [t, w] : tab.samples) samples.push_back(ordered_json::array({t, w}));
        j["samples"] = std::move(samples);
    }
    return j;
}

ordered_json coupling_to_json(const Coupling& coupling) {
    ordered_json j;
    if (const auto* cv = std::get_if<ConstantValue>(&coupling.kind())) {
        j["kind"] = "constant";
        j["c"] = cv->c;
    } else {
        const auto& pl = std::get<PowerLaw>(coupling.kind());
        j["kind"] = "power-law";
        j["c"] = pl.c;
        j["p"] = pl.p;
    }
    return j;
}

ordered_json system_to_json(const SystemSpec& spec) {
    ordered_json j;
    if (std::holds_alternative<Oscillator>(spec.kind())) {
        j["kind"] = "oscillator";
    } else if (const auto* mp = std::get_if<MilnePinney>(&spec.kind())) {
        j["kind"] = "milne-pinney";
        j["k"] = mp->k;
    } else if (std::holds_alternative<Riccati>(spec.kind())) {
        j["kind"] = "riccati";
    } else if (std::holds_alternative<Ermakov>(spec.kind())) {
        j["kind"] = "ermakov";
    } else if (const auto* ge = std::get_if<GeneralizedErmakov>(&spec.kind())) {
        j["kind"] = "generalized-ermakov";
        j["f"] = coupling_to_json(ge->f);
        j["g"] = coupling_to_json(ge->g);
    } else {
        j["kind"] = "prolongation";
        auto members = ordered_json::array();
        for (const auto& m : std::get<Prolongation>(spec.kind()).members)
            members.push_back(system_to_json(m));
        j["members"] = std::move(members);
    }
    return j;
}

ordered_json constants_to_json(const SuperpositionConstants& consts) {
    ordered_json j;
    if (const auto* lin = std::get_if<LinearConstants>(&consts)) {
        j["k1"] = lin->k1;
        j["k2"] = lin->k2;
    } else if (const auto* po = std::get_if<PinneyOscConstants>(&consts)) {
        j["I1"] = po->I1;
        j["I2"] = po->I2;
        j["W"] = po->W;
        j["branch"] = po->branch == Branch::Plus ? "+" : "-";
    } else {
        const auto& pr = std::get<PinneyRiccatiConstants>(consts);
        j["C1"] = pr.C1;
        j["C2"] = pr.C2;
    }
    return j;
}

ordered_json config_to_json(const RunConfig& config) {
    ordered_json j;
    j["command"] = command_name(config.command);
    if (config.omega) j["omega"] = omega_to_json(*config.omega);
    if (config.system) j["system"] = system_to_json(*config.system);
    if (!config.initial_data.empty()) {
        ordered_json init;
        for (const auto& [name, values] : config.initial_data) init[name] = values;
        j["initial_data"] = std::move(init);
    }
    j["t0"] = config.t0;
    j["t1"] = config.t1;
    j["rel_tol"] = config.rel_tol;
    j["abs_tol"] = config.abs_tol;
    if (config.rule) j["rule"] = rule_kind_name(*config.rule);
    j["k"] = config.k;
    if (!config.invariants.empty()) {
        auto invs = ordered_json::array();
        for (const auto& b : config.invariants) {
            ordered_json inv;
            inv["name"] = b.name;
            switch (b.kind) {
                case InvariantKind::Wronskian: inv["kind"] = "wronskian"; break;
                case InvariantKind::OscillatorPair: inv["kind"] = "oscillator-pair"; break;
                case InvariantKind::ErmakovLewis: inv["kind"] = "ermakov-lewis"; break;
                case InvariantKind::PinneyPair: inv["kind"] = "pinney-pair"; break;
                case InvariantKind::RiccatiPinney: inv["kind"] = "riccati-pinney"; break;
                case InvariantKind::GeneralizedErmakov: inv["kind"] = "generalized-ermakov"; break;
            }
            inv["args"] = b.args;
            inv["k"] = b.k;
            if (b.f) inv["f"] = coupling_to_json(*b.f);
            if (b.g) inv["g"] = coupling_to_json(*b.g);
            invs.push_back(std::move(inv));
        }
        j["invariants"] = std::move(invs);
    }
    if (config.drift_bound) j["drift_bound"] = *config.drift_bound;
    if (config.error_bound) j["error_bound"] = *config.error_bound;
    if (config.command == Command::BracketCheck) {
        j["mode"] = config.bracket.finite_difference ? "finite-difference" : "analytic";
        j["fd_step"] = config.bracket.fd_step;
        j["points"] = config.bracket.points;
        if (config.bracket.bound) j["bound"] = *config.bracket.bound;
        if (config.bracket.structure_override) {
            auto rels = ordered_json::array();
            for (const auto& r : *config.bracket.structure_override) {
                ordered_json rel;
                rel["pair"] = ordered_json::array({r.a, r.b});
                rel["coeffs"] = ordered_json::array({r.coeffs[0], r.coeffs[1], r.coeffs[2]});
                rels.push_back(std::move(rel));
            }
            j["structure"] = std::move(rels);
        }
        if (config.bracket.sample_low) j["sample_low"] = *config.bracket.sample_low;
        if (config.bracket.sample_high) j["sample_high"] = *config.bracket.sample_high;
    }
    if (config.command == Command::ActionCheck) {
        j["trials"] = config.trials;
        j["composition_bound"] = config.composition_bound;
        j["generator_bound"] = config.generator_bound;
    }
    j["output_dir"] = config.output_dir;
    j["seed"] = config.seed;
    return j;
}

}  // namespace liesys
