#include "nelab/config.hpp"

#include <fstream>

#include "nelab/errors.hpp"

namespace nelab {

namespace {

const Json& need(const Json& j, const char* key) {
    if (!j.is_object())
        throw ArgumentError(std::string("expected a JSON object around key '") + key + "'");
    auto it = j.find(key);
    if (it == j.end())
        throw ArgumentError(std::string("missing key '") + key + "'");
    return *it;
}

std::string need_string(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string())
        throw ArgumentError(std::string("key '") + key + "' must be a string");
    return v.get<std::string>();
}

double need_number(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number())
        throw ArgumentError(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

std::int64_t need_int(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        throw ArgumentError(std::string("key '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::uint64_t need_u64(const Json& j, const char* key) {
    std::int64_t v = need_int(j, key);
    if (v < 0)
        throw ArgumentError(std::string("key '") + key + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
}

} // namespace

Json to_json(const ProblemSpec& spec) {
    Json j{{"family", family_name(spec.family)}, {"n", spec.n}};
    if (spec.family == Family::Jump)
        j["m"] = spec.m;
    return j;
}

Json to_json(const NoiseModel& model) {
    switch (model.kind) {
    case NoiseKind::Noiseless:
        return Json{{"noise", "none"}};
    case NoiseKind::Additive:
        return Json{{"noise", "additive"}, {"d1", model.d1}, {"d2", model.d2}};
    case NoiseKind::Multiplicative:
        return Json{{"noise", "multiplicative"}, {"d1", model.d1}, {"d2", model.d2}};
    case NoiseKind::OneBit:
        return Json{{"noise", "one_bit"}, {"pn", model.pn}};
    }
    throw ArgumentError("unknown noise kind");
}

Json to_json(const SelectionRule& rule) {
    switch (rule.kind) {
    case RuleKind::Standard:
        return Json{{"kind", "standard"}};
    case RuleKind::HardThreshold:
        return Json{{"kind", "hard"}, {"tau", rule.tau}};
    case RuleKind::SmoothThreshold:
        return Json{{"kind", "smooth"}};
    }
    throw ArgumentError("unknown rule kind");
}

Json to_json(const AlgoConfig& algo) {
    return Json{{"lambda", algo.lambda},
                {"p", algo.p},
                {"rule", to_json(algo.rule)},
                {"policy", algo.policy == EvalPolicy::SingleEvaluation ? "single" : "reeval"}};
}

Json to_json(const ExperimentConfig& cfg) {
    Json j{{"problem", to_json(cfg.spec)},
           {"algo", to_json(cfg.algo)},
           {"noise", to_json(cfg.model)},
           {"runs_per_point", cfg.runs_per_point},
           {"budget", cfg.budget},
           {"master_seed", cfg.master_seed}};
    switch (cfg.initial_mode) {
    case InitialMode::Uniform:
        j["initial_mode"] = "uniform";
        break;
    case InitialMode::Sweep:
        j["initial_mode"] = "sweep";
        break;
    case InitialMode::Fixed:
        j["initial_mode"] = Json{{"fixed", cfg.fixed_initial}};
        break;
    }
    return j;
}

ProblemSpec problem_from_json(const Json& j) {
    std::string fam = need_string(j, "family");
    int n = static_cast<int>(need_int(j, "n"));
    ProblemSpec spec;
    if (fam == "trap") {
        spec = ProblemSpec::trap(n);
    } else if (fam == "onemax") {
        spec = ProblemSpec::onemax(n);
    } else if (fam == "jump") {
        spec = ProblemSpec::jump(static_cast<int>(need_int(j, "m")), n);
    } else {
        throw ArgumentError("unknown problem family '" + fam + "'");
    }
    validate(spec);
    return spec;
}

NoiseModel noise_from_json(const Json& j) {
    std::string kind = need_string(j, "noise");
    NoiseModel model;
    if (kind == "none") {
        model = NoiseModel::noiseless();
    } else if (kind == "additive") {
        model = NoiseModel::additive(need_number(j, "d1"), need_number(j, "d2"));
    } else if (kind == "multiplicative") {
        model = NoiseModel::multiplicative(need_number(j, "d1"), need_number(j, "d2"));
    } else if (kind == "one_bit") {
        model = NoiseModel::one_bit(need_number(j, "pn"));
    } else {
        throw ArgumentError("unknown noise model '" + kind + "'");
    }
    validate(model);
    return model;
}

SelectionRule rule_from_json(const Json& j) {
    std::string kind = need_string(j, "kind");
    if (kind == "standard")
        return SelectionRule::standard();
    if (kind == "hard")
        return SelectionRule::hard(need_number(j, "tau"));
    if (kind == "smooth")
        return SelectionRule::smooth();
    throw ArgumentError("unknown selection rule '" + kind + "'");
}

AlgoConfig algo_from_json(const Json& j) {
    AlgoConfig algo;
    algo.lambda = static_cast<int>(need_int(j, "lambda"));
    algo.p = need_number(j, "p");
    algo.rule = rule_from_json(need(j, "rule"));
    std::string policy = need_string(j, "policy");
    if (policy == "single")
        algo.policy = EvalPolicy::SingleEvaluation;
    else if (policy == "reeval")
        algo.policy = EvalPolicy::ReEvaluation;
    else
        throw ArgumentError("unknown evaluation policy '" + policy + "'");
    return algo;
}

ExperimentConfig experiment_from_json(const Json& j) {
    ExperimentConfig cfg;
    cfg.spec = problem_from_json(need(j, "problem"));
    cfg.algo = algo_from_json(need(j, "algo"));
    cfg.model = noise_from_json(need(j, "noise"));
    cfg.runs_per_point = need_u64(j, "runs_per_point");
    cfg.budget = need_u64(j, "budget");
    cfg.master_seed = need_u64(j, "master_seed");
    const Json& mode = need(j, "initial_mode");
    if (mode.is_string()) {
        std::string s = mode.get<std::string>();
        if (s == "uniform")
            cfg.initial_mode = InitialMode::Uniform;
        else if (s == "sweep")
            cfg.initial_mode = InitialMode::Sweep;
        else
            throw ArgumentError("unknown initial_mode '" + s + "'");
    } else if (mode.is_object()) {
        cfg.initial_mode = InitialMode::Fixed;
        cfg.fixed_initial = need_string(mode, "fixed");
    } else {
        throw ArgumentError("initial_mode must be \"uniform\", \"sweep\" or {\"fixed\":\"...\"}");
    }
    validate(cfg);
    return cfg;
}

ChainConfig chain_from_json(const Json& j) {
    ChainConfig cfg;
    std::string kind = need_string(j, "chain");
    cfg.spec = problem_from_json(need(j, "problem"));
    cfg.p = need_number(j, "p");
    if (kind == "noiseless") {
        cfg.kind = ChainConfig::Kind::Noiseless;
        cfg.lambda = static_cast<int>(need_int(j, "lambda"));
    } else if (kind == "reeval") {
        cfg.kind = ChainConfig::Kind::Reeval;
        cfg.model = noise_from_json(need(j, "noise"));
        cfg.rule = j.contains("rule") ? rule_from_json(j.at("rule")) : SelectionRule::standard();
    } else if (kind == "singleeval") {
        cfg.kind = ChainConfig::Kind::Singleeval;
        cfg.pn = need_number(j, "pn");
    } else {
        throw ArgumentError("unknown chain kind '" + kind + "'");
    }
    return cfg;
}

LumpedChain build_chain(const ChainConfig& cfg) {
    switch (cfg.kind) {
    case ChainConfig::Kind::Noiseless:
        return noiseless_chain(cfg.spec, cfg.lambda, cfg.p);
    case ChainConfig::Kind::Reeval:
        return noisy_chain_reeval(cfg.spec, cfg.model, cfg.rule, cfg.p);
    case ChainConfig::Kind::Singleeval:
        return noisy_chain_singleeval(cfg.spec, cfg.pn, cfg.p);
    }
    throw ArgumentError("unknown chain kind");
}

DominanceConfig dominance_from_json(const Json& j) {
    DominanceConfig cfg;
    cfg.spec = problem_from_json(need(j, "problem"));
    cfg.model = noise_from_json(need(j, "noise"));
    cfg.rule = j.contains("rule") ? rule_from_json(j.at("rule")) : SelectionRule::standard();
    cfg.p = need_number(j, "p");
    return cfg;
}

PntScanConfig pnt_from_json(const Json& j) {
    PntScanConfig cfg;
    std::string fam = need_string(j, "family");
    // sizes fill in n later; use a placeholder length that passes family checks
    if (fam == "trap") {
        cfg.family = ProblemSpec::trap(1);
    } else if (fam == "onemax") {
        cfg.family = ProblemSpec::onemax(1);
    } else if (fam == "jump") {
        int m = static_cast<int>(need_int(j, "m"));
        cfg.family = ProblemSpec::jump(m, std::max(m, 1));
    } else {
        throw ArgumentError("unknown problem family '" + fam + "'");
    }
    cfg.algo = algo_from_json(need(j, "algo"));
    std::string noise = need_string(j, "noise");
    if (noise == "none")
        cfg.noise_family = NoiseKind::Noiseless;
    else if (noise == "additive")
        cfg.noise_family = NoiseKind::Additive;
    else if (noise == "multiplicative")
        cfg.noise_family = NoiseKind::Multiplicative;
    else if (noise == "one_bit")
        cfg.noise_family = NoiseKind::OneBit;
    else
        throw ArgumentError("unknown noise family '" + noise + "'");
    const Json& levels = need(j, "levels");
    if (!levels.is_array() || levels.empty())
        throw ArgumentError("'levels' must be a non-empty array of numbers");
    for (const Json& v : levels) {
        if (!v.is_number())
            throw ArgumentError("'levels' must contain only numbers");
        cfg.levels.push_back(v.get<double>());
    }
    const Json& sizes = need(j, "sizes");
    if (!sizes.is_array() || sizes.empty())
        throw ArgumentError("'sizes' must be a non-empty array of integers");
    for (const Json& v : sizes) {
        if (!v.is_number_integer())
            throw ArgumentError("'sizes' must contain only integers");
        cfg.sizes.push_back(v.get<int>());
    }
    cfg.runs = need_u64(j, "runs");
    cfg.budget = need_u64(j, "budget");
    cfg.master_seed = need_u64(j, "master_seed");
    return cfg;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IoError("cannot parse '" + path + "': " + e.what());
    }
}

} // namespace nelab
