#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "nelab/config.hpp"

using namespace nelab;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("problem specs round trip through json") {
    for (const ProblemSpec& spec :
         {ProblemSpec::trap(5), ProblemSpec::onemax(3), ProblemSpec::jump(2, 6)}) {
        ProblemSpec back = problem_from_json(to_json(spec));
        CHECK(back.family == spec.family);
        CHECK(back.n == spec.n);
        CHECK(back.m == spec.m);
    }
}

TEST_CASE("noise models round trip through json") {
    for (const NoiseModel& model :
         {NoiseModel::noiseless(), NoiseModel::additive(-2.5, 1.5),
          NoiseModel::multiplicative(0.1, 10.0), NoiseModel::one_bit(0.75)}) {
        NoiseModel back = noise_from_json(to_json(model));
        CHECK(back.kind == model.kind);
        CHECK(back.d1 == model.d1);
        CHECK(back.d2 == model.d2);
        CHECK(back.pn == model.pn);
    }
}

TEST_CASE("selection rules and algo configs round trip through json") {
    for (const SelectionRule& rule :
         {SelectionRule::standard(), SelectionRule::hard(1.5), SelectionRule::smooth()}) {
        SelectionRule back = rule_from_json(to_json(rule));
        CHECK(back.kind == rule.kind);
        CHECK(back.tau == rule.tau);
    }

    AlgoConfig algo;
    algo.lambda = 4;
    algo.p = 0.125;
    algo.policy = EvalPolicy::SingleEvaluation;
    AlgoConfig back = algo_from_json(to_json(algo));
    CHECK(back.lambda == 4);
    CHECK(back.p == 0.125);
    CHECK(back.rule.kind == RuleKind::Standard);
    CHECK(back.policy == EvalPolicy::SingleEvaluation);
}

TEST_CASE("experiment configs round trip through json") {
    ExperimentConfig cfg;
    cfg.spec = ProblemSpec::jump(3, 5);
    cfg.algo.p = 0.2;
    cfg.algo.rule = SelectionRule::hard(1.0);
    cfg.model = NoiseModel::additive(-5, 5);
    cfg.runs_per_point = 77;
    cfg.budget = 12345;
    cfg.master_seed = 99;

    for (InitialMode mode : {InitialMode::Uniform, InitialMode::Sweep, InitialMode::Fixed}) {
        cfg.initial_mode = mode;
        cfg.fixed_initial = mode == InitialMode::Fixed ? "10110" : "";
        ExperimentConfig back = experiment_from_json(to_json(cfg));
        CHECK(back.spec.family == cfg.spec.family);
        CHECK(back.algo.rule.kind == cfg.algo.rule.kind);
        CHECK(back.model.d2 == 5.0);
        CHECK(back.runs_per_point == 77);
        CHECK(back.budget == 12345);
        CHECK(back.master_seed == 99);
        CHECK(back.initial_mode == mode);
        CHECK(back.fixed_initial == cfg.fixed_initial);
    }
}

TEST_CASE("parse errors name the offending key") {
    CHECK_THROWS_WITH(problem_from_json(Json::parse(R"({"family":"trap"})")),
                      ContainsSubstring("missing key 'n'"));
    CHECK_THROWS_WITH(problem_from_json(Json::parse(R"({"family":"trap","n":"five"})")),
                      ContainsSubstring("must be an integer"));
    CHECK_THROWS_WITH(problem_from_json(Json::parse(R"({"family":"ridge","n":5})")),
                      ContainsSubstring("unknown problem family"));
    CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"family":"jump","n":5})")), ArgumentError);
    CHECK_THROWS_AS(problem_from_json(Json::parse("[1,2]")), ArgumentError);

    CHECK_THROWS_WITH(noise_from_json(Json::parse(R"({"noise":"cauchy"})")),
                      ContainsSubstring("unknown noise model"));
    CHECK_THROWS_AS(noise_from_json(Json::parse(R"({"noise":"additive","d1":0})")),
                    ArgumentError);
    CHECK_THROWS_AS(noise_from_json(Json::parse(R"({"noise":"one_bit","pn":"x"})")),
                    ArgumentError);
    // ill-formed parameters surface as validation failures
    CHECK_THROWS_AS(noise_from_json(Json::parse(R"({"noise":"one_bit","pn":1.5})")),
                    ArgumentError);

    CHECK_THROWS_WITH(rule_from_json(Json::parse(R"({"kind":"soft"})")),
                      ContainsSubstring("unknown selection rule"));
    CHECK_THROWS_AS(rule_from_json(Json::parse(R"({"kind":"hard"})")), ArgumentError);

    Json algo = Json::parse(
        R"({"lambda":1,"p":0.2,"rule":{"kind":"standard"},"policy":"lazy"})");
    CHECK_THROWS_WITH(algo_from_json(algo), ContainsSubstring("unknown evaluation policy"));
    algo["policy"] = 3;
    CHECK_THROWS_AS(algo_from_json(algo), ArgumentError);
    algo.erase("rule");
    CHECK_THROWS_WITH(algo_from_json(algo), ContainsSubstring("missing key 'rule'"));
}

TEST_CASE("unknown keys are ignored") {
    ProblemSpec spec =
        problem_from_json(Json::parse(R"({"family":"onemax","n":4,"comment":"scratch"})"));
    CHECK(spec.family == Family::OneMax);
    CHECK(spec.n == 4);
}

TEST_CASE("experiment initial mode shapes") {
    Json j = Json::parse(R"({
        "problem": {"family":"onemax","n":4},
        "algo": {"lambda":1,"p":0.2,"rule":{"kind":"standard"},"policy":"reeval"},
        "noise": {"noise":"none"},
        "runs_per_point": 5, "budget": 1000, "master_seed": 1,
        "initial_mode": "uniform"
    })");
    CHECK(experiment_from_json(j).initial_mode == InitialMode::Uniform);
    j["initial_mode"] = "sweep";
    CHECK(experiment_from_json(j).initial_mode == InitialMode::Sweep);
    j["initial_mode"] = Json{{"fixed", "0110"}};
    ExperimentConfig fixed = experiment_from_json(j);
    CHECK(fixed.initial_mode == InitialMode::Fixed);
    CHECK(fixed.fixed_initial == "0110");
    j["initial_mode"] = "diagonal";
    CHECK_THROWS_WITH(experiment_from_json(j), ContainsSubstring("unknown initial_mode"));
    j["initial_mode"] = 7;
    CHECK_THROWS_AS(experiment_from_json(j), ArgumentError);
    j["initial_mode"] = Json{{"fixed", "01"}}; // wrong length for n=4
    CHECK_THROWS_AS(experiment_from_json(j), ArgumentError);
    j["initial_mode"] = "uniform";
    j["runs_per_point"] = -3;
    CHECK_THROWS_WITH(experiment_from_json(j), ContainsSubstring("non-negative"));
}

TEST_CASE("chain configs cover all three kernels") {
    ChainConfig noiseless = chain_from_json(Json::parse(
        R"({"chain":"noiseless","problem":{"family":"trap","n":4},"lambda":2,"p":0.3})"));
    CHECK(noiseless.kind == ChainConfig::Kind::Noiseless);
    CHECK(noiseless.lambda == 2);
    LumpedChain cn = build_chain(noiseless);
    CHECK(cn.size() == 5);

    ChainConfig reeval = chain_from_json(Json::parse(
        R"({"chain":"reeval","problem":{"family":"onemax","n":4},
            "noise":{"noise":"one_bit","pn":0.5},"p":0.25})"));
    CHECK(reeval.kind == ChainConfig::Kind::Reeval);
    CHECK(reeval.rule.kind == RuleKind::Standard); // default when omitted
    CHECK(build_chain(reeval).size() == 5);

    ChainConfig reeval_hard = chain_from_json(Json::parse(
        R"({"chain":"reeval","problem":{"family":"onemax","n":4},
            "noise":{"noise":"additive","d1":-1,"d2":1},"rule":{"kind":"hard","tau":1},
            "p":0.25})"));
    CHECK(reeval_hard.rule.kind == RuleKind::HardThreshold);
    CHECK(reeval_hard.rule.tau == 1.0);

    ChainConfig single = chain_from_json(Json::parse(
        R"({"chain":"singleeval","problem":{"family":"onemax","n":4},"pn":0.5,"p":0.2})"));
    CHECK(single.kind == ChainConfig::Kind::Singleeval);
    CHECK(build_chain(single).size() == 13); // 3n+1 (ones, stored) pairs

    CHECK_THROWS_WITH(chain_from_json(Json::parse(
                          R"({"chain":"quantum","problem":{"family":"trap","n":4},"p":0.3})")),
                      ContainsSubstring("unknown chain kind"));
    CHECK_THROWS_AS(chain_from_json(Json::parse(
                        R"({"chain":"noiseless","problem":{"family":"trap","n":4},"p":0.3})")),
                    ArgumentError); // lambda required
}

TEST_CASE("dominance config defaults to the standard rule") {
    DominanceConfig cfg = dominance_from_json(Json::parse(
        R"({"problem":{"family":"trap","n":5},"noise":{"noise":"additive","d1":-5,"d2":5},
            "p":0.25})"));
    CHECK(cfg.spec.family == Family::Trap);
    CHECK(cfg.rule.kind == RuleKind::Standard);
    CHECK(cfg.p == 0.25);

    DominanceConfig smooth = dominance_from_json(Json::parse(
        R"({"problem":{"family":"onemax","n":5},"noise":{"noise":"one_bit","pn":0.5},
            "rule":{"kind":"smooth"},"p":0.2})"));
    CHECK(smooth.rule.kind == RuleKind::SmoothThreshold);
}

TEST_CASE("scan config parses grids") {
    Json j = Json::parse(R"({
        "family": "onemax",
        "algo": {"lambda":1,"p":0.1,"rule":{"kind":"standard"},"policy":"single"},
        "noise": "one_bit",
        "levels": [0.0, 0.5, 1.0],
        "sizes": [5, 10],
        "runs": 50, "budget": 100000, "master_seed": 3
    })");
    PntScanConfig cfg = pnt_from_json(j);
    CHECK(cfg.family.family == Family::OneMax);
    CHECK(cfg.noise_family == NoiseKind::OneBit);
    CHECK(cfg.levels == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(cfg.sizes == std::vector<int>{5, 10});
    CHECK(cfg.runs == 50);
    CHECK(cfg.algo.policy == EvalPolicy::SingleEvaluation);

    Json bad = j;
    bad["levels"] = Json::array();
    CHECK_THROWS_WITH(pnt_from_json(bad), ContainsSubstring("non-empty array"));
    bad = j;
    bad["levels"] = Json::parse(R"([0.1, "x"])");
    CHECK_THROWS_AS(pnt_from_json(bad), ArgumentError);
    bad = j;
    bad["sizes"] = Json::parse("[5.5]");
    CHECK_THROWS_AS(pnt_from_json(bad), ArgumentError);
    bad = j;
    bad["family"] = "jump"; // m becomes mandatory
    CHECK_THROWS_WITH(pnt_from_json(bad), ContainsSubstring("missing key 'm'"));
    bad["m"] = 2;
    CHECK(pnt_from_json(bad).family.family == Family::Jump);
    bad = j;
    bad["noise"] = "pink";
    CHECK_THROWS_WITH(pnt_from_json(bad), ContainsSubstring("unknown noise family"));
}

TEST_CASE("json files load or fail loudly") {
    CHECK_THROWS_AS(load_json_file("definitely_missing.json"), IoError);

    const std::string path = "config_test_malformed.json";
    {
        std::ofstream out(path);
        out << "{\"family\": trap";
    }
    CHECK_THROWS_WITH(load_json_file(path), ContainsSubstring("cannot parse"));
    std::remove(path.c_str());

    const std::string good = "config_test_good.json";
    {
        std::ofstream out(good);
        out << R"({"family":"trap","n":6})";
    }
    ProblemSpec spec = problem_from_json(load_json_file(good));
    CHECK(spec.n == 6);
    std::remove(good.c_str());
}
