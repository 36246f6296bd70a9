#pragma once

#include <json.hpp>

#include "nelab/lab.hpp"

namespace nelab {

using Json = nlohmann::json;

// JSON shapes:
//   problem  {"family":"trap","n":5} / {"family":"jump","n":5,"m":2}
//   noise    {"noise":"none"} / {"noise":"one_bit","pn":0.5}
//            / {"noise":"additive","d1":-5.0,"d2":5.0} / {"noise":"multiplicative",...}
//   algo     {"lambda":1,"p":0.2,"rule":{"kind":"smooth"},"policy":"reeval"}
//            rule kinds: {"kind":"standard"} / {"kind":"hard","tau":1.0} / {"kind":"smooth"}
// Unknown keys are ignored; missing or ill-typed keys raise ArgumentError.

Json to_json(const ProblemSpec& spec);
Json to_json(const NoiseModel& model);
Json to_json(const SelectionRule& rule);
Json to_json(const AlgoConfig& algo);
Json to_json(const ExperimentConfig& cfg);

ProblemSpec problem_from_json(const Json& j);
NoiseModel noise_from_json(const Json& j);
SelectionRule rule_from_json(const Json& j);
AlgoConfig algo_from_json(const Json& j);
ExperimentConfig experiment_from_json(const Json& j);

// chain-efht subcommand input:
//   {"chain":"noiseless","problem":{...},"lambda":1,"p":0.25}
//   {"chain":"reeval","problem":{...},"noise":{...},"rule":{...},"p":0.25}
//   {"chain":"singleeval","problem":{...},"pn":0.5,"p":0.2}
struct ChainConfig {
    enum class Kind { Noiseless, Reeval, Singleeval } kind = Kind::Noiseless;
    ProblemSpec spec;
    int lambda = 1;
    double p = 0.25;
    NoiseModel model;
    SelectionRule rule;
    double pn = 0;
};

ChainConfig chain_from_json(const Json& j);
LumpedChain build_chain(const ChainConfig& cfg);

// check-dominance input: {"problem":{...},"noise":{...},"p":0.25} with an
// optional "rule" (default standard); compares the lambda=1 fresh-evaluation
// noisy chain against the noiseless one
struct DominanceConfig {
    ProblemSpec spec;
    NoiseModel model;
    SelectionRule rule;
    double p = 0.25;
};

DominanceConfig dominance_from_json(const Json& j);

// pnt-scan input: {"family":"onemax","algo":{...},"noise":"one_bit",
//                  "levels":[...],"sizes":[...],"runs":100,"budget":1000000,"master_seed":1}
struct PntScanConfig {
    ProblemSpec family;
    AlgoConfig algo;
    NoiseKind noise_family = NoiseKind::OneBit;
    std::vector<double> levels;
    std::vector<int> sizes;
    std::uint64_t runs = 100;
    std::uint64_t budget = 1000000;
    std::uint64_t master_seed = 1;
};

PntScanConfig pnt_from_json(const Json& j);

Json load_json_file(const std::string& path);

} // namespace nelab
