#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nelab/ea.hpp"

namespace nelab {

// State of a lumped chain: an ones-count class, optionally tagged with the
// stored noisy value L for the single-evaluation chain.
struct ChainState {
    int ones = 0;
    int stored = 0;
    bool has_stored = false;

    std::string label() const; // "3", or "3|4" for (ones=3, L=4)
    friend bool operator==(const ChainState&, const ChainState&) = default;
};

// Exact Markov chain over ones-count classes. Rows are stochastic within
// 1e-12; optimal states are absorbing by construction (hitting-time reading).
// initial is the law of a uniformly random starting solution over the states.
struct LumpedChain {
    ProblemSpec spec;
    std::vector<ChainState> states;
    std::vector<double> kernel; // row-major |states| x |states|
    std::vector<char> optimal;
    std::vector<double> initial;

    int size() const { return static_cast<int>(states.size()); }
    double at(int i, int j) const { return kernel[static_cast<std::size_t>(i) * states.size() + j]; }
    double& at(int i, int j) { return kernel[static_cast<std::size_t>(i) * states.size() + j]; }
};

void validate(const LumpedChain& chain, double row_tol = 1e-12);

// Expected first hitting times, aligned with the chain's state list.
struct EfhtVector {
    std::vector<ChainState> states;
    std::vector<double> values;
    std::vector<char> optimal;
};

// States grouped by equal EFHT, ordered increasingly; class 0 is the optimal
// set. Entries are indices into the originating state list.
struct EfhtPartition {
    std::vector<std::vector<int>> classes;
    std::vector<double> class_efht;
};

enum class DominanceVerdict { EasierConditionHolds, HarderConditionHolds, Both, Neither };

struct DominanceWitness {
    int state;            // index of the violating non-optimal state
    int prefix;           // class-prefix i at which the comparison failed
    double cum_noisy;
    double cum_noiseless;
};

struct DominanceResult {
    DominanceVerdict verdict;
    // witness breaking the corresponding direction, when it does not hold
    std::optional<DominanceWitness> easier_violation;
    std::optional<DominanceWitness> harder_violation;
};

const char* verdict_name(DominanceVerdict v);

// One-step drift extremes of a potential V and the induced two-sided EFHT
// bounds V/c_u <= EFHT <= V/c_l. A non-positive constant disables the
// corresponding side.
struct DriftReport {
    double c_l = 0;
    double c_u = 0;
    bool lower_bound_available = false; // V/c_u, needs c_u > 0
    bool upper_bound_available = false; // V/c_l, needs c_l > 0
    std::vector<double> lower;
    std::vector<double> upper;
};

// Exact law of ones(mutate(x)) given ones(x) = i: convolution of the flip
// counts among the i one-bits and the n-i zero-bits.
std::vector<double> offspring_ones_distribution(int n, int i, double p);

// Exact noiseless (1+lambda)-EA kernel on ones-count classes.
LumpedChain noiseless_chain(const ProblemSpec& spec, int lambda, double p);

// Exact (1+1)-EA kernel with fresh parent and offspring evaluations each
// iteration, any noise model, any selection rule.
LumpedChain noisy_chain_reeval(const ProblemSpec& spec, const NoiseModel& model,
                               const SelectionRule& rule, double p);

// Exact (1+1)-EA kernel with a stored parent value, one-bit noise on the
// all-ones-counting family only; states are (ones, L).
LumpedChain noisy_chain_singleeval(const ProblemSpec& spec, double pn, double p);

// Monte Carlo estimate of one kernel row (fresh evaluations, Standard rule),
// for lambda > 1 where no exact kernel is available.
std::vector<double> mc_row_estimate(const ProblemSpec& spec, const NoiseModel& model, int lambda,
                                    double p, int ones, std::uint64_t steps, std::uint64_t seed);

EfhtVector efht_solve(const LumpedChain& chain);

EfhtPartition efht_partition(const EfhtVector& efht, double tol = 1e-9);

DominanceResult dominance_check(const LumpedChain& noisy, const LumpedChain& noiseless,
                                const EfhtPartition& partition, double tol = 1e-12);

DriftReport drift_report(const LumpedChain& chain, const EfhtVector& V);

// Prefix-dominance expectation check: P, Q distributions with every prefix
// sum of P <= that of Q, E non-negative strictly increasing; returns whether
// sum(P*E) >= sum(Q*E). Must hold for every valid input.
bool lemma4_oracle(const std::vector<double>& P, const std::vector<double>& Q,
                   const std::vector<double>& E);

// EFHT from a uniformly random initial solution: dot(chain.initial, efht).
double efht_from_uniform_init(const LumpedChain& chain, const EfhtVector& efht);

} // namespace nelab
