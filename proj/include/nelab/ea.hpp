#pragma once

#include <cstdint>
#include <vector>

#include "nelab/noise.hpp"

namespace nelab {

enum class RuleKind { Standard, HardThreshold, SmoothThreshold };

// Acceptance rule applied to noisy values. The smooth rule's coin at gap 1 is
// 1/(5n), a function of the problem size, computed at the call site.
struct SelectionRule {
    RuleKind kind = RuleKind::Standard;
    double tau = 0.0; // HardThreshold only

    static SelectionRule standard() { return {RuleKind::Standard, 0.0}; }
    static SelectionRule hard(double tau) { return {RuleKind::HardThreshold, tau}; }
    static SelectionRule smooth() { return {RuleKind::SmoothThreshold, 0.0}; }
};

// Whether the parent keeps a stored noisy value (single) or is re-evaluated
// every iteration (reeval).
enum class EvalPolicy { SingleEvaluation, ReEvaluation };

struct AlgoConfig {
    int lambda = 1;
    double p = 0.25; // per-bit mutation probability, open interval (0, 0.5)
    SelectionRule rule = SelectionRule::standard();
    EvalPolicy policy = EvalPolicy::ReEvaluation;
};

void validate(const SelectionRule& rule);
void validate(const AlgoConfig& cfg);

struct RunRecord {
    std::uint64_t iterations = 0;
    std::uint64_t evaluations_paper = 0;  // 1 + N2 * iterations, N2 = 1 for (1+1), else lambda
    std::uint64_t evaluations_actual = 0; // every noisy_fitness call
    bool success = false;
    std::uint64_t seed = 0;
    int final_ones = 0;
};

// flip each bit independently with probability p; input unchanged
BitString mutate(const BitString& x, double p, RandomSource& rng);

// Accept/reject an offspring with noisy value fN_offspring against a parent
// with noisy value fN_parent. Ties accept under Standard; HardThreshold needs
// an advantage of at least tau; SmoothThreshold rejects gap <= 0, takes gap 1
// with probability 1/(5n), takes gap > 1, and rejects fractional gaps in (0,1).
bool accept(const SelectionRule& rule, int n, double fN_parent, double fN_offspring,
            RandomSource& rng);

// One iteration of the (1+lambda)-EA, shared by run() and the Monte Carlo row
// estimator in the chain module so simulation semantics exist in one place.
// Draw order per step is fixed: mutation bits for offspring 1..lambda, parent
// noise (re-evaluation only), offspring noise in index order, then the smooth
// coin if needed.
class Stepper {
public:
    Stepper(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model);

    // place the parent and evaluate it once (counts towards evals)
    void reset(const BitString& parent, RandomSource& rng);
    // place the parent without the initial evaluation; re-evaluation policy only
    void reset_unevaluated(const BitString& parent);

    int step(RandomSource& rng); // returns the new parent ones-count

    int parent_ones() const { return ones_; }
    double stored_value() const { return value_; }
    std::uint64_t evals() const { return evals_; }
    std::uint64_t step_cost() const; // noisy_fitness calls per iteration
    BitString parent() const;

private:
    void adopt(int child);

    AlgoConfig cfg_;
    ProblemSpec spec_;
    NoiseModel model_;
    int words_per_;
    double log1mp_;
    std::vector<std::uint64_t> parent_;
    std::vector<std::uint64_t> children_; // lambda buffers, flat
    std::vector<int> child_ones_;
    std::vector<double> child_value_;
    int ones_ = 0;
    double value_ = 0; // stored noisy value L under single-evaluation
    std::uint64_t evals_ = 0;
};

RunRecord run(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model,
              std::uint64_t budget, std::uint64_t seed);

RunRecord run_from(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model,
                   const BitString& initial, std::uint64_t budget, std::uint64_t seed);

} // namespace nelab
