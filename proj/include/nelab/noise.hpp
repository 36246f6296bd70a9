#pragma once

#include <span>
#include <vector>

#include "nelab/problems.hpp"
#include "nelab/rng.hpp"

namespace nelab {

enum class NoiseKind { Noiseless, Additive, Multiplicative, OneBit };

// Fitness-level noise. Additive reports f + U[d1,d2], multiplicative reports
// f * U[d1,d2]; one-bit reports, with probability pn, the fitness of the
// solution with one uniformly chosen bit flipped (the solution itself is
// untouched).
struct NoiseModel {
    NoiseKind kind = NoiseKind::Noiseless;
    double d1 = 0.0;
    double d2 = 0.0;
    double pn = 0.0;

    static NoiseModel noiseless() { return {NoiseKind::Noiseless, 0, 0, 0}; }
    static NoiseModel additive(double d1, double d2) { return {NoiseKind::Additive, d1, d2, 0}; }
    static NoiseModel multiplicative(double d1, double d2) { return {NoiseKind::Multiplicative, d1, d2, 0}; }
    static NoiseModel one_bit(double pn) { return {NoiseKind::OneBit, 0, 0, pn}; }
};

void validate(const NoiseModel& model);
const char* noise_name(NoiseKind k);

// One noisy evaluation. Draw consumption is fixed so seeded runs are
// reproducible: additive/multiplicative take one unit draw (none when d1=d2),
// one-bit takes the flip coin and then the position (no draws when pn=0, no
// coin when pn=1). Noiseless consumes nothing.
double noisy_fitness(const NoiseModel& model, const ProblemSpec& spec, const BitString& x,
                     RandomSource& rng);

// Same draw schedule on the packed-word representation; the run loop uses
// this to avoid materializing BitStrings per iteration.
double noisy_fitness_words(const NoiseModel& model, const ProblemSpec& spec,
                           std::span<const std::uint64_t> words, int ones, RandomSource& rng);

// Exact law of the noisy value of a solution with the given ones-count, as a
// mixture of point masses and uniform intervals. Small by construction: at
// most 3 atoms (one-bit) or 1 component otherwise.
struct ValueDist {
    struct Atom {
        double value;
        double w;
    };
    struct Interval {
        double lo, hi; // lo < hi
        double w;
    };
    std::vector<Atom> atoms;
    std::vector<Interval> intervals;

    double total_weight() const;
};

ValueDist noisy_value_dist(const NoiseModel& model, const ProblemSpec& spec, int ones);

// Exact pair probabilities for independent A ~ a, B ~ b.
double prob_ge(const ValueDist& a, const ValueDist& b, double t);      // P[A >= B + t]
double prob_gt(const ValueDist& a, const ValueDist& b, double t);      // P[A >  B + t]
double prob_gap_eq(const ValueDist& a, const ValueDist& b, double g);  // P[A - B = g]

// P[f^N(a) >= f^N(b) + t] for independent evaluations of solutions with
// ones-counts ones_a and ones_b. Ties count as >=.
double comparison_probabilities(const NoiseModel& model, const ProblemSpec& spec, int ones_a,
                                int ones_b, double t);

} // namespace nelab
