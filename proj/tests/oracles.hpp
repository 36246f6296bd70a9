#pragma once

// Brute-force references shared by the unit tests and the acceptance suite.
// Everything enumerates the full 2^n solution space and the full noise event
// space, or integrates numerically over split subintervals; none of it shares
// derivations with the library, so agreement is meaningful evidence.

#include <vector>

#include "nelab/chain.hpp"

namespace nelab::oracle {

// p^h (1-p)^(n-h) for the Hamming distance h between x and y
double mutation_prob(const BitString& x, const BitString& y, double p);

// probability that the rule accepts offspring y against parent x under fresh
// noise on both sides; one-bit noise is enumerated on the actual strings
double accept_probability(const ProblemSpec& spec, const NoiseModel& model,
                          const SelectionRule& rule, const BitString& x, const BitString& y);

// P[f^N(a) >= f^N(b) + t] for independent evaluations, by piecewise numeric
// integration rather than the library's closed forms
double prob_ge(const NoiseModel& model, const ProblemSpec& spec, int ones_a, int ones_b,
               double t);

// Full-state-space kernels aggregated onto ones-count classes 0..n. Both
// throw if two same-class strings produce different rows, which would break
// the lumping argument itself. lambda is 1 or 2.
std::vector<double> noiseless_kernel(const ProblemSpec& spec, int lambda, double p);
std::vector<double> reeval_kernel(const ProblemSpec& spec, const NoiseModel& model,
                                  const SelectionRule& rule, double p);

// Single-evaluation kernel on (ones, stored) states, aggregated from
// (string, stored) pairs; `states` fixes the row/column order so the result
// can be compared entrywise against the library chain.
std::vector<double> singleeval_kernel(const ProblemSpec& spec, double pn, double p,
                                      const std::vector<ChainState>& states);

// exact expected cover time of the path graph from a fixed start, via an
// absorbing chain on (leftmost visited, rightmost visited, position)
double exact_cover_time_path(int vertices, int start);

// least-squares slope of log(y) against log(x)
double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y);

} // namespace nelab::oracle
