#pragma once

#include "nelab/bitstring.hpp"

namespace nelab {

enum class Family { Trap, OneMax, Jump };

// Instance over {0,1}^n. Every supported family scores a solution through its
// ones-count alone (value_by_ones); that symmetry is what lets the chain
// module collapse 2^n solutions into n+1 states without losing anything.
struct ProblemSpec {
    Family family = Family::OneMax;
    int n = 1;
    int m = 0; // jump width, only meaningful for Family::Jump

    static ProblemSpec trap(int n) { return {Family::Trap, n, 0}; }
    static ProblemSpec onemax(int n) { return {Family::OneMax, n, 0}; }
    static ProblemSpec jump(int m, int n) { return {Family::Jump, n, m}; }
};

void validate(const ProblemSpec& spec);

// exact integer value of any solution with the given ones-count
double value_by_ones(const ProblemSpec& spec, int ones);

double fitness(const ProblemSpec& spec, const BitString& x);

// all three families have the all-ones string as their unique optimum
bool is_optimum(const ProblemSpec& spec, const BitString& x);
bool optimal_ones(const ProblemSpec& spec, int ones);

const char* family_name(Family f);

} // namespace nelab
