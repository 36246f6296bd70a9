#include "nelab/problems.hpp"

#include <string>

namespace nelab {

void validate(const ProblemSpec& spec) {
    if (spec.n < 1)
        throw ArgumentError("ProblemSpec: n must be >= 1");
    if (spec.family == Family::Jump && (spec.m < 1 || spec.m > spec.n))
        throw ArgumentError("ProblemSpec: jump width m must satisfy 1 <= m <= n");
    if (spec.family != Family::Jump && spec.m != 0)
        throw ArgumentError("ProblemSpec: m is only valid for the jump family");
}

double value_by_ones(const ProblemSpec& spec, int ones) {
    validate(spec);
    if (ones < 0 || ones > spec.n)
        throw ArgumentError("value_by_ones: ones-count out of range");
    long v = 0;
    switch (spec.family) {
    case Family::Trap:
        // peak at the all-ones string, otherwise the more ones the worse
        v = (ones == spec.n) ? 2L * spec.n : -static_cast<long>(ones);
        break;
    case Family::OneMax:
        v = ones;
        break;
    case Family::Jump:
        // plateau ramp, then a valley of width m-1 just below the optimum
        if (ones <= spec.n - spec.m || ones == spec.n)
            v = static_cast<long>(spec.m) + ones;
        else
            v = static_cast<long>(spec.n) - ones;
        break;
    }
    return static_cast<double>(v);
}

double fitness(const ProblemSpec& spec, const BitString& x) {
    if (x.size() != spec.n)
        throw ArgumentError("fitness: solution length " + std::to_string(x.size()) +
                            " does not match problem size " + std::to_string(spec.n));
    return value_by_ones(spec, x.ones());
}

bool is_optimum(const ProblemSpec& spec, const BitString& x) {
    if (x.size() != spec.n)
        throw ArgumentError("is_optimum: solution length does not match problem size");
    return x.ones() == spec.n;
}

bool optimal_ones(const ProblemSpec& spec, int ones) {
    validate(spec);
    if (ones < 0 || ones > spec.n)
        throw ArgumentError("optimal_ones: ones-count out of range");
    return ones == spec.n;
}

const char* family_name(Family f) {
    switch (f) {
    case Family::Trap: return "trap";
    case Family::OneMax: return "onemax";
    case Family::Jump: return "jump";
    }
    return "?";
}

} // namespace nelab
