#pragma once

#include <cmath>

namespace nelab {

// Neumaier's compensated accumulator; keeps long probability sums honest
// without resorting to arbitrary precision.
template <typename T = double>
struct CompensatedSum {
    T s = 0;
    T c = 0;

    void add(T x) {
        T t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    T value() const { return s + c; }
};

} // namespace nelab
