// SPDX-License-Identifier: Apache-2.0
//
// Kahan-compensated accumulation. Harmonic-weighted sums over millions of
// terms lose several digits under naive accumulation; the compensated form
// keeps the error at O(eps) independent of the term count.

#pragma once

#include <cstddef>
#include <vector>

namespace sumlab {

struct KahanAccumulator {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    KahanAccumulator& operator+=(double value) {
        add(value);
        return *this;
    }

    double value() const { return sum; }
};

inline double kahan_sum(const std::vector<double>& xs) {
    KahanAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace sumlab
