#pragma once

#include <cmath>

namespace semilin {

// Neumaier compensated accumulator. Long sums with cancellation show up
// in every estimator denominator, so all statistics go through this.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace semilin
