#pragma once

#include <cmath>

namespace mbvar::detail {

// Neumaier compensated accumulator. Left-to-right accumulation order is
// part of the contract: vwap() and compute_moments() must agree bit for bit.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace mbvar::detail
