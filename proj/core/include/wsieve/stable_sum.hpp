#pragma once

#include <cmath>
#include <span>

namespace wsieve {

// Neumaier-compensated accumulator. Used for all cell reductions so that
// results do not depend on how work was chunked across threads.
class StableSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double get() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double stable_total(std::span<const double> xs) {
    StableSum s;
    for (double x : xs) s.add(x);
    return s.get();
}

}  // namespace wsieve
