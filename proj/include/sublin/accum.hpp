#pragma once

#include <cmath>
#include <vector>

namespace sublin {

// Neumaier compensated accumulator: exact to one rounding of the true sum
// for the dot products and step sums used throughout.
class Accum {
public:
    Accum() = default;
    explicit Accum(double init) : sum_(init) {}

    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

    void reset() { sum_ = 0.0; comp_ = 0.0; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(const std::vector<double>& xs) {
    Accum a;
    for (double x : xs) a.add(x);
    return a.value();
}

inline double compensated_dot(const std::vector<double>& a, const std::vector<double>& b) {
    Accum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

} // namespace sublin
