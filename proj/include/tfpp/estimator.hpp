#pragma once

#include <cmath>
#include <cstdint>

namespace tfpp {

// Streaming mean/variance accumulator (Welford), mergeable with the exact
// pooled-update formula so that split-and-merge matches sequential feeding.
struct EstimatorState {
    int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations from the running mean

    void add(double x) {
        ++count;
        double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    double variance() const {
        return count >= 2 ? m2 / static_cast<double>(count - 1) : 0.0;
    }
    double std_error() const {
        return count >= 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

inline EstimatorState merge(const EstimatorState& a, const EstimatorState& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    EstimatorState out;
    out.count = a.count + b.count;
    double d = b.mean - a.mean;
    double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
    double n = na + nb;
    out.mean = a.mean + d * nb / n;
    out.m2 = a.m2 + b.m2 + d * d * na * nb / n;
    return out;
}

} // namespace tfpp
