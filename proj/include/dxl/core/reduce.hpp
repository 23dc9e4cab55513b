#pragma once
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace dxl {

// Pairwise summation; order fixed by the recursion, not by thread schedule.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    std::size_t h = x.size() / 2;
    return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Sample mean and standard error of the mean (pairwise accumulation).
inline MeanStderr mean_stderr(std::span<const double> x) {
    MeanStderr r;
    const std::size_t n = x.size();
    if (n == 0) return r;
    r.mean = pairwise_sum(x) / static_cast<double>(n);
    if (n == 1) return r;
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] - r.mean;
        dev[i] = d * d;
    }
    double var = pairwise_sum(dev) / static_cast<double>(n - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(n));
    return r;
}

} // namespace dxl
