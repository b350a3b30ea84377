#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nclmat {

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// Unbiased sample variance.
inline double variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("variance: need at least two samples");
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

inline double std_error(const std::vector<double>& v) {
    return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

// Mean over the trailing ceil(fraction * n) entries.
inline double tail_mean(const std::vector<double>& v, double fraction = 0.1) {
    if (v.empty()) throw std::invalid_argument("tail_mean: empty input");
    const auto n = v.size();
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (count == 0) count = 1;
    if (count > n) count = n;
    double acc = 0.0;
    for (std::size_t i = n - count; i < n; ++i) acc += v[i];
    return acc / static_cast<double>(count);
}

inline std::size_t argmax(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("argmax: empty input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

}  // namespace nclmat
