#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nclmat {

// Filter coefficients (and unknown-system taps).
using TapWeights = std::vector<double>;

// msd_db clamps the squared deviation here so a perfect match prints as a
// finite floor instead of -inf in CSV output.
constexpr double kMsdFloor = 1e-32;
constexpr double kMsdFloorDb = -320.0;

// Sliding window over the input stream, newest sample at index 0.
class RegressorWindow {
public:
    explicit RegressorWindow(std::size_t n_taps) : samples_(n_taps, 0.0) {
        if (n_taps == 0) {
            throw std::invalid_argument("RegressorWindow: need at least one tap");
        }
    }

    void push(double sample) {
        for (std::size_t i = samples_.size() - 1; i > 0; --i) {
            samples_[i] = samples_[i - 1];
        }
        samples_[0] = sample;
    }

    double operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }

private:
    std::vector<double> samples_;
};

// Filter output w . x.
inline double predict(const TapWeights& w, const RegressorWindow& x) {
    if (w.size() != x.size()) {
        throw std::invalid_argument("predict: tap/window length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * x[i];
    }
    return acc;
}

inline double error(double desired, double predicted) { return desired - predicted; }

// Sign convention maps zero to +1.
inline int sgn(double e) { return e >= 0.0 ? 1 : -1; }

inline double squared_deviation(const TapWeights& w, const TapWeights& w_opt) {
    if (w.size() != w_opt.size()) {
        throw std::invalid_argument("squared_deviation: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = w[i] - w_opt[i];
        acc += d * d;
    }
    return acc;
}

inline double msd_db_from_linear(double sq) {
    return 10.0 * std::log10(sq > kMsdFloor ? sq : kMsdFloor);
}

// 10*log10 ||w - w_opt||^2, floored at kMsdFloorDb when the match is exact.
inline double msd_db(const TapWeights& w, const TapWeights& w_opt) {
    return msd_db_from_linear(squared_deviation(w, w_opt));
}

inline bool all_finite(const TapWeights& w) {
    for (double v : w) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace nclmat
