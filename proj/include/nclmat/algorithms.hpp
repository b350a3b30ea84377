#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "nclmat/filter_core.hpp"

namespace nclmat {

// Parameters of the noise-constrained family. gamma = 0 disables the
// constraint coupling and reduces the weight update to plain LMAT; the
// zero-constraint variant forces j_min = 0.
struct NcParams {
    double alpha = 0.01;   // nominal step-size
    double beta = 0.001;   // multiplier learning rate, in (0, 2)
    double gamma = 0.0;    // constraint gain
    double j_min = 0.0;    // constraint level (cost at the optimal weights)

    void validate() const {
        if (!(std::isfinite(alpha) && alpha >= 0.0)) {
            throw std::invalid_argument("NcParams: alpha must be finite and >= 0");
        }
        if (!(std::isfinite(beta) && beta > 0.0 && beta < 2.0)) {
            throw std::invalid_argument("NcParams: beta must lie in (0, 2)");
        }
        if (!(std::isfinite(gamma) && gamma >= 0.0)) {
            throw std::invalid_argument("NcParams: gamma must be finite and >= 0");
        }
        if (!(std::isfinite(j_min) && j_min >= 0.0)) {
            throw std::invalid_argument("NcParams: j_min must be finite and >= 0");
        }
    }
};

// Per-filter adaptive state. Weights start at zero and the multiplier at 0.
// A non-finite result of an update flags the run as diverged; further steps
// become no-ops so the trial can be counted instead of crashing.
struct NcState {
    TapWeights weights;
    double lambda = 0.0;   // constraint multiplier
    double alpha_k = 0.0;  // effective step used by the most recent update
    bool diverged = false;

    explicit NcState(std::size_t n_taps) : weights(n_taps, 0.0) {}
};

namespace detail {

inline void check_divergence(NcState& s) {
    if (!all_finite(s.weights) || !std::isfinite(s.lambda)) {
        s.diverged = true;
    }
}

}  // namespace detail

// One sample of the noise-constrained least-mean-absolute-third update:
//   e      = d - w.x
//   step   = alpha (1 + gamma lambda)        (multiplier entering the step)
//   w     += step e^2 sgn(e) x
//   lambda = (1-beta) lambda + beta/2 (|e|^3 - j_min)
// Returns the prediction error e.
inline double nclmat_step(NcState& s, const RegressorWindow& x, double d, const NcParams& p) {
    const double e = d - predict(s.weights, x);
    if (s.diverged) return e;
    const double step = p.alpha * (1.0 + p.gamma * s.lambda);
    const double gain = step * e * std::fabs(e);  // e^2 sgn(e)
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
        s.weights[i] += gain * x[i];
    }
    const double abs_e3 = std::fabs(e) * e * e;
    s.lambda = (1.0 - p.beta) * s.lambda + 0.5 * p.beta * (abs_e3 - p.j_min);
    s.alpha_k = step;
    detail::check_divergence(s);
    return e;
}

// Constant-step variant: w += mu e^2 sgn(e) x; the multiplier is untouched.
inline double lmat_step(NcState& s, const RegressorWindow& x, double d, double mu) {
    const double e = d - predict(s.weights, x);
    if (s.diverged) return e;
    const double gain = mu * e * std::fabs(e);
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
        s.weights[i] += gain * x[i];
    }
    s.alpha_k = mu;
    detail::check_divergence(s);
    return e;
}

// Zero-constraint variant: identical to nclmat_step with j_min = 0.
inline double znclmat_step(NcState& s, const RegressorWindow& x, double d, const NcParams& p) {
    NcParams zero = p;
    zero.j_min = 0.0;
    return nclmat_step(s, x, d, zero);
}

// Fourth-power baseline: weight update e^3 x, constraint on e^4 against the
// noise fourth moment.
inline double nclmf_step(NcState& s, const RegressorWindow& x, double d, const NcParams& p) {
    const double e = d - predict(s.weights, x);
    if (s.diverged) return e;
    const double step = p.alpha * (1.0 + p.gamma * s.lambda);
    const double gain = step * e * e * e;
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
        s.weights[i] += gain * x[i];
    }
    const double e4 = e * e * e * e;
    s.lambda = (1.0 - p.beta) * s.lambda + 0.5 * p.beta * (e4 - p.j_min);
    s.alpha_k = step;
    detail::check_divergence(s);
    return e;
}

}  // namespace nclmat
