#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nclmat/filter_core.hpp"

namespace nclmat {

// Inputs of the analytical MSD model. The model assumes a white Gaussian
// regressor of power sigma_x2; for correlated inputs rho_max carries the
// largest eigenvalue of the input covariance while sigma_x2 carries its
// stationary power.
struct TheoryParams {
    std::size_t n_taps = 5;
    double alpha = 0.01;
    double beta = 0.001;
    double gamma = 0.0;
    double j_min = 0.0;
    double sigma_x2 = 1.0;   // input power
    double sigma_xi2 = 0.0;  // noise variance
    double xi4 = 0.0;        // noise fourth moment
    double rho_max = 1.0;    // largest eigenvalue of the input covariance

    void validate() const;
};

// Saturation factors of the multiplier memory after k steps:
// factor_a = 1 - (1-beta)^k, factor_b = 1 + (1-beta)^k. Both tend to 1 for
// 0 < beta < 2.
double factor_a(double beta, double k);
double factor_b(double beta, double k);

// One-step gain/offset of the linearized deviation recursion,
// MSD' = f * MSD + g. d_sum and f_sum are the accumulated third-moment
// excess over the constraint level and its squared spread; a and b are the
// saturation factors.
struct GrowthTerms {
    double f = 1.0;
    double g = 0.0;
    double gamma_ad = 0.0;      // gamma * a * d_sum
    double quad_bracket = 1.0;  // 1 + gamma*a*d_sum + beta*gamma^2*a*b*f_sum/(4(2-beta))
};

GrowthTerms growth_terms(const TheoryParams& tp, double a, double b, double d_sum, double f_sum,
                         double sigma_e);

// Snapshot of a trajectory at step k: current error deviation sigma_{e,k}
// and the running sums of sigma_e^3 and sigma_e^6 over steps 0..k-1.
struct TheoryState {
    double k = 0.0;
    double sigma_e = 0.0;
    double sum_sigma_e3 = 0.0;
    double sum_sigma_e6 = 0.0;
};

// Iterates the deviation model from MSD_0 = ||w_opt||^2 with the error
// power closed through sigma_e^2 = sigma_xi^2 + sigma_x^2 * MSD. Keeps the
// literal running sums; a NaN or negative MSD flags the model as diverged
// and later entries are NaN.
class MsdTrajectory {
public:
    MsdTrajectory(const TheoryParams& tp, double msd0);

    void step();
    void run(std::size_t n_steps);

    const std::vector<double>& msd() const { return msd_; }
    const std::vector<double>& sigma_e() const { return sigma_e_; }
    std::size_t steps() const { return k_; }
    bool model_diverged() const { return diverged_; }
    double sum_sigma_e3() const { return sum3_; }
    double sum_sigma_e6() const { return sum6_; }

    TheoryState state() const;

private:
    TheoryParams tp_;
    std::vector<double> msd_;
    std::vector<double> sigma_e_;
    double sum3_ = 0.0;
    double sum6_ = 0.0;
    std::size_t k_ = 0;
    bool diverged_ = false;
};

// Step-size range keeping the mean weight error contracting, evaluated at a
// trajectory snapshot. The coupling bracket inherits an unweighted-sum
// approximation from the derivation and can turn the denominator negative;
// that case reports nullopt ("bound undefined"). The mean-square bound below
// is the primary stability gate.
std::optional<double> mean_stability_bound(const TheoryParams& tp, const TheoryState& st);

// Minimizer of the one-step gain f over alpha (fastest convergence mode).
std::optional<double> optimal_alpha(const TheoryParams& tp, const TheoryState& st);

// Upper step-size limit for monotonically decreasing MSD; equals three
// times optimal_alpha by construction.
std::optional<double> ms_stability_bound(const TheoryParams& tp, const TheoryState& st);

// Steady-state regime: the saturation factors are 1 and the running sums
// are replaced by their geometrically weighted per-step limits,
//   d -> 2 sqrt(2/pi) sigma_e^3 - j_min
//   f -> 15 sigma_e^6 - 4 sqrt(2/pi) sigma_e^3 j_min + j_min^2
// closed through sigma_e^2 = sigma_xi^2 + sigma_x^2 * MSD.
GrowthTerms steady_growth_terms(const TheoryParams& tp, double sigma_e);

// Attracting balance point of the steady-state recursion, MSD = g/(1-f)
// solved self-consistently in sigma_e. Returns nullopt when no stable
// balance exists (unstable configuration).
std::optional<double> steady_state_msd(const TheoryParams& tp);

// Single-shot closed form of the steady state. Its numerator bracket
// differs from the recursion fixed point (an extra factor n_taps on the
// coupling term and a 4x larger spread term); it is evaluated at the fixed
// point's operating point and reported alongside for comparison.
std::optional<double> steady_state_msd_closed_form(const TheoryParams& tp);

// sigma_xi^2 + sigma_x^2 * steady_state_msd.
std::optional<double> steady_state_mse(const TheoryParams& tp);

// Bounds evaluated in the steady regime (saturated factors, per-step sums)
// at the self-consistent operating point; sigma_e falls back to sigma_xi
// when no balance point exists.
std::optional<double> mean_stability_bound_steady(const TheoryParams& tp);
std::optional<double> optimal_alpha_steady(const TheoryParams& tp);
std::optional<double> ms_stability_bound_steady(const TheoryParams& tp);

// Online input/error power tracker:
//   p       = chi p + (1-chi) e x
//   sx2     = chi sx2 + (1-chi) x.x
//   se2     = p.p / (theta + sx2)
struct PowerEstimator {
    std::vector<double> p;
    double sigma_x2_hat = 0.0;
    double sigma_e2_hat = 0.0;
    double chi = 0.97;
    double theta = 1e-6;

    explicit PowerEstimator(std::size_t n_taps, double chi_ = 0.97, double theta_ = 1e-6);
    void update(double e, const RegressorWindow& x);
};

// Largest eigenvalue of the n x n covariance sigma2 * rho^|i-j| (power
// iteration; the matrix is symmetric positive semi-definite).
double toeplitz_rho_max(std::size_t n, double sigma2, double rho);

}  // namespace nclmat
