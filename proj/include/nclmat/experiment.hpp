#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nclmat/algorithms.hpp"
#include "nclmat/signals.hpp"
#include "nclmat/theory.hpp"

namespace nclmat {

enum class AlgoKind { lmat, nclmat, znclmat, nclmf };

// How the constraint level is filled in from the noise description:
// the noise variance (default), the noise third absolute moment (the
// cost's actual floor), or zero. The zero-constraint and fourth-power
// variants override this (zero and the fourth moment respectively).
enum class JminMode { variance, third_abs_moment, zero };

const char* algo_kind_name(AlgoKind kind);
std::optional<AlgoKind> parse_algo_kind(std::string_view name);
const char* jmin_mode_name(JminMode mode);
std::optional<JminMode> parse_jmin_mode(std::string_view name);

struct AlgoConfig {
    AlgoKind kind = AlgoKind::nclmat;
    std::string name;  // CSV/summary label; defaults to the kind name
    NcParams params;   // alpha (mu for the constant-step variant), beta, gamma
    JminMode jmin_mode = JminMode::variance;
};

enum class InputKind { white, ar1 };

struct ExperimentConfig {
    std::string description;
    PlantSpec plant;
    InputKind input = InputKind::white;
    double ar1_rho = 0.8;
    double input_variance = 1.0;
    NoiseFamily noise_family = NoiseFamily::gaussian;
    std::optional<double> snr_db;
    std::optional<double> noise_variance;  // explicit variance wins over snr_db
    std::vector<AlgoConfig> algorithms;
    std::size_t iterations = 5000;
    std::size_t trials = 10;
    Seed seed{20260101};
    bool theory_overlay = false;

    void validate() const;
    std::size_t n_taps() const { return plant.w_opt.size(); }
};

// One algorithm's raw series within one trial. Entries past the divergence
// point are NaN.
struct TrialSeries {
    std::vector<double> sq_dev;    // ||w_k - w_opt,k||^2 after each update
    std::vector<double> sq_err;    // e_k^2 before each update
    std::vector<double> alpha_k;   // effective step used at k
    std::vector<double> lambda_k;  // multiplier after the update at k
    bool diverged = false;
    std::size_t diverged_at = 0;
    double max_sq_dev = 0.0;  // over the finite prefix
};

struct TrialResult {
    std::vector<TrialSeries> per_algorithm;  // cfg.algorithms order
};

// Across-trial ensemble averages (linear-domain averaging of the squared
// deviation, then dB). Diverged trials are excluded from the averages and
// counted.
struct LearningCurve {
    std::string algorithm;
    AlgoKind kind = AlgoKind::nclmat;
    NcParams params;  // resolved, including j_min
    JminMode jmin_mode = JminMode::variance;
    std::vector<double> msd_db;
    std::vector<double> mse;
    std::vector<double> mean_alpha_k;
    std::vector<double> mean_lambda;
    std::size_t diverged_trials = 0;
    std::size_t trials_used = 0;
    bool valid = false;  // false when every trial diverged
    std::vector<double> final_sq_dev_per_trial;  // mean over the final 10%, NaN when diverged
    std::vector<double> max_msd_db_per_trial;
    std::vector<char> trial_diverged;

    double steady_msd_db() const;  // dB of the across-trial mean of final_sq_dev
    double steady_mse() const;     // tail mean of the mse curve
};

// Analytical prediction run alongside a single adaptive-step entry.
struct TheoryOverlay {
    std::string algorithm;  // entry the prediction belongs to
    TheoryParams params;
    std::vector<double> msd_db;  // per iteration; NaN after model divergence
    bool model_diverged = false;
    std::optional<double> steady_msd_fixed_point;  // linear
    std::optional<double> steady_msd_closed_form;  // linear
    std::optional<double> steady_mse;
};

struct ExperimentResult {
    ExperimentConfig cfg;
    double noise_variance = 0.0;
    double signal_power = 0.0;
    NoiseSpec noise;
    std::vector<LearningCurve> curves;
    std::optional<TheoryOverlay> theory;
};

// Variance of the noiseless plant output: analytic for white input,
// estimated over 2*10^5 samples of a dedicated stream for correlated input.
double estimate_signal_power(const ExperimentConfig& cfg);

// Resolves the measurement-noise variance from the explicit value or the
// SNR target.
double resolve_noise_variance(const ExperimentConfig& cfg);

// Stationary input power: sigma_x^2 for white input, sigma_x^2/(1-rho^2)
// for the autoregressive input.
double input_power(const ExperimentConfig& cfg);

// Fills in j_min according to the entry's kind and jmin_mode.
NcParams resolve_params(const AlgoConfig& algo, const NoiseSpec& noise);

// Model parameters matching one experiment entry.
TheoryParams theory_params_for(const ExperimentConfig& cfg, const AlgoConfig& algo,
                               const NoiseSpec& noise);

// Runs every configured algorithm over one shared signal realization
// (identical input, noise, and plant path for all entries).
TrialResult run_trial(const ExperimentConfig& cfg, const NoiseSpec& noise,
                      std::size_t trial_index);

// Monte Carlo ensemble: independent per-trial substreams, deterministic
// reduction in trial order, optional theory overlay.
ExperimentResult monte_carlo(const ExperimentConfig& cfg);

TheoryOverlay make_theory_overlay(const ExperimentConfig& cfg, const AlgoConfig& algo,
                                  const NoiseSpec& noise);

}  // namespace nclmat
