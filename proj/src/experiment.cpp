#include "nclmat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "nclmat/stats.hpp"

namespace nclmat {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Substream tags; the trial index is mixed in as the stream index.
constexpr std::uint64_t kStreamPowerProbe = 0;
constexpr std::uint64_t kStreamInput = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamWalk = 3;

}  // namespace

const char* algo_kind_name(AlgoKind kind) {
    switch (kind) {
        case AlgoKind::lmat: return "lmat";
        case AlgoKind::nclmat: return "nclmat";
        case AlgoKind::znclmat: return "znclmat";
        case AlgoKind::nclmf: return "nclmf";
    }
    return "unknown";
}

std::optional<AlgoKind> parse_algo_kind(std::string_view name) {
    if (name == "lmat") return AlgoKind::lmat;
    if (name == "nclmat") return AlgoKind::nclmat;
    if (name == "znclmat") return AlgoKind::znclmat;
    if (name == "nclmf") return AlgoKind::nclmf;
    return std::nullopt;
}

const char* jmin_mode_name(JminMode mode) {
    switch (mode) {
        case JminMode::variance: return "variance";
        case JminMode::third_abs_moment: return "third_abs_moment";
        case JminMode::zero: return "zero";
    }
    return "unknown";
}

std::optional<JminMode> parse_jmin_mode(std::string_view name) {
    if (name == "variance") return JminMode::variance;
    if (name == "third_abs_moment") return JminMode::third_abs_moment;
    if (name == "zero") return JminMode::zero;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    plant.validate();
    if (input == InputKind::ar1 && !(std::isfinite(ar1_rho) && std::fabs(ar1_rho) < 1.0)) {
        throw std::invalid_argument("ExperimentConfig: |ar1_rho| must be < 1");
    }
    if (!(std::isfinite(input_variance) && input_variance > 0.0)) {
        throw std::invalid_argument("ExperimentConfig: input_variance must be > 0");
    }
    if (!snr_db && !noise_variance) {
        throw std::invalid_argument("ExperimentConfig: set snr_db or noise_variance");
    }
    if (noise_variance && !(std::isfinite(*noise_variance) && *noise_variance >= 0.0)) {
        throw std::invalid_argument("ExperimentConfig: noise_variance must be finite and >= 0");
    }
    if (snr_db && !std::isfinite(*snr_db)) {
        throw std::invalid_argument("ExperimentConfig: snr_db must be finite");
    }
    if (iterations < 1) throw std::invalid_argument("ExperimentConfig: iterations must be >= 1");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (algorithms.empty()) {
        throw std::invalid_argument("ExperimentConfig: need at least one algorithm");
    }
    for (const auto& algo : algorithms) {
        algo.params.validate();
        if (algo.name.empty()) {
            throw std::invalid_argument("ExperimentConfig: algorithm entries need names");
        }
        for (const auto& other : algorithms) {
            if (&other != &algo && other.name == algo.name) {
                throw std::invalid_argument("ExperimentConfig: duplicate algorithm name '" +
                                            algo.name + "'");
            }
        }
    }
}

double input_power(const ExperimentConfig& cfg) {
    if (cfg.input == InputKind::white) return cfg.input_variance;
    return cfg.input_variance / (1.0 - cfg.ar1_rho * cfg.ar1_rho);
}

double estimate_signal_power(const ExperimentConfig& cfg) {
    if (cfg.input == InputKind::white) {
        double norm2 = 0.0;
        for (double w : cfg.plant.w_opt) norm2 += w * w;
        return cfg.input_variance * norm2;
    }
    // Correlated input: measure the noiseless output variance on a dedicated
    // probe stream against the initial plant.
    constexpr std::size_t kProbeLen = 200000;
    constexpr std::size_t kBurnIn = 1000;
    const auto white = gen_white_gaussian(kProbeLen, cfg.input_variance,
                                          cfg.seed.stream(kStreamPowerProbe));
    const auto stream = gen_ar1(white, cfg.ar1_rho);
    RegressorWindow window(cfg.n_taps());
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < stream.size(); ++k) {
        window.push(stream[k]);
        if (k < kBurnIn) continue;
        const double y = predict(cfg.plant.w_opt, window);
        sum += y;
        sum_sq += y * y;
        ++count;
    }
    const double m = sum / static_cast<double>(count);
    return sum_sq / static_cast<double>(count) - m * m;
}

double resolve_noise_variance(const ExperimentConfig& cfg) {
    if (cfg.noise_variance) return *cfg.noise_variance;
    return scale_noise_for_snr(estimate_signal_power(cfg), *cfg.snr_db);
}

NcParams resolve_params(const AlgoConfig& algo, const NoiseSpec& noise) {
    NcParams p = algo.params;
    switch (algo.kind) {
        case AlgoKind::lmat:
            p.j_min = 0.0;
            break;
        case AlgoKind::nclmat:
            switch (algo.jmin_mode) {
                case JminMode::variance: p.j_min = noise.variance; break;
                case JminMode::third_abs_moment: p.j_min = noise.third_abs_moment; break;
                case JminMode::zero: p.j_min = 0.0; break;
            }
            break;
        case AlgoKind::znclmat:
            p.j_min = 0.0;
            break;
        case AlgoKind::nclmf:
            p.j_min = noise.fourth_moment;
            break;
    }
    return p;
}

TheoryParams theory_params_for(const ExperimentConfig& cfg, const AlgoConfig& algo,
                               const NoiseSpec& noise) {
    TheoryParams tp;
    tp.n_taps = cfg.n_taps();
    const NcParams resolved = resolve_params(algo, noise);
    tp.alpha = resolved.alpha;
    tp.beta = resolved.beta;
    tp.gamma = resolved.gamma;
    tp.j_min = resolved.j_min;
    tp.sigma_x2 = input_power(cfg);
    tp.sigma_xi2 = noise.variance;
    tp.xi4 = noise.fourth_moment;
    tp.rho_max = cfg.input == InputKind::white
                     ? cfg.input_variance
                     : toeplitz_rho_max(cfg.n_taps(), input_power(cfg), cfg.ar1_rho);
    return tp;
}

TrialResult run_trial(const ExperimentConfig& cfg, const NoiseSpec& noise,
                      std::size_t trial_index) {
    const std::size_t n = cfg.n_taps();
    const std::size_t iters = cfg.iterations;

    const auto white =
        gen_white_gaussian(iters, cfg.input_variance, cfg.seed.stream(kStreamInput, trial_index));
    const std::vector<double> x_seq =
        cfg.input == InputKind::ar1 ? gen_ar1(white, cfg.ar1_rho) : white;
    const auto xi_seq = gen_noise(noise, iters, cfg.seed.stream(kStreamNoise, trial_index));

    // The plant path is drawn once per trial and shared by every algorithm.
    Rng walk_rng(cfg.seed.stream(kStreamWalk, trial_index));
    PlantSpec plant = cfg.plant;

    struct Runner {
        AlgoKind kind;
        NcParams params;
        NcState state;
    };
    std::vector<Runner> runners;
    runners.reserve(cfg.algorithms.size());
    for (const auto& algo : cfg.algorithms) {
        runners.push_back({algo.kind, resolve_params(algo, noise), NcState(n)});
    }

    TrialResult result;
    result.per_algorithm.resize(runners.size());
    for (auto& series : result.per_algorithm) {
        series.sq_dev.assign(iters, kNan);
        series.sq_err.assign(iters, kNan);
        series.alpha_k.assign(iters, kNan);
        series.lambda_k.assign(iters, kNan);
    }

    RegressorWindow window(n);
    for (std::size_t k = 0; k < iters; ++k) {
        window.push(x_seq[k]);
        const TapWeights w_opt_k = plant.w_opt;  // taps that produce this output
        const double d = plant_output(plant, window, xi_seq[k], walk_rng);

        for (std::size_t a = 0; a < runners.size(); ++a) {
            auto& runner = runners[a];
            auto& series = result.per_algorithm[a];
            if (runner.state.diverged) continue;

            double e = 0.0;
            switch (runner.kind) {
                case AlgoKind::lmat:
                    e = lmat_step(runner.state, window, d, runner.params.alpha);
                    break;
                case AlgoKind::nclmat:
                    e = nclmat_step(runner.state, window, d, runner.params);
                    break;
                case AlgoKind::znclmat:
                    e = znclmat_step(runner.state, window, d, runner.params);
                    break;
                case AlgoKind::nclmf:
                    e = nclmf_step(runner.state, window, d, runner.params);
                    break;
            }
            const double dev = runner.state.diverged
                                   ? kNan
                                   : squared_deviation(runner.state.weights, w_opt_k);
            if (!std::isfinite(dev)) {
                runner.state.diverged = true;
                series.diverged = true;
                series.diverged_at = k;
                continue;
            }
            series.sq_dev[k] = dev;
            series.sq_err[k] = e * e;
            series.alpha_k[k] = runner.state.alpha_k;
            series.lambda_k[k] = runner.state.lambda;
            if (dev > series.max_sq_dev) series.max_sq_dev = dev;
        }
    }
    return result;
}

double LearningCurve::steady_msd_db() const {
    double acc = 0.0;
    std::size_t count = 0;
    for (double v : final_sq_dev_per_trial) {
        if (std::isfinite(v)) {
            acc += v;
            ++count;
        }
    }
    if (count == 0) return kNan;
    return msd_db_from_linear(acc / static_cast<double>(count));
}

double LearningCurve::steady_mse() const {
    if (!valid) return kNan;
    return tail_mean(mse, 0.1);
}

namespace {

LearningCurve aggregate_curve(const ExperimentConfig& cfg, const NoiseSpec& noise,
                              const std::vector<TrialResult>& trials, std::size_t algo_index) {
    const auto& algo = cfg.algorithms[algo_index];
    LearningCurve curve;
    curve.algorithm = algo.name;
    curve.kind = algo.kind;
    curve.params = resolve_params(algo, noise);
    curve.jmin_mode = algo.jmin_mode;

    const std::size_t iters = cfg.iterations;
    curve.trial_diverged.resize(cfg.trials, 0);
    curve.final_sq_dev_per_trial.assign(cfg.trials, kNan);
    curve.max_msd_db_per_trial.assign(cfg.trials, kNan);

    std::vector<std::size_t> used;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto& series = trials[t].per_algorithm[algo_index];
        curve.trial_diverged[t] = series.diverged ? 1 : 0;
        curve.max_msd_db_per_trial[t] = msd_db_from_linear(series.max_sq_dev);
        if (series.diverged) {
            ++curve.diverged_trials;
        } else {
            used.push_back(t);
            std::vector<double> tail(series.sq_dev.end() - static_cast<std::ptrdiff_t>(
                                                               std::max<std::size_t>(1, iters / 10)),
                                     series.sq_dev.end());
            curve.final_sq_dev_per_trial[t] = mean(tail);
        }
    }
    curve.trials_used = used.size();
    curve.valid = !used.empty();

    curve.msd_db.assign(iters, kNan);
    curve.mse.assign(iters, kNan);
    curve.mean_alpha_k.assign(iters, kNan);
    curve.mean_lambda.assign(iters, kNan);
    if (!curve.valid) return curve;

    const double inv = 1.0 / static_cast<double>(used.size());
    for (std::size_t k = 0; k < iters; ++k) {
        double dev = 0.0, err = 0.0, al = 0.0, la = 0.0;
        for (std::size_t t : used) {
            const auto& series = trials[t].per_algorithm[algo_index];
            dev += series.sq_dev[k];
            err += series.sq_err[k];
            al += series.alpha_k[k];
            la += series.lambda_k[k];
        }
        curve.msd_db[k] = msd_db_from_linear(dev * inv);
        curve.mse[k] = err * inv;
        curve.mean_alpha_k[k] = al * inv;
        curve.mean_lambda[k] = la * inv;
    }
    return curve;
}

}  // namespace

TheoryOverlay make_theory_overlay(const ExperimentConfig& cfg, const AlgoConfig& algo,
                                  const NoiseSpec& noise) {
    TheoryOverlay overlay;
    overlay.algorithm = algo.name;
    overlay.params = theory_params_for(cfg, algo, noise);

    double msd0 = 0.0;
    for (double w : cfg.plant.w_opt) msd0 += w * w;

    MsdTrajectory traj(overlay.params, msd0);
    traj.run(cfg.iterations);
    overlay.model_diverged = traj.model_diverged();
    overlay.msd_db.resize(cfg.iterations);
    for (std::size_t k = 0; k < cfg.iterations; ++k) {
        const double m = traj.msd()[k + 1];  // prediction after k+1 updates
        overlay.msd_db[k] = std::isfinite(m) ? msd_db_from_linear(m) : kNan;
    }
    overlay.steady_msd_fixed_point = steady_state_msd(overlay.params);
    overlay.steady_msd_closed_form = steady_state_msd_closed_form(overlay.params);
    overlay.steady_mse = steady_state_mse(overlay.params);
    return overlay;
}

ExperimentResult monte_carlo(const ExperimentConfig& cfg) {
    cfg.validate();

    ExperimentResult result;
    result.cfg = cfg;
    result.signal_power = estimate_signal_power(cfg);
    result.noise_variance = resolve_noise_variance(cfg);
    result.noise = make_noise_spec(cfg.noise_family, result.noise_variance);

    std::vector<TrialResult> trials(cfg.trials);
    std::vector<std::future<TrialResult>> futures;
    futures.reserve(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        futures.push_back(std::async(std::launch::async, [&cfg, &result, t] {
            return run_trial(cfg, result.noise, t);
        }));
    }
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        trials[t] = futures[t].get();  // fixed reduction order
    }

    result.curves.reserve(cfg.algorithms.size());
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        result.curves.push_back(aggregate_curve(cfg, result.noise, trials, a));
    }

    if (cfg.theory_overlay) {
        const AlgoConfig* target = nullptr;
        for (const auto& algo : cfg.algorithms) {
            if (algo.kind == AlgoKind::nclmat) {
                if (target != nullptr) {
                    throw std::invalid_argument(
                        "theory overlay needs exactly one adaptive-step (nclmat) entry");
                }
                target = &algo;
            }
        }
        if (target == nullptr) {
            throw std::invalid_argument(
                "theory overlay needs exactly one adaptive-step (nclmat) entry");
        }
        result.theory = make_theory_overlay(cfg, *target, result.noise);
    }
    return result;
}

}  // namespace nclmat
