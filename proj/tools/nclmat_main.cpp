#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nclmat/config_io.hpp"
#include "nclmat/presets.hpp"
#include "nclmat/report.hpp"
#include "nclmat/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;       // bad configuration or parameters
constexpr int kExitAllDiverged = 3;  // every trial of some entry diverged
constexpr int kExitIo = 4;           // filesystem failures

struct CommonOptions {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> iterations;
    bool quick = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    const char* env_dir = std::getenv("NCLMAT_OUT_DIR");
    opts.out_dir = env_dir != nullptr ? env_dir : "nclmat_out";
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_option("--trials", opts.trials, "trial count override");
    cmd->add_option("--iters", opts.iterations, "iteration count override");
    cmd->add_flag("--quick", opts.quick, "scale trials and iterations down 10x (smoke mode)");
}

void apply_overrides(nclmat::ExperimentConfig& cfg, const CommonOptions& opts) {
    if (opts.seed) cfg.seed = nclmat::Seed{*opts.seed};
    if (opts.trials) cfg.trials = *opts.trials;
    if (opts.iterations) cfg.iterations = *opts.iterations;
    if (opts.quick) {
        cfg.trials = std::max<std::size_t>(1, cfg.trials / 10);
        cfg.iterations = std::max<std::size_t>(10, cfg.iterations / 10);
    }
}

std::string format_db(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string format_sci(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Runs one experiment, writes its outputs, prints the steady-state table.
// Returns false when every trial of some entry diverged.
bool run_and_report(const nclmat::ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                    const std::string& stem) {
    std::fprintf(stderr, "[nclmat] running %s: %zu trials x %zu iterations\n", stem.c_str(),
                 cfg.trials, cfg.iterations);
    const auto result = nclmat::monte_carlo(cfg);
    const auto csv = nclmat::write_outputs(result, out_dir, stem);
    std::fprintf(stderr, "[nclmat] wrote %s\n", csv.string().c_str());

    bool all_ok = true;
    std::printf("%-24s %14s %12s %10s\n", "algorithm", "steady_msd_db", "steady_mse", "diverged");
    for (const auto& curve : result.curves) {
        std::printf("%-24s %14s %12s %7zu/%zu\n", curve.algorithm.c_str(),
                    format_db(curve.steady_msd_db()).c_str(),
                    format_sci(curve.steady_mse()).c_str(), curve.diverged_trials, cfg.trials);
        if (!curve.valid) all_ok = false;
    }
    if (result.theory) {
        auto db_or = [](const std::optional<double>& v) {
            return v && *v > 0.0 ? format_db(nclmat::msd_db_from_linear(*v)) : std::string("undefined");
        };
        std::printf("theory fixed point:  %s dB\n",
                    db_or(result.theory->steady_msd_fixed_point).c_str());
        std::printf("theory closed form:  %s dB\n",
                    db_or(result.theory->steady_msd_closed_form).c_str());
    }
    return all_ok;
}

int cmd_figure(int figure_id, const CommonOptions& opts) {
    auto runs = nclmat::preset_runs(figure_id);
    bool all_ok = true;
    for (auto& cfg : runs) {
        apply_overrides(cfg, opts);
        std::string stem = "figure" + std::to_string(figure_id);
        if (runs.size() > 1) stem += std::string("_") + nclmat::family_name(cfg.noise_family);
        all_ok = run_and_report(cfg, opts.out_dir, stem) && all_ok;
    }
    return all_ok ? kExitOk : kExitAllDiverged;
}

int cmd_run(const std::string& config_path, const CommonOptions& opts) {
    auto cfg = nclmat::load_config_file(config_path);
    apply_overrides(cfg, opts);
    const std::string stem = std::filesystem::path(config_path).stem().string();
    return run_and_report(cfg, opts.out_dir, stem.empty() ? "experiment" : stem) ? kExitOk
                                                                                 : kExitAllDiverged;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& alphas,
              const std::vector<double>& betas, const std::vector<double>& gammas,
              const CommonOptions& opts) {
    auto base = nclmat::load_config_file(config_path);
    apply_overrides(base, opts);
    if (base.algorithms.size() != 1) {
        throw nclmat::ConfigError("sweep: the base config must have exactly one algorithm entry");
    }

    const auto grid_or_base = [](const std::vector<double>& grid, double base_value) {
        return grid.empty() ? std::vector<double>{base_value} : grid;
    };
    const auto alpha_grid = grid_or_base(alphas, base.algorithms[0].params.alpha);
    const auto beta_grid = grid_or_base(betas, base.algorithms[0].params.beta);
    const auto gamma_grid = grid_or_base(gammas, base.algorithms[0].params.gamma);

    // Validate the whole grid before running anything.
    std::vector<nclmat::ExperimentConfig> points;
    for (double a : alpha_grid) {
        for (double b : beta_grid) {
            for (double g : gamma_grid) {
                auto cfg = base;
                auto& algo = cfg.algorithms[0];
                algo.params.alpha = a;
                algo.params.beta = b;
                algo.params.gamma = g;
                char label[96];
                std::snprintf(label, sizeof(label), "%s_a%g_b%g_g%g", algo.name.c_str(), a, b, g);
                algo.name = label;
                try {
                    cfg.validate();
                } catch (const std::invalid_argument& err) {
                    throw nclmat::ConfigError(std::string("sweep: invalid grid point ") + label +
                                              ": " + err.what());
                }
                points.push_back(std::move(cfg));
            }
        }
    }

    const std::string stem = std::filesystem::path(config_path).stem().string();
    struct Ranked {
        std::string label;
        double steady_msd_db;
        std::size_t diverged;
    };
    std::vector<Ranked> ranking;
    nlohmann::json sweep_summary = nlohmann::json::array();
    bool all_ok = true;

    for (const auto& cfg : points) {
        const std::string label = cfg.algorithms[0].name;
        std::fprintf(stderr, "[nclmat] sweep point %s\n", label.c_str());
        const auto result = nclmat::monte_carlo(cfg);
        nclmat::write_outputs(result, opts.out_dir, stem + "_" + label);
        const auto& curve = result.curves[0];
        if (!curve.valid) all_ok = false;
        ranking.push_back({label, curve.steady_msd_db(), curve.diverged_trials});
        sweep_summary.push_back({{"label", label},
                                 {"alpha", curve.params.alpha},
                                 {"beta", curve.params.beta},
                                 {"gamma", curve.params.gamma},
                                 {"steady_msd_db", curve.valid ? nlohmann::json(curve.steady_msd_db())
                                                               : nlohmann::json()},
                                 {"diverged_trials", curve.diverged_trials}});
    }

    std::sort(ranking.begin(), ranking.end(), [](const Ranked& a, const Ranked& b) {
        const bool a_ok = std::isfinite(a.steady_msd_db);
        const bool b_ok = std::isfinite(b.steady_msd_db);
        if (a_ok != b_ok) return a_ok;
        if (a_ok && a.steady_msd_db != b.steady_msd_db) return a.steady_msd_db < b.steady_msd_db;
        return a.label < b.label;
    });
    std::printf("%-40s %14s %10s\n", "grid point", "steady_msd_db", "diverged");
    for (const auto& r : ranking) {
        std::printf("%-40s %14s %10zu\n", r.label.c_str(), format_db(r.steady_msd_db).c_str(),
                    r.diverged);
    }

    std::filesystem::create_directories(opts.out_dir);
    const auto path = std::filesystem::path(opts.out_dir) / (stem + "_sweep_summary.json");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << sweep_summary.dump(2) << "\n";
    return all_ok ? kExitOk : kExitAllDiverged;
}

int cmd_theory(const std::string& config_path, int figure_id, const CommonOptions& opts) {
    nclmat::ExperimentConfig cfg;
    if (!config_path.empty()) {
        cfg = nclmat::load_config_file(config_path);
    } else {
        cfg = nclmat::preset(figure_id);
    }
    apply_overrides(cfg, opts);

    const nclmat::AlgoConfig* target = nullptr;
    for (const auto& algo : cfg.algorithms) {
        if (algo.kind == nclmat::AlgoKind::nclmat) {
            if (target != nullptr) {
                throw nclmat::ConfigError("theory: config must have exactly one nclmat entry");
            }
            target = &algo;
        }
    }
    if (target == nullptr) {
        throw nclmat::ConfigError("theory: config must have exactly one nclmat entry");
    }

    const double variance = nclmat::resolve_noise_variance(cfg);
    const auto noise = nclmat::make_noise_spec(cfg.noise_family, variance);
    const auto tp = nclmat::theory_params_for(cfg, *target, noise);

    auto print_row = [](const char* name, const std::optional<double>& v) {
        std::printf("%-28s %s\n", name, v ? format_sci(*v).c_str() : "undefined");
    };
    auto print_db_row = [](const char* name, const std::optional<double>& v) {
        std::printf("%-28s %s\n", name,
                    v && *v > 0.0 ? format_db(nclmat::msd_db_from_linear(*v)).c_str()
                                  : (v ? format_sci(*v).c_str() : "undefined"));
    };

    std::printf("n_taps=%zu alpha=%g beta=%g gamma=%g j_min=%g\n", tp.n_taps, tp.alpha, tp.beta,
                tp.gamma, tp.j_min);
    std::printf("sigma_x2=%g sigma_xi2=%g xi4=%g rho_max=%g\n\n", tp.sigma_x2, tp.sigma_xi2,
                tp.xi4, tp.rho_max);
    print_row("mean_stability_bound", nclmat::mean_stability_bound_steady(tp));
    print_row("ms_stability_bound", nclmat::ms_stability_bound_steady(tp));
    print_row("optimal_alpha", nclmat::optimal_alpha_steady(tp));
    print_db_row("steady_msd_db_fixed_point", nclmat::steady_state_msd(tp));
    print_db_row("steady_msd_db_closed_form", nclmat::steady_state_msd_closed_form(tp));
    print_row("steady_mse", nclmat::steady_state_mse(tp));
    return kExitOk;
}

int cmd_moments(const std::string& family_name_arg, double variance, std::size_t samples,
                std::uint64_t seed_value) {
    const auto family = nclmat::parse_family(family_name_arg);
    if (!family) throw nclmat::ConfigError("moments: unknown family '" + family_name_arg + "'");
    const auto spec = nclmat::make_noise_spec(*family, variance);
    const nclmat::Seed seed{seed_value};

    const auto centered = nclmat::gen_noise(spec, samples, seed.stream(1));
    const auto raw = nclmat::gen_noise_raw(*family, samples, seed.stream(2));

    double c_mean = 0.0;
    for (double v : centered) c_mean += v;
    c_mean /= static_cast<double>(samples);
    double c_var = 0.0, c_e4 = 0.0, c_abs3 = 0.0;
    for (double v : centered) {
        c_var += (v - c_mean) * (v - c_mean);
        c_e4 += v * v * v * v;
        c_abs3 += std::fabs(v) * v * v;
    }
    c_var /= static_cast<double>(samples);
    c_e4 /= static_cast<double>(samples);
    c_abs3 /= static_cast<double>(samples);

    double r_e4 = 0.0;
    for (double v : raw) r_e4 += v * v * v * v;
    r_e4 /= static_cast<double>(samples);

    auto rel = [](double got, double want) {
        return want != 0.0 ? std::fabs(got / want - 1.0) : std::fabs(got);
    };
    std::printf("family=%s variance=%g samples=%zu seed=%" PRIu64 "\n\n",
                nclmat::family_name(*family), variance, samples, seed_value);
    std::printf("%-30s %14s %14s %10s\n", "moment", "empirical", "analytic", "rel_err");
    std::printf("%-30s %14.6g %14.6g %10s\n", "mean", c_mean, 0.0, "-");
    std::printf("%-30s %14.6g %14.6g %9.2f%%\n", "variance", c_var, spec.variance,
                100.0 * rel(c_var, spec.variance));
    std::printf("%-30s %14.6g %14.6g %9.2f%%\n", "fourth_moment (raw/unit)", r_e4,
                nclmat::fourth_moment_ratio(*family), 100.0 * rel(r_e4, nclmat::fourth_moment_ratio(*family)));
    std::printf("%-30s %14.6g %14.6g %9.2f%%\n", "fourth_moment (centered)", c_e4,
                spec.centered_fourth_moment, 100.0 * rel(c_e4, spec.centered_fourth_moment));
    std::printf("%-30s %14.6g %14.6g %9.2f%%\n", "third_abs_moment", c_abs3,
                spec.third_abs_moment, 100.0 * rel(c_abs3, spec.third_abs_moment));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noise-constrained adaptive-filter experiments"};
    app.require_subcommand(1);

    CommonOptions fig_opts;
    int figure_id = 1;
    auto* figure = app.add_subcommand("figure", "run a canned experiment preset");
    figure->add_option("id", figure_id, "preset id (1..9)")->required()->check(CLI::Range(1, 9));
    add_common(figure, fig_opts);

    CommonOptions run_opts;
    std::string run_config;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", run_config, "config file path")->required();
    add_common(run, run_opts);

    CommonOptions sweep_opts;
    std::string sweep_config;
    std::vector<double> sweep_alpha, sweep_beta, sweep_gamma;
    auto* sweep = app.add_subcommand("sweep", "grid sweep over algorithm parameters");
    sweep->add_option("--config", sweep_config, "base config file path")->required();
    sweep->add_option("--alpha", sweep_alpha, "alpha grid values")->delimiter(',');
    sweep->add_option("--beta", sweep_beta, "beta grid values")->delimiter(',');
    sweep->add_option("--gamma", sweep_gamma, "gamma grid values")->delimiter(',');
    add_common(sweep, sweep_opts);

    CommonOptions theory_opts;
    std::string theory_config;
    int theory_figure = 0;
    auto* theory = app.add_subcommand("theory", "print analytical bounds and steady states");
    theory->add_option("--config", theory_config, "config file path");
    theory->add_option("--figure", theory_figure, "preset id (1..9)")->check(CLI::Range(1, 9));
    add_common(theory, theory_opts);

    std::string moments_family = "gaussian";
    double moments_variance = 1.0;
    std::size_t moments_samples = 1000000;
    std::uint64_t moments_seed = 1;
    auto* moments = app.add_subcommand("moments", "empirical vs analytic noise moments");
    moments->add_option("--family", moments_family,
                        "gaussian|uniform|binary|rayleigh|exponential")->required();
    moments->add_option("--variance", moments_variance, "target variance")->capture_default_str();
    moments->add_option("--samples", moments_samples, "sample count")->capture_default_str();
    moments->add_option("--seed", moments_seed, "seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (figure->parsed()) return cmd_figure(figure_id, fig_opts);
        if (run->parsed()) return cmd_run(run_config, run_opts);
        if (sweep->parsed()) {
            return cmd_sweep(sweep_config, sweep_alpha, sweep_beta, sweep_gamma, sweep_opts);
        }
        if (theory->parsed()) {
            if (theory_config.empty() == (theory_figure == 0)) {
                std::fprintf(stderr, "theory: give exactly one of --config or --figure\n");
                return kExitConfig;
            }
            return cmd_theory(theory_config, theory_figure, theory_opts);
        }
        if (moments->parsed()) {
            return cmd_moments(moments_family, moments_variance, moments_samples, moments_seed);
        }
    } catch (const nclmat::ConfigError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitConfig;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitIo;
    }
    return kExitOk;
}
