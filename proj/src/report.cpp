#include "nclmat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "nclmat/stats.hpp"

namespace nclmat {

namespace {

void append_number(std::string& row, double v) {
    if (!std::isfinite(v)) return;  // empty cell
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    row += buf;
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json json_number(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

}  // namespace

void write_csv(const ExperimentResult& result, std::ostream& os) {
    const bool with_theory = result.theory.has_value();
    os << "iteration,algorithm,msd_db,mse,alpha_k,lambda_k";
    if (with_theory) os << ",theory_msd_db";
    os << "\n";

    std::string row;
    for (std::size_t k = 0; k < result.cfg.iterations; ++k) {
        for (const auto& curve : result.curves) {
            row.clear();
            row += std::to_string(k);
            row += ',';
            row += curve.algorithm;
            row += ',';
            append_number(row, curve.msd_db[k]);
            row += ',';
            append_number(row, curve.mse[k]);
            row += ',';
            append_number(row, curve.mean_alpha_k[k]);
            row += ',';
            append_number(row, curve.mean_lambda[k]);
            if (with_theory) {
                row += ',';
                if (curve.algorithm == result.theory->algorithm) {
                    append_number(row, result.theory->msd_db[k]);
                }
            }
            row += '\n';
            os << row;
        }
    }
}

nlohmann::json summarize(const ExperimentResult& result) {
    const auto& cfg = result.cfg;
    nlohmann::json summary;
    summary["description"] = cfg.description;
    summary["plant"] = {
        {"w_opt", cfg.plant.w_opt},
        {"mode", cfg.plant.mode == PlantMode::stationary ? "stationary" : "random_walk"},
        {"walk_variance", cfg.plant.walk_variance},
    };
    summary["input"] = {
        {"kind", cfg.input == InputKind::white ? "white" : "ar1"},
        {"rho", cfg.input == InputKind::ar1 ? nlohmann::json(cfg.ar1_rho) : nlohmann::json()},
        {"variance", cfg.input_variance},
        {"power", input_power(cfg)},
    };
    summary["noise"] = {
        {"family", family_name(cfg.noise_family)},
        {"snr_db", cfg.snr_db ? nlohmann::json(*cfg.snr_db) : nlohmann::json()},
        {"variance", result.noise_variance},
        {"fourth_moment", result.noise.fourth_moment},
        {"third_abs_moment", result.noise.third_abs_moment},
        {"centered_fourth_moment", result.noise.centered_fourth_moment},
    };
    summary["signal_power"] = result.signal_power;
    summary["iterations"] = cfg.iterations;
    summary["trials"] = cfg.trials;
    summary["seed"] = cfg.seed.value;

    summary["algorithms"] = nlohmann::json::array();
    for (const auto& curve : result.curves) {
        nlohmann::json entry;
        entry["name"] = curve.algorithm;
        entry["kind"] = algo_kind_name(curve.kind);
        entry["alpha"] = curve.params.alpha;
        entry["beta"] = curve.params.beta;
        entry["gamma"] = curve.params.gamma;
        entry["j_min"] = curve.params.j_min;
        entry["jmin_mode"] = jmin_mode_name(curve.jmin_mode);
        entry["diverged_trials"] = curve.diverged_trials;
        entry["trials_used"] = curve.trials_used;
        entry["valid"] = curve.valid;
        if (curve.valid) {
            entry["steady_state"] = {
                {"msd_db", json_number(curve.steady_msd_db())},
                {"mse", json_number(curve.steady_mse())},
                {"mean_alpha_k", json_number(tail_mean(curve.mean_alpha_k, 0.1))},
                {"mean_lambda", json_number(tail_mean(curve.mean_lambda, 0.1))},
            };
        } else {
            entry["steady_state"] = nullptr;
        }
        summary["algorithms"].push_back(entry);
    }

    if (result.theory) {
        const auto& theory = *result.theory;
        auto to_db = [](const std::optional<double>& linear) -> nlohmann::json {
            if (!linear || !std::isfinite(*linear) || *linear <= 0.0) return "undefined";
            return msd_db_from_linear(*linear);
        };
        summary["theory"] = {
            {"algorithm", theory.algorithm},
            {"model_diverged", theory.model_diverged},
            {"steady_msd_db_fixed_point", to_db(theory.steady_msd_fixed_point)},
            {"steady_msd_db_closed_form", to_db(theory.steady_msd_closed_form)},
            {"steady_mse", json_number(theory.steady_mse)},
            {"rho_max", theory.params.rho_max},
            {"j_min", theory.params.j_min},
        };
    } else {
        summary["theory"] = nullptr;
    }
    return summary;
}

std::filesystem::path write_outputs(const ExperimentResult& result,
                                    const std::filesystem::path& dir, const std::string& stem) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir.string() +
                                 "': " + ec.message());
    }

    const auto csv_path = dir / (stem + ".csv");
    {
        std::ofstream os(csv_path);
        if (!os) throw std::runtime_error("cannot write '" + csv_path.string() + "'");
        write_csv(result, os);
        if (!os) throw std::runtime_error("write failed for '" + csv_path.string() + "'");
    }

    const auto json_path = dir / (stem + "_summary.json");
    {
        std::ofstream os(json_path);
        if (!os) throw std::runtime_error("cannot write '" + json_path.string() + "'");
        os << summarize(result).dump(2) << "\n";
        if (!os) throw std::runtime_error("write failed for '" + json_path.string() + "'");
    }
    return csv_path;
}

}  // namespace nclmat
