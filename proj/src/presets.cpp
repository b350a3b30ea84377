#include "nclmat/presets.hpp"

#include <stdexcept>
#include <string>

namespace nclmat {

namespace {

const TapWeights kPlant{0.0227, 0.46, 0.688, 0.46, 0.227};

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.plant.w_opt = kPlant;
    cfg.plant.mode = PlantMode::stationary;
    cfg.plant.walk_variance = 0.0;
    cfg.input = InputKind::white;
    cfg.ar1_rho = 0.8;
    cfg.input_variance = 1.0;
    cfg.iterations = 5000;
    cfg.trials = 10;
    return cfg;
}

void make_nonstationary(ExperimentConfig& cfg) {
    cfg.plant.mode = PlantMode::random_walk;
    cfg.plant.walk_variance = 0.01;
}

AlgoConfig nclmat_entry(std::string name, double alpha, double beta, double gamma) {
    AlgoConfig a;
    a.kind = AlgoKind::nclmat;
    a.name = std::move(name);
    a.params.alpha = alpha;
    a.params.beta = beta;
    a.params.gamma = gamma;
    return a;
}

AlgoConfig znclmat_entry(std::string name, double alpha, double beta, double gamma) {
    AlgoConfig a;
    a.kind = AlgoKind::znclmat;
    a.name = std::move(name);
    a.params.alpha = alpha;
    a.params.beta = beta;
    a.params.gamma = gamma;
    return a;
}

AlgoConfig lmat_entry(std::string name, double mu) {
    AlgoConfig a;
    a.kind = AlgoKind::lmat;
    a.name = std::move(name);
    a.params.alpha = mu;
    return a;
}

AlgoConfig nclmf_entry(std::string name, double alpha, double beta, double gamma) {
    AlgoConfig a;
    a.kind = AlgoKind::nclmf;
    a.name = std::move(name);
    a.params.alpha = alpha;
    a.params.beta = beta;
    a.params.gamma = gamma;
    return a;
}

}  // namespace

std::vector<ExperimentConfig> preset_runs(int figure_id) {
    // The nominal step-size of the adaptive-step entries is a free
    // parameter of each scenario; the values below were picked so every
    // run converges without divergent trials at the default seeds.
    switch (figure_id) {
        case 1:
        case 2:
        case 3: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                figure_id == 1
                    ? "stationary white-input identification, uniform noise at 20 dB SNR, "
                      "with analytical overlay"
                    : (figure_id == 2 ? "step-size trace of the adaptive-step filter "
                                        "(same run as preset 1)"
                                      : "multiplier trace of the adaptive-step filter "
                                        "(same run as preset 1)");
            cfg.noise_family = NoiseFamily::uniform;
            cfg.snr_db = 20.0;
            cfg.theory_overlay = true;
            cfg.seed = Seed{1001};
            cfg.algorithms = {nclmat_entry("nclmat", 0.01, 0.001, 1000.0)};
            return {cfg};
        }
        case 4: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                "tracking a random-walk plant through exponential noise at 10 dB SNR, "
                "correlated input; constant-step vs adaptive-step vs zero-constraint";
            cfg.input = InputKind::ar1;
            cfg.noise_family = NoiseFamily::exponential;
            cfg.snr_db = 10.0;
            make_nonstationary(cfg);
            cfg.trials = 30;
            cfg.seed = Seed{1004};
            cfg.algorithms = {lmat_entry("lmat", 0.01),
                              nclmat_entry("nclmat", 1e-7, 0.001, 10000.0),
                              znclmat_entry("znclmat", 1e-7, 0.001, 1000.0)};
            return {cfg};
        }
        case 5: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                "multiplier-rate/constraint-gain trade-off on uniform noise at 20 dB SNR";
            cfg.noise_family = NoiseFamily::uniform;
            cfg.snr_db = 20.0;
            cfg.iterations = 10000;
            cfg.seed = Seed{1005};
            cfg.algorithms = {nclmat_entry("nclmat_b0.001_g5000", 0.002, 0.001, 5000.0),
                              nclmat_entry("nclmat_b0.01_g1000", 0.002, 0.01, 1000.0)};
            return {cfg};
        }
        case 6: {
            std::vector<ExperimentConfig> runs;
            for (NoiseFamily family : {NoiseFamily::gaussian, NoiseFamily::uniform,
                                       NoiseFamily::binary, NoiseFamily::rayleigh}) {
                ExperimentConfig cfg = base_config();
                cfg.description = std::string("random-walk tracking at 20 dB SNR, ") +
                                  family_name(family) + " noise, correlated input";
                cfg.input = InputKind::ar1;
                cfg.noise_family = family;
                cfg.snr_db = 20.0;
                make_nonstationary(cfg);
                cfg.trials = 30;
                cfg.seed = Seed{1006};  // shared seed pairs the runs per trial
                cfg.algorithms = {nclmat_entry("nclmat", 3e-7, 0.001, 1000.0)};
                runs.push_back(cfg);
            }
            return runs;
        }
        case 7: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                "fourth-power baseline vs adaptive-step filter, unit-variance gaussian "
                "noise, correlated input (explicit variance; the quoted 20 dB SNR is "
                "inconsistent with it)";
            cfg.input = InputKind::ar1;
            cfg.noise_family = NoiseFamily::gaussian;
            cfg.noise_variance = 1.0;
            cfg.seed = Seed{1007};
            cfg.algorithms = {nclmf_entry("nclmf", 0.001, 0.0001, 500.0),
                              nclmat_entry("nclmat", 1e-6, 0.001, 10000.0)};
            return {cfg};
        }
        case 8: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                "step-size behavior on a random-walk plant, exponential noise, correlated "
                "input (alternate quoted gain 2000; SNR unstated, 20 dB assumed)";
            cfg.input = InputKind::ar1;
            cfg.noise_family = NoiseFamily::exponential;
            cfg.snr_db = 20.0;
            make_nonstationary(cfg);
            cfg.seed = Seed{1008};
            cfg.algorithms = {nclmat_entry("nclmat", 1e-7, 0.001, 20000.0),
                              znclmat_entry("znclmat", 1e-7, 0.0003, 2000.0)};
            return {cfg};
        }
        case 9: {
            ExperimentConfig cfg = base_config();
            cfg.description =
                "random-walk tracking through rayleigh noise at 20 dB SNR, correlated "
                "input (zero-constraint entry uses the quoted beta=0.003, gamma=100)";
            cfg.input = InputKind::ar1;
            cfg.noise_family = NoiseFamily::rayleigh;
            cfg.snr_db = 20.0;
            make_nonstationary(cfg);
            cfg.seed = Seed{1009};
            cfg.algorithms = {nclmat_entry("nclmat", 1e-7, 0.001, 20000.0),
                              znclmat_entry("znclmat", 1e-6, 0.003, 100.0)};
            return {cfg};
        }
        default:
            throw std::invalid_argument("preset: figure id must be 1..9");
    }
}

ExperimentConfig preset(int figure_id) { return preset_runs(figure_id).front(); }

}  // namespace nclmat
