#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nclmat/filter_core.hpp"
#include "nclmat/rng.hpp"

namespace nclmat {

enum class NoiseFamily { gaussian, uniform, binary, rayleigh, exponential };

const char* family_name(NoiseFamily family);
std::optional<NoiseFamily> parse_family(std::string_view name);

// Measurement-noise description: family, target variance of the generated
// (zero-mean) samples, and the moments the analytical model consumes.
//
// fourth_moment carries the standard per-family constants (3, 9/5, 1, 8, 24
// times sigma^4). For Rayleigh and Exponential those constants describe the
// raw distribution in its natural scale parameterization; the centered
// sampler's actual fourth moment differs and is kept alongside for
// comparison.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double variance = 1.0;               // sigma_xi^2 of the generated samples
    double fourth_moment = 3.0;          // model constant * sigma^4
    double third_abs_moment = 0.0;       // E|xi|^3 of the generated samples
    double centered_fourth_moment = 3.0; // E[xi^4] of the generated samples
};

NoiseSpec make_noise_spec(NoiseFamily family, double variance);

// Moment ratios at unit variance (unit scale for the raw constants).
double fourth_moment_ratio(NoiseFamily family);           // model constants
double centered_fourth_moment_ratio(NoiseFamily family);  // sampler's actual E[xi^4]/sigma^4
double third_abs_moment_ratio(NoiseFamily family);        // sampler's E|xi|^3/sigma^3

// E[|xi|^3] of the centered noise at the given variance. Closed forms where
// available; Rayleigh uses a cached 10^7-sample estimate with a fixed
// internal stream.
double third_abs_moment(NoiseFamily family, double variance);

// n i.i.d. zero-mean Gaussian samples of the given variance.
std::vector<double> gen_white_gaussian(std::size_t n, double variance, Seed seed);

// First-order autoregression y_k = rho y_{k-1} + x_k with y_{-1} = 0.
std::vector<double> gen_ar1(const std::vector<double>& x, double rho);

// n i.i.d. samples, centered to zero mean and scaled to spec.variance.
// Rayleigh and Exponential are shifted by their mean before scaling; Binary
// is +-sigma equiprobable; Uniform is symmetric about 0.
std::vector<double> gen_noise(const NoiseSpec& spec, std::size_t n, Seed seed);

// Uncentered samples in the family's natural unit parameterization (unit sd
// for Gaussian/Uniform, +-1 for Binary, unit scale for Rayleigh and
// Exponential). Used by the moment audits.
std::vector<double> gen_noise_raw(NoiseFamily family, std::size_t n, Seed seed);

enum class PlantMode { stationary, random_walk };

// Unknown system: tap vector plus optional per-step Gaussian drift.
struct PlantSpec {
    TapWeights w_opt;
    PlantMode mode = PlantMode::stationary;
    double walk_variance = 0.0;  // per tap per step

    void validate() const;
};

// d = w_opt . x + noise; in random_walk mode the taps drift afterwards, so
// the returned output was produced by the pre-drift plant.
double plant_output(PlantSpec& plant, const RegressorWindow& x, double noise_sample, Rng& walk_rng);

// sigma_xi^2 = signal_power / 10^(snr_db/10).
double scale_noise_for_snr(double signal_power, double snr_db);

}  // namespace nclmat
