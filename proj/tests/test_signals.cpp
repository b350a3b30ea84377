#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nclmat/rng.hpp"
#include "nclmat/signals.hpp"
#include "nclmat/stats.hpp"

using namespace nclmat;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double fourth = 0.0;    // raw E[v^4]
    double abs_third = 0.0; // raw E[|v|^3]
};

Moments sample_moments(const std::vector<double>& v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) {
        m.variance += (x - m.mean) * (x - m.mean);
        m.fourth += x * x * x * x;
        m.abs_third += std::fabs(x) * x * x;
    }
    m.variance /= static_cast<double>(v.size());
    m.fourth /= static_cast<double>(v.size());
    m.abs_third /= static_cast<double>(v.size());
    return m;
}

}  // namespace

TEST_CASE("white gaussian variance and fourth moment") {
    const std::size_t n = 1000000;
    const auto samples = gen_white_gaussian(n, 1.0, Seed{101});
    const auto m = sample_moments(samples);
    CHECK(std::fabs(m.variance - 1.0) < 0.01);
    CHECK(std::fabs(m.fourth - 3.0) < 0.05);
}

TEST_CASE("generators are deterministic per seed") {
    const auto a = gen_white_gaussian(1000, 2.0, Seed{7});
    const auto b = gen_white_gaussian(1000, 2.0, Seed{7});
    CHECK(a == b);
    const auto c = gen_white_gaussian(1000, 2.0, Seed{8});
    CHECK(a != c);

    for (NoiseFamily family : {NoiseFamily::gaussian, NoiseFamily::uniform, NoiseFamily::binary,
                               NoiseFamily::rayleigh, NoiseFamily::exponential}) {
        const auto spec = make_noise_spec(family, 0.5);
        CHECK(gen_noise(spec, 500, Seed{9}) == gen_noise(spec, 500, Seed{9}));
    }
}

TEST_CASE("first-order autoregression hand values") {
    const auto y = gen_ar1({1.0, 0.0, 0.0}, 0.8);
    REQUIRE(y.size() == 3);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(y[2] == doctest::Approx(0.64).epsilon(1e-15));

    const auto x = gen_white_gaussian(100, 1.0, Seed{3});
    CHECK(gen_ar1(x, 0.0) == x);
}

TEST_CASE("autoregression statistics") {
    const std::size_t n = 1000000;
    const auto x = gen_white_gaussian(n, 1.0, Seed{19});
    const auto y = gen_ar1(x, 0.8);

    // brute-force lag-1 autocorrelation
    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= static_cast<double>(n);
    double r0 = 0.0, r1 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        r0 += (y[i] - mean_y) * (y[i] - mean_y);
        r1 += (y[i] - mean_y) * (y[i + 1] - mean_y);
    }
    CHECK(std::fabs(r1 / r0 - 0.8) < 0.02);

    const double stationary_var = 1.0 / (1.0 - 0.64);
    double var_y = r0 / static_cast<double>(n - 1);
    CHECK(std::fabs(var_y / stationary_var - 1.0) < 0.03);
}

TEST_CASE("centered noise families hit the target variance") {
    const std::size_t n = 1000000;
    int stream = 0;
    for (NoiseFamily family : {NoiseFamily::gaussian, NoiseFamily::uniform, NoiseFamily::binary,
                               NoiseFamily::rayleigh, NoiseFamily::exponential}) {
        for (double variance : {1.0, 0.03}) {
            const auto spec = make_noise_spec(family, variance);
            const auto samples = gen_noise(spec, n, Seed{23}.stream(++stream));
            const auto m = sample_moments(samples);
            const double sigma = std::sqrt(variance);
            INFO(family_name(family), " variance=", variance);
            CHECK(std::fabs(m.mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
            CHECK(std::fabs(m.variance / variance - 1.0) < 0.03);
        }
    }
}

TEST_CASE("binary noise has exact support and moments") {
    const auto spec = make_noise_spec(NoiseFamily::binary, 1.0);
    const auto samples = gen_noise(spec, 100000, Seed{29});
    double fourth = 0.0;
    for (double v : samples) {
        REQUIRE((v == 1.0 || v == -1.0));
        fourth += v * v * v * v;
    }
    CHECK(fourth / static_cast<double>(samples.size()) == 1.0);
}

TEST_CASE("uniform fourth moment matches its constant") {
    const auto spec = make_noise_spec(NoiseFamily::uniform, 1.0);
    const auto samples = gen_noise(spec, 1000000, Seed{31});
    const auto m = sample_moments(samples);
    CHECK(std::fabs(m.fourth - 1.8) < 0.05);
}

TEST_CASE("raw-distribution fourth moments match the model constants") {
    struct Case {
        NoiseFamily family;
        std::size_t n;
        double tolerance;  // relative
    };
    for (const Case c : {Case{NoiseFamily::gaussian, 1000000, 0.05},
                         Case{NoiseFamily::uniform, 1000000, 0.05},
                         Case{NoiseFamily::binary, 1000000, 1e-12},
                         Case{NoiseFamily::rayleigh, 1000000, 0.05},
                         Case{NoiseFamily::exponential, 10000000, 0.08}}) {
        const auto samples = gen_noise_raw(c.family, c.n, Seed{37}.stream(static_cast<int>(c.family)));
        double fourth = 0.0;
        for (double v : samples) fourth += v * v * v * v;
        fourth /= static_cast<double>(c.n);
        INFO(family_name(c.family));
        CHECK(std::fabs(fourth / fourth_moment_ratio(c.family) - 1.0) < c.tolerance);
    }
}

TEST_CASE("centered fourth moments match the sampler constants") {
    // the centered Rayleigh/Exponential fourth moments differ from the raw
    // model constants; both are tracked
    struct Case {
        NoiseFamily family;
        std::size_t n;
        double tolerance;
    };
    for (const Case c : {Case{NoiseFamily::rayleigh, 2000000, 0.05},
                         Case{NoiseFamily::exponential, 10000000, 0.08}}) {
        const auto spec = make_noise_spec(c.family, 1.0);
        const auto samples = gen_noise(spec, c.n, Seed{41}.stream(static_cast<int>(c.family)));
        const auto m = sample_moments(samples);
        INFO(family_name(c.family));
        CHECK(std::fabs(m.fourth / spec.centered_fourth_moment - 1.0) < c.tolerance);
    }
    CHECK(centered_fourth_moment_ratio(NoiseFamily::exponential) == doctest::Approx(9.0));
    CHECK(centered_fourth_moment_ratio(NoiseFamily::rayleigh) ==
          doctest::Approx(3.2450893).epsilon(1e-6));
}

TEST_CASE("third absolute moments") {
    CHECK(third_abs_moment(NoiseFamily::gaussian, 1.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / kPi)).epsilon(1e-12));
    CHECK(third_abs_moment(NoiseFamily::binary, 1.0) == doctest::Approx(1.0));
    // uniform: half-width a = sqrt(3), E|xi|^3 = a^3/4
    CHECK(third_abs_moment(NoiseFamily::uniform, 1.0) ==
          doctest::Approx(std::pow(std::sqrt(3.0), 3.0) / 4.0).epsilon(1e-12));
    // scaling is cubic in sigma
    CHECK(third_abs_moment(NoiseFamily::gaussian, 4.0) ==
          doctest::Approx(8.0 * third_abs_moment(NoiseFamily::gaussian, 1.0)).epsilon(1e-12));

    // Monte Carlo oracle at 10^7 samples for every family
    const std::size_t n = 10000000;
    int stream = 0;
    for (NoiseFamily family : {NoiseFamily::gaussian, NoiseFamily::uniform, NoiseFamily::binary,
                               NoiseFamily::rayleigh, NoiseFamily::exponential}) {
        const auto spec = make_noise_spec(family, 1.0);
        const auto samples = gen_noise(spec, n, Seed{43}.stream(++stream));
        double abs3 = 0.0;
        for (double v : samples) abs3 += std::fabs(v) * v * v;
        abs3 /= static_cast<double>(n);
        INFO(family_name(family));
        CHECK(std::fabs(abs3 / spec.third_abs_moment - 1.0) < 0.01);
    }
}

TEST_CASE("plant output and random walk") {
    PlantSpec stationary;
    stationary.w_opt = {0.5, -0.5};
    Rng walk_rng(Seed{47});
    RegressorWindow x(2);
    x.push(1.0);
    x.push(2.0);  // window = [2, 1]
    const TapWeights before = stationary.w_opt;
    const double d = plant_output(stationary, x, 0.25, walk_rng);
    CHECK(d == doctest::Approx(0.5 * 2.0 - 0.5 * 1.0 + 0.25).epsilon(1e-15));
    CHECK(stationary.w_opt == before);  // stationary mode never drifts

    // ensemble variance of the drift grows like k * walk_variance
    const double walk_variance = 0.01;
    const std::size_t k_steps = 50;
    const std::size_t trials = 1000;
    double acc = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        PlantSpec plant;
        plant.w_opt = {0.0};
        plant.mode = PlantMode::random_walk;
        plant.walk_variance = walk_variance;
        Rng rng(Seed{53}.stream(4, t));
        RegressorWindow w(1);
        w.push(0.0);
        for (std::size_t k = 0; k < k_steps; ++k) plant_output(plant, w, 0.0, rng);
        acc += plant.w_opt[0] * plant.w_opt[0];
    }
    const double measured = acc / static_cast<double>(trials);
    const double expected = static_cast<double>(k_steps) * walk_variance;
    CHECK(std::fabs(measured / expected - 1.0) < 0.15);
}

TEST_CASE("noise variance from an SNR target") {
    CHECK(scale_noise_for_snr(1.0, 20.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(scale_noise_for_snr(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    // standard plant, white unit-power input
    const TapWeights plant{0.0227, 0.46, 0.688, 0.46, 0.227};
    double norm2 = 0.0;
    for (double w : plant) norm2 += w * w;
    CHECK(norm2 == doctest::Approx(0.94858829).epsilon(1e-9));
    CHECK(scale_noise_for_snr(norm2, 20.0) == doctest::Approx(norm2 / 100.0).epsilon(1e-12));

    CHECK_THROWS_AS(scale_noise_for_snr(0.0, 10.0), std::invalid_argument);
}

TEST_CASE("plant validation") {
    PlantSpec p;
    p.w_opt = {1.0};
    CHECK_NOTHROW(p.validate());
    p.walk_variance = 0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // stationary with drift
    p.mode = PlantMode::random_walk;
    CHECK_NOTHROW(p.validate());
    p.walk_variance = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // walk without drift
}
