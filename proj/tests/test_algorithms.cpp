#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nclmat/algorithms.hpp"
#include "nclmat/rng.hpp"
#include "nclmat/signals.hpp"
#include "nclmat/stats.hpp"

using namespace nclmat;

namespace {

RegressorWindow window_of(const std::vector<double>& samples) {
    RegressorWindow w(samples.size());
    for (auto it = samples.rbegin(); it != samples.rend(); ++it) w.push(*it);
    return w;
}

}  // namespace

TEST_CASE("zero error leaves the weights alone and decays the multiplier") {
    NcParams p;
    p.alpha = 0.05;
    p.beta = 0.25;
    p.gamma = 10.0;
    p.j_min = 0.4;
    NcState s(3);
    s.weights = {0.5, -0.25, 1.0};
    s.lambda = 0.8;
    const auto x = window_of({1.0, 2.0, -1.0});
    const double d = predict(s.weights, x);  // e = 0

    const TapWeights before = s.weights;
    const double e = nclmat_step(s, x, d, p);
    CHECK(e == 0.0);
    CHECK(s.weights == before);
    CHECK(s.lambda == doctest::Approx((1.0 - p.beta) * 0.8 - 0.5 * p.beta * p.j_min).epsilon(1e-15));
}

TEST_CASE("multiplier update hand values") {
    // lambda' = (1-beta) lambda + beta/2 (|e|^3 - j_min)
    NcParams p;
    p.alpha = 0.0;  // isolate the multiplier
    p.beta = 0.5;
    p.gamma = 0.0;
    p.j_min = 0.0;
    NcState s(1);
    auto x = window_of({1.0});
    nclmat_step(s, x, 2.0, p);  // e = 2
    CHECK(s.lambda == doctest::Approx(2.0).epsilon(1e-15));  // 0.25 * 8

    NcState z(1);
    z.lambda = 1.0;
    NcParams pz = p;
    pz.beta = 0.001;
    znclmat_step(z, x, 0.0, pz);  // e = 0
    CHECK(z.lambda == doctest::Approx(0.999).epsilon(1e-15));

    NcState f(1);
    NcParams pf = p;
    pf.beta = 0.5;
    nclmf_step(f, x, 2.0, pf);  // e = 2, lambda' = 0.25 * 16
    CHECK(f.lambda == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("constant-step update hand values") {
    NcState s(3);
    auto x = window_of({1.0, 0.0, 0.0});
    lmat_step(s, x, 1.0, 0.01);  // e = 1
    CHECK(s.weights[0] == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(s.weights[1] == 0.0);

    NcState neg(3);
    lmat_step(neg, x, -1.0, 0.01);  // e = -1 flips the update
    CHECK(neg.weights[0] == doctest::Approx(-0.01).epsilon(1e-15));
}

TEST_CASE("gamma = 0 reproduces the constant-step trajectory exactly") {
    const std::size_t n_taps = 5;
    const std::size_t steps = 10000;
    const auto plant = TapWeights{0.0227, 0.46, 0.688, 0.46, 0.227};
    const auto x_seq = gen_white_gaussian(steps, 1.0, Seed{42}.stream(1));
    const auto noise = gen_white_gaussian(steps, 0.01, Seed{42}.stream(2));

    NcParams p;
    p.alpha = 0.01;
    p.beta = 0.37;   // arbitrary; must not matter
    p.gamma = 0.0;
    p.j_min = 1.3;   // arbitrary; must not matter
    NcState constrained(n_taps);
    NcState plain(n_taps);

    RegressorWindow window(n_taps);
    double max_diff = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        window.push(x_seq[k]);
        const double d = predict(plant, window) + noise[k];
        nclmat_step(constrained, window, d, p);
        lmat_step(plain, window, d, p.alpha);
        for (std::size_t i = 0; i < n_taps; ++i) {
            max_diff = std::max(max_diff, std::fabs(constrained.weights[i] - plain.weights[i]));
        }
    }
    CHECK(max_diff < 1e-12);
}

TEST_CASE("zero-constraint variant equals j_min = 0 exactly") {
    const std::size_t steps = 2000;
    const auto x_seq = gen_white_gaussian(steps, 1.0, Seed{5}.stream(1));
    const auto noise = gen_white_gaussian(steps, 0.1, Seed{5}.stream(2));
    const auto plant = TapWeights{0.3, -0.7, 0.2};

    NcParams p;
    p.alpha = 0.005;
    p.beta = 0.01;
    p.gamma = 100.0;
    p.j_min = 0.55;  // ignored by the zero-constraint variant
    NcParams p0 = p;
    p0.j_min = 0.0;

    NcState a(3), b(3);
    RegressorWindow window(3);
    for (std::size_t k = 0; k < steps; ++k) {
        window.push(x_seq[k]);
        const double d = predict(plant, window) + noise[k];
        znclmat_step(a, window, d, p);
        nclmat_step(b, window, d, p0);
        REQUIRE(a.weights == b.weights);
        REQUIRE(a.lambda == b.lambda);
    }
    // with lambda_0 >= 0 the zero-constraint multiplier stays non-negative
    CHECK(a.lambda >= 0.0);
}

TEST_CASE("weight increment is odd in the error for a fixed step") {
    Rng rng(Seed{23});
    for (int rep = 0; rep < 100; ++rep) {
        NcParams p;
        p.alpha = 0.02;
        p.beta = 0.003;
        p.gamma = 50.0;
        p.j_min = 0.1;
        std::vector<double> xs(4);
        for (auto& v : xs) v = rng.next_gaussian();
        const auto x = window_of(xs);

        NcState plus(4), minus(4);
        plus.lambda = minus.lambda = 0.6;  // same incoming step for both
        const double d = 2.0 * rng.next_gaussian();
        nclmat_step(plus, x, d, p);
        nclmat_step(minus, x, -d, p);
        for (int i = 0; i < 4; ++i) {
            CHECK(plus.weights[i] == doctest::Approx(-minus.weights[i]).epsilon(1e-12));
        }
        // |e|^3 is even in e, so the multiplier moves identically
        CHECK(plus.lambda == doctest::Approx(minus.lambda).epsilon(1e-12));
    }
}

TEST_CASE("multiplier recursion matches its closed form") {
    // after k steps from lambda_0 = 0:
    // lambda_k = beta/2 sum_{n<k} (1-beta)^(k-1-n) (|e_n|^3 - j_min)
    Rng rng(Seed{29});
    for (double beta : {0.001, 0.05, 0.6}) {
        for (double j_min : {0.0, 0.37}) {
            const std::size_t k_steps = 100;
            std::vector<double> errors(k_steps);
            for (auto& e : errors) e = 2.0 * rng.next_gaussian();

            NcParams p;
            p.alpha = 0.0;  // weights stay zero; errors are the raw samples
            p.beta = beta;
            p.gamma = 0.0;
            p.j_min = j_min;
            NcState s(1);
            RegressorWindow x(1);
            x.push(0.0);  // zero regressor: e = d exactly
            for (std::size_t k = 0; k < k_steps; ++k) {
                nclmat_step(s, x, errors[k], p);
            }

            double closed = 0.0;
            for (std::size_t n = 0; n < k_steps; ++n) {
                const double abs_e3 = std::fabs(errors[n]) * errors[n] * errors[n];
                closed += std::pow(1.0 - beta, static_cast<double>(k_steps - 1 - n)) *
                          (abs_e3 - j_min);
            }
            closed *= 0.5 * beta;
            CHECK(s.lambda == doctest::Approx(closed).epsilon(1e-10));
        }
    }
}

TEST_CASE("matched constraint level drives the multiplier mean to zero") {
    // converged filter, gaussian noise, j_min set to the true E|xi|^3
    const std::size_t n_taps = 5;
    const std::size_t iters = 20000;
    const std::size_t trials = 24;
    const auto plant = TapWeights{0.0227, 0.46, 0.688, 0.46, 0.227};
    const double sigma_xi2 = 0.05;
    const auto spec = make_noise_spec(NoiseFamily::gaussian, sigma_xi2);

    NcParams p;
    p.alpha = 0.01;
    p.beta = 0.01;
    p.gamma = 10.0;
    p.j_min = spec.third_abs_moment;

    std::vector<double> lambda_tail_means;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto x_seq = gen_white_gaussian(iters, 1.0, Seed{31}.stream(1, t));
        const auto noise = gen_noise(spec, iters, Seed{31}.stream(2, t));
        NcState s(n_taps);
        RegressorWindow window(n_taps);
        std::vector<double> lambda_series(iters);
        for (std::size_t k = 0; k < iters; ++k) {
            window.push(x_seq[k]);
            nclmat_step(s, window, predict(plant, window) + noise[k], p);
            lambda_series[k] = s.lambda;
        }
        REQUIRE_FALSE(s.diverged);
        lambda_tail_means.push_back(tail_mean(lambda_series, 0.1));
    }
    const double m = mean(lambda_tail_means);
    const double se = std_error(lambda_tail_means);
    CHECK(std::fabs(m) < 5.0 * se);
}

TEST_CASE("fourth-power baseline reductions") {
    // e = 0 leaves weights alone
    NcParams p;
    p.alpha = 0.01;
    p.beta = 0.001;
    p.gamma = 500.0;
    p.j_min = 3.0;
    NcState s(2);
    s.weights = {0.4, -0.1};
    auto x = window_of({1.0, 2.0});
    const TapWeights before = s.weights;
    nclmf_step(s, x, predict(s.weights, x), p);
    CHECK(s.weights == before);

    // gamma = 0 is the plain fourth-power update w += alpha e^3 x
    NcParams p0 = p;
    p0.gamma = 0.0;
    NcState t(2);
    t.lambda = 123.0;  // must not matter
    nclmf_step(t, x, 0.5, p0);  // e = 0.5 against zero weights
    CHECK(t.weights[0] == doctest::Approx(p0.alpha * 0.125 * 1.0).epsilon(1e-15));
    CHECK(t.weights[1] == doctest::Approx(p0.alpha * 0.125 * 2.0).epsilon(1e-15));
}

TEST_CASE("non-finite updates flag divergence instead of throwing") {
    NcParams p;
    p.alpha = 1e300;
    p.beta = 0.5;
    p.gamma = 0.0;
    p.j_min = 0.0;
    NcState s(1);
    auto x = window_of({1e10});
    nclmat_step(s, x, 1e10, p);
    CHECK(s.diverged);
    const TapWeights frozen = s.weights;
    nclmat_step(s, x, 1.0, p);  // no-op once diverged
    CHECK(s.weights == frozen);
}

TEST_CASE("parameter validation") {
    NcParams p;
    CHECK_NOTHROW(p.validate());
    p.beta = 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.beta = 0.001;
    p.gamma = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.gamma = 0.0;
    p.alpha = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
