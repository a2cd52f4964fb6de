// test_snr.cpp - Mellin transforms, delay kernels, and quantiles.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "snr_oracles.hpp"
#include "ubinc/snr.hpp"

using namespace ubinc;

namespace {

FadingChannel rayleigh(double mean, double w = 1.0, double slot = 1.0) {
    return FadingChannel(w, RayleighSnr{mean}, slot);
}

// Constant channel with a given per-slot capacity in bits.
FadingChannel constant_cap(double bits, double w = 1.0, double slot = 1.0) {
    return FadingChannel(w, ConstantSnr{std::exp(bits / w) - 1.0}, slot);
}

}  // namespace

TEST_CASE("rayleigh mellin matches monte carlo across the grid") {
    for (double nu : {-2.0, -1.0, -0.5, 0.5, 1.0})
        for (double g : {1.0, 10.0, 100.0}) {
            double closed = mellin_rayleigh(nu, g);
            double mc = oracle::mc_mellin(nu, g, 1000000, 42);
            CHECK(std::abs(closed - mc) <= 0.01 * closed);
        }

    for (double g : {1.0, 10.0, 100.0}) {
        CHECK(mellin_rayleigh(0.0, g) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mellin_rayleigh(1.0, g) == doctest::Approx(1.0 + g).epsilon(1e-12));
    }
    CHECK(mellin_rayleigh(-0.5, 10.0) == doctest::Approx(0.405565079204196).epsilon(1e-12));
}

TEST_CASE("service moment per channel model") {
    CHECK(mellin_service(FadingChannel(1.0, ConstantSnr{3.0}, 1.0), 1.0) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mellin_service(FadingChannel(2.0, ConstantSnr{3.0}, 1.0), 0.5) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mellin_service(rayleigh(10.0), 1.0) ==
          doctest::Approx(mellin_rayleigh(-1.0, 10.0)).epsilon(1e-12));

    // Zeroth moment: theta to 0 drives the transform to 1.
    CHECK(mellin_service(rayleigh(10.0), 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mellin_service(constant_cap(2.0), 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stability margin separates under- and over-load") {
    SnrArrival one(1.0, 0.0);
    FadingChannel det = constant_cap(2.0);
    for (double th : {1e-3, 0.1, 1.0, 10.0, 50.0}) {
        CHECK(stability_margin(one, det, th) == doctest::Approx(std::exp(-th)).epsilon(1e-12));
        CHECK(stability_margin(one, det, th) < 1.0);
    }

    // rho at or above the mean capacity: no theta helps.
    FadingChannel weak = rayleigh(1.0);  // mean capacity ~0.596 bits/slot
    for (int i = 0; i < 64; ++i) {
        double th = 1e-3 * std::pow(50.0 / 1e-3, i / 63.0);
        CHECK(stability_margin(one, weak, th) >= 1.0);
    }
    CHECK_THROWS_AS(delay_violation_bound(one, weak, 5), instability_error);

    // Near theta = 0 the margin approaches 1 from the loaded side.
    CHECK(stability_margin(SnrArrival(0.5, 0.0), rayleigh(10.0), 1e-6) < 1.0);
    CHECK(stability_margin(one, weak, 1e-6) > 1.0);
}

TEST_CASE("constant-channel kernel equals the geometric closed form") {
    double c = 2.0, rho = 1.0;
    FadingChannel det = constant_cap(c);
    for (double theta : {0.5, 1.3})
        for (double sigma : {0.0, 0.7})
            for (int w : {0, 3, 10}) {
                SnrArrival a(rho, sigma);
                double mine = delay_kernel(a, det, w, theta);
                double closed = std::exp(theta * sigma) * std::exp(-theta * c * w) /
                                (1.0 - std::exp(-theta * (c - rho)));
                double summed = oracle::kernel_sum_constant(sigma, rho, c, w, theta);
                CHECK(mine == doctest::Approx(closed).epsilon(1e-12));
                CHECK(mine == doctest::Approx(summed).epsilon(1e-9));
            }
}

TEST_CASE("violation bound tracks the dense-grid minimum") {
    SnrArrival a(0.5, 0.0);
    FadingChannel ch = rayleigh(10.0);
    for (int w : {1, 5, 20, 50}) {
        double mine = delay_violation_bound(a, ch, w);
        double grid = oracle::dense_grid_bound(a, ch, w);
        CHECK(mine <= grid * (1.0 + 1e-12));  // refinement can only improve
        CHECK(mine >= grid * (1.0 - 1e-3));
    }

    // Non-increasing in the slot horizon.
    double prev = 2.0;
    for (int w = 0; w <= 40; w += 4) {
        double b = delay_violation_bound(a, ch, w);
        CHECK(b <= prev + 1e-15);
        CHECK(b >= 0.0);
        prev = b;
    }

    // With no burst the w = 0 kernel cannot go below 1.
    CHECK(delay_violation_bound(a, ch, 0) == 1.0);

    // Deterministic under-load: the bound collapses within slots.
    CHECK(delay_violation_bound(SnrArrival(1.0, 0.0), constant_cap(2.0), 10) <= 1e-6);
}

TEST_CASE("delay quantile is the smallest horizon clearing epsilon") {
    SnrArrival a(0.5, 0.0);
    FadingChannel ch = rayleigh(10.0);
    CHECK(delay_quantile(a, ch, 1e-3) == 2);
    CHECK(delay_quantile(a, ch, 1e-3) == oracle::quantile_scan(a, ch, 1e-3, 200));
    CHECK(delay_quantile(a, ch, 1e-2) == 2);
    CHECK(delay_quantile(a, ch, 1.0) == 0);
    CHECK(delay_quantile(a, ch, 1e-2) <= delay_quantile(a, ch, 1e-3));

    // The w = 0 kernel is vacuous, so even a deterministic under-loaded
    // hop reports one slot.
    FadingChannel det = constant_cap(2.0);
    CHECK(delay_quantile(SnrArrival(1.0, 0.0), det, 1e-1) == 1);
    CHECK(delay_quantile(SnrArrival(1.0, 0.0), det, 1e-6) == 1);

    CHECK_THROWS_AS(delay_quantile(SnrArrival(1.0, 0.0), rayleigh(1.0), 1e-3),
                    instability_error);

    // Near-critical load: the horizon blows past a small cap.
    CHECK_THROWS_AS(delay_quantile(SnrArrival(2.0, 0.0), ch, 1e-3, ThetaSearch{}, 8),
                    std::runtime_error);

    CHECK_THROWS_AS(delay_quantile(a, ch, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(delay_quantile(a, ch, 1.5), std::invalid_argument);
}

TEST_CASE("mean capacity closed form") {
    CHECK(mean_capacity(FadingChannel(2.0, ConstantSnr{std::exp(1.0) - 1.0}, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mean_capacity(rayleigh(10.0)) == doctest::Approx(2.01464254470845).epsilon(1e-12));
    CHECK(mean_capacity(rayleigh(1.0)) == doctest::Approx(0.596347362323194).epsilon(1e-12));
    for (double g : {1.0, 10.0}) {
        double mc = oracle::mc_log_capacity(g, 1000000, 7);
        CHECK(std::abs(mean_capacity(rayleigh(g)) - mc) <= 0.01 * mc);
    }
    // Asymptotic branch for very small mean SNR.
    double tiny = mean_capacity(rayleigh(1e-3));
    CHECK(tiny > 0.0);
    CHECK(tiny < 1e-3);
    CHECK(tiny == doctest::Approx(1e-3 - 1e-6).epsilon(1e-3));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(mellin_rayleigh(-500.0, 10.0), std::range_error);
    CHECK_THROWS_AS(mellin_rayleigh(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mellin_rayleigh(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(0.0, ConstantSnr{1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(1.0, ConstantSnr{-1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(1.0, RayleighSnr{0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(1.0, ConstantSnr{1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ThetaSearch(0.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(ThetaSearch(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SnrArrival(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SnrArrival(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(delay_kernel(SnrArrival(0.5, 0.0), rayleigh(10.0), -1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(mellin_service(rayleigh(10.0), 0.0), std::invalid_argument);
    // Arrival validity window disjoint from the search range.
    CHECK_THROWS_AS(
        delay_violation_bound(SnrArrival(0.5, 0.0, 0.0, 1e-4), rayleigh(10.0), 5),
        std::invalid_argument);
}

TEST_CASE("bit domain maps to the snr domain by exponentiation") {
    SnrEnvelope env = bit_to_snr(TokenBucket(1.0, 4.0).curve());
    CHECK(env.eval(2.0) == doctest::Approx(std::exp(6.0)).epsilon(1e-12));

    SnrEnvelope unit = bit_to_snr(Curve::zero());
    for (double t : {0.0, 1.0, 7.0}) CHECK(unit.eval(t) == 1.0);

    Curve c = TSpec(4.0, 1.0, 1.0, 5.0).curve();
    SnrEnvelope e = bit_to_snr(c);
    for (double t : {0.0, 0.5, 1.3, 2.0, 6.0}) {
        CHECK(e.log_eval(t) == c(t));
        CHECK(e.eval(t) == std::exp(c(t)));
    }
}

TEST_CASE("randomized stable channels keep the bound well behaved") {
    std::mt19937_64 eng(20250815);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(eng);
    };
    for (int draw = 0; draw < 20; ++draw) {
        double mean = uni(2.0, 60.0);
        double w_sym = uni(0.5, 3.0);
        FadingChannel ch = rayleigh(mean, w_sym);
        double load = uni(0.1, 0.7);
        SnrArrival a(load * mean_capacity(ch), uni(0.0, 5.0));

        double prev = 2.0;
        for (int w : {0, 1, 2, 5, 10, 30}) {
            double b = delay_violation_bound(a, ch, w);
            CHECK(b >= 0.0);
            CHECK(b <= 1.0);
            CHECK(b <= prev + 1e-15);
            prev = b;
        }
        CHECK(delay_violation_bound(a, ch, 0) == 1.0);

        // A better channel at the same traffic cannot raise the bound.
        FadingChannel better = rayleigh(mean * 1.5, w_sym);
        CHECK(delay_violation_bound(a, better, 10) <=
              delay_violation_bound(a, ch, 10) * (1.0 + 1e-9));

        int q = delay_quantile(a, ch, 1e-2);
        CHECK(q == oracle::quantile_scan(a, ch, 1e-2, 5000));
    }
}
