// snr.hpp - Stochastic analysis of a fading wireless hop: Mellin
// transforms of the per-slot service, steady-state delay-violation
// bounds, and delay quantiles.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <variant>

#include "ubinc/curve.hpp"

namespace ubinc {

// (sigma, rho) traffic characterization in bits: cumulative arrivals
// over any window of n slots stay within rho*n + sigma. The validity
// interval restricts which theta the moment bound may be used at.
struct SnrArrival {
    double rho;    // bits per slot
    double sigma;  // bits
    double theta_valid_min;
    double theta_valid_max;

    SnrArrival(double rho, double sigma, double theta_valid_min = 0.0,
               double theta_valid_max = kInf);
};

struct ConstantSnr {
    double gamma;
};

struct RayleighSnr {
    double mean;
};

using SnrModel = std::variant<ConstantSnr, RayleighSnr>;

// Block-fading channel: the SNR is redrawn independently every slot and
// the slot capacity is symbols_per_slot * ln(1 + snr) bits.
struct FadingChannel {
    double symbols_per_slot;
    SnrModel snr;
    double slot_duration;  // seconds

    FadingChannel(double symbols_per_slot, SnrModel snr, double slot_duration);
};

// Free-parameter search range for the moment bound.
struct ThetaSearch {
    double theta_min = 1e-3;
    double theta_max = 50.0;
    double tolerance = 1e-8;  // relative width of the refined bracket
    int max_iterations = 200;

    ThetaSearch() = default;
    ThetaSearch(double theta_min, double theta_max, double tolerance = 1e-8,
                int max_iterations = 200);
};

// E[(1+gamma)^nu] for exponentially distributed gamma with the given
// mean. Throws std::range_error when the intermediate incomplete-gamma
// factors leave the range of double.
double mellin_rayleigh(double nu, double gamma_bar);

// Per-slot service moment E[(1+gamma)^{-theta * symbols_per_slot}].
double mellin_service(const FadingChannel& ch, double theta);

// m(theta) = e^{theta*rho} * mellin_service(theta); a steady-state
// bound exists at theta iff this is below 1.
double stability_margin(const SnrArrival& a, const FadingChannel& ch, double theta);

// Mean per-slot capacity in bits, symbols_per_slot * E[ln(1+gamma)].
double mean_capacity(const FadingChannel& ch);

// Steady-state kernel at a fixed theta:
//   e^{theta*sigma} * M^{w} / (1 - e^{theta*rho} * M),  M = mellin_service(theta).
// Infinite when theta admits no steady state. Not clamped to 1.
double delay_kernel(const SnrArrival& a, const FadingChannel& ch, int w_slots, double theta);

// min(1, inf over theta of delay_kernel): bound on the probability that
// the steady-state delay exceeds w_slots slots. Throws instability_error
// when no theta in range admits a steady state.
double delay_violation_bound(const SnrArrival& a, const FadingChannel& ch, int w_slots,
                             const ThetaSearch& s = {});

// Smallest w with delay_violation_bound(w) <= epsilon. The w = 0 kernel
// is vacuous (always at least 1), so even a deterministic under-loaded
// hop reports one slot for epsilon < 1.
int delay_quantile(const SnrArrival& a, const FadingChannel& ch, double epsilon,
                   const ThetaSearch& s = {}, int max_slots = 1000000);

// A bit-domain envelope viewed in the SNR domain, where cumulative
// processes are exponentiated. Stored in the log (bit) domain.
struct SnrEnvelope {
    Curve log_curve;

    double log_eval(double t) const { return log_curve(t); }
    double eval(double t) const;
};

SnrEnvelope bit_to_snr(const Curve& c);

}  // namespace ubinc
