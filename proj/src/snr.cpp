// snr.cpp - Mellin-transform machinery for the fading hop.
//
// All kernel arithmetic runs on exponents: SNR-domain quantities are
// exponentials of bit totals and overflow immediately in linear space.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/snr.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubinc {

namespace {

// GSL's default error handler aborts the process; use return codes.
[[maybe_unused]] const bool gsl_handler_off = [] {
    gsl_set_error_handler_off();
    return true;
}();

double require_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument(std::string(what) + " must be positive");
    return v;
}

}  // namespace

SnrArrival::SnrArrival(double rho_, double sigma_, double theta_valid_min_,
                       double theta_valid_max_)
    : rho(rho_), sigma(sigma_), theta_valid_min(theta_valid_min_),
      theta_valid_max(theta_valid_max_) {
    if (!std::isfinite(rho) || rho < 0.0) throw std::invalid_argument("arrival rate must be non-negative");
    if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("arrival burst must be non-negative");
    if (!(theta_valid_min >= 0.0) || !(theta_valid_max > theta_valid_min))
        throw std::invalid_argument("theta validity interval must be within (0, inf)");
}

FadingChannel::FadingChannel(double symbols_per_slot_, SnrModel snr_, double slot_duration_)
    : symbols_per_slot(symbols_per_slot_), snr(snr_), slot_duration(slot_duration_) {
    require_positive(symbols_per_slot, "symbols_per_slot");
    require_positive(slot_duration, "slot_duration");
    std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ConstantSnr>)
                require_positive(m.gamma, "snr");
            else
                require_positive(m.mean, "mean snr");
        },
        snr);
}

ThetaSearch::ThetaSearch(double theta_min_, double theta_max_, double tolerance_,
                         int max_iterations_)
    : theta_min(theta_min_), theta_max(theta_max_), tolerance(tolerance_),
      max_iterations(max_iterations_) {
    if (!(theta_min > 0.0) || !(theta_max > theta_min))
        throw std::invalid_argument("need 0 < theta_min < theta_max");
    if (!(tolerance > 0.0) || max_iterations < 1)
        throw std::invalid_argument("bad search tolerance or iteration cap");
}

double mellin_rayleigh(double nu, double gamma_bar) {
    if (!std::isfinite(nu)) throw std::invalid_argument("nu must be finite");
    require_positive(gamma_bar, "mean snr");
    double x = 1.0 / gamma_bar;
    gsl_sf_result g;
    int status = gsl_sf_gamma_inc_e(nu + 1.0, x, &g);
    if (status == GSL_EOVRFLW || status == GSL_EUNDRFLW)
        throw std::range_error("mellin_rayleigh: incomplete gamma leaves double range");
    if (status != GSL_SUCCESS)
        throw std::range_error(std::string("mellin_rayleigh: ") + gsl_strerror(status));
    // e^{1/g} g^{nu} Gamma(nu+1, 1/g), combined in the exponent so the
    // huge Gamma factor and the tiny power can cancel.
    double value = std::exp(x + nu * std::log(gamma_bar) + std::log(g.val));
    if (!std::isfinite(value) || value == 0.0)
        throw std::range_error("mellin_rayleigh: result leaves double range");
    return value;
}

namespace {

// log E[(1+gamma)^{-theta*w}]; always <= 0.
double log_mellin_service(const FadingChannel& ch, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    if (const auto* c = std::get_if<ConstantSnr>(&ch.snr))
        return -theta * ch.symbols_per_slot * std::log1p(c->gamma);
    double m = mellin_rayleigh(-theta * ch.symbols_per_slot,
                               std::get<RayleighSnr>(ch.snr).mean);
    return std::log(m);
}

double log_kernel(const SnrArrival& a, const FadingChannel& ch, int w_slots, double theta) {
    double log_ms = log_mellin_service(ch, theta);
    double log_m = theta * a.rho + log_ms;
    if (log_m >= 0.0) return kInf;
    return theta * a.sigma + static_cast<double>(w_slots) * log_ms -
           std::log1p(-std::exp(log_m));
}

}  // namespace

double mellin_service(const FadingChannel& ch, double theta) {
    return std::exp(log_mellin_service(ch, theta));
}

double stability_margin(const SnrArrival& a, const FadingChannel& ch, double theta) {
    return std::exp(theta * a.rho + log_mellin_service(ch, theta));
}

double mean_capacity(const FadingChannel& ch) {
    if (const auto* c = std::get_if<ConstantSnr>(&ch.snr))
        return ch.symbols_per_slot * std::log1p(c->gamma);
    double g = std::get<RayleighSnr>(ch.snr).mean;
    double x = 1.0 / g;
    if (x > 500.0) {
        // e^{x} E1(x) ~ 1/x - 1/x^2 + 2/x^3; e^{x} alone overflows here.
        return ch.symbols_per_slot * (g - g * g + 2.0 * g * g * g);
    }
    gsl_sf_result e1;
    int status = gsl_sf_expint_E1_e(x, &e1);
    if (status != GSL_SUCCESS)
        throw std::range_error(std::string("mean_capacity: ") + gsl_strerror(status));
    return ch.symbols_per_slot * std::exp(x) * e1.val;
}

double delay_kernel(const SnrArrival& a, const FadingChannel& ch, int w_slots, double theta) {
    if (w_slots < 0) throw std::invalid_argument("w_slots must be non-negative");
    return std::exp(log_kernel(a, ch, w_slots, theta));
}

double delay_violation_bound(const SnrArrival& a, const FadingChannel& ch, int w_slots,
                             const ThetaSearch& s) {
    if (w_slots < 0) throw std::invalid_argument("w_slots must be non-negative");
    double lo = std::max(s.theta_min, a.theta_valid_min);
    double hi = std::min(s.theta_max, a.theta_valid_max);
    if (!(lo < hi)) throw std::invalid_argument("empty theta search range");

    auto eval = [&](double theta) {
        try {
            return log_kernel(a, ch, w_slots, theta);
        } catch (const std::range_error&) {
            return kInf;  // unusable theta, not an error for the search
        }
    };

    // Coarse log-spaced grid, then golden-section refinement around the
    // grid minimum. The kernel is smooth but unimodality is not assumed,
    // so the grid guards against refining into a local dip.
    constexpr int kGrid = 64;
    int best_at = -1;
    double best = kInf;
    std::vector<double> theta(kGrid);
    double ratio = hi / lo;
    for (int i = 0; i < kGrid; ++i) {
        theta[i] = lo * std::pow(ratio, static_cast<double>(i) / (kGrid - 1));
        double v = eval(theta[i]);
        if (v < best) {
            best = v;
            best_at = i;
        }
    }
    if (best_at < 0)
        throw instability_error(
            "delay bound diverges: no theta in range admits a steady state");

    double a_br = theta[std::max(0, best_at - 1)];
    double b_br = theta[std::min(kGrid - 1, best_at + 1)];
    constexpr double invphi = 0.6180339887498949;
    double c = b_br - invphi * (b_br - a_br);
    double d = a_br + invphi * (b_br - a_br);
    double fc = eval(c), fd = eval(d);
    best = std::min(best, std::min(fc, fd));
    for (int it = 0; it < s.max_iterations && (b_br - a_br) > s.tolerance * b_br; ++it) {
        if (fc < fd) {
            b_br = d;
            d = c;
            fd = fc;
            c = b_br - invphi * (b_br - a_br);
            fc = eval(c);
        } else {
            a_br = c;
            c = d;
            fc = fd;
            d = a_br + invphi * (b_br - a_br);
            fd = eval(d);
        }
        best = std::min(best, std::min(fc, fd));
    }
    return std::min(1.0, std::exp(best));
}

int delay_quantile(const SnrArrival& a, const FadingChannel& ch, double epsilon,
                   const ThetaSearch& s, int max_slots) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("epsilon must be in (0, 1]");
    if (max_slots < 1) throw std::invalid_argument("max_slots must be positive");
    if (delay_violation_bound(a, ch, 0, s) <= epsilon) return 0;
    int lo = 0, hi = 1;
    while (delay_violation_bound(a, ch, hi, s) > epsilon) {
        lo = hi;
        if (hi >= max_slots)
            throw std::runtime_error("delay quantile exceeds the slot cap of " +
                                     std::to_string(max_slots));
        hi = std::min(hi * 2, max_slots);
    }
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (delay_violation_bound(a, ch, mid, s) <= epsilon ? hi : lo) = mid;
    }
    return hi;
}

double SnrEnvelope::eval(double t) const { return std::exp(log_curve(t)); }

SnrEnvelope bit_to_snr(const Curve& c) { return SnrEnvelope{c}; }

}  // namespace ubinc
