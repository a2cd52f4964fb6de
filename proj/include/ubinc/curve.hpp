// curve.hpp - Piecewise-linear curves and the min-plus operations on them.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubinc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when a bound is +inf, i.e. the long-run arrival rate exceeds the
// long-run service rate of the stage being analyzed.
class instability_error : public std::runtime_error {
public:
    explicit instability_error(const std::string& what) : std::runtime_error(what) {}
};

// One affine segment of a curve. The segment holds on [start, next start)
// and the last segment extends to +inf. `value` is the function value at
// `start` and may be +inf (once a curve is infinite it stays infinite).
struct CurveSegment {
    double start = 0.0;   // seconds
    double value = 0.0;   // bits, or +inf
    double slope = 0.0;   // bits/second
};

/*!
 * A non-decreasing piecewise-linear function on [0, inf), the common
 * representation of arrival and service curves.
 *
 * The function is described by its value at t = 0 (`origin_value`) plus an
 * ordered segment list starting at t = 0. Arrival curves may jump at t = 0
 * (the burst: origin_value < segments[0].value); everywhere on (0, inf) the
 * function is continuous except for at most one transition into +inf.
 *
 * Units are seconds and bits throughout; all slopes are bits/second.
 * Curves are immutable after construction and safe to share across threads.
 */
class Curve {
public:
    // Validates all invariants; throws std::invalid_argument on violation.
    Curve(double origin_value, std::vector<CurveSegment> segments);

    Curve() : Curve(0.0, {CurveSegment{0.0, 0.0, 0.0}}) {}

    // Function value at t; t = 0 returns origin_value. Negative t is a
    // domain error.
    double operator()(double t) const;

    // Right-sided limit f(t+). Differs from operator() only at t = 0 when
    // the curve carries a burst.
    double right_limit(double t) const;

    // inf{ t >= 0 : f(t) >= y }, or +inf if the level is never reached.
    double lower_inverse(double y) const;

    double origin_value() const { return origin_; }
    const std::vector<CurveSegment>& segments() const { return segments_; }

    // Slope of the final ray; +inf for curves that become infinite.
    double final_rate() const;

    bool reaches_infinity() const;
    // Start time of the infinite tail, +inf if the curve stays finite.
    double infinity_start() const;

    // Largest segment start time.
    double last_breakpoint() const { return segments_.back().start; }

    static Curve zero();
    // Neutral element of min-plus convolution: 0 at t = 0, +inf after.
    static Curve delta_zero();

private:
    double origin_;
    std::vector<CurveSegment> segments_;
};

// Leaky/token bucket: 0 at t = 0, burst + rate * t for t > 0.
struct TokenBucket {
    double rate;    // bits/second
    double burst;   // bits

    TokenBucket(double rate, double burst);
    Curve curve() const;
};

// Rate-latency service curve: rate * max(0, t - latency).
struct RateLatency {
    double rate;     // bits/second, > 0
    double latency;  // seconds

    RateLatency(double rate, double latency);
    Curve curve() const;
};

// VBR envelope (two tandem leaky buckets): 0 at t = 0,
// min(max_packet + peak * t, burst + rate * t) for t > 0.
struct TSpec {
    double peak;        // bits/second, >= rate
    double max_packet;  // bits, <= burst
    double rate;        // bits/second
    double burst;       // bits

    TSpec(double peak, double max_packet, double rate, double burst);
    Curve curve() const;
};

// Structural recognizers; closed forms below apply whenever these match,
// regardless of how the curve was built.
std::optional<TokenBucket> as_token_bucket(const Curve& c);
std::optional<RateLatency> as_rate_latency(const Curve& c);
std::optional<TSpec> as_tspec(const Curve& c);

// (f (x) g)(t) = inf_{0<=s<=t} [f(s) + g(t-s)]. Closed forms for recognized
// rate-latency and token-bucket pairs, breakpoint algorithm otherwise.
Curve min_plus_conv(const Curve& f, const Curve& g);

// (f (/) g)(t) = sup_{s>=0} [f(t+s) - g(s)], clamped below at 0.
// Throws instability_error when the sup is +inf for every t.
Curve min_plus_deconv(const Curve& f, const Curve& g);

// Breakpoint-merged pointwise minimum.
Curve pointwise_min(const Curve& f, const Curve& g);

// Horizontal deviation h(alpha, beta) = sup_t inf{ d >= 0 : alpha(t) <= beta(t+d) },
// the worst-case delay bound, in seconds. Throws instability_error when the
// long-run rate of alpha exceeds the long-run rate of beta.
double h_dev(const Curve& alpha, const Curve& beta);

// Vertical deviation v(alpha, beta) = sup_t [alpha(t) - beta(t)] clamped at 0,
// the worst-case backlog bound, in bits.
double v_dev(const Curve& alpha, const Curve& beta);

}  // namespace ubinc
