// curve.cpp - Piecewise-linear curve algebra.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/curve.hpp"

#include <algorithm>
#include <cmath>

namespace ubinc {

namespace {

// Relative tolerance used when stitching segment joins back together.
constexpr double kJoinTol = 1e-9;
// Tolerance for merging near-identical breakpoint candidates.
constexpr double kMergeTol = 1e-12;

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

Curve::Curve(double origin_value, std::vector<CurveSegment> segments)
    : origin_(origin_value), segments_(std::move(segments)) {
    if (segments_.empty())
        throw std::invalid_argument("curve needs at least one segment");
    if (std::isnan(origin_) || origin_ < 0.0 || origin_ == kInf)
        throw std::invalid_argument("curve value at 0 must be finite and non-negative");
    if (segments_.front().start != 0.0)
        throw std::invalid_argument("first segment must start at t = 0");

    std::size_t first_inf = segments_.size();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const CurveSegment& s = segments_[i];
        if (!std::isfinite(s.start) || s.start < 0.0)
            throw std::invalid_argument("segment starts must be finite and non-negative");
        if (i > 0 && s.start <= segments_[i - 1].start)
            throw std::invalid_argument("segment starts must be strictly increasing");
        if (std::isnan(s.value) || s.value < 0.0)
            throw std::invalid_argument("segment values must be non-negative");
        if (s.value == kInf) {
            if (first_inf == segments_.size()) first_inf = i;
        } else {
            if (first_inf < i)
                throw std::invalid_argument("curve cannot return from infinity");
            if (!std::isfinite(s.slope) || s.slope < 0.0)
                throw std::invalid_argument("segment slopes must be finite and non-negative");
        }
    }
    if (first_inf < segments_.size()) {
        segments_.resize(first_inf + 1);
        segments_.back().slope = 0.0;
    }

    // Stitch joins: snap values that are continuous up to rounding, keep
    // genuine upward jumps, reject any decrease.
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        const CurveSegment& p = segments_[i - 1];
        if (segments_[i].value == kInf) break;
        double expected = p.value + p.slope * (segments_[i].start - p.start);
        if (close_rel(segments_[i].value, expected, kJoinTol))
            segments_[i].value = expected;
        else if (segments_[i].value < expected)
            throw std::invalid_argument("curve must be non-decreasing");
    }
    if (origin_ > segments_.front().value) {
        if (close_rel(origin_, segments_.front().value, kJoinTol))
            origin_ = segments_.front().value;
        else
            throw std::invalid_argument("value at 0 must not exceed the right limit at 0");
    }

    // Merge segments that continue the same line.
    std::vector<CurveSegment> merged;
    merged.reserve(segments_.size());
    for (const CurveSegment& s : segments_) {
        if (!merged.empty()) {
            const CurveSegment& p = merged.back();
            if (p.value != kInf && s.value != kInf && p.slope == s.slope &&
                s.value == p.value + p.slope * (s.start - p.start))
                continue;
        }
        merged.push_back(s);
    }
    segments_ = std::move(merged);
}

namespace {

std::size_t segment_index(const std::vector<CurveSegment>& segs, double t) {
    auto it = std::upper_bound(segs.begin(), segs.end(), t,
                               [](double x, const CurveSegment& s) { return x < s.start; });
    return static_cast<std::size_t>(it - segs.begin()) - 1;
}

}  // namespace

double Curve::operator()(double t) const {
    if (std::isnan(t) || t < 0.0)
        throw std::invalid_argument("curve evaluated outside [0, inf)");
    if (t == 0.0) return origin_;
    const CurveSegment& s = segments_[segment_index(segments_, t)];
    if (s.value == kInf) return kInf;
    return s.value + s.slope * (t - s.start);
}

double Curve::right_limit(double t) const {
    if (std::isnan(t) || t < 0.0)
        throw std::invalid_argument("curve evaluated outside [0, inf)");
    if (t == 0.0) return segments_.front().value;
    return (*this)(t);
}

double Curve::lower_inverse(double y) const {
    if (y <= origin_) return 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const CurveSegment& s = segments_[i];
        if (y <= s.value) return s.start;  // also catches value == inf
        bool last = i + 1 == segments_.size();
        double end = last ? kInf : segments_[i + 1].start;
        if (s.slope > 0.0) {
            double t = s.start + (y - s.value) / s.slope;
            if (t <= end) return t;
        }
    }
    return kInf;
}

double Curve::final_rate() const {
    const CurveSegment& s = segments_.back();
    return s.value == kInf ? kInf : s.slope;
}

bool Curve::reaches_infinity() const { return segments_.back().value == kInf; }

double Curve::infinity_start() const {
    return reaches_infinity() ? segments_.back().start : kInf;
}

Curve Curve::zero() { return Curve(0.0, {CurveSegment{0.0, 0.0, 0.0}}); }

Curve Curve::delta_zero() { return Curve(0.0, {CurveSegment{0.0, kInf, 0.0}}); }

TokenBucket::TokenBucket(double rate_, double burst_) : rate(rate_), burst(burst_) {
    if (!std::isfinite(rate) || rate < 0.0)
        throw std::invalid_argument("token bucket rate must be finite and non-negative");
    if (!std::isfinite(burst) || burst < 0.0)
        throw std::invalid_argument("token bucket burst must be finite and non-negative");
}

Curve TokenBucket::curve() const {
    return Curve(0.0, {CurveSegment{0.0, burst, rate}});
}

RateLatency::RateLatency(double rate_, double latency_) : rate(rate_), latency(latency_) {
    if (!std::isfinite(rate) || rate <= 0.0)
        throw std::invalid_argument("service rate must be finite and positive");
    if (!std::isfinite(latency) || latency < 0.0)
        throw std::invalid_argument("service latency must be finite and non-negative");
}

Curve RateLatency::curve() const {
    if (latency == 0.0)
        return Curve(0.0, {CurveSegment{0.0, 0.0, rate}});
    return Curve(0.0, {CurveSegment{0.0, 0.0, 0.0}, CurveSegment{latency, 0.0, rate}});
}

TSpec::TSpec(double peak_, double max_packet_, double rate_, double burst_)
    : peak(peak_), max_packet(max_packet_), rate(rate_), burst(burst_) {
    if (!std::isfinite(peak) || !std::isfinite(max_packet) || !std::isfinite(rate) ||
        !std::isfinite(burst) || peak < 0.0 || max_packet < 0.0 || rate < 0.0 || burst < 0.0)
        throw std::invalid_argument("tspec parameters must be finite and non-negative");
    if (peak < rate)
        throw std::invalid_argument("tspec peak rate must be at least the sustained rate");
    if (burst < max_packet)
        throw std::invalid_argument("tspec burst must be at least the packet bound");
}

Curve TSpec::curve() const {
    if (peak == rate || burst == max_packet)
        return Curve(0.0, {CurveSegment{0.0, max_packet, rate}});
    double knee = (burst - max_packet) / (peak - rate);
    return Curve(0.0, {CurveSegment{0.0, max_packet, peak},
                       CurveSegment{knee, max_packet + peak * knee, rate}});
}

std::optional<TokenBucket> as_token_bucket(const Curve& c) {
    if (c.origin_value() != 0.0) return std::nullopt;
    const auto& segs = c.segments();
    if (segs.size() != 1 || segs[0].value == kInf) return std::nullopt;
    return TokenBucket(segs[0].slope, segs[0].value);
}

std::optional<RateLatency> as_rate_latency(const Curve& c) {
    if (c.origin_value() != 0.0) return std::nullopt;
    const auto& segs = c.segments();
    if (segs.size() == 1 && segs[0].value == 0.0 && segs[0].slope > 0.0)
        return RateLatency(segs[0].slope, 0.0);
    if (segs.size() == 2 && segs[0].value == 0.0 && segs[0].slope == 0.0 &&
        segs[1].value == 0.0 && segs[1].slope > 0.0)
        return RateLatency(segs[1].slope, segs[1].start);
    return std::nullopt;
}

std::optional<TSpec> as_tspec(const Curve& c) {
    if (c.origin_value() != 0.0) return std::nullopt;
    const auto& segs = c.segments();
    if (segs.size() == 1 && segs[0].value != kInf)
        return TSpec(segs[0].slope, segs[0].value, segs[0].slope, segs[0].value);
    if (segs.size() == 2 && segs[1].value != kInf && segs[0].slope > segs[1].slope &&
        segs[1].value == segs[0].value + segs[0].slope * segs[1].start) {
        double burst = segs[1].value - segs[1].slope * segs[1].start;
        return TSpec(segs[0].slope, segs[0].value, segs[1].slope, burst);
    }
    return std::nullopt;
}

namespace {

bool is_delta_zero(const Curve& c) {
    return c.origin_value() == 0.0 && c.segments().size() == 1 &&
           c.segments()[0].value == kInf;
}

bool is_finite(const Curve& c) { return !c.reaches_infinity(); }

bool is_concave_from_zero(const Curve& c) {
    if (c.origin_value() != 0.0 || !is_finite(c)) return false;
    const auto& segs = c.segments();
    for (std::size_t i = 1; i < segs.size(); ++i) {
        if (segs[i].slope > segs[i - 1].slope) return false;
        if (segs[i].value != segs[i - 1].value +
                                 segs[i - 1].slope * (segs[i].start - segs[i - 1].start))
            return false;  // interior jump
    }
    return true;
}

bool is_finite_convex(const Curve& c) {
    if (!is_finite(c)) return false;
    const auto& segs = c.segments();
    if (c.origin_value() != segs[0].value) return false;
    for (std::size_t i = 1; i < segs.size(); ++i) {
        if (segs[i].slope < segs[i - 1].slope) return false;
        if (segs[i].value != segs[i - 1].value +
                                 segs[i - 1].slope * (segs[i].start - segs[i - 1].start))
            return false;
    }
    return true;
}

// One affine contribution to an envelope, defined on [lo, hi].
struct EnvPiece {
    double lo, hi;
    double v0, slope;  // value at lo
    bool open_right;   // hi itself excluded from the domain

    double at(double x) const { return v0 + slope * (x - lo); }
    bool covers(double x) const {
        if (x < lo || x > hi) return false;
        if (open_right && x == hi) return false;
        return true;
    }
};

struct FinitePiece {
    double lo, hi;  // hi = next breakpoint, infinity transition, or +inf
    double v0, slope;

    double at(double x) const { return v0 + slope * (x - lo); }
};

// The finite affine pieces of a curve, closed on both ends. At an infinity
// transition the last piece carries the left limit, which is exactly the
// closure needed when the pieces feed an inf/sup over decompositions.
std::vector<FinitePiece> finite_pieces(const Curve& c) {
    std::vector<FinitePiece> out;
    const auto& segs = c.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].value == kInf) break;
        double hi = (i + 1 < segs.size()) ? segs[i + 1].start : kInf;
        out.push_back({segs[i].start, hi, segs[i].value, segs[i].slope});
    }
    return out;
}

// The same pieces half-open on the right, i.e. the curve's true graph on
// (0, inf). Used where a piece stands for the curve itself rather than for
// the closure of a decomposition range.
void add_own_pieces(std::vector<EnvPiece>& env, const Curve& c, double shift) {
    const auto& segs = c.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].value == kInf) break;
        bool last = i + 1 == segs.size();
        double hi = last ? kInf : segs[i + 1].start;
        env.push_back({segs[i].start, hi, segs[i].value + shift, segs[i].slope, !last});
    }
}

struct Envelope {
    std::vector<EnvPiece> pieces;

    void add(double lo, double hi, double v0, double slope, bool open_right = false) {
        if (hi < lo) return;
        if (hi == lo && open_right) return;
        pieces.push_back({lo, hi, v0, slope, open_right});
    }

    double value_at0(bool lower) const {
        double best = lower ? kInf : -kInf;
        for (const EnvPiece& p : pieces) {
            if (!p.covers(0.0)) continue;
            double v = p.at(0.0);
            best = lower ? std::min(best, v) : std::max(best, v);
        }
        return best;
    }

    // Sweep the candidate breakpoints and pick the winning piece on each
    // interval. Past the covered range the result is +inf (a lower envelope
    // of decompositions has none left); `truncate_at` forces the infinite
    // tail earlier.
    std::vector<CurveSegment> sweep(bool lower, double truncate_at) const {
        if (pieces.empty()) return {CurveSegment{0.0, kInf, 0.0}};
        std::vector<double> xs;
        xs.push_back(0.0);
        double cover_hi = -kInf;
        for (const EnvPiece& p : pieces) {
            if (p.lo > 0.0) xs.push_back(p.lo);
            if (p.hi != kInf && p.hi > 0.0) xs.push_back(p.hi);
            cover_hi = std::max(cover_hi, p.hi);
        }
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            for (std::size_t j = i + 1; j < pieces.size(); ++j) {
                const EnvPiece& a = pieces[i];
                const EnvPiece& b = pieces[j];
                double dk = a.slope - b.slope;
                if (dk == 0.0) continue;
                double x = ((b.v0 - b.slope * b.lo) - (a.v0 - a.slope * a.lo)) / dk;
                if (!std::isfinite(x)) continue;
                double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
                if (x > lo && x < hi && x > 0.0) xs.push_back(x);
            }
        }
        double end = std::min(cover_hi, truncate_at);
        if (end != kInf) xs.push_back(end);
        std::sort(xs.begin(), xs.end());
        std::vector<double> cand;
        for (double x : xs) {
            if (x < 0.0 || x > end) continue;
            if (!cand.empty() && x - cand.back() <= kMergeTol * std::max(1.0, std::fabs(x)))
                continue;
            cand.push_back(x);
        }

        std::vector<CurveSegment> out;
        std::size_t n = cand.size();
        bool unbounded = end == kInf;
        std::size_t intervals = unbounded ? n : n - 1;
        for (std::size_t k = 0; k < intervals; ++k) {
            double x0 = cand[k];
            double mid = (k + 1 < n) ? 0.5 * (x0 + cand[k + 1]) : x0 + 1.0;
            const EnvPiece* win = nullptr;
            double win_v = 0.0;
            for (const EnvPiece& p : pieces) {
                if (!p.covers(mid)) continue;
                double v = p.at(mid);
                if (!win || (lower ? v < win_v : v > win_v) ||
                    (v == win_v && (lower ? p.slope < win->slope : p.slope > win->slope))) {
                    win = &p;
                    win_v = v;
                }
            }
            if (!win) {
                if (lower) {  // ran out of decompositions: infinite from here on
                    out.push_back({x0, kInf, 0.0});
                    return out;
                }
                throw std::logic_error("envelope has an uncovered interval");
            }
            out.push_back({x0, win->at(x0), win->slope});
        }
        if (!unbounded) out.push_back({end, kInf, 0.0});
        return out;
    }
};

// Clamp an assembled non-decreasing segment chain below at zero.
std::vector<CurveSegment> clamp_at_zero(std::vector<CurveSegment> segs) {
    std::vector<CurveSegment> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CurveSegment s = segs[i];
        if (s.value == kInf || s.value >= 0.0) {
            out.push_back(s);
            continue;
        }
        double end = (i + 1 < segs.size()) ? segs[i + 1].start : kInf;
        double reach = (end == kInf) ? kInf : s.value + s.slope * (end - s.start);
        if (reach <= 0.0 || s.slope == 0.0) {
            out.push_back({s.start, 0.0, 0.0});
            continue;
        }
        double cross = s.start - s.value / s.slope;
        out.push_back({s.start, 0.0, 0.0});
        if (cross < end) out.push_back({cross, 0.0, s.slope});
    }
    return out;
}

Curve conv_convex(const Curve& f, const Curve& g) {
    struct Leg {
        double len, slope;
    };
    std::vector<Leg> legs;
    for (const Curve* c : {&f, &g}) {
        const auto& segs = c->segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            double len = (i + 1 < segs.size()) ? segs[i + 1].start - segs[i].start : kInf;
            legs.push_back({len, segs[i].slope});
        }
    }
    std::stable_sort(legs.begin(), legs.end(),
                     [](const Leg& a, const Leg& b) { return a.slope < b.slope; });
    double v = f.origin_value() + g.origin_value();
    double t = 0.0;
    std::vector<CurveSegment> segs;
    for (const Leg& l : legs) {
        segs.push_back({t, v, l.slope});
        if (l.len == kInf) break;
        t += l.len;
        v += l.slope * l.len;
    }
    return Curve(f.origin_value() + g.origin_value(), std::move(segs));
}

Curve conv_generic(const Curve& f, const Curve& g) {
    Envelope env;
    auto fp = finite_pieces(f);
    auto gp = finite_pieces(g);
    for (const FinitePiece& a : fp) {
        for (const FinitePiece& c : gp) {
            // inf over s + u = t: walk the smaller slope first
            const FinitePiece& lo_leg = (a.slope <= c.slope) ? a : c;
            const FinitePiece& hi_leg = (a.slope <= c.slope) ? c : a;
            double start = a.lo + c.lo;
            double v0 = a.v0 + c.v0;
            if (lo_leg.hi == kInf) {
                env.add(start, kInf, v0, lo_leg.slope);
                continue;
            }
            double knee = start + (lo_leg.hi - lo_leg.lo);
            env.add(start, knee, v0, lo_leg.slope);
            double v1 = v0 + lo_leg.slope * (knee - start);
            double hi = (hi_leg.hi == kInf) ? kInf : knee + (hi_leg.hi - hi_leg.lo);
            env.add(knee, hi, v1, hi_leg.slope);
        }
    }
    // Decompositions pinned to either origin: f(0) + g(t) and f(t) + g(0).
    add_own_pieces(env.pieces, g, f.origin_value());
    add_own_pieces(env.pieces, f, g.origin_value());

    double origin = f.origin_value() + g.origin_value();
    return Curve(origin, env.sweep(/*lower=*/true, kInf));
}

}  // namespace

Curve min_plus_conv(const Curve& f, const Curve& g) {
    if (is_delta_zero(f)) return g;
    if (is_delta_zero(g)) return f;
    auto rf = as_rate_latency(f);
    auto rg = as_rate_latency(g);
    if (rf && rg)
        return RateLatency(std::min(rf->rate, rg->rate), rf->latency + rg->latency).curve();
    if (is_concave_from_zero(f) && is_concave_from_zero(g)) return pointwise_min(f, g);
    if (is_finite_convex(f) && is_finite_convex(g)) return conv_convex(f, g);
    return conv_generic(f, g);
}

Curve min_plus_deconv(const Curve& f, const Curve& g) {
    if (is_delta_zero(g)) return f;
    bool f_inf = f.reaches_infinity();
    bool g_inf = g.reaches_infinity();
    if (f_inf && !g_inf)
        throw instability_error(
            "deconvolution diverges: numerator becomes infinite while divisor stays finite");
    if (!f_inf && !g_inf && f.final_rate() > g.final_rate())
        throw instability_error(
            "deconvolution diverges: numerator rate exceeds divisor rate");
    double truncate_at = kInf;
    if (f_inf && g_inf) {
        truncate_at = f.infinity_start() - g.infinity_start();
        if (truncate_at < 0.0)
            throw instability_error("deconvolution diverges everywhere");
    }

    if (auto tb = as_token_bucket(f)) {
        if (auto rl = as_rate_latency(g)) {
            double v = tb->burst + tb->rate * rl->latency;
            return Curve(v, {CurveSegment{0.0, v, tb->rate}});
        }
    }

    Envelope env;
    auto fp = finite_pieces(f);
    auto gp = finite_pieces(g);
    for (const FinitePiece& a : fp) {
        for (const FinitePiece& c : gp) {
            // sup over s >= 0 of f(t + s) - g(s) restricted to piece a x c
            if (a.slope >= c.slope) {
                // push s toward min(c.hi, a.hi - t)
                if (c.hi == kInf) {
                    if (a.hi == kInf) {
                        if (a.slope > c.slope) continue;  // excluded by the rate check
                        // equal slopes: the shift s drops out of the value
                        env.add(0.0, kInf, a.at(a.lo) - c.at(a.lo), a.slope);
                    } else {
                        double hi = a.hi - c.lo;
                        if (hi < 0.0) continue;
                        env.add(0.0, hi, a.at(a.hi) - c.at(a.hi), c.slope);
                    }
                    continue;
                }
                double lo1 = std::max(0.0, a.lo - c.hi);
                double hi1 = (a.hi == kInf) ? kInf : a.hi - c.hi;
                if (hi1 >= lo1)
                    env.add(lo1, hi1, a.at(lo1 + c.hi) - c.at(c.hi), a.slope);
                if (a.hi != kInf) {
                    double lo2 = std::max(0.0, a.hi - c.hi);
                    double hi2 = a.hi - c.lo;
                    if (hi2 >= lo2)
                        env.add(lo2, hi2, a.at(a.hi) - c.at(a.hi - lo2), c.slope);
                }
            } else {
                // push s toward max(c.lo, a.lo - t)
                double lo1 = (c.hi == kInf) ? 0.0 : std::max(0.0, a.lo - c.hi);
                double hi1 = a.lo - c.lo;
                if (hi1 >= lo1)
                    env.add(lo1, hi1, a.at(a.lo) - c.at(a.lo - lo1), c.slope);
                double lo2 = std::max(0.0, a.lo - c.lo);
                double hi2 = (a.hi == kInf) ? kInf : a.hi - c.lo;
                if (hi2 >= lo2)
                    env.add(lo2, hi2, a.at(lo2 + c.lo) - c.at(c.lo), a.slope);
            }
        }
    }
    // The value at 0 mixes the exact s = 0 term with limits of the diagonal
    // pairs; the s = 0 family's tiles carry f(0+) and must stay out of it.
    double origin = std::max(f.origin_value() - g.origin_value(), env.value_at0(false));
    origin = std::max(0.0, origin);
    add_own_pieces(env.pieces, f, -g.origin_value());
    auto segs = clamp_at_zero(env.sweep(/*lower=*/false, truncate_at));
    return Curve(origin, std::move(segs));
}

Curve pointwise_min(const Curve& f, const Curve& g) {
    Envelope env;
    add_own_pieces(env.pieces, f, 0.0);
    add_own_pieces(env.pieces, g, 0.0);
    double origin = std::min(f.origin_value(), g.origin_value());
    return Curve(origin, env.sweep(/*lower=*/true, kInf));
}

namespace {

// Left-sided limit f(t-); f(0-) is taken as f(0).
double eval_left(const Curve& c, double t) {
    if (t <= 0.0) return c.origin_value();
    const auto& segs = c.segments();
    auto it = std::lower_bound(segs.begin(), segs.end(), t,
                               [](const CurveSegment& s, double x) { return s.start < x; });
    std::size_t i = static_cast<std::size_t>(it - segs.begin());
    if (i == 0) return c.origin_value();
    const CurveSegment& s = segs[i - 1];
    if (s.value == kInf) return kInf;
    return s.value + s.slope * (t - s.start);
}

// Largest t with f(t) <= y; nullopt when f(0) > y, +inf when f never
// exceeds y.
std::optional<double> upper_inverse(const Curve& c, double y) {
    if (c.origin_value() > y) return std::nullopt;
    double best = 0.0;
    const auto& segs = c.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const CurveSegment& s = segs[i];
        if (s.value > y) break;  // non-decreasing: nothing further qualifies
        bool last = i + 1 == segs.size();
        double end = last ? kInf : segs[i + 1].start;
        if (s.slope == 0.0) {
            best = end;
        } else {
            double t = s.start + (y - s.value) / s.slope;
            if (t < end) return t;
            best = end;
        }
    }
    return best;
}

// Largest value the curve attains, +inf if unbounded.
double sup_value(const Curve& c) {
    if (c.reaches_infinity() || c.final_rate() > 0.0) return kInf;
    return c.segments().back().value;
}

}  // namespace

double h_dev(const Curve& alpha, const Curve& beta) {
    if (auto rl = as_rate_latency(beta)) {
        if (auto tb = as_token_bucket(alpha)) {
            if (tb->rate > rl->rate)
                throw instability_error("delay bound diverges: arrival rate exceeds service rate");
            return rl->latency + tb->burst / rl->rate;
        }
        if (auto ts = as_tspec(alpha)) {
            if (ts->rate > rl->rate)
                throw instability_error("delay bound diverges: arrival rate exceeds service rate");
            if (ts->peak > rl->rate) {
                double mid = ts->max_packet + (ts->burst - ts->max_packet) *
                                                  (ts->peak - rl->rate) / (ts->peak - ts->rate);
                return rl->latency + mid / rl->rate;
            }
            return rl->latency + ts->max_packet / rl->rate;
        }
    }

    bool a_inf = alpha.reaches_infinity();
    bool b_inf = beta.reaches_infinity();
    if (a_inf && !b_inf)
        throw instability_error("delay bound diverges: arrivals become infinite, service stays finite");
    if (!a_inf && !b_inf) {
        if (alpha.final_rate() > beta.final_rate())
            throw instability_error("delay bound diverges: arrival rate exceeds service rate");
        if (sup_value(alpha) > sup_value(beta))
            throw instability_error("delay bound diverges: arrivals exceed total service");
    }

    std::vector<double> cands;
    cands.push_back(0.0);
    for (const CurveSegment& s : alpha.segments()) cands.push_back(s.start);
    for (const CurveSegment& s : beta.segments()) {
        if (s.value == kInf) continue;
        double t = alpha.lower_inverse(s.value);
        if (t != kInf) cands.push_back(t);
    }

    double h = 0.0;
    auto consider = [&](double t, double y) {
        if (y == kInf) {
            h = std::max(h, std::max(0.0, beta.infinity_start() - t));
            return;
        }
        double d = beta.lower_inverse(y) - t;
        if (d > h) h = d;
    };
    for (double t : cands) {
        consider(t, eval_left(alpha, t));
        consider(t, alpha(t));
        consider(t, alpha.right_limit(t));
    }
    // A flat stretch of beta pushes the delay of anything arriving just above
    // its level to the far end of the stretch.
    const auto& bsegs = beta.segments();
    for (std::size_t j = 0; j + 1 < bsegs.size(); ++j) {
        if (bsegs[j].value == kInf || bsegs[j].slope != 0.0) continue;
        double level_end = bsegs[j + 1].start;
        auto t_bar = upper_inverse(alpha, bsegs[j].value);
        if (t_bar && *t_bar != kInf) h = std::max(h, level_end - *t_bar);
    }
    return h;
}

double v_dev(const Curve& alpha, const Curve& beta) {
    if (auto rl = as_rate_latency(beta)) {
        if (auto tb = as_token_bucket(alpha)) {
            if (tb->rate > rl->rate)
                throw instability_error("backlog bound diverges: arrival rate exceeds service rate");
            return tb->burst + tb->rate * rl->latency;
        }
    }

    bool a_inf = alpha.reaches_infinity();
    bool b_inf = beta.reaches_infinity();
    if (a_inf && (!b_inf || beta.infinity_start() > alpha.infinity_start()))
        throw instability_error("backlog bound diverges: arrivals become infinite before service");
    if (!a_inf && !b_inf && alpha.final_rate() > beta.final_rate())
        throw instability_error("backlog bound diverges: arrival rate exceeds service rate");

    std::vector<double> cands;
    cands.push_back(0.0);
    for (const CurveSegment& s : alpha.segments()) cands.push_back(s.start);
    for (const CurveSegment& s : beta.segments()) cands.push_back(s.start);

    double v = 0.0;
    auto consider = [&](double a, double b) {
        if (b == kInf) return;
        double d = a - b;  // a == inf cannot occur here: it would imply b == inf
        if (d > v) v = d;
    };
    for (double t : cands) {
        consider(eval_left(alpha, t), eval_left(beta, t));
        consider(alpha(t), beta(t));
        consider(alpha.right_limit(t), beta.right_limit(t));
    }
    return v;
}

}  // namespace ubinc
