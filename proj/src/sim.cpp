// sim.cpp - Fluid slot simulator and bound validation.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ubinc {

namespace {

// Lines whose minimum reproduces a concave-from-origin envelope; each
// acts as one token bucket in the conformance clip.
struct Line {
    double intercept;  // bits
    double rate;       // bits per second
};

std::vector<Line> envelope_lines(const Curve& c) {
    if (c.origin_value() != 0.0 || c.reaches_infinity())
        throw std::invalid_argument("source envelope must be finite with value 0 at 0");
    const auto& segs = c.segments();
    std::vector<Line> lines;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i > 0) {
            const CurveSegment& p = segs[i - 1];
            double reach = p.value + p.slope * (segs[i].start - p.start);
            if (std::abs(segs[i].value - reach) > 1e-9 * std::max(1.0, reach) ||
                segs[i].slope > p.slope)
                throw std::invalid_argument("source envelope must be concave from the origin");
        }
        lines.push_back({segs[i].value - segs[i].slope * segs[i].start, segs[i].slope});
    }
    return lines;
}

}  // namespace

SourceTrace generate_source(const Curve& envelope, SourcePolicy policy, long slots,
                            std::uint64_t seed, double slot_duration) {
    if (slots < 1) throw std::invalid_argument("need at least one slot");
    if (!(slot_duration > 0.0)) throw std::invalid_argument("slot_duration must be positive");
    std::vector<Line> lines = envelope_lines(envelope);

    SourceTrace out{{}, policy, seed, slot_duration};
    out.cumulative.reserve(static_cast<std::size_t>(slots));
    if (policy == SourcePolicy::greedy) {
        for (long k = 1; k <= slots; ++k)
            out.cumulative.push_back(envelope(static_cast<double>(k) * slot_duration));
        return out;
    }

    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double peak = 0.0;
    for (const Line& l : lines) peak = std::max(peak, l.rate);
    // One token bucket per line; occupancy accounting makes the clip
    // hold over every window, not just those anchored at 0.
    std::vector<double> level;
    for (const Line& l : lines) level.push_back(l.intercept);
    bool on = true;
    double total = 0.0;
    for (long k = 1; k <= slots; ++k) {
        double want = 0.0;
        if (on) want = (0.5 + 2.0 * uni(eng)) * peak * slot_duration;
        on = on ? uni(eng) >= 0.25 : uni(eng) < 0.35;
        double room = kInf;
        for (std::size_t j = 0; j < lines.size(); ++j) {
            level[j] = std::min(lines[j].intercept, level[j] + lines[j].rate * slot_duration);
            room = std::min(room, level[j]);
        }
        double emit = std::max(0.0, std::min(want, room));
        for (double& lv : level) lv -= emit;
        total += emit;
        out.cumulative.push_back(total);
    }
    return out;
}

SimResult run_tandem_sim(const SourceTrace& src, const std::vector<ServerModel>& servers,
                         double slot_duration, double backlog_cap) {
    if (servers.empty()) throw std::invalid_argument("need at least one server");
    if (src.cumulative.empty()) throw std::invalid_argument("empty source trace");
    if (!(slot_duration > 0.0)) throw std::invalid_argument("slot_duration must be positive");
    for (std::size_t i = 1; i < src.cumulative.size(); ++i)
        if (src.cumulative[i] < src.cumulative[i - 1] - 1e-9)
            throw std::invalid_argument("source trace must be non-decreasing");

    const long n = static_cast<long>(src.cumulative.size());
    const long extra_cap = 10 * n + 1000;

    SimResult res;
    res.slots = n;
    res.slot_duration = slot_duration;
    res.seeds.push_back(src.seed);

    // Per-stage cumulative departures at slot boundaries, index = slot.
    std::vector<std::vector<double>> level(servers.size() + 1);
    level[0].push_back(0.0);
    for (std::size_t s = 0; s < servers.size(); ++s) level[s + 1].push_back(0.0);

    struct FadingState {
        std::mt19937_64 eng;
        std::exponential_distribution<double> exp;
    };
    std::vector<FadingState> fading(servers.size());
    // Pipeline latencies are realized in whole slots, rounded down, so
    // every stage handoff lands exactly on a slot boundary. The realized
    // chain is never slower than the modeled one, hence bounds computed
    // for the modeled latencies still apply.
    std::vector<long> shift_slots(servers.size(), 0);
    for (std::size_t s = 0; s < servers.size(); ++s) {
        if (const auto* f = std::get_if<FadingServer>(&servers[s])) {
            fading[s].eng.seed(f->seed);
            if (const auto* r = std::get_if<RayleighSnr>(&f->channel.snr))
                fading[s].exp = std::exponential_distribution<double>(1.0 / r->mean);
            res.seeds.push_back(f->seed);
        } else {
            double lat = std::get<RateLatencyServer>(servers[s]).latency;
            shift_slots[s] = static_cast<long>(std::floor(lat / slot_duration + 1e-9));
        }
    }

    const double arrived_total = src.cumulative.back();
    long k = 0;
    while (true) {
        ++k;
        double a = k <= n ? src.cumulative[static_cast<std::size_t>(k - 1)] : arrived_total;
        level[0].push_back(a);
        for (std::size_t s = 0; s < servers.size(); ++s) {
            const std::vector<double>& in = level[s];
            std::vector<double>& out = level[s + 1];
            double d_prev = out.back();
            double d;
            if (const auto* rl = std::get_if<RateLatencyServer>(&servers[s])) {
                double fed = k >= shift_slots[s]
                                 ? in[static_cast<std::size_t>(k - shift_slots[s])]
                                 : 0.0;
                d = std::min(fed, d_prev + rl->rate * slot_duration);
            } else {
                const auto& f = std::get<FadingServer>(servers[s]);
                double gamma;
                if (const auto* cs = std::get_if<ConstantSnr>(&f.channel.snr))
                    gamma = cs->gamma;
                else
                    gamma = fading[s].exp(fading[s].eng);
                double cap_bits = f.channel.symbols_per_slot * std::log1p(gamma);
                d = std::min(in[static_cast<std::size_t>(k)], d_prev + cap_bits);
            }
            out.push_back(std::max(d, d_prev));
        }

        double backlog = a - level.back().back();
        if (backlog > backlog_cap) {
            res.truncated = true;
            res.diagnostic = "backlog exceeded cap after slot " + std::to_string(k);
            break;
        }
        if (k >= n && level.back().back() >= arrived_total - 1e-9) break;
        if (k - n >= extra_cap) {
            res.truncated = true;
            res.diagnostic = "queue failed to drain within the extension window";
            break;
        }
    }

    res.arrivals = level.front();
    res.departures = level.back();

    // Virtual delay per arrival slot: first boundary where cumulative
    // departures reach that slot's arrivals.
    const std::vector<double>& dep = res.departures;
    std::size_t j = 0;
    for (long t = 1; t <= n; ++t) {
        double target = res.arrivals[static_cast<std::size_t>(t)];
        double tol = 1e-9 * std::max(1.0, target);
        if (j < static_cast<std::size_t>(t)) j = static_cast<std::size_t>(t);
        while (j < dep.size() && dep[j] < target - tol) ++j;
        if (j == dep.size()) break;  // unresolved tail of a truncated run
        res.delays.push_back(static_cast<double>(j - static_cast<std::size_t>(t)) *
                             slot_duration);
    }
    res.distribution = res.delays;
    std::sort(res.distribution.begin(), res.distribution.end());
    res.max_delay = res.distribution.empty() ? 0.0 : res.distribution.back();
    return res;
}

Verdict validate_bounds(const SimResult& res, std::optional<double> deterministic_bound,
                        std::optional<QuantileSpec> quantile) {
    if (!deterministic_bound && !quantile)
        throw std::invalid_argument("need at least one bound to validate");
    Verdict v{true, std::nullopt, std::nullopt};
    if (deterministic_bound) {
        double limit = *deterministic_bound + res.slot_duration;
        v.deterministic = BoundCheck{res.max_delay <= limit, res.max_delay, limit};
        v.pass = v.pass && v.deterministic->pass;
    }
    if (quantile) {
        auto n = static_cast<double>(res.distribution.size());
        if (n == 0.0) throw std::invalid_argument("no delay samples to validate");
        auto over = res.distribution.end() -
                    std::upper_bound(res.distribution.begin(), res.distribution.end(),
                                     quantile->w_seconds);
        double freq = static_cast<double>(over) / n;
        double limit = quantile->epsilon +
                       1.96 * std::sqrt(quantile->epsilon * (1.0 - quantile->epsilon) / n);
        v.stochastic = BoundCheck{freq <= limit, freq, limit};
        v.pass = v.pass && v.stochastic->pass;
    }
    if (res.truncated) v.pass = false;
    return v;
}

}  // namespace ubinc
