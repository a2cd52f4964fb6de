// sim.hpp - Slot-based fluid simulator for validating analytic bounds:
// envelope-conformant sources, FIFO rate-latency and fading servers,
// and verdicts comparing observed delays against bounds.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ubinc/curve.hpp"
#include "ubinc/snr.hpp"

namespace ubinc {

enum class SourcePolicy { greedy, on_off };

// Cumulative arrivals sampled at slot boundaries: cumulative[k] is the
// total after k+1 slots, with zero arrivals before the first slot.
struct SourceTrace {
    std::vector<double> cumulative;  // bits
    SourcePolicy policy;
    std::uint64_t seed;
    double slot_duration;  // seconds
};

// Constant-rate fluid server behind a fixed pipeline delay; the
// canonical tight realization of a rate-latency service. The delay is
// realized in whole slots (rounded down), so the realized server is
// never slower than the modeled one.
struct RateLatencyServer {
    double rate;     // bits per second
    double latency;  // seconds
};

// Serves min(backlog, per-slot capacity) each slot with the capacity
// drawn from the channel model.
struct FadingServer {
    FadingChannel channel;
    std::uint64_t seed;
};

using ServerModel = std::variant<RateLatencyServer, FadingServer>;

struct SimResult {
    std::vector<double> arrivals;    // cumulative bits at slot boundaries
    std::vector<double> departures;  // cumulative bits leaving the last stage
    std::vector<double> delays;      // seconds, one entry per arrival slot
    std::vector<double> distribution;  // delays, sorted ascending
    double max_delay = 0.0;            // seconds
    long slots = 0;                    // arrival slots simulated
    double slot_duration = 0.0;        // seconds
    std::vector<std::uint64_t> seeds;
    bool truncated = false;  // overload cap hit; results are partial
    std::string diagnostic;
};

struct QuantileSpec {
    double w_seconds;
    double epsilon;
};

struct BoundCheck {
    bool pass;
    double observed;
    double limit;
};

struct Verdict {
    bool pass;
    std::optional<BoundCheck> deterministic;
    std::optional<BoundCheck> stochastic;
};

// Greedy emits the envelope itself at slot boundaries (the worst case);
// on-off draws random bursts and clips them to the envelope. The
// envelope must be concave from the origin (token-bucket family).
SourceTrace generate_source(const Curve& envelope, SourcePolicy policy, long slots,
                            std::uint64_t seed, double slot_duration = 1.0);

// Feeds the trace through the servers in order and measures virtual
// delays against the final departures. Simulation continues past the
// last arrival until the queue drains. A backlog beyond backlog_cap
// stops the run early with a diagnostic and partial results.
SimResult run_tandem_sim(const SourceTrace& src, const std::vector<ServerModel>& servers,
                         double slot_duration, double backlog_cap = 1e15);

// Deterministic check allows one slot of quantization; the stochastic
// check allows a 95% binomial confidence margin on the target epsilon.
Verdict validate_bounds(const SimResult& res, std::optional<double> deterministic_bound,
                        std::optional<QuantileSpec> quantile);

}  // namespace ubinc
