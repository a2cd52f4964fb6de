// tandem.cpp - Deterministic analysis of a chain of rate-latency servers.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/tandem.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace ubinc {

std::string to_string(NodeRole role) {
    switch (role) {
        case NodeRole::device: return "device";
        case NodeRole::bs: return "bs";
        case NodeRole::cloud: return "cloud";
        case NodeRole::compute: return "compute";
        case NodeRole::backhaul: return "backhaul";
    }
    throw std::invalid_argument("unknown node role");
}

Tandem::Tandem(std::vector<TandemNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("tandem needs at least one node");
}

namespace {

// An arrival envelope only constrains windows of positive length, so its
// value at 0 can be pinned to zero without changing any bound. Deconvolved
// envelopes otherwise carry their supremum as the origin value.
Curve as_arrival(const Curve& c) {
    if (c.origin_value() == 0.0) return c;
    return Curve(0.0, std::vector<CurveSegment>(c.segments().begin(), c.segments().end()));
}

}  // namespace

RateLatency e2e_service_curve(const Tandem& tandem) {
    double rate = tandem.nodes().front().service.rate;
    double latency = 0.0;
    for (const TandemNode& node : tandem.nodes()) {
        rate = std::min(rate, node.service.rate);
        latency += node.service.latency;
    }
    return RateLatency(rate, latency);
}

double case1_delay(const TokenBucket& tb, const Tandem& tandem) {
    return h_dev(tb.curve(), e2e_service_curve(tandem).curve());
}

double case2_delay(const TSpec& ts, const Tandem& tandem) {
    return h_dev(ts.curve(), e2e_service_curve(tandem).curve());
}

std::vector<NodeAnalysis> per_node_analysis(const Curve& alpha, const Tandem& tandem) {
    std::vector<NodeAnalysis> out;
    out.reserve(tandem.size());
    // Upstream service seen before hop k; convolving rate-latency nodes
    // keeps the bottleneck rate and accumulates latency.
    double up_rate = 0.0;
    double up_latency = 0.0;
    for (std::size_t k = 0; k < tandem.size(); ++k) {
        const TandemNode& node = tandem.nodes()[k];
        try {
            Curve input = k == 0
                              ? alpha
                              : as_arrival(min_plus_deconv(
                                    alpha, RateLatency(up_rate, up_latency).curve()));
            Curve beta = node.service.curve();
            double delay = h_dev(input, beta);
            double backlog = v_dev(input, beta);
            Curve output = as_arrival(min_plus_deconv(input, beta));
            out.push_back(
                NodeAnalysis{k, std::move(input), delay, backlog, std::move(output)});
        } catch (const instability_error& e) {
            throw instability_error("node " + std::to_string(k) + " (" + to_string(node.role) +
                                    "): " + e.what());
        }
        up_rate = k == 0 ? node.service.rate : std::min(up_rate, node.service.rate);
        up_latency += node.service.latency;
    }
    return out;
}

}  // namespace ubinc
