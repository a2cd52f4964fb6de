// tandem.hpp - Series composition of rate-latency servers and the
// deterministic delay bounds that fall out of it.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ubinc/curve.hpp"

namespace ubinc {

enum class NodeRole { device, bs, cloud, compute, backhaul };

std::string to_string(NodeRole role);

struct TandemNode {
    NodeRole role;
    RateLatency service;
};

// An ordered chain of FIFO servers traversed by a single flow.
class Tandem {
  public:
    explicit Tandem(std::vector<TandemNode> nodes);

    const std::vector<TandemNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

  private:
    std::vector<TandemNode> nodes_;
};

// Per-hop report for one node. The input envelope of hop k is the flow
// envelope deconvolved by the combined service of hops 0..k-1.
struct NodeAnalysis {
    std::size_t index;
    Curve input_envelope;
    double delay_bound;
    double backlog_bound;
    Curve output_envelope;
};

// The series service curve: rate-latency again, with the bottleneck
// rate and the summed latencies.
RateLatency e2e_service_curve(const Tandem& tandem);

// Delay bound for token-bucket traffic through the whole chain.
double case1_delay(const TokenBucket& tb, const Tandem& tandem);

// Delay bound for peak-rate-limited (dual bucket) traffic.
double case2_delay(const TSpec& ts, const Tandem& tandem);

// Hop-by-hop bounds. Summing the per-hop delays is valid but looser
// than the end-to-end bound: every hop pays for the burst again.
std::vector<NodeAnalysis> per_node_analysis(const Curve& alpha, const Tandem& tandem);

}  // namespace ubinc
