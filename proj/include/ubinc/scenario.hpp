// scenario.hpp - Device/BS/cloud topology, end-to-end service delay,
// and parameter sweeps over rates, bursts, and peaks.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ubinc/curve.hpp"
#include "ubinc/snr.hpp"
#include "ubinc/tandem.hpp"

namespace ubinc {

struct WiredLink {
    RateLatency service;
};

struct WirelessLink {
    FadingChannel channel;
};

using LinkModel = std::variant<WiredLink, WirelessLink>;

// Star-of-stars topology: each device talks to exactly one base
// station, each base station to exactly one cloud. A link absent from
// the map is transparent (no transport stage). Wireless links may only
// connect a device to its base station.
struct UbiITopology {
    std::vector<std::string> devices;
    std::vector<std::string> bss;
    std::vector<std::string> clouds;
    std::map<std::string, std::string> device_to_bs;
    std::map<std::string, std::string> bs_to_cloud;
    std::map<std::string, RateLatency> compute;  // node id -> compute server
    std::map<std::pair<std::string, std::string>, LinkModel> links;
    int ubii_level = 4;  // informational deployment label, 1..4
};

using FlowEnvelope = std::variant<TokenBucket, TSpec>;

struct FlowSpec {
    std::string source_device;
    FlowEnvelope uplink;
    FlowEnvelope downlink;
    int rounds = 1;
    std::optional<double> epsilon;  // hybrid mode target violation probability
    double wireless_sigma = 0.0;    // burst allowance of the slotted wireless arrival, bits
};

enum class AnalysisMode { deterministic, hybrid };

std::string to_string(AnalysisMode mode);

struct DelayReport {
    double uplink_s;
    double compute_s;  // stays 0: compute stages sit inside the tandems
    double downlink_s;
    double wireless_quantile_s;  // per direction; 0 in deterministic mode
    double per_round_s;
    double total_s;
    int rounds;
    AnalysisMode mode;
    std::optional<double> epsilon;
};

struct FlowPath {
    Tandem uplink;
    Tandem downlink;
    std::optional<FadingChannel> wireless;  // hybrid mode stochastic hop
};

struct SweepRow {
    double value;
    DelayReport report;
    bool stable;
};

// Every constraint violation with the node ids involved; empty means ok.
std::vector<std::string> validate_topology(const UbiITopology& t);

// Stage order uplink: device compute, access link, BS compute, backhaul
// link, cloud compute; downlink is the exact reverse. In hybrid mode a
// wireless access link leaves the tandem and is returned separately.
FlowPath flow_path(const UbiITopology& t, const FlowSpec& f, AnalysisMode mode);

DelayReport service_delay(const UbiITopology& t, const FlowSpec& f, AnalysisMode mode);

// One row per value; other parameters stay fixed. Unstable rows carry
// infinite bounds instead of aborting the sweep. Parameter paths:
//   node.<id>.rate | node.<id>.latency
//   link.<from>.<to>.rate | link.<from>.<to>.latency
//   flow.uplink.rate | burst | peak | max_packet   (same for downlink)
std::vector<SweepRow> sweep(const UbiITopology& t, const FlowSpec& f, const std::string& param,
                            const std::vector<double>& values, AnalysisMode mode);

}  // namespace ubinc
