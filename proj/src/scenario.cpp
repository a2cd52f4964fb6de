// scenario.cpp - Topology validation, flow path assembly, and the
// end-to-end delay report built on the tandem and fading analyses.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ubinc {

namespace {

template <typename Map>
bool contains(const Map& m, const typename Map::key_type& k) {
    return m.find(k) != m.end();
}

bool is_node(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(s);
    while (std::getline(in, piece, sep)) out.push_back(piece);
    return out;
}

double envelope_rate(const FlowEnvelope& e) {
    return std::visit([](const auto& x) { return x.rate; }, e);
}

double direction_bound(const FlowEnvelope& e, const Tandem& tandem) {
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TokenBucket>) {
                return case1_delay(x, tandem);
            } else {
                return case2_delay(x, tandem);
            }
        },
        e);
}

// The long-run envelope rate must clear every stage; checking stages one
// by one lets the error name the first hop that saturates.
void require_stable(const FlowEnvelope& e, const Tandem& tandem, const std::string& direction) {
    double rate = envelope_rate(e);
    const auto& nodes = tandem.nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (rate > nodes[k].service.rate) {
            std::ostringstream msg;
            msg << direction << " stage " << k << " (" << to_string(nodes[k].role)
                << "): arrival rate " << rate << " exceeds service rate "
                << nodes[k].service.rate;
            throw instability_error(msg.str());
        }
    }
}

void validate_flow(const UbiITopology& t, const FlowSpec& f, AnalysisMode mode) {
    auto violations = validate_topology(t);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid topology: " + join(violations, "; "));
    }
    if (f.rounds < 1) throw std::invalid_argument("flow rounds must be at least 1");
    if (f.wireless_sigma < 0.0) {
        throw std::invalid_argument("flow wireless_sigma must be non-negative");
    }
    if (f.epsilon) {
        if (!(*f.epsilon > 0.0 && *f.epsilon < 1.0)) {
            throw std::invalid_argument("flow epsilon must lie in (0, 1)");
        }
    } else if (mode == AnalysisMode::hybrid) {
        throw std::invalid_argument("hybrid mode requires a flow epsilon");
    }
}

DelayReport unstable_report(const FlowSpec& f, AnalysisMode mode) {
    DelayReport r{};
    r.uplink_s = kInf;
    r.compute_s = 0.0;
    r.downlink_s = kInf;
    r.wireless_quantile_s = mode == AnalysisMode::hybrid ? kInf : 0.0;
    r.per_round_s = kInf;
    r.total_s = kInf;
    r.rounds = f.rounds;
    r.mode = mode;
    r.epsilon = mode == AnalysisMode::hybrid ? f.epsilon : std::nullopt;
    return r;
}

void apply_param(UbiITopology& t, FlowSpec& f, const std::string& param, double value) {
    auto parts = split(param, '.');
    auto bad = [&] {
        return std::invalid_argument("unknown sweep parameter '" + param + "'");
    };
    if (parts.size() == 3 && parts[0] == "node") {
        auto it = t.compute.find(parts[1]);
        if (it == t.compute.end()) throw bad();
        if (parts[2] == "rate") {
            it->second = RateLatency(value, it->second.latency);
        } else if (parts[2] == "latency") {
            it->second = RateLatency(it->second.rate, value);
        } else {
            throw bad();
        }
        return;
    }
    if (parts.size() == 4 && parts[0] == "link") {
        auto it = t.links.find({parts[1], parts[2]});
        if (it == t.links.end()) throw bad();
        auto* wired = std::get_if<WiredLink>(&it->second);
        if (wired == nullptr) {
            throw std::invalid_argument("sweep parameter '" + param +
                                        "' targets a wireless link");
        }
        if (parts[3] == "rate") {
            wired->service = RateLatency(value, wired->service.latency);
        } else if (parts[3] == "latency") {
            wired->service = RateLatency(wired->service.rate, value);
        } else {
            throw bad();
        }
        return;
    }
    if (parts.size() == 3 && parts[0] == "flow") {
        FlowEnvelope* env = nullptr;
        if (parts[1] == "uplink") env = &f.uplink;
        if (parts[1] == "downlink") env = &f.downlink;
        if (env == nullptr) throw bad();
        const std::string& field = parts[2];
        *env = std::visit(
            [&](const auto& x) -> FlowEnvelope {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, TokenBucket>) {
                    if (field == "rate") return TokenBucket(value, x.burst);
                    if (field == "burst") return TokenBucket(x.rate, value);
                    throw std::invalid_argument("token bucket envelope has no parameter '" +
                                                field + "'");
                } else {
                    if (field == "rate") return TSpec(x.peak, x.max_packet, value, x.burst);
                    if (field == "burst") return TSpec(x.peak, x.max_packet, x.rate, value);
                    if (field == "peak") return TSpec(value, x.max_packet, x.rate, x.burst);
                    if (field == "max_packet") return TSpec(x.peak, value, x.rate, x.burst);
                    throw bad();
                }
            },
            *env);
        return;
    }
    throw bad();
}

}  // namespace

std::string to_string(AnalysisMode mode) {
    return mode == AnalysisMode::deterministic ? "deterministic" : "hybrid";
}

std::vector<std::string> validate_topology(const UbiITopology& t) {
    std::vector<std::string> out;
    auto report = [&](const std::string& msg) { out.push_back(msg); };

    std::set<std::string> seen;
    auto check_ids = [&](const std::vector<std::string>& ids, const char* kind) {
        for (const auto& id : ids) {
            if (id.empty()) report(std::string("empty ") + kind + " id");
            if (!seen.insert(id).second) report("duplicate node id '" + id + "'");
        }
    };
    check_ids(t.devices, "device");
    check_ids(t.bss, "bs");
    check_ids(t.clouds, "cloud");

    if (t.ubii_level < 1 || t.ubii_level > 4) {
        report("ubii_level " + std::to_string(t.ubii_level) + " outside 1..4");
    }

    for (const auto& d : t.devices) {
        auto it = t.device_to_bs.find(d);
        if (it == t.device_to_bs.end()) {
            report("device '" + d + "' is not assigned to a bs");
        } else if (!is_node(t.bss, it->second)) {
            report("device '" + d + "' is assigned to unknown bs '" + it->second + "'");
        }
    }
    for (const auto& [d, b] : t.device_to_bs) {
        if (!is_node(t.devices, d)) report("device_to_bs names unknown device '" + d + "'");
        (void)b;
    }
    for (const auto& b : t.bss) {
        auto it = t.bs_to_cloud.find(b);
        if (it == t.bs_to_cloud.end()) {
            report("bs '" + b + "' is not assigned to a cloud");
        } else if (!is_node(t.clouds, it->second)) {
            report("bs '" + b + "' is assigned to unknown cloud '" + it->second + "'");
        }
    }
    for (const auto& [b, c] : t.bs_to_cloud) {
        if (!is_node(t.bss, b)) report("bs_to_cloud names unknown bs '" + b + "'");
        (void)c;
    }

    for (const auto& id : seen) {
        if (!contains(t.compute, id)) report("node '" + id + "' has no compute server");
    }
    for (const auto& [id, svc] : t.compute) {
        if (seen.find(id) == seen.end()) {
            report("compute entry names unknown node '" + id + "'");
        }
        (void)svc;
    }

    for (const auto& [key, link] : t.links) {
        const auto& [from, to] = key;
        bool access = contains(t.device_to_bs, from) && t.device_to_bs.at(from) == to;
        bool backhaul = contains(t.bs_to_cloud, from) && t.bs_to_cloud.at(from) == to;
        if (!access && !backhaul) {
            report("link '" + from + "' -> '" + to + "' does not follow an assigned path");
            continue;
        }
        if (backhaul && std::holds_alternative<WirelessLink>(link)) {
            report("link '" + from + "' -> '" + to +
                   "' is wireless but only device to bs links may be");
        }
    }
    return out;
}

FlowPath flow_path(const UbiITopology& t, const FlowSpec& f, AnalysisMode mode) {
    auto violations = validate_topology(t);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid topology: " + join(violations, "; "));
    }
    if (!is_node(t.devices, f.source_device)) {
        throw std::invalid_argument("unknown device id '" + f.source_device + "'");
    }
    const std::string& dev = f.source_device;
    const std::string& bs = t.device_to_bs.at(dev);
    const std::string& cloud = t.bs_to_cloud.at(bs);

    std::vector<TandemNode> up;
    std::optional<FadingChannel> wireless;
    up.push_back({NodeRole::device, t.compute.at(dev)});
    if (auto it = t.links.find({dev, bs}); it != t.links.end()) {
        if (const auto* wired = std::get_if<WiredLink>(&it->second)) {
            up.push_back({NodeRole::backhaul, wired->service});
        } else {
            const auto& ch = std::get<WirelessLink>(it->second).channel;
            if (mode == AnalysisMode::hybrid) {
                wireless = ch;
            } else if (const auto* snr = std::get_if<ConstantSnr>(&ch.snr)) {
                // A constant channel is a fixed-rate server, so the
                // deterministic analysis can absorb it as a stage.
                double bits_per_slot = ch.symbols_per_slot * std::log1p(snr->gamma);
                up.push_back({NodeRole::backhaul,
                              RateLatency(bits_per_slot / ch.slot_duration, 0.0)});
            } else {
                throw std::invalid_argument(
                    "wireless link '" + dev + "' -> '" + bs +
                    "' fades randomly; deterministic mode needs a constant snr");
            }
        }
    }
    up.push_back({NodeRole::bs, t.compute.at(bs)});
    if (auto it = t.links.find({bs, cloud}); it != t.links.end()) {
        up.push_back({NodeRole::backhaul, std::get<WiredLink>(it->second).service});
    }
    up.push_back({NodeRole::cloud, t.compute.at(cloud)});

    std::vector<TandemNode> down(up.rbegin(), up.rend());
    return FlowPath{Tandem(up), Tandem(down), wireless};
}

DelayReport service_delay(const UbiITopology& t, const FlowSpec& f, AnalysisMode mode) {
    validate_flow(t, f, mode);
    FlowPath path = flow_path(t, f, mode);

    require_stable(f.uplink, path.uplink, "uplink");
    require_stable(f.downlink, path.downlink, "downlink");
    double uplink_s = direction_bound(f.uplink, path.uplink);
    double downlink_s = direction_bound(f.downlink, path.downlink);

    double quantile_s = 0.0;
    if (mode == AnalysisMode::hybrid && path.wireless) {
        const FadingChannel& ch = *path.wireless;
        // One quantile covers both directions, so feed it the faster of
        // the two envelopes.
        double rate = std::max(envelope_rate(f.uplink), envelope_rate(f.downlink));
        double rho = rate * ch.slot_duration;
        int quantile_slots = 0;
        if (const auto* snr = std::get_if<ConstantSnr>(&ch.snr)) {
            // A constant channel has no randomness; the moment bound
            // cannot see that, so the degenerate hop gets the exact
            // deterministic quantile instead.
            double cap = ch.symbols_per_slot * std::log1p(snr->gamma);
            if (rho > cap) {
                std::ostringstream msg;
                msg << "wireless hop: arrival rate " << rho
                    << " bits/slot exceeds the constant channel capacity " << cap;
                throw instability_error(msg.str());
            }
            quantile_slots = static_cast<int>(std::ceil(f.wireless_sigma / cap - 1e-12));
        } else {
            SnrArrival arr(rho, f.wireless_sigma);
            try {
                quantile_slots = delay_quantile(arr, ch, *f.epsilon);
            } catch (const instability_error& e) {
                throw instability_error(std::string("wireless hop: ") + e.what());
            }
        }
        quantile_s = quantile_slots * ch.slot_duration;
    }

    DelayReport r{};
    r.uplink_s = uplink_s;
    r.compute_s = 0.0;
    r.downlink_s = downlink_s;
    r.wireless_quantile_s = quantile_s;
    r.per_round_s = uplink_s + downlink_s + 2.0 * quantile_s;
    r.total_s = f.rounds * r.per_round_s;
    r.rounds = f.rounds;
    r.mode = mode;
    r.epsilon = mode == AnalysisMode::hybrid ? f.epsilon : std::nullopt;
    return r;
}

std::vector<SweepRow> sweep(const UbiITopology& t, const FlowSpec& f, const std::string& param,
                            const std::vector<double>& values, AnalysisMode mode) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        UbiITopology topo = t;
        FlowSpec flow = f;
        apply_param(topo, flow, param, v);
        try {
            rows.push_back({v, service_delay(topo, flow, mode), true});
        } catch (const instability_error&) {
            rows.push_back({v, unstable_report(flow, mode), false});
        }
    }
    return rows;
}

}  // namespace ubinc
