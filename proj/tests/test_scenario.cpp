// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ubinc/scenario.hpp"

using namespace ubinc;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    for (const auto& v : violations) {
        if (v.find(needle) != std::string::npos) return true;
    }
    return false;
}

UbiITopology golden_topology() {
    UbiITopology t;
    t.devices = {"d1"};
    t.bss = {"b1"};
    t.clouds = {"c1"};
    t.device_to_bs = {{"d1", "b1"}};
    t.bs_to_cloud = {{"b1", "c1"}};
    t.compute.insert({"d1", RateLatency(2.0, 1.0)});
    t.compute.insert({"b1", RateLatency(3.0, 2.0)});
    t.compute.insert({"c1", RateLatency(5.0, 0.5)});
    return t;
}

FlowSpec golden_flow() {
    return FlowSpec{.source_device = "d1",
                    .uplink = TokenBucket(1.0, 4.0),
                    .downlink = TokenBucket(0.5, 2.0)};
}

}  // namespace

TEST_CASE("topology validation reports every violation") {
    CHECK(validate_topology(golden_topology()).empty());

    UbiITopology unassigned = golden_topology();
    unassigned.devices.push_back("d2");
    unassigned.compute.insert({"d2", RateLatency(1.0, 0.0)});
    auto v = validate_topology(unassigned);
    CHECK(mentions(v, "'d2' is not assigned"));

    UbiITopology ghost = golden_topology();
    ghost.bs_to_cloud["b1"] = "nowhere";
    CHECK(mentions(validate_topology(ghost), "unknown cloud 'nowhere'"));

    UbiITopology bare = golden_topology();
    bare.compute.erase("b1");
    CHECK(mentions(validate_topology(bare), "'b1' has no compute server"));

    UbiITopology radio = golden_topology();
    radio.links.insert({{"b1", "c1"},
                        WirelessLink{FadingChannel(1.0, ConstantSnr{1.0}, 1.0)}});
    CHECK(mentions(validate_topology(radio), "only device to bs"));

    UbiITopology stray = golden_topology();
    stray.links.insert({{"c1", "d1"}, WiredLink{RateLatency(1.0, 0.0)}});
    CHECK(mentions(validate_topology(stray), "does not follow an assigned path"));

    UbiITopology dup = golden_topology();
    dup.clouds.push_back("d1");
    CHECK(mentions(validate_topology(dup), "duplicate node id 'd1'"));

    UbiITopology lvl = golden_topology();
    lvl.ubii_level = 7;
    CHECK(mentions(validate_topology(lvl), "ubii_level 7"));

    // Violations accumulate instead of stopping at the first problem.
    UbiITopology multi = golden_topology();
    multi.devices.push_back("d2");
    multi.bs_to_cloud["b1"] = "nowhere";
    CHECK(validate_topology(multi).size() >= 2);
}

TEST_CASE("flow path lists stages in travel order") {
    UbiITopology t = golden_topology();
    t.links.insert({{"d1", "b1"}, WiredLink{RateLatency(8.0, 0.25)}});
    t.links.insert({{"b1", "c1"}, WiredLink{RateLatency(10.0, 0.125)}});
    FlowSpec f = golden_flow();

    FlowPath path = flow_path(t, f, AnalysisMode::deterministic);
    const auto& up = path.uplink.nodes();
    REQUIRE(up.size() == 5);
    CHECK(up[0].role == NodeRole::device);
    CHECK(up[1].role == NodeRole::backhaul);
    CHECK(up[2].role == NodeRole::bs);
    CHECK(up[3].role == NodeRole::backhaul);
    CHECK(up[4].role == NodeRole::cloud);
    CHECK(up[0].service.rate == 2.0);
    CHECK(up[1].service.rate == 8.0);
    CHECK(up[2].service.rate == 3.0);
    CHECK(up[3].service.rate == 10.0);
    CHECK(up[4].service.rate == 5.0);
    CHECK_FALSE(path.wireless.has_value());

    const auto& down = path.downlink.nodes();
    REQUIRE(down.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(down[k].role == up[4 - k].role);
        CHECK(down[k].service.rate == up[4 - k].service.rate);
        CHECK(down[k].service.latency == up[4 - k].service.latency);
    }

    // Transparent links leave just the three compute stages.
    FlowPath plain = flow_path(golden_topology(), f, AnalysisMode::deterministic);
    CHECK(plain.uplink.size() == 3);
    CHECK(plain.downlink.size() == 3);

    // A constant-snr radio becomes a fixed-rate stage in deterministic
    // mode and a separate stochastic hop in hybrid mode.
    UbiITopology radio = golden_topology();
    double gamma = std::exp(2.0) - 1.0;
    radio.links.insert(
        {{"d1", "b1"}, WirelessLink{FadingChannel(2.0, ConstantSnr{gamma}, 0.1)}});
    FlowPath det = flow_path(radio, f, AnalysisMode::deterministic);
    REQUIRE(det.uplink.size() == 4);
    CHECK(close(det.uplink.nodes()[1].service.rate, 2.0 * 2.0 / 0.1, 1e-12));
    CHECK(det.uplink.nodes()[1].service.latency == 0.0);
    CHECK_FALSE(det.wireless.has_value());

    FlowPath hyb = flow_path(radio, f, AnalysisMode::hybrid);
    CHECK(hyb.uplink.size() == 3);
    CHECK(hyb.downlink.size() == 3);
    REQUIRE(hyb.wireless.has_value());
    CHECK(hyb.wireless->symbols_per_slot == 2.0);

    UbiITopology fading = golden_topology();
    fading.links.insert(
        {{"d1", "b1"}, WirelessLink{FadingChannel(1.0, RayleighSnr{10.0}, 0.1)}});
    CHECK_THROWS_AS(flow_path(fading, f, AnalysisMode::deterministic), std::invalid_argument);
    CHECK_NOTHROW(flow_path(fading, f, AnalysisMode::hybrid));

    FlowSpec ghost = f;
    ghost.source_device = "d9";
    CHECK_THROWS_AS(flow_path(t, ghost, AnalysisMode::deterministic), std::invalid_argument);
}

TEST_CASE("golden scenario reports the closed-form bounds") {
    UbiITopology t = golden_topology();
    FlowSpec f = golden_flow();

    DelayReport r = service_delay(t, f, AnalysisMode::deterministic);
    CHECK(r.uplink_s == 5.5);
    CHECK(r.downlink_s == 4.5);
    CHECK(r.compute_s == 0.0);
    CHECK(r.wireless_quantile_s == 0.0);
    CHECK(r.per_round_s == 10.0);
    CHECK(r.total_s == 10.0);
    CHECK(r.rounds == 1);
    CHECK(r.mode == AnalysisMode::deterministic);
    CHECK_FALSE(r.epsilon.has_value());

    FlowSpec thrice = f;
    thrice.rounds = 3;
    CHECK(service_delay(t, thrice, AnalysisMode::deterministic).total_s == 30.0);

    // Each direction agrees with h_dev against the convolved curve.
    FlowPath path = flow_path(t, f, AnalysisMode::deterministic);
    Curve up_beta = e2e_service_curve(path.uplink).curve();
    Curve down_beta = e2e_service_curve(path.downlink).curve();
    CHECK(r.uplink_s == h_dev(TokenBucket(1.0, 4.0).curve(), up_beta));
    CHECK(r.downlink_s == h_dev(TokenBucket(0.5, 2.0).curve(), down_beta));
    CHECK(close(oracle::h_dev_oracle(TokenBucket(1.0, 4.0).curve(), up_beta), 5.5, 1e-5));
    CHECK(close(oracle::h_dev_oracle(TokenBucket(0.5, 2.0).curve(), down_beta), 4.5, 1e-5));

    // The bound only sees the rate minimum and latency sum, so shuffling
    // the compute assignment across the chain changes nothing.
    UbiITopology shuffled = golden_topology();
    shuffled.compute.at("d1") = RateLatency(5.0, 0.5);
    shuffled.compute.at("c1") = RateLatency(2.0, 1.0);
    DelayReport s = service_delay(shuffled, f, AnalysisMode::deterministic);
    CHECK(s.uplink_s == r.uplink_s);
    CHECK(s.downlink_s == r.downlink_s);
    CHECK(s.total_s == r.total_s);

    // Dual-bucket uplink goes through the peak-aware closed form.
    FlowSpec vbr = f;
    vbr.uplink = TSpec(6.0, 1.0, 1.0, 4.0);
    DelayReport v = service_delay(t, vbr, AnalysisMode::deterministic);
    CHECK(close(v.uplink_s, 3.5 + (1.0 + 3.0 * 4.0 / 5.0) / 2.0, 1e-12));
    CHECK(v.downlink_s == 4.5);
}

TEST_CASE("instability points at the failing stage") {
    UbiITopology t = golden_topology();

    FlowSpec hot = golden_flow();
    hot.uplink = TokenBucket(4.0, 1.0);
    CHECK_THROWS_WITH_AS(service_delay(t, hot, AnalysisMode::deterministic),
                         doctest::Contains("uplink stage 0 (device)"), instability_error);

    FlowSpec back = golden_flow();
    back.downlink = TokenBucket(4.0, 1.0);
    CHECK_THROWS_WITH_AS(service_delay(t, back, AnalysisMode::deterministic),
                         doctest::Contains("downlink stage 1 (bs)"), instability_error);

    FlowSpec edge = golden_flow();
    edge.uplink = TokenBucket(2.0, 1.0);
    CHECK_NOTHROW(service_delay(t, edge, AnalysisMode::deterministic));

    FlowSpec zero = golden_flow();
    zero.rounds = 0;
    CHECK_THROWS_AS(service_delay(t, zero, AnalysisMode::deterministic),
                    std::invalid_argument);
}

TEST_CASE("hybrid delay adds the wireless quantile per direction") {
    UbiITopology t = golden_topology();
    double gamma = std::exp(2.0) - 1.0;  // capacity 4 bits/slot at 2 symbols
    t.links.insert({{"d1", "b1"}, WirelessLink{FadingChannel(2.0, ConstantSnr{gamma}, 0.1)}});
    FlowSpec f = golden_flow();
    f.epsilon = 1e-3;

    // A constant channel below capacity adds nothing.
    DelayReport r = service_delay(t, f, AnalysisMode::hybrid);
    CHECK(r.mode == AnalysisMode::hybrid);
    CHECK(r.epsilon == 1e-3);
    CHECK(r.wireless_quantile_s == 0.0);
    FlowPath path = flow_path(t, f, AnalysisMode::hybrid);
    CHECK(path.uplink.size() == 3);
    CHECK(r.uplink_s == case1_delay(TokenBucket(1.0, 4.0), path.uplink));
    CHECK(r.total_s == r.uplink_s + r.downlink_s);

    // A burst allowance drains at the channel rate, rounded up to slots.
    FlowSpec bursty = f;
    bursty.wireless_sigma = 6.0;
    DelayReport b = service_delay(t, bursty, AnalysisMode::hybrid);
    CHECK(b.wireless_quantile_s == 2 * 0.1);
    CHECK(b.per_round_s == b.uplink_s + b.downlink_s + 2.0 * b.wireless_quantile_s);
    CHECK(b.total_s == b.per_round_s);

    UbiITopology roomy = t;
    for (auto& [id, svc] : roomy.compute) svc = RateLatency(100.0, svc.latency);
    FlowSpec fast = f;
    fast.uplink = TokenBucket(50.0, 1.0);  // 5 bits/slot against capacity 4
    CHECK_THROWS_WITH_AS(service_delay(roomy, fast, AnalysisMode::hybrid),
                         doctest::Contains("wireless hop"), instability_error);

    FlowSpec blind = golden_flow();
    CHECK_THROWS_AS(service_delay(t, blind, AnalysisMode::hybrid), std::invalid_argument);

    // Fading channel: the report carries exactly the kernel quantile.
    UbiITopology fading = golden_topology();
    fading.links.insert(
        {{"d1", "b1"}, WirelessLink{FadingChannel(1.0, RayleighSnr{10.0}, 0.01)}});
    DelayReport h = service_delay(fading, f, AnalysisMode::hybrid);
    FadingChannel ch(1.0, RayleighSnr{10.0}, 0.01);
    int q = delay_quantile(SnrArrival(1.0 * 0.01, 0.0), ch, 1e-3);
    CHECK(q >= 1);
    CHECK(h.wireless_quantile_s == q * 0.01);
    CHECK(h.per_round_s == h.uplink_s + h.downlink_s + 2.0 * h.wireless_quantile_s);
    CHECK(h.total_s == h.per_round_s);

    // Wired access keeps every stage deterministic even in hybrid mode.
    UbiITopology wired = golden_topology();
    wired.links.insert({{"d1", "b1"}, WiredLink{RateLatency(8.0, 0.25)}});
    DelayReport w = service_delay(wired, f, AnalysisMode::hybrid);
    CHECK(w.wireless_quantile_s == 0.0);
    CHECK(flow_path(wired, f, AnalysisMode::hybrid).uplink.size() == 4);

    // Deterministic mode folds the constant radio into the tandem.
    DelayReport det = service_delay(t, golden_flow(), AnalysisMode::deterministic);
    CHECK(det.wireless_quantile_s == 0.0);
    CHECK_FALSE(det.epsilon.has_value());
    FlowPath det_path = flow_path(t, golden_flow(), AnalysisMode::deterministic);
    CHECK(det_path.uplink.size() == 4);
}

TEST_CASE("sweeps mark unstable rows and keep the expected trends") {
    UbiITopology t = golden_topology();
    FlowSpec f = golden_flow();

    std::vector<double> rates = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto cloud = sweep(t, f, "node.c1.rate", rates, AnalysisMode::deterministic);
    REQUIRE(cloud.size() == rates.size());
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        CHECK(cloud[k].stable);
        CHECK(cloud[k].value == rates[k]);
        if (k > 0) CHECK(cloud[k].report.total_s <= cloud[k - 1].report.total_s);
    }
    CHECK(cloud[0].report.total_s > cloud[1].report.total_s);
    // Past the device bottleneck at rate 2 the cloud rate stops mattering.
    for (std::size_t k = 2; k < cloud.size(); ++k) {
        CHECK(cloud[k].report.total_s == cloud[1].report.total_s);
    }

    std::vector<double> bursts = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto burst = sweep(t, f, "flow.uplink.burst", bursts, AnalysisMode::deterministic);
    double base = burst[0].report.total_s;
    for (std::size_t k = 0; k < burst.size(); ++k) {
        double expect = base + bursts[k] / 2.0;  // slope is 1 / R_min
        CHECK(close(burst[k].report.total_s, expect, 1e-9 * expect));
    }

    auto load = sweep(t, f, "flow.uplink.rate", {1.0, 1.5, 2.0, 2.5, 3.0},
                      AnalysisMode::deterministic);
    REQUIRE(load.size() == 5);
    CHECK(load[2].stable);
    CHECK_FALSE(load[3].stable);
    CHECK_FALSE(load[4].stable);
    CHECK(std::isinf(load[3].report.total_s));
    CHECK(std::isinf(load[3].report.uplink_s));
    CHECK(load[3].report.rounds == f.rounds);

    FlowSpec vbr = f;
    vbr.uplink = TSpec(2.0, 1.0, 1.0, 4.0);
    auto peak = sweep(t, vbr, "flow.uplink.peak", {2.0, 3.0, 4.0, 6.0, 8.0},
                      AnalysisMode::deterministic);
    for (std::size_t k = 1; k < peak.size(); ++k) {
        CHECK(peak[k].report.total_s >= peak[k - 1].report.total_s);
    }

    UbiITopology linked = golden_topology();
    linked.links.insert({{"b1", "c1"}, WiredLink{RateLatency(10.0, 0.3)}});
    auto lat = sweep(linked, f, "link.b1.c1.latency", {0.0, 0.5, 1.0},
                     AnalysisMode::deterministic);
    // The link sits in both directions, so its latency counts twice.
    CHECK(close(lat[1].report.total_s, lat[0].report.total_s + 2.0 * 0.5, 1e-12));
    CHECK(close(lat[2].report.total_s, lat[0].report.total_s + 2.0 * 1.0, 1e-12));

    CHECK_THROWS_AS(sweep(t, f, "node.zz.rate", {1.0}, AnalysisMode::deterministic),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(t, f, "flow.uplink.peak", {1.0}, AnalysisMode::deterministic),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(t, f, "node.c1.flavor", {1.0}, AnalysisMode::deterministic),
                    std::invalid_argument);
}

TEST_CASE("report totals stay consistent across modes") {
    UbiITopology t = golden_topology();
    t.links.insert({{"d1", "b1"},
                    WirelessLink{FadingChannel(1.0, RayleighSnr{20.0}, 0.05)}});
    FlowSpec f = golden_flow();
    f.epsilon = 1e-2;
    f.wireless_sigma = 0.5;

    for (int rounds : {1, 2, 5}) {
        f.rounds = rounds;
        DelayReport r = service_delay(t, f, AnalysisMode::hybrid);
        CHECK(r.per_round_s == r.uplink_s + r.downlink_s + 2.0 * r.wireless_quantile_s);
        CHECK(r.total_s == rounds * r.per_round_s);
        CHECK(r.uplink_s >= 0.0);
        CHECK(r.downlink_s >= 0.0);
        CHECK(r.wireless_quantile_s >= 0.0);
        CHECK(r.rounds == rounds);
    }
}
