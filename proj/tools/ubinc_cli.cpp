// ubinc_cli.cpp - Command-line front end: analyze prints one delay
// report, sweep tabulates a parameter scan, simulate replays the flow
// through a slot simulator and checks the analytic bounds.
//
// Exit codes: 0 success, 1 config error, 2 instability, 3 a simulated
// delay broke its bound.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ubinc/config.hpp"
#include "ubinc/csv.hpp"
#include "ubinc/scenario.hpp"
#include "ubinc/sim.hpp"

namespace {

using namespace ubinc;

std::string resolve_out(const std::string& flag, const std::string& command) {
    if (!flag.empty()) return flag;
    const char* dir = std::getenv("UBINC_OUT_DIR");
    std::string base = (dir != nullptr && *dir != '\0') ? dir : ".";
    return base + "/" + command + ".csv";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) {
        throw std::runtime_error("cannot write output file '" + path + "'");
    }
}

Curve envelope_curve(const FlowEnvelope& e) {
    return std::visit([](const auto& x) { return x.curve(); }, e);
}

int run_analyze(const ScenarioConfig& cfg, const std::string& out_path) {
    DelayReport r = service_delay(cfg.topology, cfg.flow, cfg.mode);

    std::cout << "mode               " << to_string(r.mode) << "\n"
              << "uplink bound       " << csv_number(r.uplink_s) << " s\n"
              << "downlink bound     " << csv_number(r.downlink_s) << " s\n";
    if (r.mode == AnalysisMode::hybrid) {
        std::cout << "wireless quantile  " << csv_number(r.wireless_quantile_s) << " s\n";
    }
    std::cout << "per-round total    " << csv_number(r.per_round_s) << " s\n"
              << "rounds             " << r.rounds << "\n"
              << "total              " << csv_number(r.total_s) << " s\n";

    std::ostringstream csv;
    csv << csv_row({"mode", "uplink_s", "compute_s", "downlink_s", "wireless_quantile_s",
                    "per_round_s", "rounds", "total_s", "epsilon"});
    csv << csv_row({to_string(r.mode), csv_number(r.uplink_s), csv_number(r.compute_s),
                    csv_number(r.downlink_s), csv_number(r.wireless_quantile_s),
                    csv_number(r.per_round_s), std::to_string(r.rounds),
                    csv_number(r.total_s), r.epsilon ? csv_number(*r.epsilon) : ""});
    write_file(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_sweep(const ScenarioConfig& cfg, const std::string& out_path) {
    if (!cfg.sweep) throw config_error("config has no [sweep] section");
    auto rows = sweep(cfg.topology, cfg.flow, cfg.sweep->param, cfg.sweep->values, cfg.mode);

    std::ostringstream csv;
    csv << csv_row({"param", "value", "uplink_s", "downlink_s", "wireless_quantile_s",
                    "total_s", "stable"});
    std::size_t unstable = 0;
    for (const auto& row : rows) {
        if (!row.stable) ++unstable;
        csv << csv_row({cfg.sweep->param, csv_number(row.value),
                        csv_number(row.report.uplink_s), csv_number(row.report.downlink_s),
                        csv_number(row.report.wireless_quantile_s),
                        csv_number(row.report.total_s), row.stable ? "true" : "false"});
    }
    write_file(out_path, csv.str());
    std::cout << rows.size() << " rows (" << unstable << " unstable) for "
              << cfg.sweep->param << "\n"
              << "wrote " << out_path << "\n";
    return 0;
}

struct SimCheck {
    std::string name;
    BoundCheck check;
};

SimCheck simulate_direction(const std::string& name, const FlowEnvelope& envelope,
                            const Tandem& tandem, double bound, const SimSpec& sim,
                            std::uint64_t seed) {
    SourceTrace trace = generate_source(envelope_curve(envelope), sim.policy, sim.slots,
                                        seed, sim.slot_duration);
    std::vector<ServerModel> servers;
    for (const auto& node : tandem.nodes()) {
        servers.push_back(RateLatencyServer{node.service.rate, node.service.latency});
    }
    SimResult res = run_tandem_sim(trace, servers, sim.slot_duration);
    Verdict v = validate_bounds(res, bound, std::nullopt);
    if (!v.deterministic) {
        throw std::runtime_error(name + " simulation produced no deterministic check");
    }
    if (res.truncated) std::cerr << name << ": " << res.diagnostic << "\n";
    return {name, *v.deterministic};
}

SimCheck simulate_wireless(const FlowSpec& flow, const FadingChannel& ch,
                           double quantile_s, const SimSpec& sim, std::uint64_t seed) {
    double rate = std::max(std::visit([](const auto& x) { return x.rate; }, flow.uplink),
                           std::visit([](const auto& x) { return x.rate; }, flow.downlink));
    Curve envelope = TokenBucket(rate, flow.wireless_sigma).curve();
    SourceTrace trace =
        generate_source(envelope, sim.policy, sim.slots, seed, ch.slot_duration);
    SimResult res = run_tandem_sim(trace, {FadingServer{ch, seed + 1}}, ch.slot_duration);
    Verdict v = validate_bounds(res, std::nullopt,
                                QuantileSpec{quantile_s, *flow.epsilon});
    if (!v.stochastic) {
        throw std::runtime_error("wireless simulation produced no stochastic check");
    }
    if (res.truncated) std::cerr << "wireless: " << res.diagnostic << "\n";
    return {"wireless", *v.stochastic};
}

int run_simulate(const ScenarioConfig& cfg, const std::string& out_path,
                 std::optional<std::uint64_t> seed_flag) {
    if (!cfg.sim) throw config_error("config has no [sim] section");
    SimSpec sim = *cfg.sim;
    if (seed_flag) sim.seed = *seed_flag;

    DelayReport r = service_delay(cfg.topology, cfg.flow, cfg.mode);
    FlowPath path = flow_path(cfg.topology, cfg.flow, cfg.mode);

    std::vector<SimCheck> checks;
    checks.push_back(simulate_direction("uplink", cfg.flow.uplink, path.uplink, r.uplink_s,
                                        sim, sim.seed));
    checks.push_back(simulate_direction("downlink", cfg.flow.downlink, path.downlink,
                                        r.downlink_s, sim, sim.seed + 2));
    if (cfg.mode == AnalysisMode::hybrid && path.wireless) {
        checks.push_back(simulate_wireless(cfg.flow, *path.wireless, r.wireless_quantile_s,
                                           sim, sim.seed + 4));
    }

    bool all_pass = true;
    std::ostringstream csv;
    csv << csv_row({"check", "observed", "limit", "pass"});
    for (const auto& c : checks) {
        all_pass = all_pass && c.check.pass;
        std::cout << c.name << ": " << (c.check.pass ? "PASS" : "FAIL") << " (observed "
                  << csv_number(c.check.observed) << " vs limit "
                  << csv_number(c.check.limit) << ")\n";
        csv << csv_row({c.name, csv_number(c.check.observed), csv_number(c.check.limit),
                        c.check.pass ? "true" : "false"});
    }
    write_file(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ubinc: delay bounds for device-edge-cloud tandems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::optional<std::uint64_t> seed_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config file (TOML)")->required();
        sub->add_option("--out", out_flag, "output CSV path (default $UBINC_OUT_DIR)");
    };
    CLI::App* analyze = app.add_subcommand("analyze", "compute the delay report");
    add_common(analyze);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "scan the [sweep] parameter");
    add_common(sweep_cmd);
    CLI::App* simulate = app.add_subcommand("simulate", "replay and check the bounds");
    add_common(simulate);
    simulate->add_option("--seed", seed_flag, "override [sim] seed");

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig cfg = load_config(config_path);
        if (analyze->parsed()) {
            return run_analyze(cfg, resolve_out(out_flag, "analyze"));
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(cfg, resolve_out(out_flag, "sweep"));
        }
        return run_simulate(cfg, resolve_out(out_flag, "simulate"), seed_flag);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const instability_error& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
