// config.hpp - Scenario configuration files: a TOML-syntax document with
// [topology], [flow], [sweep], and [sim] sections.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ubinc/scenario.hpp"
#include "ubinc/sim.hpp"

namespace ubinc {

// Carries every problem found in one pass, one line-anchored message
// per line of what().
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct SimSpec {
    int slots;
    double slot_duration;
    std::uint64_t seed = 1;
    SourcePolicy policy = SourcePolicy::greedy;
};

struct ScenarioConfig {
    UbiITopology topology;
    FlowSpec flow;
    AnalysisMode mode;
    std::optional<SweepSpec> sweep;
    std::optional<SimSpec> sim;
};

ScenarioConfig parse_config(const std::string& text);

// Reads the file and parses it; errors mention the path.
ScenarioConfig load_config(const std::string& path);

}  // namespace ubinc
