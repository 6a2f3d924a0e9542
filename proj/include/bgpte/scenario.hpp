#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bgpte/engine.hpp"
#include "bgpte/planner.hpp"
#include "bgpte/topology.hpp"

namespace bgpte {

/// Everything one scenario file describes.
struct Scenario {
    Topology topology;
    TeConfig te_config;
    std::vector<Objective> objectives;
};

/// Parses and validates a scenario. Throws ParseError for syntax problems and
/// ConfigError for model violations (unknown ASN, duplicate link id, ...).
Scenario parse_scenario(std::string_view text);

std::string serialize_scenario(const Scenario& s);

Scenario load_scenario(const std::string& path);

}  // namespace bgpte
