#pragma once

#include <string>

#include "bgpte/scenario.hpp"

namespace fixtures {

inline bgpte::Scenario load(const std::string& name) {
    return bgpte::load_scenario(std::string(BGPTE_SCENARIO_DIR) + "/" + name);
}

inline const bgpte::Asn D{65001}, ISP1{65010}, ISP2{65020}, A{65100}, B{65200}, S1{65301}, S2{65302};
inline const bgpte::Prefix P1 = *bgpte::Prefix::parse("10.1.0.0/16");
inline const bgpte::Prefix P2 = *bgpte::Prefix::parse("10.2.0.0/16");

inline bgpte::Prefix pfx(const char* text) { return *bgpte::Prefix::parse(text); }

}  // namespace fixtures
