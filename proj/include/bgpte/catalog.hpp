#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "bgpte/types.hpp"

namespace bgpte {

struct AllUpstreams {
    auto operator<=>(const AllUpstreams&) const = default;
};

struct RegionTag {
    std::string tag;
    auto operator<=>(const RegionTag&) const = default;
};

/// Which neighbors of the catalog owner a suppress or prepend rule targets.
using PeerSelector = std::variant<Asn, AllUpstreams, RegionTag>;

std::string to_string(const PeerSelector& s);

struct PrependRule {
    PeerSelector target;
    int count = 1;  // 1..=3

    auto operator<=>(const PrependRule&) const = default;
};

inline constexpr int kMaxPrependCount = 3;

/// Community-triggered ingress actions offered by one transit provider.
struct PolicyCatalog {
    Asn owner;
    std::map<Community, int> lp_rules;
    std::map<Community, PeerSelector> suppress_rules;
    std::map<Community, PrependRule> prepend_rules;
    std::map<Asn, std::string> region_of;
    /// Provider ignores any customer route that carries communities at all.
    bool drops_community_updates = false;

    bool empty() const {
        return lp_rules.empty() && suppress_rules.empty() && prepend_rules.empty() && region_of.empty() &&
               !drops_community_updates;
    }

    /// True when `c` keys any rule; these are the values stripped at the owner's egress.
    bool defines(const Community& c) const {
        return lp_rules.contains(c) || suppress_rules.contains(c) || prepend_rules.contains(c);
    }

    bool operator==(const PolicyCatalog&) const = default;
};

}  // namespace bgpte
