#include "bgpte/policy.hpp"

#include <algorithm>
#include <charconv>

#include "bgpte/error.hpp"

namespace bgpte {

Community parse_community(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
        throw ConfigError("malformed community '" + std::string(text) + "'");
    }
    auto part = [&](std::string_view s) -> std::uint16_t {
        if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw ConfigError("malformed community '" + std::string(text) + "'");
        }
        unsigned long v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || v > 0xffff) {
            throw ConfigError("community component out of 16-bit range in '" + std::string(text) + "'");
        }
        return static_cast<std::uint16_t>(v);
    };
    return Community{part(text.substr(0, colon)), part(text.substr(colon + 1))};
}

std::set<Asn> expand_selector(const PolicyCatalog& cat, const PeerSelector& s, std::span<const Adjacency> neighbors,
                              bool include_customers) {
    std::set<Asn> out;
    for (const auto& adj : neighbors) {
        bool eligible = include_customers || adj.role != Role::Customer;
        if (const auto* asn = std::get_if<Asn>(&s)) {
            if (adj.neighbor == *asn && eligible) out.insert(adj.neighbor);
        } else if (std::holds_alternative<AllUpstreams>(s)) {
            if (adj.role != Role::Customer) out.insert(adj.neighbor);
        } else {
            auto it = cat.region_of.find(adj.neighbor);
            if (eligible && it != cat.region_of.end() && it->second == std::get<RegionTag>(s).tag) {
                out.insert(adj.neighbor);
            }
        }
    }
    return out;
}

AnnotatedRoute ingress_transform(const PolicyCatalog& cat, const Route& r, std::span<const Adjacency> neighbors) {
    AnnotatedRoute ar{r, std::nullopt, {}, {}};
    for (const auto& c : r.communities) {
        if (auto it = cat.lp_rules.find(c); it != cat.lp_rules.end()) {
            ar.lp_override = ar.lp_override ? std::min(*ar.lp_override, it->second) : it->second;
        }
        if (auto it = cat.suppress_rules.find(c); it != cat.suppress_rules.end()) {
            auto targets = expand_selector(cat, it->second, neighbors, false);
            ar.suppressed_toward.insert(targets.begin(), targets.end());
        }
        if (auto it = cat.prepend_rules.find(c); it != cat.prepend_rules.end()) {
            for (Asn n : expand_selector(cat, it->second.target, neighbors, true)) {
                int& slot = ar.prepend_schedule[n];
                slot = std::max(slot, it->second.count);
            }
        }
    }
    return ar;
}

AnnotatedRoute ingress_transform(const Topology& t, const PolicyCatalog& cat, const Route& r) {
    auto adj = adjacencies(t, cat.owner);
    return ingress_transform(cat, r, adj);
}

bool catalog_rejects(const PolicyCatalog& cat, const Route& r) {
    return cat.drops_community_updates && !r.communities.empty();
}

std::optional<Route> egress_apply(const AnnotatedRoute& ar, Asn exporter, Asn neighbor,
                                  const PolicyCatalog* exporter_catalog) {
    if (ar.suppressed_toward.contains(neighbor)) return std::nullopt;
    int extra = 0;
    if (auto it = ar.prepend_schedule.find(neighbor); it != ar.prepend_schedule.end()) extra = it->second;

    Route out = prepend_path(ar.route, exporter, 1 + extra);
    if (exporter_catalog) {
        std::erase_if(out.communities, [&](const Community& c) { return exporter_catalog->defines(c); });
    }
    out.local_pref = 0;
    out.med.reset();
    out.learned_on.clear();
    return out;
}

}  // namespace bgpte
