#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>

#include "bgpte/catalog.hpp"
#include "bgpte/route.hpp"
#include "bgpte/topology.hpp"

namespace bgpte {

/// Parses "<high>:<low>"; throws ConfigError when malformed or a part exceeds 65535.
Community parse_community(std::string_view text);

/// A route as installed at a provider, with the actions its communities requested.
struct AnnotatedRoute {
    Route route;
    std::optional<int> lp_override;
    std::set<Asn> suppressed_toward;
    std::map<Asn, int> prepend_schedule;

    bool operator==(const AnnotatedRoute&) const = default;
};

/// Concrete neighbors selected by `s`. Customers are dropped unless `include_customers`;
/// an explicit ASN that is not a neighbor expands to nothing.
std::set<Asn> expand_selector(const PolicyCatalog& cat, const PeerSelector& s,
                              std::span<const Adjacency> neighbors, bool include_customers);

/// Applies the catalog to a route the owner received from a customer.
AnnotatedRoute ingress_transform(const PolicyCatalog& cat, const Route& r,
                                 std::span<const Adjacency> neighbors);
AnnotatedRoute ingress_transform(const Topology& t, const PolicyCatalog& cat, const Route& r);

/// True when the catalog discards the route outright (drop-on-community providers).
bool catalog_rejects(const PolicyCatalog& cat, const Route& r);

/// Builds what `exporter` sends to `neighbor`: nullopt when suppressed, otherwise the
/// path with exporter prepended 1 + schedule times, the exporter's catalog communities
/// stripped, and LP/MED/learned_on cleared for the receiver to reassign.
std::optional<Route> egress_apply(const AnnotatedRoute& ar, Asn exporter, Asn neighbor,
                                  const PolicyCatalog* exporter_catalog);

}  // namespace bgpte
