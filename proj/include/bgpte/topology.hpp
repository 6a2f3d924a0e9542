#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bgpte/catalog.hpp"
#include "bgpte/types.hpp"

namespace bgpte {

enum class AsRole : std::uint8_t { Stub, Transit };

enum class LinkKind : std::uint8_t {
    CustomerToProvider,  // endpoint_a is the customer
    PeerToPeer,
};

struct InterdomainLink {
    std::string id;
    Asn endpoint_a;
    Asn endpoint_b;
    LinkKind kind = LinkKind::CustomerToProvider;
    bool up = true;

    bool touches(Asn a) const { return endpoint_a == a || endpoint_b == a; }
    Asn other(Asn a) const { return endpoint_a == a ? endpoint_b : endpoint_a; }
    /// Role of the far end as seen from `self`, which must be an endpoint.
    Role role_of_far_end(Asn self) const;

    bool operator==(const InterdomainLink&) const = default;
};

/// AS-level graph. Immutable once built; every accessor is const.
struct Topology {
    std::map<Asn, AsRole> ases;
    std::vector<InterdomainLink> links;
    std::map<Asn, std::set<Prefix>> originations;
    std::map<Asn, PolicyCatalog> catalogs;
    /// Per-AS local-preference overrides keyed by neighbor ASN.
    std::map<Asn, std::map<Asn, int>> lp_overrides;

    bool has_as(Asn a) const { return ases.contains(a); }
    const InterdomainLink* find_link(std::string_view id) const;
    const PolicyCatalog* catalog_of(Asn a) const;
    /// The AS originating exactly `p`, if any.
    std::optional<Asn> originator_of(const Prefix& p) const;
    /// The AS originating the longest prefix that covers `p`.
    std::optional<Asn> covering_originator(const Prefix& p) const;

    bool operator==(const Topology&) const = default;
};

struct Adjacency {
    std::string link;
    Asn neighbor;
    Role role;  // what `neighbor` is to the local AS
};

/// Up links of `a` in link-declaration order.
std::vector<Adjacency> adjacencies(const Topology& t, Asn a);

struct RelationshipEntry {
    std::string link;
    Role role;  // what b is to a

    auto operator<=>(const RelationshipEntry&) const = default;
};

/// One entry per up link between a and b. Throws ConfigError for unknown ASes or a == b.
std::set<RelationshipEntry> relationship_between(const Topology& t, Asn a, Asn b);

enum class Severity : std::uint8_t { Warning, Error };

struct Finding {
    Severity severity;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool ok() const { return error_count() == 0; }
};

ValidationReport validate_topology(const Topology& t);

/// Parses a scenario file and returns its topology. Throws ParseError (line/column) on
/// syntax errors, unknown ASNs, duplicate link ids and prefixes originated twice.
Topology parse_topology(std::string_view text);

/// Canonical text form: sorted records, one per line.
std::string serialize_topology(const Topology& t);

}  // namespace bgpte
