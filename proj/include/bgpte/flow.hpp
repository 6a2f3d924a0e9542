#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bgpte/engine.hpp"
#include "bgpte/topology.hpp"

namespace bgpte {

/// Routing object {src prefix, src ASN, dst prefix, dst ASN}; nullopt is a wildcard.
struct Flow {
    std::optional<Prefix> src_prefix;
    std::optional<Asn> src_asn;
    Prefix dst_prefix;
    Asn dst_asn;

    auto operator<=>(const Flow&) const = default;
};

enum class FlowClass : std::uint8_t { DestinationPrefixBased, SourceAsnBased, SourcePrefixBased };

FlowClass classify(const Flow& f);
std::string_view to_string(FlowClass c);
std::string to_string(const Flow& f);

/// Links crossed from `src` to the AS that originated the matched route, in order.
/// Empty when src itself holds the local route; nullopt when some hop has no route.
std::optional<std::vector<std::string>> resolve_forwarding(const ConvergedState& s, const Topology& t,
                                                           Asn src, const Prefix& dst_prefix);

struct IngressKey {
    Asn src;
    Prefix dst_prefix;

    auto operator<=>(const IngressKey&) const = default;
};

/// nullopt marks an unreachable pair.
using IngressEntries = std::map<IngressKey, std::optional<std::string>>;

struct IngressMap {
    Asn dest;
    IngressEntries entries;

    bool operator==(const IngressMap&) const = default;
};

/// Entries for every non-destination AS and every prefix originated by `dest`, plus any
/// `extra_prefixes` (e.g. more-specifics named by objectives). Throws ConfigError when
/// dest originates nothing.
IngressMap ingress_map(const ConvergedState& s, const Topology& t, Asn dest,
                       const std::set<Prefix>& extra_prefixes = {});

struct IngressMove {
    Asn src;
    Prefix dst_prefix;
    std::optional<std::string> old_link;
    std::optional<std::string> new_link;

    auto operator<=>(const IngressMove&) const = default;
};

/// Changed entries in key order. Throws Error on differing key sets.
std::vector<IngressMove> diff_entries(const IngressEntries& base, const IngressEntries& next);
/// As diff_entries; additionally requires the same destination.
std::vector<IngressMove> diff_ingress(const IngressMap& base, const IngressMap& next);

/// CSV `src_asn,dst_prefix,link` with header, sorted by key. Unreachable renders as "unreachable".
std::string ingress_csv(const IngressEntries& entries);
IngressEntries parse_ingress_csv(std::string_view text);

std::string render_link(const std::optional<std::string>& link);

}  // namespace bgpte
