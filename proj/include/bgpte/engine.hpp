#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bgpte/error.hpp"
#include "bgpte/policy.hpp"
#include "bgpte/route.hpp"
#include "bgpte/topology.hpp"

namespace bgpte {

struct AdvertisementKey {
    Prefix prefix;
    std::string link;

    auto operator<=>(const AdvertisementKey&) const = default;
};

struct AdvertisementAttrs {
    bool announced = true;
    std::set<Community> communities;
    std::optional<std::uint32_t> med;

    bool operator==(const AdvertisementAttrs&) const = default;
};

/// What originating ASes announce on each of their links.
///
/// Originated prefixes are announced on every incident link with no attributes unless an
/// entry says otherwise. Entries for a prefix strictly inside an originated prefix add a
/// more-specific announcement on that link only.
struct TeConfig {
    std::map<AdvertisementKey, AdvertisementAttrs> entries;

    const AdvertisementAttrs* find(const Prefix& p, std::string_view link) const;

    bool operator==(const TeConfig&) const = default;
};

/// Throws ConfigError on references to unknown links/prefixes, links not incident to the
/// prefix's origin, oversized community sets, or catalog selectors naming non-neighbors.
void validate_te_config(const Topology& t, const TeConfig& cfg);

struct PrefixRib {
    std::map<std::string, AnnotatedRoute> adj_rib_in;  // keyed by learned_on
    std::optional<AnnotatedRoute> loc_rib;

    bool operator==(const PrefixRib&) const = default;
};

struct ConvergedState {
    std::map<Asn, std::map<Prefix, PrefixRib>> ribs;
    int rounds_used = 0;

    bool operator==(const ConvergedState&) const = default;
};

struct ChangingPair {
    Asn as;
    Prefix prefix;

    auto operator<=>(const ChangingPair&) const = default;
};

class OscillationError : public Error {
public:
    OscillationError(int rounds, std::vector<ChangingPair> changing);

    int rounds() const noexcept { return rounds_; }
    const std::vector<ChangingPair>& changing() const noexcept { return changing_; }

private:
    int rounds_;
    std::vector<ChangingPair> changing_;
};

struct PropagationOptions {
    /// Overrides the default round bound 2*|ASes| + max_prepend + 4 when set.
    std::optional<int> max_rounds;
    /// Called after each round with the round number and the state so far.
    std::function<void(int, const ConvergedState&)> trace;
};

int default_round_bound(const Topology& t);

/// Synchronous-round propagation to a fixed point. Throws OscillationError when the
/// round bound is exceeded. Does not validate its inputs; callers run
/// validate_topology / validate_te_config first.
ConvergedState propagate_to_convergence(const Topology& t, const TeConfig& cfg,
                                        const PropagationOptions& opts = {});

/// Runs exactly one more round on `s` and returns the result (for fixed-point checks).
ConvergedState propagate_one_round(const Topology& t, const TeConfig& cfg, const ConvergedState& s);

/// Exact entry for `p` when installed, otherwise the longest installed prefix covering it.
/// Throws ConfigError when `a` is not in the topology the state came from.
std::optional<Route> best_route(const ConvergedState& s, Asn a, const Prefix& p);

/// Canonical dump sorted by AS then prefix; the selected route is marked '*'.
std::string dump_state(const ConvergedState& s);

}  // namespace bgpte
