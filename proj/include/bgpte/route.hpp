#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bgpte/types.hpp"

namespace bgpte {

inline constexpr std::string_view kLocalLink = "local";

/// Upper bound on communities carried by one route. 64 * 4 bytes stays far below
/// the 4096-byte UPDATE limit together with the other attributes.
inline constexpr std::size_t kMaxCommunitiesPerRoute = 64;

struct Route {
    Prefix prefix;
    std::vector<Asn> as_path;  // front = most recent hop, back = origin
    int local_pref = 0;
    std::optional<std::uint32_t> med;
    std::set<Community> communities;
    std::string learned_on{kLocalLink};
    Asn origin_as;

    bool is_local() const { return learned_on == kLocalLink; }
    bool path_contains(Asn a) const;
    /// First AS of the path, or origin_as for a local route.
    Asn neighbor_as() const { return as_path.empty() ? origin_as : as_path.front(); }

    bool operator==(const Route&) const = default;
};

/// Customer 200, peer 100, provider 50.
int default_local_pref(Role neighbor_role);

enum class Preference : std::uint8_t { First, Second };

/// Decision process: higher LP, shorter AS-path, lower MED (same neighbor AS only,
/// missing = 0), lower neighbor ASN, smaller learned_on link id.
/// Throws Error when the prefixes differ. Identical routes compare as First.
Preference compare_routes(const Route& r1, const Route& r2);

/// Valley-free export rule. `learned_from` is nullopt for locally originated routes.
bool export_permitted(std::optional<Role> learned_from, Role to);

Route prepend_path(Route r, Asn who, int n);

std::string render_path(const std::vector<Asn>& path);

}  // namespace bgpte
