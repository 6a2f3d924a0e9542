#include "bgpte/route.hpp"

#include <algorithm>

#include "bgpte/error.hpp"

namespace bgpte {

bool Route::path_contains(Asn a) const { return std::find(as_path.begin(), as_path.end(), a) != as_path.end(); }

int default_local_pref(Role neighbor_role) {
    switch (neighbor_role) {
        case Role::Customer: return 200;
        case Role::Peer: return 100;
        case Role::Provider: return 50;
    }
    return 0;
}

Preference compare_routes(const Route& r1, const Route& r2) {
    if (r1.prefix != r2.prefix) {
        throw Error("compare_routes: prefix mismatch " + r1.prefix.str() + " vs " + r2.prefix.str());
    }
    auto pick = [](bool first) { return first ? Preference::First : Preference::Second; };

    if (r1.local_pref != r2.local_pref) return pick(r1.local_pref > r2.local_pref);
    if (r1.as_path.size() != r2.as_path.size()) return pick(r1.as_path.size() < r2.as_path.size());
    if (r1.neighbor_as() == r2.neighbor_as()) {
        auto m1 = r1.med.value_or(0);
        auto m2 = r2.med.value_or(0);
        if (m1 != m2) return pick(m1 < m2);
    }
    if (r1.neighbor_as() != r2.neighbor_as()) return pick(r1.neighbor_as() < r2.neighbor_as());
    return pick(r1.learned_on <= r2.learned_on);
}

bool export_permitted(std::optional<Role> learned_from, Role to) {
    if (!learned_from || *learned_from == Role::Customer) return true;
    return to == Role::Customer;
}

Route prepend_path(Route r, Asn who, int n) {
    if (n < 0) throw Error("prepend_path: negative count");
    r.as_path.insert(r.as_path.begin(), static_cast<std::size_t>(n), who);
    return r;
}

std::string render_path(const std::vector<Asn>& path) {
    std::string out;
    for (Asn a : path) {
        if (!out.empty()) out += ' ';
        out += to_string(a);
    }
    return out;
}

}  // namespace bgpte
