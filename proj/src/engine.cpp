#include "bgpte/engine.hpp"

#include <algorithm>
#include <sstream>

namespace bgpte {

const AdvertisementAttrs* TeConfig::find(const Prefix& p, std::string_view link) const {
    auto it = entries.find(AdvertisementKey{p, std::string(link)});
    return it == entries.end() ? nullptr : &it->second;
}

OscillationError::OscillationError(int rounds, std::vector<ChangingPair> changing)
    : Error("no fixed point after " + std::to_string(rounds) + " rounds (" + std::to_string(changing.size()) +
            " (AS, prefix) pairs still changing)"),
      rounds_(rounds),
      changing_(std::move(changing)) {}

namespace {

// Origin AS for an advertisement entry: the AS originating the longest covering prefix.
std::optional<Asn> entry_origin(const Topology& t, const Prefix& p) { return t.covering_originator(p); }

}  // namespace

void validate_te_config(const Topology& t, const TeConfig& cfg) {
    for (const auto& [key, attrs] : cfg.entries) {
        const auto* link = t.find_link(key.link);
        if (!link) throw ConfigError("advertisement references unknown link " + key.link);
        auto origin = entry_origin(t, key.prefix);
        if (!origin) throw ConfigError("advertisement of " + key.prefix.str() + " which no AS originates or covers");
        if (!link->touches(*origin)) {
            throw ConfigError("link " + key.link + " is not incident to AS " + to_string(*origin) + " originating " +
                              key.prefix.str());
        }
        if (attrs.communities.size() > kMaxCommunitiesPerRoute) {
            throw ConfigError("advertisement of " + key.prefix.str() + " on " + key.link + " carries " +
                              std::to_string(attrs.communities.size()) + " communities (limit " +
                              std::to_string(kMaxCommunitiesPerRoute) + ")");
        }
    }
    for (const auto& [owner, cat] : t.catalogs) {
        auto adj = adjacencies(t, owner);
        auto is_neighbor = [&](Asn a) {
            return std::any_of(adj.begin(), adj.end(), [&](const Adjacency& x) { return x.neighbor == a; });
        };
        auto check = [&](const Community& c, const PeerSelector& s) {
            if (const auto* a = std::get_if<Asn>(&s); a && !is_neighbor(*a)) {
                throw ConfigError("policy " + to_string(c) + " of AS " + to_string(owner) + " targets non-neighbor " +
                                  to_string(*a));
            }
        };
        for (const auto& [c, sel] : cat.suppress_rules) check(c, sel);
        for (const auto& [c, rule] : cat.prepend_rules) check(c, rule.target);
    }
}

int default_round_bound(const Topology& t) {
    int max_prepend = 0;
    for (const auto& [_, cat] : t.catalogs) {
        for (const auto& [__, rule] : cat.prepend_rules) max_prepend = std::max(max_prepend, rule.count);
    }
    return 2 * static_cast<int>(t.ases.size()) + max_prepend + 4;
}

namespace {

struct Neighbor {
    std::string link;
    std::size_t index;  // neighbor AS index
    Role role;          // what the neighbor is to us
};

struct AsInfo {
    Asn asn;
    std::vector<Neighbor> neighbors;
    std::vector<Adjacency> adjacency;  // same order as neighbors, for selector expansion
    const PolicyCatalog* catalog = nullptr;
    const std::map<Asn, int>* lp_table = nullptr;
};

struct PrefixInfo {
    Prefix prefix;
    std::size_t origin;  // AS index
    bool originated;     // false for more-specific announcements
};

struct Slot {
    std::vector<AnnotatedRoute> adj;  // sorted by learned_on
    int best = -1;

    bool operator==(const Slot&) const = default;
};

using Table = std::vector<std::vector<Slot>>;  // [as][prefix]

// Picks the winner among candidates: best per neighbor AS first (MED applies there),
// then the best among those group winners.
int select_best(const std::vector<AnnotatedRoute>& cands) {
    if (cands.empty()) return -1;
    std::map<Asn, std::size_t> group_best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        Asn n = cands[i].route.neighbor_as();
        auto it = group_best.find(n);
        if (it == group_best.end()) {
            group_best.emplace(n, i);
        } else if (compare_routes(cands[i].route, cands[it->second].route) == Preference::First) {
            it->second = i;
        }
    }
    std::size_t best = group_best.begin()->second;
    for (const auto& [_, i] : group_best) {
        if (compare_routes(cands[i].route, cands[best].route) == Preference::First) best = i;
    }
    return static_cast<int>(best);
}

class Engine {
public:
    Engine(const Topology& t, const TeConfig& cfg) : topo_(t), cfg_(cfg) {
        for (const auto& [asn, _] : t.ases) {
            index_.emplace(asn, ases_.size());
            ases_.push_back(AsInfo{asn, {}, {}, t.catalog_of(asn), nullptr});
        }
        for (auto& info : ases_) {
            info.adjacency = adjacencies(t, info.asn);
            for (const auto& a : info.adjacency) {
                auto it = index_.find(a.neighbor);
                if (it != index_.end()) info.neighbors.push_back({a.link, it->second, a.role});
            }
            if (auto it = t.lp_overrides.find(info.asn); it != t.lp_overrides.end()) info.lp_table = &it->second;
        }
        std::set<Prefix> universe;
        for (const auto& [asn, prefixes] : t.originations) universe.insert(prefixes.begin(), prefixes.end());
        for (const auto& [key, attrs] : cfg.entries) {
            if (attrs.announced) universe.insert(key.prefix);
        }
        for (const auto& p : universe) {
            auto origin = t.covering_originator(p);
            if (!origin || !index_.contains(*origin)) continue;
            prefixes_.push_back({p, index_.at(*origin), t.originator_of(p).has_value()});
        }
    }

    std::size_t as_count() const { return ases_.size(); }

    Table initial() const {
        Table table(ases_.size(), std::vector<Slot>(prefixes_.size()));
        for (std::size_t p = 0; p < prefixes_.size(); ++p) {
            auto& slot = table[prefixes_[p].origin][p];
            slot.adj.push_back(local_route(p));
            slot.best = 0;
        }
        return table;
    }

    Table step(const Table& prev) const {
        Table next(ases_.size(), std::vector<Slot>(prefixes_.size()));
        for (std::size_t p = 0; p < prefixes_.size(); ++p) {
            next[prefixes_[p].origin][p].adj.push_back(local_route(p));
        }
        for (std::size_t a = 0; a < ases_.size(); ++a) {
            for (std::size_t p = 0; p < prefixes_.size(); ++p) {
                const Slot& slot = prev[a][p];
                if (slot.best < 0) continue;
                export_route(a, p, slot.adj[static_cast<std::size_t>(slot.best)], next);
            }
        }
        for (auto& row : next) {
            for (auto& slot : row) {
                std::sort(slot.adj.begin(), slot.adj.end(),
                          [](const AnnotatedRoute& x, const AnnotatedRoute& y) { return x.route.learned_on < y.route.learned_on; });
                slot.best = select_best(slot.adj);
            }
        }
        return next;
    }

    ConvergedState to_state(const Table& table, int rounds) const {
        ConvergedState s;
        s.rounds_used = rounds;
        for (std::size_t a = 0; a < ases_.size(); ++a) {
            auto& per_as = s.ribs[ases_[a].asn];
            for (std::size_t p = 0; p < prefixes_.size(); ++p) {
                const Slot& slot = table[a][p];
                if (slot.adj.empty()) continue;
                PrefixRib rib;
                for (const auto& r : slot.adj) rib.adj_rib_in.emplace(r.route.learned_on, r);
                if (slot.best >= 0) rib.loc_rib = slot.adj[static_cast<std::size_t>(slot.best)];
                per_as.emplace(prefixes_[p].prefix, std::move(rib));
            }
        }
        return s;
    }

    Table from_state(const ConvergedState& s) const {
        Table table(ases_.size(), std::vector<Slot>(prefixes_.size()));
        for (std::size_t a = 0; a < ases_.size(); ++a) {
            auto it = s.ribs.find(ases_[a].asn);
            if (it == s.ribs.end()) continue;
            for (std::size_t p = 0; p < prefixes_.size(); ++p) {
                auto jt = it->second.find(prefixes_[p].prefix);
                if (jt == it->second.end()) continue;
                auto& slot = table[a][p];
                for (const auto& [_, r] : jt->second.adj_rib_in) slot.adj.push_back(r);
                slot.best = select_best(slot.adj);
            }
        }
        return table;
    }

    std::vector<ChangingPair> changed(const Table& x, const Table& y) const {
        std::vector<ChangingPair> out;
        for (std::size_t a = 0; a < ases_.size(); ++a) {
            for (std::size_t p = 0; p < prefixes_.size(); ++p) {
                if (!(x[a][p] == y[a][p])) out.push_back({ases_[a].asn, prefixes_[p].prefix});
            }
        }
        return out;
    }

private:
    AnnotatedRoute local_route(std::size_t p) const {
        Route r;
        r.prefix = prefixes_[p].prefix;
        r.origin_as = ases_[prefixes_[p].origin].asn;
        r.learned_on = std::string(kLocalLink);
        return AnnotatedRoute{std::move(r), std::nullopt, {}, {}};
    }

    // Attributes the origin attaches on `link`, or nullopt when it does not announce there.
    std::optional<AdvertisementAttrs> advertisement(std::size_t p, const std::string& link) const {
        const Prefix& prefix = prefixes_[p].prefix;
        const auto* attrs = cfg_.find(prefix, link);
        if (attrs) {
            if (!attrs->announced) return std::nullopt;
            return *attrs;
        }
        if (prefixes_[p].originated) return AdvertisementAttrs{};
        return std::nullopt;
    }

    void export_route(std::size_t a, std::size_t p, const AnnotatedRoute& best, Table& next) const {
        const AsInfo& self = ases_[a];
        std::optional<Role> learned_from;
        if (!best.route.is_local()) {
            for (const auto& n : self.neighbors) {
                if (n.link == best.route.learned_on) learned_from = n.role;
            }
            if (!learned_from) return;  // learned on a link that no longer exists
        }
        for (const auto& n : self.neighbors) {
            if (!export_permitted(learned_from, n.role)) continue;
            std::optional<Route> out;
            if (best.route.is_local()) {
                auto attrs = advertisement(p, n.link);
                if (!attrs) continue;
                Route r = prepend_path(best.route, self.asn, 1);
                r.communities = attrs->communities;
                r.med = attrs->med;
                r.learned_on.clear();
                out = std::move(r);
            } else {
                out = egress_apply(best, self.asn, ases_[n.index].asn, self.catalog);
            }
            if (out) receive(n.index, a, n.link, std::move(*out), next[n.index][p]);
        }
    }

    void receive(std::size_t receiver, std::size_t sender, const std::string& link, Route r, Slot& slot) const {
        const AsInfo& self = ases_[receiver];
        if (r.path_contains(self.asn)) return;
        Role sender_role = Role::Peer;
        for (const auto& n : self.neighbors) {
            if (n.link == link) sender_role = n.role;
        }
        bool from_customer = sender_role == Role::Customer;
        if (from_customer && self.catalog && catalog_rejects(*self.catalog, r)) return;

        r.learned_on = link;
        AnnotatedRoute ar = (from_customer && self.catalog) ? ingress_transform(*self.catalog, r, self.adjacency)
                                                            : AnnotatedRoute{std::move(r), std::nullopt, {}, {}};
        int lp = default_local_pref(sender_role);
        if (self.lp_table) {
            if (auto it = self.lp_table->find(ases_[sender].asn); it != self.lp_table->end()) lp = it->second;
        }
        if (ar.lp_override) lp = *ar.lp_override;
        ar.route.local_pref = lp;
        slot.adj.push_back(std::move(ar));
    }

    const Topology& topo_;
    const TeConfig& cfg_;
    std::vector<AsInfo> ases_;
    std::map<Asn, std::size_t> index_;
    std::vector<PrefixInfo> prefixes_;
};

}  // namespace

ConvergedState propagate_to_convergence(const Topology& t, const TeConfig& cfg, const PropagationOptions& opts) {
    Engine engine(t, cfg);
    const int bound = opts.max_rounds.value_or(default_round_bound(t));
    Table table = engine.initial();
    for (int round = 1;; ++round) {
        Table next = engine.step(table);
        if (opts.trace) opts.trace(round, engine.to_state(next, round));
        if (next == table) return engine.to_state(next, round);
        if (round >= bound) throw OscillationError(round, engine.changed(table, next));
        table = std::move(next);
    }
}

ConvergedState propagate_one_round(const Topology& t, const TeConfig& cfg, const ConvergedState& s) {
    Engine engine(t, cfg);
    return engine.to_state(engine.step(engine.from_state(s)), s.rounds_used + 1);
}

std::optional<Route> best_route(const ConvergedState& s, Asn a, const Prefix& p) {
    auto it = s.ribs.find(a);
    if (it == s.ribs.end()) throw ConfigError("unknown AS " + to_string(a));
    const PrefixRib* best = nullptr;
    int best_len = -1;
    for (const auto& [prefix, rib] : it->second) {
        if (!rib.loc_rib || !prefix.contains(p)) continue;
        if (prefix.length() > best_len) {
            best = &rib;
            best_len = prefix.length();
        }
    }
    if (!best) return std::nullopt;
    return best->loc_rib->route;
}

namespace {

void dump_route(std::ostringstream& out, char mark, const AnnotatedRoute& ar) {
    const Route& r = ar.route;
    out << "  " << mark << " via=" << r.learned_on << " path=[" << render_path(r.as_path) << "] lp=" << r.local_pref
        << " med=" << (r.med ? std::to_string(*r.med) : "-") << " comm=";
    if (r.communities.empty()) out << '-';
    bool first = true;
    for (const auto& c : r.communities) {
        out << (first ? "" : ",") << to_string(c);
        first = false;
    }
    if (!ar.prepend_schedule.empty()) {
        out << " prepend=";
        first = true;
        for (const auto& [n, k] : ar.prepend_schedule) {
            out << (first ? "" : ",") << n.value << 'x' << k;
            first = false;
        }
    }
    if (!ar.suppressed_toward.empty()) {
        out << " suppress=";
        first = true;
        for (Asn n : ar.suppressed_toward) {
            out << (first ? "" : ",") << n.value;
            first = false;
        }
    }
    out << '\n';
}

}  // namespace

std::string dump_state(const ConvergedState& s) {
    std::ostringstream out;
    out << "rounds " << s.rounds_used << '\n';
    for (const auto& [asn, per_prefix] : s.ribs) {
        for (const auto& [prefix, rib] : per_prefix) {
            out << "as " << asn.value << " prefix " << prefix.str() << '\n';
            for (const auto& [link, ar] : rib.adj_rib_in) {
                bool selected = rib.loc_rib && rib.loc_rib->route.learned_on == link;
                dump_route(out, selected ? '*' : ' ', ar);
            }
        }
    }
    return out.str();
}

}  // namespace bgpte
