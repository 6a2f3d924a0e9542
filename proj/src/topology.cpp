#include "bgpte/topology.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "bgpte/error.hpp"

namespace bgpte {

std::string to_string(const PeerSelector& s) {
    if (const auto* a = std::get_if<Asn>(&s)) return to_string(*a);
    if (std::holds_alternative<AllUpstreams>(s)) return "all";
    return "region:" + std::get<RegionTag>(s).tag;
}

Role InterdomainLink::role_of_far_end(Asn self) const {
    if (kind == LinkKind::PeerToPeer) return Role::Peer;
    // endpoint_a is the customer
    return self == endpoint_a ? Role::Provider : Role::Customer;
}

const InterdomainLink* Topology::find_link(std::string_view id) const {
    auto it = std::find_if(links.begin(), links.end(), [&](const InterdomainLink& l) { return l.id == id; });
    return it == links.end() ? nullptr : &*it;
}

const PolicyCatalog* Topology::catalog_of(Asn a) const {
    auto it = catalogs.find(a);
    return it == catalogs.end() ? nullptr : &it->second;
}

std::optional<Asn> Topology::originator_of(const Prefix& p) const {
    for (const auto& [asn, prefixes] : originations) {
        if (prefixes.contains(p)) return asn;
    }
    return std::nullopt;
}

std::optional<Asn> Topology::covering_originator(const Prefix& p) const {
    std::optional<Asn> best;
    int best_len = -1;
    for (const auto& [asn, prefixes] : originations) {
        for (const auto& q : prefixes) {
            if (q.contains(p) && q.length() > best_len) {
                best = asn;
                best_len = q.length();
            }
        }
    }
    return best;
}

std::vector<Adjacency> adjacencies(const Topology& t, Asn a) {
    std::vector<Adjacency> out;
    for (const auto& l : t.links) {
        if (!l.up || !l.touches(a)) continue;
        out.push_back({l.id, l.other(a), l.role_of_far_end(a)});
    }
    return out;
}

std::set<RelationshipEntry> relationship_between(const Topology& t, Asn a, Asn b) {
    if (!t.has_as(a)) throw ConfigError("unknown AS " + to_string(a));
    if (!t.has_as(b)) throw ConfigError("unknown AS " + to_string(b));
    if (a == b) throw ConfigError("relationship of AS " + to_string(a) + " with itself is undefined");
    std::set<RelationshipEntry> out;
    for (const auto& l : t.links) {
        if (l.up && l.touches(a) && l.touches(b)) out.insert({l.id, l.role_of_far_end(a)});
    }
    return out;
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const { return findings.size() - error_count(); }

namespace {

// Returns one customer->provider cycle (as a member list) if the digraph has any.
std::optional<std::vector<Asn>> find_provider_cycle(const Topology& t) {
    std::map<Asn, std::vector<Asn>> up;
    for (const auto& l : t.links) {
        if (l.kind == LinkKind::CustomerToProvider) up[l.endpoint_a].push_back(l.endpoint_b);
    }
    enum class Mark { White, Grey, Black };
    std::map<Asn, Mark> mark;
    std::vector<Asn> stack;
    std::optional<std::vector<Asn>> cycle;

    std::function<void(Asn)> dfs = [&](Asn v) {
        mark[v] = Mark::Grey;
        stack.push_back(v);
        for (Asn w : up[v]) {
            if (cycle) return;
            if (mark[w] == Mark::Grey) {
                auto from = std::find(stack.begin(), stack.end(), w);
                cycle = std::vector<Asn>(from, stack.end());
                return;
            }
            if (mark[w] == Mark::White) dfs(w);
        }
        stack.pop_back();
        mark[v] = Mark::Black;
    };
    for (const auto& [asn, _] : up) {
        if (!cycle && mark[asn] == Mark::White) dfs(asn);
    }
    return cycle;
}

}  // namespace

ValidationReport validate_topology(const Topology& t) {
    ValidationReport report;
    auto error = [&](std::string msg) { report.findings.push_back({Severity::Error, std::move(msg)}); };

    std::set<std::string> ids;
    for (const auto& l : t.links) {
        if (l.id == "local") error("link id 'local' is reserved");
        if (!ids.insert(l.id).second) error("duplicate link id " + l.id);
        if (l.endpoint_a == l.endpoint_b) error("link " + l.id + " connects AS " + to_string(l.endpoint_a) + " to itself");
        for (Asn e : {l.endpoint_a, l.endpoint_b}) {
            if (!t.has_as(e)) error("link " + l.id + " references undeclared AS " + to_string(e));
        }
    }

    std::map<Prefix, Asn> owner;
    for (const auto& [asn, prefixes] : t.originations) {
        if (!t.has_as(asn)) error("origination by undeclared AS " + to_string(asn));
        for (const auto& p : prefixes) {
            auto [it, fresh] = owner.emplace(p, asn);
            if (!fresh) error("prefix " + p.str() + " originated by both " + to_string(it->second) + " and " + to_string(asn));
        }
    }

    for (const auto& [asn, cat] : t.catalogs) {
        if (cat.empty()) continue;
        if (!t.has_as(asn)) {
            error("catalog on undeclared AS " + to_string(asn));
            continue;
        }
        if (cat.owner != asn) error("catalog keyed by " + to_string(asn) + " claims owner " + to_string(cat.owner));
        if (t.ases.at(asn) != AsRole::Transit) error("catalog on non-transit AS " + to_string(asn));
        for (const auto& [c, rule] : cat.prepend_rules) {
            if (rule.count < 1 || rule.count > kMaxPrependCount) {
                error("prepend count " + std::to_string(rule.count) + " for " + to_string(c) + " outside 1..3");
            }
        }
        for (const auto& [c, _] : cat.lp_rules) {
            if (cat.suppress_rules.contains(c) || cat.prepend_rules.contains(c)) {
                error("community " + to_string(c) + " maps to more than one rule at AS " + to_string(asn));
            }
        }
        for (const auto& [c, _] : cat.suppress_rules) {
            if (cat.prepend_rules.contains(c)) {
                error("community " + to_string(c) + " maps to more than one rule at AS " + to_string(asn));
            }
        }
    }

    for (const auto& [asn, table] : t.lp_overrides) {
        if (!t.has_as(asn)) error("localpref override on undeclared AS " + to_string(asn));
        for (const auto& [nbr, lp] : table) {
            if (!t.has_as(nbr)) error("localpref override names undeclared AS " + to_string(nbr));
            if (lp < 0) error("negative localpref for AS " + to_string(asn));
        }
    }

    if (auto cycle = find_provider_cycle(t)) {
        std::string members;
        for (Asn a : *cycle) members += (members.empty() ? "" : " -> ") + to_string(a);
        report.findings.push_back(
            {Severity::Warning, "customer-provider cycle " + members + " (convergence not guaranteed)"});
    }
    return report;
}

std::string serialize_topology(const Topology& t) {
    std::ostringstream out;
    for (const auto& [asn, role] : t.ases) {
        out << "as " << asn.value << ' ' << (role == AsRole::Stub ? "stub" : "transit") << '\n';
    }
    std::vector<const InterdomainLink*> links;
    for (const auto& l : t.links) links.push_back(&l);
    std::sort(links.begin(), links.end(), [](auto* x, auto* y) { return x->id < y->id; });
    for (const auto* l : links) {
        out << "link " << l->id << ' ' << l->endpoint_a.value << ' ' << l->endpoint_b.value << ' '
            << (l->kind == LinkKind::CustomerToProvider ? "c2p" : "p2p") << (l->up ? "" : " down") << '\n';
    }
    for (const auto& [asn, prefixes] : t.originations) {
        for (const auto& p : prefixes) out << "originate " << asn.value << ' ' << p.str() << '\n';
    }
    for (const auto& [asn, cat] : t.catalogs) {
        for (const auto& [c, lp] : cat.lp_rules) out << "policy " << asn.value << " lp " << to_string(c) << ' ' << lp << '\n';
        for (const auto& [c, rule] : cat.prepend_rules) {
            out << "policy " << asn.value << " prepend " << to_string(c) << ' ' << to_string(rule.target) << ' '
                << rule.count << '\n';
        }
        for (const auto& [c, sel] : cat.suppress_rules) {
            out << "policy " << asn.value << " suppress " << to_string(c) << ' ' << to_string(sel) << '\n';
        }
        for (const auto& [nbr, tag] : cat.region_of) {
            out << "policy " << asn.value << " region " << nbr.value << ' ' << tag << '\n';
        }
        if (cat.drops_community_updates) out << "policy " << asn.value << " drops-community-updates\n";
    }
    for (const auto& [asn, table] : t.lp_overrides) {
        for (const auto& [nbr, lp] : table) out << "localpref " << asn.value << ' ' << nbr.value << ' ' << lp << '\n';
    }
    return out.str();
}

}  // namespace bgpte
