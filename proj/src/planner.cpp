#include "bgpte/planner.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "bgpte/error.hpp"

namespace bgpte {

std::string to_string(const Objective& o) { return to_string(o.flow) + " -> " + o.required_link; }

std::string_view to_string(ActionKind k) {
    switch (k) {
        case ActionKind::AttachCommunity: return "attach-community";
        case ActionKind::SetMed: return "set-med";
        case ActionKind::Withhold: return "withhold";
        case ActionKind::AdvertiseMoreSpecific: return "advertise-more-specific";
        case ActionKind::Advertise: return "advertise";
    }
    return "?";
}

std::string to_string(const Action& a) {
    std::string out = std::string(to_string(a.kind)) + " " + a.prefix.str() + " " + a.link;
    if (a.community) out += " " + to_string(*a.community);
    if (a.med) out += " " + std::to_string(*a.med);
    return out;
}

std::string to_string(const InfeasibilityWitness& w) {
    return to_string(w.conflicting.first) + " vs " + to_string(w.conflicting.second) +
           " pivot=" + (w.pivot ? to_string(*w.pivot) : std::string("same-provider"));
}

bool PlanEvaluation::all_satisfied() const {
    return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
}

namespace {

bool announced_in(const Topology& t, const TeConfig& cfg, const Prefix& p, const std::string& link) {
    if (const auto* attrs = cfg.find(p, link)) return attrs->announced;
    return t.originator_of(p).has_value();
}

// Provider on the far side of `link` from `dest`.
Asn far_end(const Topology& t, Asn dest, const std::string& link) {
    const auto* l = t.find_link(link);
    if (!l) throw ConfigError("unknown link " + link);
    return l->other(dest);
}

const PolicyCatalog* link_catalog(const Topology& t, const Action& a) {
    auto origin = t.covering_originator(a.prefix);
    const auto* l = t.find_link(a.link);
    if (!origin || !l || !l->touches(*origin)) return nullptr;
    return t.catalog_of(l->other(*origin));
}

}  // namespace

void validate_objectives(const Topology& t, Asn dest, const std::vector<Objective>& objectives) {
    if (!t.has_as(dest)) throw ConfigError("unknown destination AS " + to_string(dest));
    if (t.ases.at(dest) != AsRole::Stub) throw ConfigError("planning destination " + to_string(dest) + " is not a stub AS");
    for (const auto& o : objectives) {
        if (classify(o.flow) == FlowClass::SourcePrefixBased) {
            throw UnsupportedGranularity("objective " + to_string(o) +
                                         ": unsupported granularity (source-prefix-based); BGP forwarding is "
                                         "destination-address based and cannot split traffic by source prefix");
        }
        if (o.flow.dst_asn != dest) throw ConfigError("objective " + to_string(o) + " targets another destination");
        if (o.flow.src_asn && (!t.has_as(*o.flow.src_asn) || *o.flow.src_asn == dest)) {
            throw ConfigError("objective " + to_string(o) + " names an invalid source AS");
        }
        const auto* l = t.find_link(o.required_link);
        if (!l) throw ConfigError("objective " + to_string(o) + " names unknown link");
        if (!l->touches(dest)) throw ConfigError("objective " + to_string(o) + " names a link not incident to the destination");
        if (!l->up) throw ConfigError("objective " + to_string(o) + " names a down link");
        auto origin = t.covering_originator(o.flow.dst_prefix);
        if (!origin || *origin != dest) {
            throw ConfigError("objective " + to_string(o) + " names a prefix the destination does not originate");
        }
    }
}

std::vector<std::vector<Asn>> export_legal_paths(const Topology& t, Asn dest, const std::string& link, Asn src) {
    const auto* l = t.find_link(link);
    if (!l || !l->up || !l->touches(dest)) return {};
    const Asn provider = l->other(dest);
    // "climbing": the route at this AS was learned from a customer, so it may go anywhere.
    const bool climbing = l->role_of_far_end(provider) == Role::Customer;

    std::vector<std::vector<Asn>> out;
    std::vector<Asn> route_order{provider};
    std::set<Asn> on_path{dest, provider};

    std::function<void(Asn, bool)> walk = [&](Asn v, bool up) {
        if (v == src) {
            out.emplace_back(route_order.rbegin(), route_order.rend());
            return;
        }
        for (const auto& adj : adjacencies(t, v)) {
            if (on_path.contains(adj.neighbor)) continue;
            if (!export_permitted(up ? std::nullopt : std::optional<Role>(Role::Peer), adj.role)) continue;
            on_path.insert(adj.neighbor);
            route_order.push_back(adj.neighbor);
            walk(adj.neighbor, adj.role == Role::Provider);
            route_order.pop_back();
            on_path.erase(adj.neighbor);
        }
    };
    walk(provider, climbing);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<InfeasibilityWitness> common_upstream_check(const Topology& t, const std::vector<Objective>& objectives) {
    std::vector<InfeasibilityWitness> out;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        for (std::size_t j = i + 1; j < objectives.size(); ++j) {
            const auto& o1 = objectives[i];
            const auto& o2 = objectives[j];
            if (o1.flow.dst_prefix != o2.flow.dst_prefix || o1.flow.dst_asn != o2.flow.dst_asn ||
                o1.required_link == o2.required_link) {
                continue;
            }
            const Asn dest = o1.flow.dst_asn;
            if (far_end(t, dest, o1.required_link) == far_end(t, dest, o2.required_link)) {
                out.push_back({{o1, o2}, std::nullopt});
                continue;
            }
            if (!o1.flow.src_asn || !o2.flow.src_asn) continue;

            auto paths1 = export_legal_paths(t, dest, o1.required_link, *o1.flow.src_asn);
            auto paths2 = export_legal_paths(t, dest, o2.required_link, *o2.flow.src_asn);
            if (paths1.empty() || paths2.empty()) continue;

            const std::set<Asn> excluded{*o1.flow.src_asn, *o2.flow.src_asn, dest};
            std::optional<std::set<Asn>> common;
            for (const auto* paths : {&paths1, &paths2}) {
                for (const auto& p : *paths) {
                    std::set<Asn> members;
                    for (Asn a : p) {
                        if (!excluded.contains(a)) members.insert(a);
                    }
                    if (!common) {
                        common = std::move(members);
                    } else {
                        std::erase_if(*common, [&](Asn a) { return !members.contains(a); });
                    }
                }
            }
            if (!common || common->empty()) continue;
            // The merge point is the common AS met first walking from the source.
            for (Asn a : paths1.front()) {
                if (common->contains(a)) {
                    out.push_back({{o1, o2}, a});
                    break;
                }
            }
        }
    }
    return out;
}

std::set<Prefix> objective_prefixes(const Topology& t, Asn dest, const std::vector<Objective>& objectives) {
    std::set<Prefix> out;
    auto it = t.originations.find(dest);
    for (const auto& o : objectives) {
        if (it == t.originations.end() || !it->second.contains(o.flow.dst_prefix)) out.insert(o.flow.dst_prefix);
    }
    return out;
}

std::vector<Action> candidate_actions(const Topology& t, Asn dest, const TeConfig& base,
                                      const std::vector<Objective>& objectives) {
    std::vector<Action> out;
    auto orig = t.originations.find(dest);
    if (orig == t.originations.end()) return out;
    auto links = adjacencies(t, dest);

    std::map<Asn, int> links_per_neighbor;
    for (const auto& adj : links) ++links_per_neighbor[adj.neighbor];

    for (const auto& p : orig->second) {
        for (const auto& adj : links) {
            bool announced = announced_in(t, base, p, adj.link);
            out.push_back({announced ? ActionKind::Withhold : ActionKind::Advertise, p, adj.link, {}, {}});
            if (const auto* cat = t.catalog_of(adj.neighbor)) {
                for (const auto& [c, _] : cat->lp_rules) out.push_back({ActionKind::AttachCommunity, p, adj.link, c, {}});
                for (const auto& [c, _] : cat->prepend_rules) out.push_back({ActionKind::AttachCommunity, p, adj.link, c, {}});
                for (const auto& [c, _] : cat->suppress_rules) out.push_back({ActionKind::AttachCommunity, p, adj.link, c, {}});
            }
            if (links_per_neighbor[adj.neighbor] >= 2) {
                for (std::uint32_t med : {10u, 20u}) out.push_back({ActionKind::SetMed, p, adj.link, {}, med});
            }
        }
        // One split level, and only halves that matter to some objective.
        if (p.length() < 32) {
            for (const auto& half : {p.lower_half(), p.upper_half()}) {
                bool wanted = std::any_of(objectives.begin(), objectives.end(), [&](const Objective& o) {
                    return p.strictly_contains(o.flow.dst_prefix) && half.contains(o.flow.dst_prefix);
                });
                if (!wanted) continue;
                for (const auto& adj : links) {
                    if (!announced_in(t, base, half, adj.link)) {
                        out.push_back({ActionKind::AdvertiseMoreSpecific, half, adj.link, {}, {}});
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int prepend_cost(const Topology& t, const Action& a) {
    if (a.kind != ActionKind::AttachCommunity || !a.community) return 0;
    const auto* cat = link_catalog(t, a);
    if (!cat) return 0;
    auto it = cat->prepend_rules.find(*a.community);
    return it == cat->prepend_rules.end() ? 0 : it->second.count;
}

bool compatible(const Topology& t, const std::vector<Action>& actions) {
    std::map<AdvertisementKey, std::vector<const Action*>> by_key;
    for (const auto& a : actions) by_key[{a.prefix, a.link}].push_back(&a);

    for (const auto& [key, group] : by_key) {
        int withhold = 0, advertise = 0, med = 0, attach = 0;
        std::set<PeerSelector> prepend_targets;
        for (const auto* a : group) {
            switch (a->kind) {
                case ActionKind::Withhold: ++withhold; break;
                case ActionKind::Advertise: ++advertise; break;
                case ActionKind::SetMed: ++med; break;
                case ActionKind::AttachCommunity: {
                    ++attach;
                    const auto* cat = link_catalog(t, *a);
                    if (!cat || !a->community) break;
                    if (auto it = cat->prepend_rules.find(*a->community); it != cat->prepend_rules.end()) {
                        if (!prepend_targets.insert(it->second.target).second) return false;
                    }
                    break;
                }
                case ActionKind::AdvertiseMoreSpecific: break;
            }
        }
        if (withhold + advertise > 1 || med > 1) return false;
        if (withhold && (med || attach)) return false;
        if (static_cast<std::size_t>(attach) > kMaxCommunitiesPerRoute) return false;
    }
    return true;
}

TeConfig apply_actions(const Topology& t, TeConfig cfg, const std::vector<Action>& actions) {
    for (const auto& a : actions) {
        AdvertisementKey key{a.prefix, a.link};
        auto [it, fresh] = cfg.entries.try_emplace(key);
        if (fresh) it->second.announced = t.originator_of(a.prefix).has_value();
        auto& attrs = it->second;
        switch (a.kind) {
            case ActionKind::Withhold:
                attrs = AdvertisementAttrs{false, {}, {}};
                break;
            case ActionKind::Advertise:
            case ActionKind::AdvertiseMoreSpecific:
                attrs.announced = true;
                break;
            case ActionKind::AttachCommunity:
                if (a.community) attrs.communities.insert(*a.community);
                break;
            case ActionKind::SetMed:
                attrs.med = a.med;
                break;
        }
    }
    return cfg;
}

bool objective_satisfied(const IngressMap& m, const Topology& t, const Objective& o) {
    (void)t;
    bool any = false;
    for (const auto& [key, link] : m.entries) {
        if (key.dst_prefix != o.flow.dst_prefix) continue;
        if (o.flow.src_asn && key.src != *o.flow.src_asn) continue;
        any = true;
        if (link != o.required_link) return false;
    }
    return any;
}

std::vector<IngressMove> undemanded_moves(const std::vector<IngressMove>& moves, const std::vector<Objective>& objectives) {
    std::vector<IngressMove> out;
    for (const auto& mv : moves) {
        bool demanded = std::any_of(objectives.begin(), objectives.end(), [&](const Objective& o) {
            return o.flow.dst_prefix == mv.dst_prefix && (!o.flow.src_asn || *o.flow.src_asn == mv.src);
        });
        if (!demanded) out.push_back(mv);
    }
    return out;
}

namespace {

struct Candidate {
    std::vector<std::size_t> picks;  // increasing indices into the sorted atom list
    int prepend = 0;
};

void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        fn(idx);
        if (k == 0) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool keeps_reachability(const IngressMap& base, const IngressMap& next) {
    for (const auto& [key, link] : base.entries) {
        if (!link) continue;
        auto it = next.entries.find(key);
        if (it == next.entries.end() || !it->second) return false;
    }
    return true;
}

}  // namespace

PlanResult plan_inbound_te(const Topology& t, Asn dest, const TeConfig& base, const std::vector<Objective>& objectives,
                           const Budget& budget) {
    validate_objectives(t, dest, objectives);
    validate_te_config(t, base);

    auto witnesses = common_upstream_check(t, objectives);
    if (!witnesses.empty()) return Infeasible{std::move(witnesses)};

    PropagationOptions opts;
    opts.max_rounds = budget.max_rounds;
    const auto extra = objective_prefixes(t, dest, objectives);
    const IngressMap base_map = ingress_map(propagate_to_convergence(t, base, opts), t, dest, extra);

    const auto atoms = candidate_actions(t, dest, base, objectives);
    std::vector<int> atom_cost;
    for (const auto& a : atoms) atom_cost.push_back(prepend_cost(t, a));

    std::size_t evaluated = 0;
    for (std::size_t k = 0; k <= std::min(budget.max_actions, atoms.size()); ++k) {
        std::vector<Candidate> layer;
        combinations(atoms.size(), k, [&](const std::vector<std::size_t>& idx) {
            std::vector<Action> acts;
            int cost = 0;
            for (auto i : idx) {
                acts.push_back(atoms[i]);
                cost += atom_cost[i];
            }
            if (compatible(t, acts)) layer.push_back({idx, cost});
        });
        // Within a layer: fewer prepends first, then lexicographic action order. Index
        // order over the sorted atom list is the lexicographic order.
        std::stable_sort(layer.begin(), layer.end(),
                         [](const Candidate& x, const Candidate& y) { return x.prepend < y.prepend; });

        for (const auto& cand : layer) {
            if (evaluated >= budget.max_candidates) return Exhausted{evaluated};
            ++evaluated;
            std::vector<Action> acts;
            for (auto i : cand.picks) acts.push_back(atoms[i]);
            const TeConfig cfg = apply_actions(t, base, acts);

            ConvergedState state;
            try {
                state = propagate_to_convergence(t, cfg, opts);
            } catch (const OscillationError&) {
                continue;
            }
            IngressMap m = ingress_map(state, t, dest, extra);
            bool ok = std::all_of(objectives.begin(), objectives.end(),
                                  [&](const Objective& o) { return objective_satisfied(m, t, o); });
            if (!ok) continue;
            if (budget.preserve_reachability && !keeps_reachability(base_map, m)) continue;

            Plan plan;
            plan.actions = std::move(acts);
            plan.side_effects = undemanded_moves(diff_ingress(base_map, m), objectives);
            plan.predicted_map = std::move(m);
            plan.lp_constraint_violated = !t.lp_overrides.empty();
            plan.candidates_evaluated = evaluated;
            return plan;
        }
    }
    return Exhausted{evaluated};
}

namespace {

void check_action(const Topology& t, Asn dest, const Action& a) {
    const auto* l = t.find_link(a.link);
    if (!l) throw ConfigError("action " + to_string(a) + " names unknown link");
    if (!l->touches(dest)) throw ConfigError("action " + to_string(a) + " names a link not incident to the destination");
    auto origin = t.covering_originator(a.prefix);
    if (!origin || *origin != dest) throw ConfigError("action " + to_string(a) + " names a foreign prefix");
    if (a.kind == ActionKind::AdvertiseMoreSpecific && t.originator_of(a.prefix)) {
        throw ConfigError("action " + to_string(a) + " is not a strict more-specific");
    }
    if (a.kind == ActionKind::AttachCommunity) {
        const auto* cat = t.catalog_of(l->other(dest));
        if (!a.community || !cat || !cat->defines(*a.community)) {
            throw ConfigError("action " + to_string(a) + " attaches a community the provider does not define");
        }
    }
    if (a.kind == ActionKind::SetMed && !a.med) throw ConfigError("action " + to_string(a) + " lacks a MED value");
}

}  // namespace

PlanEvaluation evaluate_plan(const Topology& t, Asn dest, const TeConfig& base, const std::vector<Action>& actions,
                             const std::vector<Objective>& objectives) {
    for (const auto& a : actions) check_action(t, dest, a);
    const auto extra = objective_prefixes(t, dest, objectives);
    const IngressMap before = ingress_map(propagate_to_convergence(t, base), t, dest, extra);
    const ConvergedState after_state = propagate_to_convergence(t, apply_actions(t, base, actions));
    const IngressMap after = ingress_map(after_state, t, dest, extra);

    PlanEvaluation ev;
    ev.rounds_used = after_state.rounds_used;
    for (const auto& o : objectives) {
        bool ok = true;
        std::vector<Asn> sources;
        if (o.flow.src_asn) {
            sources.push_back(*o.flow.src_asn);
        } else {
            for (const auto& [asn, _] : t.ases) {
                if (asn != dest) sources.push_back(asn);
            }
        }
        for (Asn src : sources) {
            auto hops = resolve_forwarding(after_state, t, src, o.flow.dst_prefix);
            if (!hops || hops->empty() || hops->back() != o.required_link) ok = false;
        }
        ev.satisfied.push_back(ok && !sources.empty());
    }
    ev.side_effects = undemanded_moves(diff_ingress(before, after), objectives);
    return ev;
}

std::string serialize_plan(const Plan& p) {
    std::vector<Action> sorted = p.actions;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream out;
    for (const auto& a : sorted) out << "action " << to_string(a) << '\n';
    for (const auto& mv : p.side_effects) {
        out << "side-effect " << mv.src.value << ' ' << mv.dst_prefix.str() << ' ' << render_link(mv.old_link) << ' '
            << render_link(mv.new_link) << '\n';
    }
    if (p.lp_constraint_violated) out << "warning LP-constraint violated - outcome not guaranteed\n";
    return out.str();
}

}  // namespace bgpte
