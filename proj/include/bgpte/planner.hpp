#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bgpte/engine.hpp"
#include "bgpte/flow.hpp"
#include "bgpte/topology.hpp"

namespace bgpte {

struct Objective {
    Flow flow;
    std::string required_link;

    auto operator<=>(const Objective&) const = default;
};

std::string to_string(const Objective& o);

/// Enumerator order doubles as the tie-break order between equal-cost plans.
enum class ActionKind : std::uint8_t { AttachCommunity, SetMed, Withhold, AdvertiseMoreSpecific, Advertise };

std::string_view to_string(ActionKind k);

struct Action {
    ActionKind kind = ActionKind::AttachCommunity;
    Prefix prefix;
    std::string link;
    std::optional<Community> community;  // AttachCommunity only
    std::optional<std::uint32_t> med;    // SetMed only

    auto operator<=>(const Action&) const = default;
};

std::string to_string(const Action& a);

struct Budget {
    std::size_t max_actions = 3;
    std::size_t max_candidates = 1'000'000;
    /// Reject candidates that cut off any (source, prefix) pair reachable in the baseline.
    bool preserve_reachability = true;
    std::optional<int> max_rounds;
};

struct Plan {
    std::vector<Action> actions;
    IngressMap predicted_map;
    std::vector<IngressMove> side_effects;
    /// Set when the topology carries per-AS LP overrides, so path length may not decide.
    bool lp_constraint_violated = false;
    std::size_t candidates_evaluated = 0;
};

struct InfeasibilityWitness {
    std::pair<Objective, Objective> conflicting;
    std::optional<Asn> pivot;  // nullopt: both links end at the same provider
};

std::string to_string(const InfeasibilityWitness& w);

struct Infeasible {
    std::vector<InfeasibilityWitness> witnesses;
};

struct Exhausted {
    std::size_t candidates_evaluated = 0;
};

using PlanResult = std::variant<Plan, Infeasible, Exhausted>;

/// Throws UnsupportedGranularity for source-prefix objectives and ConfigError for
/// objectives naming a down link, a link not incident to `dest`, or a foreign prefix.
void validate_objectives(const Topology& t, Asn dest, const std::vector<Objective>& objectives);

std::vector<InfeasibilityWitness> common_upstream_check(const Topology& t,
                                                        const std::vector<Objective>& objectives);

/// Every AS sequence a route for `dest` can take through `link` into the provider and on
/// to `src` under the export rule, in traffic direction (src first, provider last).
std::vector<std::vector<Asn>> export_legal_paths(const Topology& t, Asn dest, const std::string& link, Asn src);

/// The bounded atomic action space for `dest`, sorted.
std::vector<Action> candidate_actions(const Topology& t, Asn dest, const TeConfig& base,
                                      const std::vector<Objective>& objectives);

/// Prepend count requested by an action (0 unless it attaches a prepend community).
int prepend_cost(const Topology& t, const Action& a);

/// False when two actions touch the same (prefix, link) incompatibly or would pick two
/// counts from the same prepend family.
bool compatible(const Topology& t, const std::vector<Action>& actions);

TeConfig apply_actions(const Topology& t, TeConfig cfg, const std::vector<Action>& actions);

/// Prefixes the ingress map must cover for these objectives beyond dest's originations.
std::set<Prefix> objective_prefixes(const Topology& t, Asn dest, const std::vector<Objective>& objectives);

bool objective_satisfied(const IngressMap& m, const Topology& t, const Objective& o);

/// Moves in `moves` not demanded by any objective.
std::vector<IngressMove> undemanded_moves(const std::vector<IngressMove>& moves,
                                          const std::vector<Objective>& objectives);

PlanResult plan_inbound_te(const Topology& t, Asn dest, const TeConfig& base,
                           const std::vector<Objective>& objectives, const Budget& budget = {});

struct PlanEvaluation {
    std::vector<bool> satisfied;  // parallel to objectives
    std::vector<IngressMove> side_effects;
    int rounds_used = 0;

    bool all_satisfied() const;
};

/// Independent re-simulation of `actions` on top of `base`.
PlanEvaluation evaluate_plan(const Topology& t, Asn dest, const TeConfig& base, const std::vector<Action>& actions,
                             const std::vector<Objective>& objectives);

/// Sorted action lines, one per action.
std::string serialize_plan(const Plan& p);

}  // namespace bgpte
