// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bgpte/flow.hpp"
#include "bgpte/planner.hpp"
#include "bgpte/scenario.hpp"
#include "properties.hpp"

using namespace bgpte;

namespace {

// Pinned limits.
constexpr double kFig2SimulationSeconds = 1.0;
constexpr double kPropertySuiteSeconds = 60.0;
constexpr std::size_t kPropertyCases = 1000;
constexpr std::uint64_t kPropertySeed = 20240601;

const Asn D{65001}, ISP1{65010}, ISP2{65020}, S1{65301}, S2{65302};
const Asn F5_S1{65401}, F5_S2{65402}, F5_S3{65403};
const Prefix P1 = *Prefix::parse("10.1.0.0/16");
const Prefix P2 = *Prefix::parse("10.2.0.0/16");

Scenario load(const std::string& name) { return load_scenario(std::string(BGPTE_SCENARIO_DIR) + "/" + name); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Check {
    std::string detail;
    void expect(bool ok, const std::string& what) {
        if (!ok && detail.empty()) detail = what;
    }
};

std::optional<std::string> ingress_of(const ConvergedState& s, const Topology& t, Asn src, const Prefix& p) {
    auto hops = resolve_forwarding(s, t, src, p);
    if (!hops || hops->empty()) return std::nullopt;
    return hops->back();
}

Topology with_link_down(Topology t, const std::string& id) {
    for (auto& l : t.links) {
        if (l.id == id) l.up = false;
    }
    return t;
}

std::vector<Asn> sources_of(const Topology& t, Asn dest) {
    std::vector<Asn> out;
    for (const auto& [a, _] : t.ases) {
        if (a != dest) out.push_back(a);
    }
    return out;
}

std::string criterion1(Check& c) {
    auto sc = load("fig2-baseline.scn");
    auto start = std::chrono::steady_clock::now();
    auto state = propagate_to_convergence(sc.topology, sc.te_config);
    auto map = ingress_map(state, sc.topology, D);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    IngressEntries projection;
    for (const auto& [k, v] : map.entries) {
        if (k.src == S1 || k.src == S2) projection[k] = v;
    }
    IngressEntries want{{{S1, P1}, "l1"}, {{S1, P2}, "l1"}, {{S2, P1}, "l2"}, {{S2, P2}, "l2"}};
    c.expect(projection == want, "S1/S2 entries differ:\n" + ingress_csv(projection));
    auto golden = parse_ingress_csv(read_file(std::string(BGPTE_GOLDEN_DIR) + "/fig2_baseline_ingress.csv"));
    c.expect(map.entries == golden, "full map differs from golden:\n" + ingress_csv(map.entries));
    c.expect(secs < kFig2SimulationSeconds, "simulation took " + std::to_string(secs) + " s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f s", secs);
    return buf;
}

std::string criterion2(Check& c) {
    auto sc = load("fig2-destprefix.scn");
    auto state = propagate_to_convergence(sc.topology, sc.te_config);
    const auto& p2 = state.ribs.at(S1).at(P2);
    const auto& p1 = state.ribs.at(S1).at(P1);
    c.expect(p2.loc_rib && render_path(p2.loc_rib->route.as_path) == "65200 65020 65001",
             "S1 P2 selected " + (p2.loc_rib ? render_path(p2.loc_rib->route.as_path) : std::string("nothing")));
    bool rejected = p2.adj_rib_in.contains("l3") &&
                    render_path(p2.adj_rib_in.at("l3").route.as_path) == "65010 65010 65010 65001";
    c.expect(rejected, "rejected candidate via ISP1 is not 65010 65010 65010 65001");
    c.expect(p1.loc_rib && render_path(p1.loc_rib->route.as_path) == "65010 65001", "S1 P1 not via [ISP1 D]");
    auto map = ingress_map(state, sc.topology, D);
    c.expect(map.entries.at({S1, P2}) == "l2" && map.entries.at({S1, P1}) == "l1", "S1 ingress not split");
    return "S1: P1 [ISP1 D], P2 [b ISP2 D] over [ISP1 ISP1 ISP1 D]";
}

std::string criterion3(Check& c) {
    auto sc = load("fig1-lp-communities.scn");
    auto check = [&](const TeConfig& cfg, const std::string& p1_link, const std::string& p2_link, const char* label) {
        auto state = propagate_to_convergence(sc.topology, cfg);
        auto map = ingress_map(state, sc.topology, D);
        for (const auto& [k, v] : map.entries) {
            const std::string& want = k.dst_prefix == P1 ? p1_link : p2_link;
            c.expect(v == want, std::string(label) + ": AS " + to_string(k.src) + " " + k.dst_prefix.str() + " -> " +
                                    render_link(v));
        }
    };
    check(sc.te_config, "l1", "l2", "as given");
    TeConfig flipped = sc.te_config;
    const Community hi{100, 100}, lo{100, 50};
    for (auto& [_, attrs] : flipped.entries) {
        std::set<Community> swapped;
        for (const auto& x : attrs.communities) swapped.insert(x == hi ? lo : x == lo ? hi : x);
        attrs.communities = swapped;
    }
    check(flipped, "l2", "l1", "flipped");
    return "all sources P1->l1 P2->l2; flipped P1->l2 P2->l1";
}

std::string criterion4(Check& c) {
    auto sc = load("fig2-sourceasn.scn");
    auto res = plan_inbound_te(sc.topology, D, sc.te_config, sc.objectives);
    const auto* plan = std::get_if<Plan>(&res);
    c.expect(plan != nullptr, "no plan");
    if (!plan) return {};
    int prepend_actions = 0, total = 0;
    for (const auto& a : plan->actions) {
        int k = prepend_cost(sc.topology, a);
        if (k > 0) ++prepend_actions;
        total += k;
    }
    c.expect(plan->actions.size() == 2 && prepend_actions == 2, "expected two prepend attachments:\n" + serialize_plan(*plan));
    c.expect(total == 4, "prepend sum " + std::to_string(total) + " (want 2 x 2)");
    std::vector<Action> want{{ActionKind::AttachCommunity, P2, "l1", Community{65010, 302}, {}},
                             {ActionKind::AttachCommunity, P2, "l2", Community{65020, 302}, {}}};
    auto got = plan->actions;
    std::sort(got.begin(), got.end());
    c.expect(got == want, "actions differ:\n" + serialize_plan(*plan));
    c.expect(plan->side_effects.empty(), "side effects reported:\n" + serialize_plan(*plan));
    auto ev = evaluate_plan(sc.topology, D, sc.te_config, plan->actions, sc.objectives);
    c.expect(ev.all_satisfied() && ev.satisfied.size() == 4, "evaluate_plan does not confirm all four objectives");
    return "P2/l1 65010:302 (S1 x2), P2/l2 65020:302 (S2 x2); 0 side effects; 4/4 confirmed";
}

std::string criterion5(Check& c) {
    auto sc = load("fig5-sourceasn.scn");
    auto res = plan_inbound_te(sc.topology, D, sc.te_config, sc.objectives);
    const auto* plan = std::get_if<Plan>(&res);
    c.expect(plan != nullptr, "no plan");
    if (!plan) return {};
    auto ev = evaluate_plan(sc.topology, D, sc.te_config, plan->actions, sc.objectives);
    c.expect(ev.all_satisfied(), "S1 objectives not met");
    std::vector<IngressMove> want{{F5_S2, P2, "l1", "l2"}, {F5_S3, P2, "l1", "l2"}};
    c.expect(plan->side_effects == want, "side effects:\n" + serialize_plan(*plan));
    return "plan " + to_string(plan->actions.front()) + "; side effects S2,S3 P2 l1->l2";
}

std::string criterion6(Check& c) {
    auto same = load("fig3-sameprovider.scn");
    auto r1 = plan_inbound_te(same.topology, D, same.te_config, same.objectives);
    const auto* inf1 = std::get_if<Infeasible>(&r1);
    c.expect(inf1 && !inf1->witnesses.empty(), "same-provider split not infeasible");
    if (inf1) {
        for (const auto& w : inf1->witnesses) c.expect(!w.pivot, "unexpected pivot " + to_string(w));
    }
    auto tier = load("tier1-pivot.scn");
    auto r2 = plan_inbound_te(tier.topology, D, tier.te_config, tier.objectives);
    const auto* inf2 = std::get_if<Infeasible>(&r2);
    c.expect(inf2 && inf2->witnesses.size() == 1 && inf2->witnesses[0].pivot == Asn{64500},
             "tier-1 topology did not return pivot 64500");
    return "same-provider witness; pivot 64500";
}

std::string criterion7(Check& c) {
    const Prefix addr = *Prefix::parse("10.1.1.7/32");
    auto ms = load("fig1-more-specific.scn");
    auto up = propagate_to_convergence(ms.topology, ms.te_config);
    auto down_topo = with_link_down(ms.topology, "l1");
    auto down = propagate_to_convergence(down_topo, ms.te_config);
    for (Asn src : sources_of(ms.topology, D)) {
        c.expect(ingress_of(up, ms.topology, src, addr) == "l1", "AS " + to_string(src) + " does not enter on l1");
        c.expect(ingress_of(down, down_topo, src, addr) == "l2", "AS " + to_string(src) + " does not fail over to l2");
    }
    auto sel = load("fig1-selective.scn");
    auto sel_topo = with_link_down(sel.topology, "l1");
    auto sel_down = propagate_to_convergence(sel_topo, sel.te_config);
    for (Asn src : sources_of(sel.topology, D)) {
        c.expect(!ingress_of(sel_down, sel_topo, src, addr).has_value(),
                 "AS " + to_string(src) + " still reaches P1 under selective advertisement with l1 down");
    }
    return "P1' l1; l1 down -> l2; selective with l1 down -> unreachable";
}

std::string criterion8(Check& c) {
    auto sc = load("fig1-med.scn");
    auto run = [&](const TeConfig& cfg, const std::string& want, const char* label) {
        auto state = propagate_to_convergence(sc.topology, cfg);
        for (Asn src : sources_of(sc.topology, D)) {
            c.expect(ingress_of(state, sc.topology, src, P1) == want,
                     std::string(label) + ": AS " + to_string(src) + " P1 not on " + want);
        }
    };
    run(sc.te_config, "l2", "l2 has MED 10");
    TeConfig swapped = sc.te_config;
    swapped.entries.at({P1, "l1"}).med = 10;
    swapped.entries.at({P1, "l2"}).med = 20;
    run(swapped, "l1", "l1 has MED 10");

    // Scoping: equal LP and length, different neighbor AS -> MED is skipped and the
    // lower neighbor ASN decides; same neighbor -> MED decides.
    Route from_300{P1, {Asn{300}, D}, 100, 10u, {}, "la", D};
    Route from_200{P1, {Asn{200}, D}, 100, 20u, {}, "lb", D};
    c.expect(compare_routes(from_200, from_300) == Preference::First, "MED compared across neighbor ASes");
    c.expect(compare_routes(from_300, from_200) == Preference::Second, "MED compared across neighbor ASes (reversed)");
    Route same_a{P1, {Asn{300}, D}, 100, 20u, {}, "la", D};
    Route same_b{P1, {Asn{300}, D}, 100, 10u, {}, "lb", D};
    c.expect(compare_routes(same_a, same_b) == Preference::Second, "MED ignored within one neighbor AS");
    return "MED 10 link wins both ways; MED skipped across neighbor ASes";
}

std::string criterion9(Check& c) {
    double total = 0;
    std::ostringstream summary;
    for (const auto& p : testing::all_properties()) {
        auto out = p.fn(kPropertySeed, kPropertyCases);
        total += out.seconds;
        std::printf("    %-26s %5zu cases %8.3f s  %s\n", out.name.c_str(), out.cases, out.seconds,
                    out.passed() ? "ok" : "FAILED");
        if (!out.tallies.empty()) {
            std::string mix;
            for (const auto& [k, n] : out.tallies) mix += (mix.empty() ? "" : ", ") + k + " " + std::to_string(n);
            std::printf("      %s\n", mix.c_str());
        }
        if (!out.passed()) std::printf("      first counterexample: %s\n", out.first_failure.c_str());
        c.expect(out.cases >= kPropertyCases, out.name + " ran too few cases");
        c.expect(out.failures == 0, out.name + ": " + std::to_string(out.failures) + " failures; " + out.first_failure);
    }
    c.expect(total < kPropertySuiteSeconds, "property suites took " + std::to_string(total) + " s");
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu suites x %zu cases, %.2f s total", testing::all_properties().size(),
                  kPropertyCases, total);
    return buf;
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<std::string(Check&)> fn;
    };
    const std::vector<Criterion> criteria{
        {"Figure 2 baseline ingress map", criterion1},
        {"destination-prefix prepend plan paths", criterion2},
        {"LP communities on one provider", criterion3},
        {"source-ASN plan on Figure 2", criterion4},
        {"Figure 5 side effects", criterion5},
        {"common-upstream infeasibility", criterion6},
        {"more-specific failover", criterion7},
        {"MED on parallel links", criterion8},
        {"property suites", criterion9},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        std::string note;
        try {
            note = criteria[i].fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        bool ok = c.detail.empty();
        if (!ok) ++failed;
        std::printf("%s criterion %zu: %s%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].title,
                    note.empty() ? "" : " - ", note.c_str());
        if (!ok) std::printf("    %s\n", c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
