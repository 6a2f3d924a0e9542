#include "bgpte/error.hpp"
#include "bgpte/policy.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bgpte;
using namespace fixtures;

namespace {

Route customer_route(std::set<Community> comms) {
    Route r;
    r.prefix = P2;
    r.as_path = {D};
    r.communities = std::move(comms);
    r.learned_on = "l1";
    r.origin_as = D;
    return r;
}

PolicyCatalog lp_catalog() {
    PolicyCatalog cat;
    cat.owner = Asn{100};
    cat.lp_rules[{100, 50}] = 50;
    cat.lp_rules[{100, 100}] = 100;
    return cat;
}

const std::vector<Adjacency> kIsp1Neighbors{
    {"l1", D, Role::Customer}, {"l3", S1, Role::Customer}, {"l7", A, Role::Provider}};

}  // namespace

TEST_CASE("parse_community") {
    CHECK(parse_community("100:50") == Community{100, 50});
    CHECK(parse_community("0:0") == Community{0, 0});
    CHECK(parse_community("65535:65535") == Community{65535, 65535});
    CHECK_THROWS_AS(parse_community("100:70000"), ConfigError);
    CHECK_THROWS_AS(parse_community("70000:1"), ConfigError);
    CHECK_THROWS_AS(parse_community("100"), ConfigError);
    CHECK_THROWS_AS(parse_community(":5"), ConfigError);
    CHECK_THROWS_AS(parse_community("5:"), ConfigError);
    CHECK_THROWS_AS(parse_community("1:-2"), ConfigError);
}

TEST_CASE("ingress_transform: LP rule") {
    auto ar = ingress_transform(lp_catalog(), customer_route({{100, 100}}), {});
    CHECK(ar.lp_override == 100);
    CHECK(ar.prepend_schedule.empty());
    // Several LP rules: the lowest wins.
    auto both = ingress_transform(lp_catalog(), customer_route({{100, 100}, {100, 50}}), {});
    CHECK(both.lp_override == 50);
}

TEST_CASE("ingress_transform: no communities is the identity") {
    auto r = customer_route({});
    auto ar = ingress_transform(lp_catalog(), r, {});
    CHECK(ar.route == r);
    CHECK_FALSE(ar.lp_override);
    CHECK(ar.suppressed_toward.empty());
    CHECK(ar.prepend_schedule.empty());
}

TEST_CASE("ingress_transform: unknown communities are ignored") {
    auto ar = ingress_transform(lp_catalog(), customer_route({{7, 7}}), {});
    CHECK_FALSE(ar.lp_override);
    CHECK(ar.route.communities.contains({7, 7}));
}

TEST_CASE("ingress_transform: prepend toward a specific upstream") {
    PolicyCatalog cat;
    cat.owner = ISP1;
    cat.prepend_rules[{100, 2001}] = PrependRule{A, 2};
    auto ar = ingress_transform(cat, customer_route({{100, 2001}}), kIsp1Neighbors);
    CHECK(ar.prepend_schedule == std::map<Asn, int>{{A, 2}});
}

TEST_CASE("ingress_transform: prepend selectors") {
    PolicyCatalog cat;
    cat.owner = ISP1;
    cat.prepend_rules[{1, 1}] = PrependRule{AllUpstreams{}, 1};
    cat.prepend_rules[{1, 2}] = PrependRule{S1, 2};  // a named customer is honored
    cat.prepend_rules[{1, 3}] = PrependRule{A, 3};
    auto ar = ingress_transform(cat, customer_route({{1, 1}, {1, 2}}), kIsp1Neighbors);
    CHECK(ar.prepend_schedule == std::map<Asn, int>{{S1, 2}, {A, 1}});
    // Two rules hitting one neighbor: the larger count wins.
    auto both = ingress_transform(cat, customer_route({{1, 1}, {1, 3}}), kIsp1Neighbors);
    CHECK(both.prepend_schedule == std::map<Asn, int>{{A, 3}});
}

TEST_CASE("ingress_transform: suppress never targets customers") {
    PolicyCatalog cat;
    cat.owner = ISP1;
    cat.suppress_rules[{1, 10}] = AllUpstreams{};
    cat.suppress_rules[{1, 11}] = S1;
    auto ar = ingress_transform(cat, customer_route({{1, 10}, {1, 11}}), kIsp1Neighbors);
    CHECK(ar.suppressed_toward == std::set<Asn>{A});
}

TEST_CASE("expand_selector with regions") {
    PolicyCatalog cat;
    cat.owner = ISP1;
    cat.region_of[A] = "eu";
    cat.region_of[S1] = "eu";
    CHECK(expand_selector(cat, RegionTag{"eu"}, kIsp1Neighbors, false) == std::set<Asn>{A});
    CHECK(expand_selector(cat, RegionTag{"eu"}, kIsp1Neighbors, true) == std::set<Asn>{A, S1});
    CHECK(expand_selector(cat, RegionTag{"us"}, kIsp1Neighbors, true).empty());
    CHECK(expand_selector(cat, Asn{999}, kIsp1Neighbors, true).empty());
}

TEST_CASE("egress_apply: scheduled prepend toward S1") {
    PolicyCatalog cat;
    cat.owner = ISP1;
    cat.prepend_rules[{65010, 302}] = PrependRule{S1, 2};
    auto ar = ingress_transform(cat, customer_route({{65010, 302}}), kIsp1Neighbors);
    ar.route.local_pref = 200;
    auto out = egress_apply(ar, ISP1, S1, &cat);
    REQUIRE(out);
    CHECK(out->as_path == std::vector<Asn>{ISP1, ISP1, ISP1, D});
    CHECK(out->communities.empty());  // stripped: ISP1 defines it
    CHECK(out->local_pref == 0);
    CHECK(out->learned_on.empty());
    // Toward anyone else a single prepend.
    auto other = egress_apply(ar, ISP1, A, &cat);
    REQUIRE(other);
    CHECK(other->as_path == std::vector<Asn>{ISP1, D});
}

TEST_CASE("egress_apply: plain export keeps foreign communities and drops MED") {
    auto cat = lp_catalog();
    auto r = customer_route({{100, 50}, {7, 7}});
    r.med = 10;
    auto out = egress_apply(AnnotatedRoute{r, {}, {}, {}}, Asn{100}, A, &cat);
    REQUIRE(out);
    CHECK(out->as_path == std::vector<Asn>{Asn{100}, D});
    CHECK(out->communities == std::set<Community>{{7, 7}});
    CHECK_FALSE(out->med);
    auto no_cat = egress_apply(AnnotatedRoute{r, {}, {}, {}}, Asn{100}, A, nullptr);
    CHECK(no_cat->communities.size() == 2);
}

TEST_CASE("egress_apply: suppressed neighbor gets nothing") {
    AnnotatedRoute ar{customer_route({}), {}, {A}, {}};
    CHECK_FALSE(egress_apply(ar, ISP1, A, nullptr));
    CHECK(egress_apply(ar, ISP1, S1, nullptr));
}

TEST_CASE("catalog_rejects only for drop-on-community providers") {
    auto cat = lp_catalog();
    CHECK_FALSE(catalog_rejects(cat, customer_route({{100, 50}})));
    cat.drops_community_updates = true;
    CHECK(catalog_rejects(cat, customer_route({{100, 50}})));
    CHECK_FALSE(catalog_rejects(cat, customer_route({})));
}
