// Smaller sweeps of the acceptance property suites under a different seed.
#include "doctest.h"
#include "properties.hpp"

TEST_CASE("property suites, short run") {
    for (const auto& p : bgpte::testing::all_properties()) {
        auto out = p.fn(7, 200);
        CAPTURE(out.first_failure);
        INFO(p.name);
        CHECK(out.passed());
    }
}
