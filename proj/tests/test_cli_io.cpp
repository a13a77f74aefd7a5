#include <catch2/catch_amalgamated.hpp>

#include "cohomod/io.hpp"

using namespace cohomod;
using cohomod::io::json;

TEST_CASE("group loading") {
    SECTION("from permutation generators") {
        json j = {{"p", 2}, {"generators", {{2, 1, 3, 4}, {1, 2, 4, 3}}}};
        PGroup g = io::load_group(j);
        CHECK(g.order == 4);
    }
    SECTION("from a multiplication table") {
        json j = {{"p", 2}, {"table", {{0, 1}, {1, 0}}}};
        PGroup g = io::load_group(j);
        CHECK(g.order == 2);
    }
    SECTION("shape errors are parse errors") {
        CHECK_THROWS_AS(io::load_group(json::array()), io::ParseError);
        CHECK_THROWS_AS(io::load_group({{"p", 2}}), io::ParseError);
        CHECK_THROWS_AS(io::load_group({{"p", 2}, {"generators", json::array()}}),
                        io::ParseError);
    }
    SECTION("semantic errors surface from the group layer") {
        json j = {{"p", 2}, {"generators", {{2, 3, 1}}}};  // order 3
        CHECK_THROWS_AS(io::load_group(j), std::invalid_argument);
    }
}

TEST_CASE("ring and polynomial loading") {
    json ring = {{"p", 2},
                 {"generators",
                  {{{"name", "x"}, {"degree", 1}}, {{"name", "y"}, {"degree", 1}}}},
                 {"relations",
                  {json::array({{{"c", 1}, {"m", {{0, 2}}}}}),
                   json::array({{{"c", 1}, {"m", {{0, 1}, {1, 1}}}}})}}};
    GradedPresentation pres = io::load_ring(ring);
    CHECK(pres.gens.size() == 2);
    CHECK(pres.relations.size() == 2);
    SECTION("round trip through json is stable") {
        json again = io::ring_to_json(pres);
        GradedPresentation reloaded = io::load_ring(again);
        CHECK(io::ring_to_json(reloaded) == again);
    }
    SECTION("descending indices are rejected") {
        json bad = json::array({{{"c", 1}, {"m", {{1, 1}, {0, 1}}}}});
        CHECK_THROWS_AS(io::load_poly(bad), io::ParseError);
    }
    SECTION("hsop loading") {
        json h = {{"elements", {json::array({{{"c", 1}, {"m", {{1, 1}}}}})}}};
        auto sps = io::load_hsop(h);
        REQUIRE(sps.size() == 1);
        PolyRing r = pres.ring();
        Poly q = sps[0].to_poly(r);
        CHECK(poly_degree(r, q) == 1);
    }
}

TEST_CASE("report serialization is deterministic") {
    CHECK(io::extint_to_json(ExtInt::neg_inf()) == json("-inf"));
    CHECK(io::extint_to_json(ExtInt::of(-2)) == json(-2));
    CHECK(io::fnv1a_digest("abc") == io::fnv1a_digest("abc"));
    CHECK(io::fnv1a_digest("abc") != io::fnv1a_digest("abd"));

    GradedPresentation pres = make_presentation(
        2, {{"x", 1}, {"y", 1}},
        {[] {
            Poly q;
            q.terms.push_back({1, {2, 0}});
            return q;
        }()});
    json a = io::ring_to_json(pres);
    json b = io::ring_to_json(pres);
    CHECK(a.dump() == b.dump());
}

TEST_CASE("sparse polynomials reject out-of-range indices") {
    SparsePoly sp;
    sp.terms = {{1, {{5, 1}}}};
    PolyRing small{2, {1, 1}};
    CHECK_THROWS_AS(sp.to_poly(small), std::invalid_argument);
    CHECK(sp.max_index() == 5);
}
