#include <catch2/catch_amalgamated.hpp>

#include "cohomod/ring_extract.hpp"

using namespace cohomod;

namespace {

PGroup z2() { return build_group(2, {{2, 1}}); }
PGroup z4() { return build_group(2, {{2, 3, 4, 1}}); }
PGroup klein() { return build_group(2, {{2, 1, 3, 4}, {1, 2, 4, 3}}); }
PGroup d8() { return build_group(2, {{2, 3, 4, 1}, {3, 2, 1, 4}}); }
PGroup z3() { return build_group(3, {{2, 3, 1}}); }

const std::vector<std::vector<std::size_t>> kQ8Table = {
    {0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 3, 2, 5, 4, 7, 6},
    {2, 3, 1, 0, 6, 7, 5, 4}, {3, 2, 0, 1, 7, 6, 4, 5},
    {4, 5, 7, 6, 1, 0, 2, 3}, {5, 4, 6, 7, 0, 1, 3, 2},
    {6, 7, 4, 5, 3, 2, 1, 0}, {7, 6, 5, 4, 2, 3, 0, 1}};

std::vector<int> gen_degrees(const ExtractionState& ext) {
    std::vector<int> out;
    for (const auto& g : ext.generators()) out.push_back(g.degree);
    return out;
}

}  // namespace

TEST_CASE("extraction of the cyclic group of order 2") {
    PGroup g = z2();
    MinimalResolution res(g);
    res.extend(6);
    ExtractionState ext(res);
    ext.advance(6);
    CHECK(gen_degrees(ext) == std::vector<int>{1});
    CHECK(ext.presentation().relations.empty());
    // faithfulness: one normal form in every degree
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 6; ++n) CHECK(db.dim(n) == 1);
}

TEST_CASE("extraction of the cyclic group of order 4") {
    PGroup g = z4();
    MinimalResolution res(g);
    res.extend(6);
    ExtractionState ext(res);
    ext.advance(6);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 2});
    REQUIRE(ext.presentation().relations.size() == 1);
    // the relation is x1^2
    const Poly& rel = ext.presentation().relations[0];
    REQUIRE(rel.terms.size() == 1);
    CHECK(rel.terms[0].m == Monomial{2, 0});
}

TEST_CASE("extraction of the Klein group is the polynomial ring") {
    PGroup g = klein();
    MinimalResolution res(g);
    res.extend(8);
    ExtractionState ext(res);
    ext.advance(8);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 1});
    CHECK(ext.presentation().relations.empty());
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 8; ++n)
        CHECK(db.dim(n) == static_cast<std::size_t>(n + 1));
}

TEST_CASE("extraction at odd p: free graded-commutative on two generators") {
    PGroup g = z3();
    MinimalResolution res(g);
    res.extend(6);
    ExtractionState ext(res);
    ext.advance(6);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 2});
    CHECK(ext.presentation().relations.empty());  // x^2 = 0 is automatic
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 6; ++n) CHECK(db.dim(n) == 1);
}

TEST_CASE("extraction of the rank-two elementary abelian group at p = 3") {
    // free graded-commutative: two exterior generators in degree 1, two
    // polynomial generators in degree 2, no relations
    PGroup g = build_group(3, {{2, 3, 1, 4, 5, 6}, {1, 2, 3, 5, 6, 4}});
    MinimalResolution res(g);
    res.extend(5);
    ExtractionState ext(res);
    ext.advance(5);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 1, 2, 2});
    CHECK(ext.presentation().relations.empty());
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 5; ++n) CHECK(db.dim(n) == res.rank(n));
}

TEST_CASE("extraction of the dihedral group of order 8") {
    PGroup g = d8();
    MinimalResolution res(g);
    res.extend(8);
    ExtractionState ext(res);
    ext.advance(8);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 1, 2});
    REQUIRE(ext.presentation().relations.size() == 1);
    int rd = 0;
    REQUIRE(is_homogeneous(ext.presentation().ring(),
                           ext.presentation().relations[0], &rd));
    CHECK(rd == 2);
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 8; ++n)
        CHECK(db.dim(n) == res.rank(n));
}

TEST_CASE("extraction of the quaternion group") {
    PGroup g = group_from_table(2, kQ8Table);
    MinimalResolution res(g);
    res.extend(6);
    ExtractionState ext(res);
    ext.advance(6);
    CHECK(gen_degrees(ext) == std::vector<int>{1, 1, 4});
    REQUIRE(ext.presentation().relations.size() == 2);
    std::vector<int> rel_degrees;
    for (const auto& rel : ext.presentation().relations) {
        int d = 0;
        REQUIRE(is_homogeneous(ext.presentation().ring(), rel, &d));
        rel_degrees.push_back(d);
    }
    CHECK(rel_degrees == std::vector<int>{2, 3});
    DegreeBasis db(ext.presentation());
    for (int n = 0; n <= 6; ++n)
        CHECK(db.dim(n) == res.rank(n));
}

TEST_CASE("cocycle/polynomial correspondence round trips") {
    PGroup g = d8();
    MinimalResolution res(g);
    res.extend(5);
    ExtractionState ext(res);
    ext.advance(5);
    for (int n = 1; n <= 5; ++n) {
        const std::size_t bn = res.rank(n);
        for (std::size_t i = 0; i < bn; ++i) {
            FpVector v(bn, 0);
            v[i] = 1;
            Poly q = ext.poly_of_cocycle(v, n);
            CHECK(ext.cocycle_of_poly(q, n) == v);
        }
    }
}

TEST_CASE("advance past the resolution is rejected") {
    PGroup g = z2();
    MinimalResolution res(g);
    res.extend(3);
    ExtractionState ext(res);
    CHECK_THROWS_AS(ext.advance(5), std::invalid_argument);
}
