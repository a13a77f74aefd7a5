#include <catch2/catch_amalgamated.hpp>

#include "cohomod/complete.hpp"

using namespace cohomod;

namespace {

PGroup z2() { return build_group(2, {{2, 1}}); }
PGroup z4() { return build_group(2, {{2, 3, 4, 1}}); }
PGroup klein() { return build_group(2, {{2, 1, 3, 4}, {1, 2, 4, 3}}); }
PGroup d8() { return build_group(2, {{2, 3, 4, 1}, {3, 2, 1, 4}}); }

const std::vector<std::vector<std::size_t>> kQ8Table = {
    {0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 3, 2, 5, 4, 7, 6},
    {2, 3, 1, 0, 6, 7, 5, 4}, {3, 2, 0, 1, 7, 6, 4, 5},
    {4, 5, 7, 6, 1, 0, 2, 3}, {5, 4, 6, 7, 0, 1, 3, 2},
    {6, 7, 4, 5, 3, 2, 1, 0}, {7, 6, 5, 4, 2, 3, 0, 1}};

Poly mono(const PolyRing& ring, std::uint32_t c,
          std::vector<std::pair<std::size_t, std::uint16_t>> exps) {
    Monomial m(ring.nvars(), 0);
    for (auto [v, e] : exps) m[v] = e;
    Poly q;
    q.terms.push_back({c, m});
    return normalize(ring, q);
}

struct KleinSetup {
    TruncatedPresentation tau;
    ParameterSequence params;
    std::vector<std::vector<Poly>> images;
    std::vector<std::size_t> ranks{2};
};

KleinSetup klein_setup(int N) {
    KleinSetup s;
    s.tau.base = make_presentation(2, {{"x", 1}, {"y", 1}}, {});
    s.tau.N = N;
    PolyRing r = s.tau.base.ring();
    Poly c21 = poly_add(r, poly_add(r, mono(r, 1, {{0, 2}}),
                                    mono(r, 1, {{0, 1}, {1, 1}})),
                        mono(r, 1, {{1, 2}}));
    Poly c20 = poly_add(r, mono(r, 1, {{0, 2}, {1, 1}}),
                        mono(r, 1, {{0, 1}, {1, 2}}));
    s.params = make_parameters(s.tau.base, {c21, c20});
    PolyRing ering;
    ering.p = 2;
    ering.degrees.assign(2, 1);
    Poly i21, i20;
    i21.terms = c21.terms;
    i20.terms = c20.terms;
    s.images = {{normalize(ering, i21), normalize(ering, i20)}};
    return s;
}

}  // namespace

TEST_CASE("projected degrees") {
    CHECK(projected_degree({2, 3}) == 4);
    CHECK(projected_degree({2, 2}) == 3);
    CHECK(projected_degree({4}) == 4);
}

TEST_CASE("completion certificate on the Klein truncations") {
    SECTION("N = 4 with the strict inequality is complete") {
        auto s = klein_setup(4);
        auto v = completion_test(s.tau, 4, s.params, s.images, s.ranks, 1);
        CHECK(v.complete);
        CHECK(v.strict);
        CHECK_FALSE(v.alpha.finite);
        CHECK(v.bound == 3);
    }
    SECTION("N = 3 strict fails, N = 3 with center rank 2 passes") {
        auto s = klein_setup(3);
        auto strict = completion_test(s.tau, 3, s.params, s.images, s.ranks, 1);
        CHECK_FALSE(strict.complete);
        REQUIRE(strict.reasons.size() == 1);
        CHECK(strict.reasons[0].find("inequality") != std::string::npos);
        auto relaxed = completion_test(s.tau, 3, s.params, s.images, s.ranks, 2);
        CHECK(relaxed.complete);
        CHECK_FALSE(relaxed.strict);
    }
    SECTION("N = 2 fails on the arithmetic floor") {
        auto s = klein_setup(2);
        auto v = completion_test(s.tau, 2, s.params, s.images, s.ranks, 1);
        CHECK_FALSE(v.complete);
        REQUIRE_FALSE(v.reasons.empty());
        CHECK(v.reasons[0].find("inequality") != std::string::npos);
    }
    SECTION("monotone in N") {
        bool seen_complete = false;
        for (int N = 3; N <= 8; ++N) {
            auto s = klein_setup(N);
            auto v = completion_test(s.tau, N, s.params, s.images, s.ranks, 1);
            if (seen_complete) CHECK(v.complete);
            if (v.complete) seen_complete = true;
        }
        CHECK(seen_complete);
    }
    SECTION("forcing the inequality variant") {
        auto s = klein_setup(3);
        auto forced = completion_test(s.tau, 3, s.params, s.images, s.ranks, 1,
                                      64, false);
        CHECK(forced.complete);
        auto forced_strict = completion_test(s.tau, 3, s.params, s.images,
                                             s.ranks, 2, 64, true);
        CHECK_FALSE(forced_strict.complete);
    }
}

TEST_CASE("completion certificate rejects bad hypotheses") {
    auto s = klein_setup(4);
    SECTION("rank must exceed one") {
        ParameterSequence one;
        one.elements = {s.params.elements[0]};
        one.degrees = {s.params.degrees[0]};
        CHECK_THROWS_AS(
            completion_test(s.tau, 4, one, s.images, s.ranks, 1),
            std::invalid_argument);
    }
    SECTION("degree-one parameters are rejected") {
        PolyRing r = s.tau.base.ring();
        ParameterSequence low = make_parameters(
            s.tau.base, {mono(r, 1, {{0, 1}}), mono(r, 1, {{1, 1}})});
        CHECK_THROWS_AS(completion_test(s.tau, 4, low, s.images, s.ranks, 1),
                        std::invalid_argument);
    }
    SECTION("failing the finite-length check on a class is reported") {
        auto bad = klein_setup(4);
        PolyRing ering;
        ering.p = 2;
        ering.degrees.assign(2, 1);
        // pretend both parameters restrict to the same single variable
        bad.images = {{poly_var(ering, 0), poly_var(ering, 0)}};
        auto v = completion_test(bad.tau, 4, bad.params, bad.images, bad.ranks, 1);
        CHECK_FALSE(v.complete);
        bool mentioned = false;
        for (const auto& reason : v.reasons)
            mentioned = mentioned || reason.find("finite-length") != std::string::npos;
        CHECK(mentioned);
    }
}

TEST_CASE("pipeline: rank-one groups complete via periodicity") {
    SECTION("Z/2 at degree 1") {
        PGroup g = z2();
        auto rep = compute_until_complete(g);
        CHECK(rep.complete);
        CHECK(rep.mode == "periodicity");
        CHECK(rep.N == 1);
        CHECK(rep.presentation.base.gens.size() == 1);
        CHECK(rep.presentation.base.relations.empty());
        CHECK(rep.params.degrees == std::vector<int>{1});
    }
    SECTION("Z/4 at degree 2 with the expected presentation") {
        PGroup g = z4();
        auto rep = compute_until_complete(g);
        CHECK(rep.complete);
        CHECK(rep.mode == "periodicity");
        CHECK(rep.N == 2);
        REQUIRE(rep.presentation.base.gens.size() == 2);
        CHECK(rep.presentation.base.gens[0].degree == 1);
        CHECK(rep.presentation.base.gens[1].degree == 2);
        REQUIRE(rep.presentation.base.relations.size() == 1);
        CHECK(rep.params.degrees == std::vector<int>{2});
    }
    SECTION("Q8 at degree 4") {
        PGroup g = group_from_table(2, kQ8Table);
        auto rep = compute_until_complete(g);
        CHECK(rep.complete);
        CHECK(rep.mode == "periodicity");
        CHECK(rep.N == 4);
        CHECK(rep.params.degrees == std::vector<int>{4});
        DegreeBasis db(rep.presentation.base);
        // literature oracle by Hilbert function: 1,2,2,1 then period 4
        std::vector<std::size_t> expect = {1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2};
        for (int n = 0; n <= 10; ++n) CHECK(db.dim(n) == expect[n]);
    }
}

TEST_CASE("pipeline: Klein group completes by certificate") {
    PGroup g = klein();
    auto rep = compute_until_complete(g);
    REQUIRE(rep.complete);
    CHECK(rep.mode == "certificate");
    // center rank 2 relaxes the inequality, so N = 3 suffices
    CHECK(rep.N == 3);
    CHECK(rep.params.degrees == std::vector<int>{2, 3});
    CHECK(rep.dilation == std::vector<int>{0, 0});
    CHECK(rep.presentation.base.gens.size() == 2);
    CHECK(rep.presentation.base.relations.empty());
    REQUIRE(rep.verdict.has_value());
    CHECK_FALSE(rep.verdict->alpha.finite);
    CHECK(rep.verdict->bound == 3);
    CHECK(rep.N <= projected_degree(rep.params.degrees));

    // soundness audit: over-extend the resolution and compare dimensions
    MinimalResolution res(g);
    res.extend(rep.N + 5);
    DegreeBasis db(rep.presentation.base);
    for (int n = 0; n <= rep.N + 5; ++n) CHECK(db.dim(n) == res.rank(n));
}

TEST_CASE("pipeline: D8 completes by certificate within the projected degree") {
    PGroup g = d8();
    auto rep = compute_until_complete(g);
    REQUIRE(rep.complete);
    CHECK(rep.mode == "certificate");
    CHECK(rep.params.degrees == std::vector<int>{2, 3});
    CHECK(rep.N <= projected_degree(rep.params.degrees));
    CHECK(rep.presentation.base.gens.size() == 3);
    CHECK(rep.presentation.base.relations.size() == 1);

    MinimalResolution res(g);
    res.extend(rep.N + 5);
    DegreeBasis db(rep.presentation.base);
    for (int n = 0; n <= rep.N + 5; ++n) CHECK(db.dim(n) == res.rank(n));
}

TEST_CASE("pipeline: rank-three elementary abelian group") {
    PGroup g = build_group(
        2, {{2, 1, 3, 4, 5, 6, 7, 8}, {1, 2, 4, 3, 5, 6, 7, 8},
            {1, 2, 3, 4, 6, 5, 7, 8}});
    REQUIRE(g.order == 8);
    PipelineCaps caps;
    caps.max_degree = 16;
    auto rep = compute_until_complete(g, caps);
    REQUIRE(rep.complete);
    CHECK(rep.mode == "certificate");
    CHECK(rep.p_rank == 3);
    CHECK(rep.params.degrees == std::vector<int>{4, 6, 7});
    CHECK(rep.presentation.base.gens.size() == 3);
    CHECK(rep.presentation.base.relations.empty());
    CHECK(rep.N <= projected_degree(rep.params.degrees));
    // the center has rank 3, so the relaxed inequality applies: N = bound
    REQUIRE(rep.verdict.has_value());
    CHECK_FALSE(rep.verdict->strict);
    CHECK(rep.N == rep.verdict->bound);
    // the sharpened type of the emitted ring is very strongly quasi-regular
    REQUIRE(rep.sharpened_type.has_value());
    auto flags = classify(*rep.sharpened_type, 3);
    CHECK(flags.very_strongly);
}

TEST_CASE("pipeline: caps exhaustion reports partial state") {
    PGroup g = d8();
    PipelineCaps caps;
    caps.max_degree = 2;
    auto rep = compute_until_complete(g, caps);
    CHECK_FALSE(rep.complete);
    CHECK(rep.mode == "caps-exhausted");
    CHECK(rep.N == 2);
    CHECK(rep.ranks.size() == 3);
}

TEST_CASE("pipeline: user-supplied parameters are honored") {
    PGroup g = klein();
    SparsePoly c21, c20;
    c21.terms = {{1, {{0, 2}}}, {1, {{0, 1}, {1, 1}}}, {1, {{1, 2}}}};
    c20.terms = {{1, {{0, 2}, {1, 1}}}, {1, {{0, 1}, {1, 2}}}};
    auto rep = compute_until_complete(g, {}, {c21, c20});
    REQUIRE(rep.complete);
    CHECK(rep.mode == "certificate");
    CHECK(rep.params.degrees == std::vector<int>{2, 3});
}
