#include <catch2/catch_amalgamated.hpp>

#include "cohomod/group.hpp"
#include "cohomod/module.hpp"
#include "cohomod/resolution.hpp"

using namespace cohomod;

namespace {

PGroup z2() { return build_group(2, {{2, 1}}); }
PGroup z4() { return build_group(2, {{2, 3, 4, 1}}); }
PGroup klein() { return build_group(2, {{2, 1, 3, 4}, {1, 2, 4, 3}}); }
PGroup d8() { return build_group(2, {{2, 3, 4, 1}, {3, 2, 1, 4}}); }
PGroup z3() { return build_group(3, {{2, 3, 1}}); }

Cocycle unit_cocycle(std::size_t degree, std::size_t dim, std::size_t i) {
    Cocycle c;
    c.degree = degree;
    c.v.assign(dim, 0);
    c.v[i] = 1;
    return c;
}

}  // namespace

TEST_CASE("trivial and regular modules") {
    PGroup g = d8();
    CHECK(trivial_module(g).dim == 1);
    CHECK(regular_module(z2()).dim == 2);
    KGModule reg = regular_module(g);
    CHECK(reg.dim == 8);
    for (std::size_t e = 0; e < g.order; ++e)
        for (std::size_t j = 0; j < 8; ++j) {
            std::size_t ones = 0;
            for (std::size_t i = 0; i < 8; ++i) ones += reg.act(e).at(i, j);
            CHECK(ones == 1);  // permutation matrices
        }
}

TEST_CASE("radical dimensions") {
    CHECK(radical(trivial_module(klein())).rows == 0);
    // over F_2[Z/2] the augmentation ideal is spanned by 1+g
    CHECK(radical(regular_module(z2())).rows == 1);
    // free module (kG)^b has radical of dimension b(|G|-1)
    PGroup g = klein();
    for (std::size_t b : {1u, 2u, 3u})
        CHECK(radical(free_module(g, b)).rows == b * (g.order - 1));
}

TEST_CASE("is_free") {
    CHECK(is_free(regular_module(z4())));
    CHECK_FALSE(is_free(trivial_module(z2())));
    CHECK(is_free(free_module(d8(), 3)));
}

TEST_CASE("tensor products") {
    PGroup g = klein();
    KGModule triv = trivial_module(g);
    KGModule reg = regular_module(g);
    SECTION("trivial tensor M is M on the nose") {
        KGModule t = tensor(triv, reg);
        CHECK(t.dim == reg.dim);
        for (std::size_t e = 0; e < g.order; ++e) CHECK(t.act(e) == reg.act(e));
    }
    SECTION("regular tensor M is free of rank dim M") {
        KGModule m = tensor(reg, reg);
        CHECK(is_free(m));
        CHECK(minimal_generator_count(m) == reg.dim);
    }
    SECTION("group mismatch is an error") {
        PGroup h = z4();
        KGModule other = trivial_module(h);
        CHECK_THROWS_AS(tensor(triv, other), std::invalid_argument);
    }
}

TEST_CASE("resolution ranks for the small cyclic groups") {
    SECTION("Z/2: all ranks 1 (kG = F_2[t]/(t^2))") {
        PGroup g = z2();
        MinimalResolution res(g);
        res.extend(20);
        for (std::size_t n = 0; n <= 20; ++n) CHECK(res.rank(n) == 1);
    }
    SECTION("Z/4: all ranks 1 (kG = F_2[t]/(t^4))") {
        PGroup g = z4();
        MinimalResolution res(g);
        res.extend(10);
        for (std::size_t n = 0; n <= 10; ++n) CHECK(res.rank(n) == 1);
    }
    SECTION("Z/3 at p=3: all ranks 1") {
        PGroup g = z3();
        MinimalResolution res(g);
        res.extend(10);
        for (std::size_t n = 0; n <= 10; ++n) CHECK(res.rank(n) == 1);
    }
}

TEST_CASE("resolution ranks for the Klein group match the polynomial ring") {
    PGroup g = klein();
    MinimalResolution res(g);
    res.extend(10);
    // oracle: coefficients of 1/(1-t)^2 by Cauchy product of two
    // geometric series
    std::vector<long> series(11, 0);
    std::vector<long> geo(11, 1);
    for (int n = 0; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) series[n] += geo[k] * geo[n - k];
    for (std::size_t n = 0; n <= 10; ++n)
        CHECK(res.rank(n) == static_cast<std::size_t>(series[n]));
}

TEST_CASE("d compose d is zero and stages are exact") {
    for (PGroup g : {z4(), klein(), d8()}) {
        MinimalResolution res(g);
        res.extend(6);
        for (std::size_t n = 2; n <= 6; ++n) {
            FpMatrix prod = mul(res.differential(n - 1), res.differential(n));
            for (auto e : prod.a) CHECK(e == 0);
            // exactness: rank d_n = dim ker d_{n-1}
            CHECK(rank(res.differential(n)) == res.syzygy_basis(n).rows);
        }
    }
}

TEST_CASE("cup products in the small rings") {
    SECTION("degree-0 identity acts as one") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(4);
        Cocycle one = unit_cocycle(0, 1, 0);
        for (std::size_t i = 0; i < 2; ++i) {
            Cocycle b = unit_cocycle(1, 2, i);
            Cocycle ab = cup_product(one, b, res);
            CHECK(ab.v == b.v);
            Cocycle ba = cup_product(b, one, res);
            CHECK(ba.v == b.v);
        }
    }
    SECTION("Z/2: x^2 is nonzero (polynomial generator)") {
        PGroup g = z2();
        MinimalResolution res(g);
        res.extend(4);
        Cocycle x = unit_cocycle(1, 1, 0);
        CHECK(cup_product(x, x, res).v == FpVector{1});
    }
    SECTION("Z/4: x^2 = 0 (ring is F_2[x,y]/(x^2), |y| = 2)") {
        PGroup g = z4();
        MinimalResolution res(g);
        res.extend(4);
        Cocycle x = unit_cocycle(1, 1, 0);
        CHECK(cup_product(x, x, res).v == FpVector{0});
        Cocycle y = unit_cocycle(2, 1, 0);
        CHECK(cup_product(x, y, res).v == cup_product(y, x, res).v);
        CHECK(cup_product(y, y, res).v == FpVector{1});
    }
    SECTION("Z/3: odd-degree generator squares to zero") {
        PGroup g = z3();
        MinimalResolution res(g);
        res.extend(4);
        Cocycle x = unit_cocycle(1, 1, 0);
        CHECK(cup_product(x, x, res).v == FpVector{0});
        Cocycle y = unit_cocycle(2, 1, 0);
        // even times odd commutes on the nose
        CHECK(cup_product(x, y, res).v == cup_product(y, x, res).v);
    }
    SECTION("graded commutativity at p = 2 on Klein samples") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(5);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Cocycle a = unit_cocycle(1, 2, i);
                Cocycle b = unit_cocycle(1, 2, j);
                CHECK(cup_product(a, b, res).v == cup_product(b, a, res).v);
            }
    }
    SECTION("bilinearity") {
        PGroup g = d8();
        MinimalResolution res(g);
        res.extend(3);
        Cocycle x = unit_cocycle(1, 2, 0), y = unit_cocycle(1, 2, 1);
        Cocycle xy;
        xy.degree = 1;
        xy.v = {1, 1};
        PrimeField f(2);
        auto lhs = cup_product(xy, x, res);
        auto r1 = cup_product(x, x, res), r2 = cup_product(y, x, res);
        for (std::size_t i = 0; i < lhs.v.size(); ++i)
            CHECK(lhs.v[i] == f.add(r1.v[i], r2.v[i]));
    }
}

TEST_CASE("omega and L modules") {
    SECTION("Omega^0 is the trivial module") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(1);
        CHECK(omega(0, res).dim == 1);
    }
    SECTION("Klein: dim Omega^1 = 3, dim L_x = 2, L_x tensor L_y free") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(2);
        KGModule o1 = omega(1, res);
        CHECK(o1.dim == 3);
        Cocycle x = unit_cocycle(1, 2, 0), y = unit_cocycle(1, 2, 1);
        KGModule lx = L_of(x, res), ly = L_of(y, res);
        CHECK(lx.dim == 2);
        CHECK(ly.dim == 2);
        KGModule t = tensor(lx, ly);
        CHECK(t.dim == 4);
        CHECK(is_free(t));
    }
    SECTION("Z/2: dim Omega^1 = 1 and L_x = 0") {
        PGroup g = z2();
        MinimalResolution res(g);
        res.extend(2);
        CHECK(omega(1, res).dim == 1);
        Cocycle x = unit_cocycle(1, 1, 0);
        CHECK(L_of(x, res).dim == 0);
    }
    SECTION("zero class is rejected") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(2);
        Cocycle z;
        z.degree = 1;
        z.v = {0, 0};
        CHECK_THROWS_AS(L_of(z, res), std::invalid_argument);
    }
}

TEST_CASE("restriction maps") {
    SECTION("restricting to the whole group is the identity") {
        PGroup g = klein();
        MinimalResolution res(g);
        res.extend(3);
        SubgroupEmbedding whole;
        whole.parent = &g;
        whole.elements = {0, 1, 2, 3};
        for (std::size_t n = 0; n <= 3; ++n) {
            FpMatrix r = restriction_map(whole, n, res, res);
            CHECK(r == FpMatrix::identity(res.rank(n), 2));
        }
    }
    SECTION("degree-0 restriction is the identity on k") {
        PGroup g = d8();
        MinimalResolution resg(g);
        resg.extend(1);
        auto elabs = maximal_elementary_abelians(g);
        for (const auto& cls : elabs.classes) {
            PGroup e = subgroup_group(cls.rep);
            MinimalResolution rese(e);
            rese.extend(1);
            FpMatrix r = restriction_map(cls.rep, 0, resg, rese);
            CHECK(r == FpMatrix::identity(1, 2));
        }
    }
    SECTION("D8 degree-1 restrictions detect the vanishing product") {
        PGroup g = d8();
        MinimalResolution resg(g);
        resg.extend(3);
        auto elabs = maximal_elementary_abelians(g);
        REQUIRE(elabs.classes.size() == 2);
        std::vector<PGroup> egroups;
        for (const auto& cls : elabs.classes)
            egroups.push_back(subgroup_group(cls.rep));
        std::vector<FpMatrix> r1;
        for (std::size_t c = 0; c < 2; ++c) {
            MinimalResolution rese(egroups[c]);
            rese.extend(3);
            r1.push_back(restriction_map(elabs.classes[c].rep, 1, resg, rese));
        }
        // each degree-1 restriction has a 1-dim kernel, jointly zero
        FpMatrix joint(4, 2, 2);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    joint.at(c * 2 + i, j) = r1[c].at(i, j);
        CHECK(kernel_basis(r1[0]).rows == 1);
        CHECK(kernel_basis(r1[1]).rows == 1);
        CHECK(kernel_basis(joint).rows == 0);

        // the classes killed by one restriction each multiply to zero
        FpVector ka(kernel_basis(r1[0]).a);
        FpVector kb(kernel_basis(r1[1]).a);
        Cocycle a{1, ka}, b{1, kb};
        Cocycle ab = cup_product(a, b, resg);
        CHECK(ab.v == FpVector(resg.rank(2), 0));
    }
    SECTION("restriction is a ring map on samples") {
        PGroup g = d8();
        MinimalResolution resg(g);
        resg.extend(4);
        auto elabs = maximal_elementary_abelians(g);
        PGroup e = subgroup_group(elabs.classes[0].rep);
        MinimalResolution rese(e);
        rese.extend(4);
        RestrictionChain chain(elabs.classes[0].rep, resg, rese);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Cocycle a = unit_cocycle(1, 2, i), b = unit_cocycle(1, 2, j);
                Cocycle ab = cup_product(a, b, resg);
                FpVector res_ab = mul_vec(chain.cohomology_matrix(2), ab.v);
                Cocycle ra{1, mul_vec(chain.cohomology_matrix(1), a.v)};
                Cocycle rb{1, mul_vec(chain.cohomology_matrix(1), b.v)};
                Cocycle prod = cup_product(ra, rb, rese);
                CHECK(res_ab == prod.v);
            }
    }
}

TEST_CASE("resolution caps are enforced") {
    PGroup g = klein();
    MinimalResolution res(g);
    ResolutionCaps caps;
    caps.max_degree = 3;
    CHECK_THROWS_AS(res.extend(5, caps), std::runtime_error);
    ResolutionCaps tiny;
    tiny.max_matrix_entries = 8;
    CHECK_THROWS_AS(res.extend(3, tiny), std::runtime_error);
}

TEST_CASE("products past the computed resolution are rejected") {
    PGroup g = klein();
    MinimalResolution res(g);
    res.extend(2);
    Cocycle x = unit_cocycle(1, 2, 0);
    Cocycle y2 = unit_cocycle(2, 3, 0);
    CHECK_THROWS_AS(cup_product(x, y2, res), std::invalid_argument);
}

TEST_CASE("odd p anticommutativity of degree-one classes") {
    // (Z/3)^2: two odd-degree classes must anticommute, with nonzero product
    PGroup g = build_group(3, {{2, 3, 1, 4, 5, 6}, {1, 2, 3, 5, 6, 4}});
    MinimalResolution res(g);
    res.extend(3);
    REQUIRE(res.rank(1) == 2);
    Cocycle x1{1, {1, 0}}, x2{1, {0, 1}};
    Cocycle ab = cup_product(x1, x2, res);
    Cocycle ba = cup_product(x2, x1, res);
    bool nonzero = false;
    for (auto c : ab.v) nonzero = nonzero || c != 0;
    CHECK(nonzero);
    PrimeField f(3);
    for (std::size_t i = 0; i < ab.v.size(); ++i)
        CHECK(ab.v[i] == f.neg(ba.v[i]));
    // squares of odd classes vanish
    CHECK(cup_product(x1, x1, res).v == FpVector(res.rank(2), 0));
    CHECK(cup_product(x2, x2, res).v == FpVector(res.rank(2), 0));
}

TEST_CASE("chain lifts are interchangeable on cohomology") {
    PGroup g = klein();
    MinimalResolution res(g);
    res.extend(4);
    Cocycle x = unit_cocycle(1, 2, 0), y = unit_cocycle(1, 2, 1);
    CHECK(cup_product(x, y, res).v == cup_product(y, x, res).v);
    // associativity samples: (xy)x = x(yx)
    Cocycle xy = cup_product(x, y, res);
    Cocycle l = cup_product(xy, x, res);
    Cocycle r = cup_product(x, cup_product(y, x, res), res);
    CHECK(l.v == r.v);
}
