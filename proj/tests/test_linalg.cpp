#include <catch2/catch_amalgamated.hpp>

#include "cohomod/matrix.hpp"

using namespace cohomod;

namespace {

FpMatrix from_rows(std::uint32_t p, std::vector<std::vector<std::uint32_t>> rows) {
    FpMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

// small deterministic generator for property checks
struct Lcg {
    std::uint64_t s;
    std::uint32_t next(std::uint32_t mod) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<std::uint32_t>((s >> 33) % mod);
    }
};

}  // namespace

TEST_CASE("prime field validates the modulus") {
    CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(127));
    PrimeField f5(5);
    CHECK(f5.inv(2) == 3);
    CHECK(f5.mul(f5.inv(4), 4) == 1);
    CHECK(f5.reduce(-7) == 3);
}

TEST_CASE("rref on small reference cases") {
    SECTION("duplicate rows over F_2") {
        auto r = rref(from_rows(2, {{1, 1}, {1, 1}}));
        CHECK(r.rank == 1);
        CHECK(r.pivots == std::vector<std::size_t>{0});
    }
    SECTION("identity over F_3") {
        FpMatrix id = FpMatrix::identity(3, 3);
        auto r = rref(id);
        CHECK(r.rank == 3);
        CHECK(r.reduced == id);
    }
    SECTION("proportional rows over F_3") {
        // 2*[1,2] = [2,4] = [2,1] mod 3
        auto r = rref(from_rows(3, {{2, 1}, {1, 2}}));
        CHECK(r.rank == 1);
    }
}

TEST_CASE("kernel basis on small reference cases") {
    CHECK(kernel_basis(FpMatrix::identity(2, 2)).rows == 0);
    auto k = kernel_basis(from_rows(2, {{1, 1}}));
    REQUIRE(k.rows == 1);
    CHECK(k.at(0, 0) == 1);
    CHECK(k.at(0, 1) == 1);
    CHECK(kernel_basis(FpMatrix(2, 3, 2)).rows == 3);
}

TEST_CASE("solve on small reference cases") {
    SECTION("identity") {
        auto x = solve(FpMatrix::identity(2, 2), {1, 0});
        REQUIRE(x.has_value());
        CHECK(*x == FpVector{1, 0});
    }
    SECTION("free variable pinned to zero") {
        auto x = solve(from_rows(2, {{1, 1}}), {1});
        REQUIRE(x.has_value());
        CHECK(*x == FpVector{1, 0});
    }
    SECTION("inconsistent") {
        CHECK_FALSE(solve(from_rows(2, {{0, 0}}), {1}).has_value());
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(solve(FpMatrix::identity(2, 2), {1, 0, 0}),
                        std::invalid_argument);
    }
}

TEST_CASE("rref idempotence, rank-nullity, exact solutions") {
    Lcg rng{12345};
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng.next(6), cols = 1 + rng.next(6);
            FpMatrix m(rows, cols, p);
            for (auto& e : m.a) e = rng.next(p);

            auto r = rref(m);
            CHECK(rref(r.reduced).reduced == r.reduced);
            CHECK(r.rank + kernel_basis(m).rows == cols);

            // kernel rows multiply to zero
            FpMatrix k = kernel_basis(m);
            for (std::size_t i = 0; i < k.rows; ++i) {
                FpVector v(k.a.begin() + i * cols, k.a.begin() + (i + 1) * cols);
                for (std::uint32_t e : mul_vec(m, v)) CHECK(e == 0);
            }

            // any solvable system solves exactly
            FpVector x0(cols);
            for (auto& e : x0) e = rng.next(p);
            FpVector rhs = mul_vec(m, x0);
            auto x = solve(m, rhs);
            REQUIRE(x.has_value());
            CHECK(mul_vec(m, *x) == rhs);

            // the reusable solver agrees with one-shot solve
            RrefSolver solver(m);
            auto x2 = solver.solve(rhs);
            REQUIRE(x2.has_value());
            CHECK(*x2 == *x);
            CHECK(solver.kernel() == k);
        }
    }
}

TEST_CASE("kernel_with_info exposes readable coordinates") {
    FpMatrix m = from_rows(3, {{1, 2, 0, 1}, {0, 0, 1, 2}});
    KernelInfo info = kernel_with_info(m);
    REQUIRE(info.basis.rows == info.free_cols.size());
    for (std::size_t i = 0; i < info.basis.rows; ++i)
        for (std::size_t j = 0; j < info.basis.rows; ++j)
            CHECK(info.basis.at(i, info.free_cols[j]) == (i == j ? 1u : 0u));
}
