#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cohomod/gring.hpp"
#include "cohomod/matrix.hpp"
#include "cohomod/poly.hpp"

namespace cohomod {

/// The invariants of GL(r, F_p) acting on a polynomial ring in r variables,
/// extracted from the product of (X - w) over the F_p-span of the
/// variables. coeffs[j-1] = c_{r,r-j}, of polynomial degree p^r - p^{r-j}
/// in the variables (graded degree gen_degree times that).
struct DicksonSet {
    std::uint32_t p = 2;
    std::size_t r = 1;
    int gen_degree = 1;  // 1 at p = 2, 2 otherwise
    std::vector<Poly> coeffs;

    /// Plain commutative ring on the r variables. Internal degrees are even
    /// so arithmetic never picks up exterior signs.
    PolyRing vars_ring() const {
        PolyRing ring;
        ring.p = p;
        ring.degrees.assign(r, 2);
        return ring;
    }

    int graded_degree(std::size_t j) const {  // degree of c_{r,r-j}
        long pr = 1, prj = 1;
        for (std::size_t i = 0; i < r; ++i) pr *= p;
        for (std::size_t i = 0; i < r - j; ++i) prj *= p;
        return static_cast<int>(gen_degree * (pr - prj));
    }
};

namespace detail {

/// Product of (X - w) over the coset u + span(x_1..x_k), computed along the
/// subspace filtration so intermediate results stay additive and sparse.
/// Variables: 0..r-1 the x_i, index r is X. u is a linear form in the x_i.
inline Poly span_product(const PolyRing& big, std::size_t r, std::uint32_t p,
                         const Poly& u, std::size_t k) {
    PrimeField f(p);
    if (k == 0) {
        // X - u
        Poly X = poly_var(big, r);
        return poly_sub(big, X, u);
    }
    Poly prod = poly_one(big);
    for (std::uint32_t c = 0; c < p; ++c) {
        Poly shift = poly_add(big, u, poly_scale(big, c, poly_var(big, k - 1)));
        prod = poly_mul(big, prod, span_product(big, r, p, shift, k - 1));
    }
    return prod;
}

inline long int_pow(long base, std::size_t e) {
    long out = 1;
    while (e--) out *= base;
    return out;
}

}  // namespace detail

/// Expand the defining product over all p^r elements of the span and read
/// off the coefficients. Asserts that every other coefficient vanishes.
inline DicksonSet dickson_set(std::uint32_t p, std::size_t r, int gen_degree) {
    if (r < 1) throw std::invalid_argument("dickson_set: rank must be >= 1");
    long q = detail::int_pow(p, r);
    if (q > 64) throw std::invalid_argument("dickson_set: p^r cap (64) exceeded");
    PrimeField f(p);

    PolyRing big;  // x_0..x_{r-1}, X at index r; even internal degrees
    big.p = p;
    big.degrees.assign(r + 1, 2);

    Poly full = detail::span_product(big, r, p, poly_zero(big), r);

    // bucket terms by the exponent of X
    std::vector<Poly> by_xdeg(q + 1);
    for (const auto& t : full.terms) {
        std::uint16_t e = t.m[r];
        Monomial rest(t.m.begin(), t.m.end() - 1);
        by_xdeg[e].terms.push_back({t.c, rest});
    }
    DicksonSet out;
    out.p = p;
    out.r = r;
    out.gen_degree = gen_degree;
    PolyRing vars = out.vars_ring();
    for (long m = 0; m <= q; ++m) by_xdeg[m] = normalize(vars, by_xdeg[m]);

    // the only nonzero coefficients sit at X^{p^{r-j}}, j = 0..r
    std::vector<long> allowed;
    for (std::size_t j = 0; j <= r; ++j) allowed.push_back(detail::int_pow(p, r - j));
    for (long m = 0; m <= q; ++m) {
        bool ok = std::find(allowed.begin(), allowed.end(), m) != allowed.end();
        if (!ok && !by_xdeg[m].is_zero())
            throw std::logic_error("dickson_set: unexpected nonzero coefficient");
    }
    if (!(by_xdeg[q] == poly_one(vars)))
        throw std::logic_error("dickson_set: product is not monic");

    // coefficient of X^{p^{r-j}} is (-1)^j c_{r,r-j}
    for (std::size_t j = 1; j <= r; ++j) {
        Poly c = by_xdeg[detail::int_pow(p, r - j)];
        if (j % 2 == 1) c = poly_scale(vars, f.neg(1), c);
        out.coeffs.push_back(normalize(vars, c));
    }
    return out;
}

/// Check invariance under a generating set of GL(r, F_p): a transvection,
/// a diagonal scaling by a generator of F_p^*, and the permutations.
inline bool verify_gl_invariance(const DicksonSet& d) {
    PolyRing vars = d.vars_ring();
    PrimeField f(d.p);
    std::vector<std::vector<Poly>> substitutions;

    auto identity_images = [&]() {
        std::vector<Poly> im;
        for (std::size_t i = 0; i < d.r; ++i) im.push_back(poly_var(vars, i));
        return im;
    };
    if (d.r >= 2) {
        auto tv = identity_images();  // x_0 -> x_0 + x_1
        tv[0] = poly_add(vars, poly_var(vars, 0), poly_var(vars, 1));
        substitutions.push_back(tv);
        auto swap01 = identity_images();
        std::swap(swap01[0], swap01[1]);
        substitutions.push_back(swap01);
        auto cycle = identity_images();
        for (std::size_t i = 0; i < d.r; ++i)
            cycle[i] = poly_var(vars, (i + 1) % d.r);
        substitutions.push_back(cycle);
    }
    if (d.p > 2) {
        // find a generator of the multiplicative group
        std::uint32_t gen = 2;
        for (; gen < d.p; ++gen) {
            std::uint32_t x = gen;
            std::size_t ord = 1;
            while (x != 1) {
                x = f.mul(x, gen);
                ++ord;
            }
            if (ord == d.p - 1) break;
        }
        auto diag = identity_images();
        diag[0] = poly_scale(vars, gen, poly_var(vars, 0));
        substitutions.push_back(diag);
    }
    for (const auto& images : substitutions)
        for (const auto& c : d.coeffs)
            if (!(substitute(vars, c, vars, images) == c)) return false;
    return true;
}

/// Setting the last r - s variables to zero must send c_{r,r-j} to
/// c_{s,s-j}^{p^{r-s}} for j <= s and to zero for j > s.
inline bool restriction_power_relation(const DicksonSet& d, std::size_t s) {
    if (s < 1 || s >= d.r)
        throw std::invalid_argument("restriction_power_relation: need 1 <= s < r");
    PolyRing vars = d.vars_ring();
    std::vector<Poly> images;
    for (std::size_t i = 0; i < d.r; ++i)
        images.push_back(i < s ? poly_var(vars, i) : poly_zero(vars));
    DicksonSet sub = dickson_set(d.p, s, d.gen_degree);
    long power = detail::int_pow(d.p, d.r - s);
    for (std::size_t j = 1; j <= d.r; ++j) {
        Poly restricted = substitute(vars, d.coeffs[j - 1], vars, images);
        if (j <= s) {
            // embed c_{s,s-j} into the r-variable ring and raise
            Poly embedded;
            for (const auto& t : sub.coeffs[j - 1].terms) {
                Monomial m(d.r, 0);
                for (std::size_t i = 0; i < s; ++i) m[i] = t.m[i];
                embedded.terms.push_back({t.c, m});
            }
            embedded = normalize(vars, embedded);
            Poly target = poly_pow(vars, embedded, power);
            if (!(restricted == target)) return false;
        } else {
            if (!restricted.is_zero()) return false;
        }
    }
    return true;
}

/// Restriction images of ring elements on one conjugacy class of maximal
/// elementary abelian subgroups: the image of every ring generator in the
/// class's polynomial cohomology (p = 2: rank many degree-1 generators).
struct ElabRestriction {
    std::size_t rank = 0;
    std::vector<Poly> gen_images;  // one per presentation generator

    PolyRing target_ring(std::uint32_t p) const {
        PolyRing r;
        r.p = p;
        r.degrees.assign(rank, 1);
        return r;
    }
};

namespace detail {

/// All subspaces of F_p^n of the given dimension, one reduced-echelon basis
/// each (rows are the basis vectors).
inline std::vector<FpMatrix> subspaces(std::uint32_t p, std::size_t n,
                                       std::size_t dim) {
    std::vector<FpMatrix> out;
    if (dim == 0 || dim > n) return out;
    // choose pivot columns, then fill free entries
    std::vector<std::size_t> pivots(dim);
    std::vector<std::size_t> stack;
    std::function<void(std::size_t, std::size_t)> choose =
        [&](std::size_t start, std::size_t k) {
            if (k == dim) {
                // free positions: row i, column c with c > pivots[i],
                // c not a pivot of a later row
                std::vector<std::pair<std::size_t, std::size_t>> freepos;
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t c = pivots[i] + 1; c < n; ++c)
                        if (std::find(pivots.begin(), pivots.end(), c) ==
                            pivots.end())
                            freepos.push_back({i, c});
                std::size_t total = 1;
                for (std::size_t t = 0; t < freepos.size(); ++t) total *= p;
                for (std::size_t word = 0; word < total; ++word) {
                    FpMatrix b(dim, n, p);
                    for (std::size_t i = 0; i < dim; ++i) b.at(i, pivots[i]) = 1;
                    std::size_t w = word;
                    for (auto [i, c] : freepos) {
                        b.at(i, c) = static_cast<std::uint32_t>(w % p);
                        w /= p;
                    }
                    out.push_back(std::move(b));
                }
                return;
            }
            for (std::size_t c = start; c + (dim - k) <= n; ++c) {
                pivots[k] = c;
                choose(c + 1, k + 1);
            }
        };
    choose(0, 0);
    return out;
}

/// Substitution images for restricting along the subgroup inclusion with
/// the given echelon basis: the degree-one generator t_c of the big group
/// maps to the linear form sum_i basis[i][c] u_i of the subspace ring.
inline std::vector<Poly> inclusion_images(const FpMatrix& basis,
                                          const PolyRing& sub_ring) {
    std::vector<Poly> images;
    for (std::size_t c = 0; c < basis.cols; ++c) {
        Poly form = poly_zero(sub_ring);
        for (std::size_t i = 0; i < basis.rows; ++i)
            if (basis.at(i, c))
                form = poly_add(sub_ring, form,
                                poly_scale(sub_ring, basis.at(i, c),
                                           poly_var(sub_ring, i)));
        images.push_back(form);
    }
    return images;
}

}  // namespace detail

/// The rank-restriction condition on restriction images: the i-th
/// parameter must die on every elementary abelian subgroup of rank below i.
/// Also verifies that the first i parameters cut out a finite-length
/// quotient on every rank-i subspace (so restrictions stay parameter
/// systems down the rank filtration). p = 2 only: the inclusion action on
/// the degree-one generators is the matrix of the subspace.
inline bool rank_restriction_check(
    std::uint32_t p, const std::vector<std::vector<Poly>>& images_per_class,
    const std::vector<std::size_t>& class_ranks, int finite_length_bound = 64) {
    if (p != 2)
        throw std::invalid_argument("rank_restriction_check: implemented for p = 2");
    if (images_per_class.size() != class_ranks.size())
        throw std::invalid_argument("rank_restriction_check: class data mismatch");

    for (std::size_t c = 0; c < images_per_class.size(); ++c) {
        const std::size_t rho = class_ranks[c];
        PolyRing ering;
        ering.p = p;
        ering.degrees.assign(rho, 1);
        const auto& imgs = images_per_class[c];
        // vanishing on low-rank subspaces
        for (std::size_t i = 1; i <= imgs.size(); ++i) {
            for (std::size_t s = 1; s + 1 <= i && s <= rho; ++s) {
                PolyRing subring;
                subring.p = p;
                subring.degrees.assign(s, 1);
                for (const auto& basis : detail::subspaces(p, rho, s)) {
                    auto inc = detail::inclusion_images(basis, subring);
                    Poly restricted = substitute(ering, imgs[i - 1], subring, inc);
                    if (!restricted.is_zero()) return false;
                }
            }
        }
        // first i parameters cut out finite length on rank-i subspaces
        for (std::size_t i = 1; i <= std::min(rho, imgs.size()); ++i) {
            PolyRing subring;
            subring.p = p;
            subring.degrees.assign(i, 1);
            std::vector<RingGenerator> gens;
            for (std::size_t v = 0; v < i; ++v)
                gens.push_back({"t" + std::to_string(v + 1), 1});
            for (const auto& basis : detail::subspaces(p, rho, i)) {
                auto inc = detail::inclusion_images(basis, subring);
                std::vector<Poly> cut;
                for (std::size_t t = 0; t < i; ++t) {
                    Poly q = substitute(ering, imgs[t], subring, inc);
                    if (!q.is_zero()) cut.push_back(q);
                }
                GradedPresentation quot = make_presentation(p, gens, cut);
                DegreeBasis db(quot);
                if (!certify_finite_length(db, finite_length_bound).certified)
                    return false;
            }
        }
    }
    return true;
}

/// Search for a parameter system in a truncated presentation whose
/// restriction to every maximal elementary abelian class equals the
/// (dilated) invariant of matching index: on a rank-rho class the target
/// for the j-th parameter is c_{rho,rho-j} raised to p^{a_j + R - rho}
/// (R the maximal rank), uniformly of degree gen_degree (p^R - p^{R-j}) p^{a_j}.
/// Returns the first solution in rref order; absence of a solution at the
/// requested dilation is an error carrying the failing index.
struct ParameterSearchError : std::runtime_error {
    std::size_t j;
    explicit ParameterSearchError(std::size_t j_, const std::string& what)
        : std::runtime_error(what), j(j_) {}
};

inline ParameterSequence find_parameters(
    const TruncatedPresentation& tau,
    const std::vector<ElabRestriction>& classes,
    const std::vector<int>& dilation) {
    const std::uint32_t p = tau.base.p;
    if (p != 2)
        throw std::invalid_argument("find_parameters: implemented for p = 2");
    if (classes.empty())
        throw std::invalid_argument("find_parameters: no restriction targets");
    const int g = 1;  // degree-one convention at p = 2
    std::size_t R = 0;
    for (const auto& c : classes) R = std::max(R, c.rank);
    if (dilation.size() != R)
        throw std::invalid_argument("find_parameters: one dilation exponent per parameter");

    DegreeBasis db(tau.base);
    PolyRing tring = tau.base.ring();
    std::vector<Poly> found;

    for (std::size_t j = 1; j <= R; ++j) {
        long dj = g * (detail::int_pow(p, R) - detail::int_pow(p, R - j)) *
                  detail::int_pow(p, dilation[j - 1]);
        if (dj > tau.N)
            throw ParameterSearchError(
                j, "find_parameters: target degree " + std::to_string(dj) +
                       " exceeds truncation " + std::to_string(tau.N));
        auto mons = db.basis_monomials(static_cast<int>(dj));

        std::vector<FpVector> rows;  // stacked over classes
        FpVector rhs_all;
        for (const auto& cls : classes) {
            PolyRing ering = cls.target_ring(p);
            // monomial coordinates of H*(E) in degree dj
            GradedPresentation efree = make_presentation(
                p,
                [&] {
                    std::vector<RingGenerator> gens;
                    for (std::size_t v = 0; v < cls.rank; ++v)
                        gens.push_back({"t" + std::to_string(v + 1), 1});
                    return gens;
                }(),
                {});
            DegreeBasis edb(efree);
            auto emons = edb.basis_monomials(static_cast<int>(dj));
            std::map<Monomial, std::size_t> eindex;
            for (std::size_t i = 0; i < emons.size(); ++i) eindex[emons[i]] = i;

            // target polynomial
            Poly target = poly_zero(ering);
            if (j <= cls.rank) {
                DicksonSet ds = dickson_set(p, cls.rank, g);
                // Dickson variables have internal even degrees; re-express
                // the polynomial over the class ring (same exponents)
                Poly c = ds.coeffs[j - 1];
                Poly conv;
                conv.terms = c.terms;
                conv = normalize(ering, conv);
                long power = detail::int_pow(p, dilation[j - 1] +
                                                    static_cast<long>(R - cls.rank));
                target = poly_pow(ering, conv, power);
            }
            FpVector rhs(emons.size(), 0);
            PrimeField f(p);
            for (const auto& t : target.terms)
                rhs[eindex.at(t.m)] = f.add(rhs[eindex.at(t.m)], t.c);

            // restriction matrix columns: image of each tau monomial
            std::vector<FpVector> cols;
            for (const auto& m : mons) {
                Poly image = poly_one(ering);
                for (std::size_t v = 0; v < tring.nvars(); ++v)
                    if (m[v])
                        image = poly_mul(ering, image,
                                         poly_pow(ering, cls.gen_images[v], m[v]));
                FpVector col(emons.size(), 0);
                for (const auto& t : image.terms)
                    col[eindex.at(t.m)] = f.add(col[eindex.at(t.m)], t.c);
                cols.push_back(std::move(col));
            }
            for (std::size_t i = 0; i < emons.size(); ++i) {
                FpVector row(mons.size(), 0);
                for (std::size_t cix = 0; cix < mons.size(); ++cix)
                    row[cix] = cols[cix][i];
                rows.push_back(std::move(row));
                rhs_all.push_back(rhs[i]);
            }
        }
        FpMatrix system(rows.size(), mons.size(), p);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t cix = 0; cix < mons.size(); ++cix)
                system.at(i, cix) = rows[i][cix];
        auto sol = solve(system, rhs_all);
        if (!sol)
            throw ParameterSearchError(
                j, "find_parameters: no element with the prescribed restrictions "
                   "at this dilation (index " + std::to_string(j) + ")");
        Poly u;
        for (std::size_t cix = 0; cix < mons.size(); ++cix)
            if ((*sol)[cix]) u.terms.push_back({(*sol)[cix], mons[cix]});
        u = normalize(tring, u);
        if (u.is_zero())
            throw ParameterSearchError(
                j, "find_parameters: prescribed restrictions force the zero element");
        found.push_back(std::move(u));
    }
    return make_parameters(tau.base, found);
}

}  // namespace cohomod
