#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "cohomod/group.hpp"
#include "cohomod/matrix.hpp"
#include "cohomod/module.hpp"

namespace cohomod {

/// Free module (kG)^b as an explicit F_p-space of dimension b|G| with the
/// blockwise left-regular action. Basis index (i, h) flattens to i|G| + h.
inline KGModule free_module(const PGroup& g, std::size_t b) {
    std::vector<FpMatrix> acts;
    for (std::size_t gen : g.generators) {
        FpMatrix m(b * g.order, b * g.order, g.p);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t h = 0; h < g.order; ++h)
                m.at(i * g.order + g.table[gen][h], i * g.order + h) = 1;
        acts.push_back(m);
    }
    return make_module(g, b * g.order, acts);
}

struct ResolutionCaps {
    std::size_t max_degree = 64;
    std::size_t max_matrix_entries = 64u * 1024u * 1024u;
};

/// Minimal projective resolution of the trivial module over kG, computed
/// degree by degree. ranks[n] = b_n = dim H^n(G, k); diff[n] is the matrix
/// of d_n : (kG)^{b_n} -> (kG)^{b_{n-1}} as an F_p-linear map, n >= 1.
/// syzygy[n] holds the canonical kernel basis of d_{n-1} (each row a vector
/// in P_{n-1}), i.e. Omega^n k together with the free columns that make
/// coordinate extraction cheap.
///
/// Stage construction picks minimal generators of ker d_{n-1} by rref pivot
/// order, so two runs produce identical matrices.
class MinimalResolution {
public:
    explicit MinimalResolution(const PGroup& g) : group_(&g) {
        ranks_.push_back(1);  // the trivial module is cyclic
        diff_.emplace_back();
        syzygy_.emplace_back();
        syzygy_free_.emplace_back();
        solver_.emplace_back();
    }
    // the group must outlive the resolution
    explicit MinimalResolution(PGroup&&) = delete;

    const PGroup& group() const { return *group_; }
    std::size_t top_degree() const { return ranks_.size() - 1; }
    std::size_t rank(std::size_t n) const { return ranks_.at(n); }
    const std::vector<std::size_t>& ranks() const { return ranks_; }
    const FpMatrix& differential(std::size_t n) const { return diff_.at(n); }

    /// Basis rows of Omega^n k inside P_{n-1} (n >= 1).
    const FpMatrix& syzygy_basis(std::size_t n) const { return syzygy_.at(n); }
    const std::vector<std::size_t>& syzygy_free_cols(std::size_t n) const {
        return syzygy_free_.at(n);
    }

    /// The augmentation (kG) -> k as a 1 x |G| matrix of ones.
    FpMatrix augmentation() const {
        FpMatrix a(1, group_->order, group_->p);
        for (std::size_t h = 0; h < group_->order; ++h) a.at(0, h) = 1;
        return a;
    }

    void extend(std::size_t to_degree, const ResolutionCaps& caps = {}) {
        if (to_degree > caps.max_degree)
            throw std::runtime_error("MinimalResolution: degree cap exceeded");
        while (top_degree() < to_degree) extend_one(caps);
    }

    /// Apply the regular action of element h to a vector of P_n given its
    /// block count b.
    FpVector apply_regular(std::size_t h, const FpVector& v) const {
        const std::size_t m = group_->order;
        FpVector out(v.size(), 0);
        const std::size_t b = v.size() / m;
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t x = 0; x < m; ++x)
                out[i * m + group_->table[h][x]] = v[i * m + x];
        return out;
    }

    /// Shared elimination of d_n for the many lifting solves.
    const RrefSolver& solver(std::size_t n) const {
        if (!solver_.at(n))
            solver_[n] = std::make_shared<RrefSolver>(diff_.at(n));
        return *solver_[n];
    }

private:
    void extend_one(const ResolutionCaps& caps) {
        const std::size_t m = group_->order;
        const std::size_t n = top_degree() + 1;
        KernelInfo ker = (n == 1) ? kernel_with_info(augmentation())
                                  : kernel_with_info(diff_[n - 1]);
        const std::size_t kdim = ker.basis.rows;
        const std::size_t prev_dim = ranks_[n - 1] * m;

        // radical of the kernel in kernel coordinates
        PrimeField f(group_->p);
        FpMatrix rad(group_->generators.size() * kdim, kdim, group_->p);
        std::size_t row = 0;
        for (std::size_t gen : group_->generators)
            for (std::size_t j = 0; j < kdim; ++j) {
                FpVector v(ker.basis.a.begin() + j * prev_dim,
                           ker.basis.a.begin() + (j + 1) * prev_dim);
                FpVector w = apply_regular(gen, v);
                for (std::size_t t = 0; t < prev_dim; ++t)
                    w[t] = f.sub(w[t], v[t]);
                // w lies in the kernel; read coordinates at the free columns
                for (std::size_t c = 0; c < kdim; ++c)
                    rad.at(row, c) = w[ker.free_cols[c]];
                ++row;
            }
        RrefResult rr = rref(rad);
        std::vector<bool> in_radical(kdim, false);
        for (std::size_t c : rr.pivots) in_radical[c] = true;

        std::vector<std::size_t> gen_rows;
        for (std::size_t c = 0; c < kdim; ++c)
            if (!in_radical[c]) gen_rows.push_back(c);
        const std::size_t b_n = gen_rows.size();

        if (prev_dim * b_n * m > caps.max_matrix_entries)
            throw std::runtime_error("MinimalResolution: memory cap exceeded");

        FpMatrix d(prev_dim, b_n * m, group_->p);
        for (std::size_t i = 0; i < b_n; ++i) {
            FpVector v(ker.basis.a.begin() + gen_rows[i] * prev_dim,
                       ker.basis.a.begin() + (gen_rows[i] + 1) * prev_dim);
            for (std::size_t h = 0; h < m; ++h) {
                FpVector w = apply_regular(h, v);
                for (std::size_t t = 0; t < prev_dim; ++t)
                    d.at(t, i * m + h) = w[t];
            }
        }
        ranks_.push_back(b_n);
        diff_.push_back(std::move(d));
        syzygy_.push_back(std::move(ker.basis));
        syzygy_free_.push_back(std::move(ker.free_cols));
        solver_.push_back(nullptr);
    }

    const PGroup* group_;
    std::vector<std::size_t> ranks_;
    std::vector<FpMatrix> diff_;
    std::vector<FpMatrix> syzygy_;
    std::vector<std::vector<std::size_t>> syzygy_free_;
    mutable std::vector<std::shared_ptr<RrefSolver>> solver_;
};

/// Extend a copy; earlier stages are reproduced bit for bit.
inline MinimalResolution extend_resolution(const MinimalResolution& res,
                                           std::size_t to_degree,
                                           const ResolutionCaps& caps = {}) {
    MinimalResolution out = res;
    out.extend(to_degree, caps);
    return out;
}

/// Degree-n cohomology class. By minimality Hom_kG(P_n, k) has zero
/// differential, so H^n(G,k) is exactly F_p^{b_n}; the class with vector v
/// is the map sending the free generator (i, h) to v[i].
struct Cocycle {
    std::size_t degree = 0;
    FpVector v;
};

/// Functional on P_degree represented by the cocycle.
inline FpVector cocycle_functional(const Cocycle& z, const PGroup& g) {
    FpVector w(z.v.size() * g.order, 0);
    for (std::size_t i = 0; i < z.v.size(); ++i)
        for (std::size_t h = 0; h < g.order; ++h)
            w[i * g.order + h] = z.v[i];
    return w;
}

/// Chain-map lift of a cocycle z: levels[j] is a matrix P_{|z|+j} -> P_j
/// with d_j . levels[j] = levels[j-1] . d_{|z|+j}. Any lift represents the
/// same cohomology operation; this one is pinned down by the deterministic
/// solver so products are reproducible.
class CocycleLift {
public:
    CocycleLift(Cocycle z, const MinimalResolution& res)
        : z_(std::move(z)), res_(&res) {}

    const Cocycle& cocycle() const { return z_; }

    void ensure_level(std::size_t j) {
        const PGroup& g = res_->group();
        const std::size_t m = g.order;
        if (levels_.empty()) {
            // level 0: (i, h) -> z_i . h in P_0 = kG
            const std::size_t bsrc = res_->rank(z_.degree);
            FpMatrix l0(m, bsrc * m, g.p);
            for (std::size_t i = 0; i < bsrc; ++i)
                for (std::size_t h = 0; h < m; ++h) l0.at(h, i * m + h) = z_.v[i];
            levels_.push_back(std::move(l0));
        }
        while (levels_.size() <= j) {
            const std::size_t lev = levels_.size();
            const std::size_t src = z_.degree + lev;
            if (res_->top_degree() < src)
                throw std::invalid_argument("CocycleLift: resolution too short");
            const std::size_t bsrc = res_->rank(src);
            const FpMatrix& d_src = res_->differential(src);
            const FpMatrix& prev = levels_[lev - 1];
            FpMatrix l(res_->rank(lev) * m, bsrc * m, g.p);
            for (std::size_t i = 0; i < bsrc; ++i) {
                FpVector col(d_src.rows);
                for (std::size_t t = 0; t < d_src.rows; ++t)
                    col[t] = d_src.at(t, i * m + 0);
                FpVector rhs = mul_vec(prev, col);
                auto x = res_->solver(lev).solve(rhs);
                if (!x)
                    throw std::logic_error("CocycleLift: lifting failed (exactness violated)");
                for (std::size_t h = 0; h < m; ++h) {
                    FpVector w = res_->apply_regular(h, *x);
                    for (std::size_t t = 0; t < w.size(); ++t)
                        l.at(t, i * m + h) = w[t];
                }
            }
            levels_.push_back(std::move(l));
        }
    }

    const FpMatrix& level(std::size_t j) const { return levels_.at(j); }

private:
    Cocycle z_;
    const MinimalResolution* res_;
    std::vector<FpMatrix> levels_;
};

/// Cup product a.b as composition of b with a chain-map lift of a through
/// |b| stages. Bilinear, degree |a| + |b|.
inline Cocycle cup_product(const Cocycle& a, const Cocycle& b,
                           const MinimalResolution& res) {
    if (res.top_degree() < a.degree + b.degree)
        throw std::invalid_argument("cup_product: resolution too short");
    const PGroup& g = res.group();
    CocycleLift lift(a, res);
    lift.ensure_level(b.degree);
    const FpMatrix& top = lift.level(b.degree);
    FpVector wb = cocycle_functional(b, g);
    Cocycle out;
    out.degree = a.degree + b.degree;
    out.v.assign(res.rank(out.degree), 0);
    PrimeField f(g.p);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t t = 0; t < top.rows; ++t)
            acc += static_cast<std::uint64_t>(wb[t]) *
                   top.at(t, i * g.order + 0);
        out.v[i] = static_cast<std::uint32_t>(acc % g.p);
    }
    return out;
}

/// Omega^n k as a module: the kernel of d_{n-1} on its canonical basis
/// (Omega^0 k = k).
inline KGModule omega(std::size_t n, const MinimalResolution& res) {
    if (n == 0) return trivial_module(res.group());
    if (res.top_degree() < n)
        throw std::invalid_argument("omega: resolution too short");
    KGModule free = free_module(res.group(), res.rank(n - 1));
    return submodule_from_basis(free, res.syzygy_basis(n));
}

/// L_z = ker(zhat : Omega^n k -> k) for a nonzero class z of degree n >= 1;
/// dim L_z = dim Omega^n k - 1.
inline KGModule L_of(const Cocycle& z, const MinimalResolution& res) {
    const std::size_t n = z.degree;
    if (n < 1) throw std::invalid_argument("L_of: degree must be >= 1");
    bool zero = true;
    for (auto c : z.v) zero = zero && c == 0;
    if (zero) throw std::invalid_argument("L_of: zero class has no L module");
    if (res.top_degree() < n)
        throw std::invalid_argument("L_of: resolution too short");
    const PGroup& g = res.group();
    const FpMatrix& K = res.syzygy_basis(n);
    FpVector wz = cocycle_functional(z, g);
    // zhat on the kernel basis: value on row j is z(u) for any u with
    // d_n u = K_j
    FpMatrix phi(1, K.rows, g.p);
    PrimeField f(g.p);
    for (std::size_t j = 0; j < K.rows; ++j) {
        FpVector row(K.a.begin() + j * K.cols, K.a.begin() + (j + 1) * K.cols);
        auto u = res.solver(n).solve(row);
        if (!u) throw std::logic_error("L_of: kernel row not in the image of d_n");
        std::uint64_t acc = 0;
        for (std::size_t t = 0; t < u->size(); ++t)
            acc += static_cast<std::uint64_t>(wz[t]) * (*u)[t];
        phi.at(0, j) = static_cast<std::uint32_t>(acc % g.p);
    }
    FpMatrix combos = kernel_basis(phi);  // coordinates over kernel rows
    FpMatrix basis(combos.rows, K.cols, g.p);
    for (std::size_t i = 0; i < combos.rows; ++i)
        for (std::size_t j = 0; j < K.rows; ++j) {
            std::uint32_t c = combos.at(i, j);
            if (!c) continue;
            for (std::size_t t = 0; t < K.cols; ++t)
                basis.at(i, t) =
                    f.add(basis.at(i, t), f.mul(c, K.at(j, t)));
        }
    KGModule free = free_module(g, res.rank(n - 1));
    return submodule_from_basis(free, basis);
}

/// Chain map over kE from a subgroup's resolution to the parent's
/// resolution restricted to E, lifting the identity of k. Induces the
/// restriction map H^n(G,k) -> H^n(E,k), which is independent of the lift.
class RestrictionChain {
public:
    RestrictionChain(const SubgroupEmbedding& emb, const MinimalResolution& res_g,
                     const MinimalResolution& res_e)
        : emb_(emb), res_g_(&res_g), res_e_(&res_e) {}

    void ensure(std::size_t n) {
        const PGroup& G = res_g_->group();
        const std::size_t mG = G.order;
        const std::size_t mE = emb_.elements.size();
        if (phi_.empty()) {
            FpMatrix p0(mG, mE, G.p);
            for (std::size_t e = 0; e < mE; ++e)
                p0.at(emb_.elements[e], e) = 1;
            phi_.push_back(std::move(p0));
        }
        while (phi_.size() <= n) {
            const std::size_t j = phi_.size();
            if (res_g_->top_degree() < j || res_e_->top_degree() < j)
                throw std::invalid_argument("RestrictionChain: resolutions too short");
            const std::size_t bE = res_e_->rank(j);
            const FpMatrix& dE = res_e_->differential(j);
            FpMatrix p(res_g_->rank(j) * mG, bE * mE, G.p);
            for (std::size_t i = 0; i < bE; ++i) {
                FpVector col(dE.rows);
                for (std::size_t t = 0; t < dE.rows; ++t)
                    col[t] = dE.at(t, i * mE + 0);
                FpVector rhs = mul_vec(phi_[j - 1], col);
                auto x = res_g_->solver(j).solve(rhs);
                if (!x)
                    throw std::logic_error("RestrictionChain: lifting failed");
                for (std::size_t e = 0; e < mE; ++e) {
                    FpVector w = res_g_->apply_regular(emb_.elements[e], *x);
                    for (std::size_t t = 0; t < w.size(); ++t)
                        p.at(t, i * mE + e) = w[t];
                }
            }
            phi_.push_back(std::move(p));
        }
    }

    /// Matrix of H^n(G,k) -> H^n(E,k) acting on cocycle column vectors.
    FpMatrix cohomology_matrix(std::size_t n) {
        ensure(n);
        const PGroup& G = res_g_->group();
        const std::size_t mG = G.order;
        const std::size_t mE = emb_.elements.size();
        const FpMatrix& p = phi_[n];
        FpMatrix r(res_e_->rank(n), res_g_->rank(n), G.p);
        PrimeField f(G.p);
        for (std::size_t j = 0; j < r.rows; ++j)
            for (std::size_t i = 0; i < r.cols; ++i) {
                std::uint32_t acc = 0;
                for (std::size_t h = 0; h < mG; ++h)
                    acc = f.add(acc, p.at(i * mG + h, j * mE + 0));
                r.at(j, i) = acc;
            }
        return r;
    }

private:
    SubgroupEmbedding emb_;
    const MinimalResolution* res_g_;
    const MinimalResolution* res_e_;
    std::vector<FpMatrix> phi_;
};

/// One-shot restriction matrix H^n(G,k) -> H^n(E,k).
inline FpMatrix restriction_map(const SubgroupEmbedding& emb, std::size_t n,
                                const MinimalResolution& res_g,
                                const MinimalResolution& res_e) {
    RestrictionChain chain(emb, res_g, res_e);
    return chain.cohomology_matrix(n);
}

}  // namespace cohomod
