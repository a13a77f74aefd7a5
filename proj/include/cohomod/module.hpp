#pragma once

#include <stdexcept>
#include <vector>

#include "cohomod/group.hpp"
#include "cohomod/matrix.hpp"

namespace cohomod {

/// Finitely generated module over the group algebra kG of a p-group,
/// given by one action matrix per group element (built from the generator
/// actions along breadth-first generator words, then cross-checked against
/// the multiplication table).
struct KGModule {
    const PGroup* group = nullptr;
    std::size_t dim = 0;
    std::vector<FpMatrix> action;  // one dim x dim matrix per element index

    const FpMatrix& act(std::size_t element) const { return action[element]; }
};

namespace detail {

/// Breadth-first parent/generator tree over the group's generating set:
/// for each element a word ending (parent, generator) with element 0 the root.
inline std::vector<std::pair<std::size_t, std::size_t>> bfs_tree(const PGroup& g) {
    std::vector<std::pair<std::size_t, std::size_t>> tree(
        g.order, {g.order, g.order});
    std::vector<std::size_t> queue{0};
    std::vector<bool> seen(g.order, false);
    seen[0] = true;
    std::size_t head = 0;
    while (head < queue.size()) {
        std::size_t cur = queue[head++];
        for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
            std::size_t nxt = g.table[g.generators[gi]][cur];
            if (!seen[nxt]) {
                seen[nxt] = true;
                tree[nxt] = {cur, gi};
                queue.push_back(nxt);
            }
        }
    }
    for (bool s : seen)
        if (!s) throw std::logic_error("bfs_tree: generators do not generate");
    return tree;
}

}  // namespace detail

/// Assemble a module from generator actions; actions of the remaining
/// elements follow from the multiplication table, and the result is
/// verified against it (A(g)A(e) = A(ge) for every generator g, element e).
inline KGModule make_module(const PGroup& g, std::size_t dim,
                            const std::vector<FpMatrix>& gen_action) {
    if (gen_action.size() != g.generators.size())
        throw std::invalid_argument("make_module: one matrix per generator required");
    for (const auto& m : gen_action)
        if (m.rows != dim || m.cols != dim || m.p != g.p)
            throw std::invalid_argument("make_module: bad action matrix shape");
    KGModule mod;
    mod.group = &g;
    mod.dim = dim;
    mod.action.assign(g.order, FpMatrix());
    mod.action[0] = FpMatrix::identity(dim, g.p);
    auto tree = detail::bfs_tree(g);
    // fill in BFS order so parents are ready
    std::vector<std::size_t> order;
    {
        std::vector<bool> done(g.order, false);
        done[0] = true;
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t e = 1; e < g.order; ++e) {
                if (done[e] || !done[tree[e].first]) continue;
                mod.action[e] = mul(gen_action[tree[e].second],
                                    mod.action[tree[e].first]);
                done[e] = true;
                progress = true;
            }
        }
    }
    for (std::size_t e = 0; e < g.order; ++e)
        for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
            std::size_t ge = g.table[g.generators[gi]][e];
            if (!(mul(gen_action[gi], mod.action[e]) == mod.action[ge]))
                throw std::invalid_argument(
                    "make_module: action violates the multiplication table");
        }
    return mod;
}

inline KGModule trivial_module(const PGroup& g) {
    std::vector<FpMatrix> acts(g.generators.size(),
                               FpMatrix::identity(1, g.p));
    return make_module(g, 1, acts);
}

inline KGModule regular_module(const PGroup& g) {
    std::vector<FpMatrix> acts;
    for (std::size_t gen : g.generators) {
        FpMatrix m(g.order, g.order, g.p);
        for (std::size_t h = 0; h < g.order; ++h) m.at(g.table[gen][h], h) = 1;
        acts.push_back(m);
    }
    return make_module(g, g.order, acts);
}

/// Basis (rows) of rad M = sum over generators g of (g-1)M. For a p-group
/// algebra the radical is the augmentation ideal, generated by g-1 over any
/// generating set of G.
inline FpMatrix radical(const KGModule& m) {
    const PGroup& g = *m.group;
    PrimeField f(g.p);
    FpMatrix span(g.generators.size() * m.dim, m.dim, g.p);
    std::size_t row = 0;
    for (std::size_t gen : g.generators) {
        const FpMatrix& a = m.act(gen);
        for (std::size_t j = 0; j < m.dim; ++j) {
            for (std::size_t i = 0; i < m.dim; ++i)
                span.at(row, i) = f.sub(a.at(i, j), i == j ? 1u : 0u);
            ++row;
        }
    }
    RrefResult r = rref(span);
    FpMatrix basis(r.rank, m.dim, g.p);
    for (std::size_t i = 0; i < r.rank; ++i)
        for (std::size_t j = 0; j < m.dim; ++j)
            basis.at(i, j) = r.reduced.at(i, j);
    return basis;
}

/// Number of minimal generators dim M / rad M.
inline std::size_t minimal_generator_count(const KGModule& m) {
    return m.dim - radical(m).rows;
}

/// A module over a p-group algebra is free (= projective) iff the canonical
/// surjection (kG)^g -> M from a lift of a basis of M/rad M is an
/// isomorphism, which by dimension count happens iff dim M = g |G|.
inline bool is_free(const KGModule& m) {
    return m.dim == minimal_generator_count(m) * m.group->order;
}

inline FpMatrix kronecker(const FpMatrix& x, const FpMatrix& y) {
    PrimeField f(x.p);
    FpMatrix z(x.rows * y.rows, x.cols * y.cols, x.p);
    for (std::size_t i1 = 0; i1 < x.rows; ++i1)
        for (std::size_t j1 = 0; j1 < x.cols; ++j1) {
            std::uint32_t v = x.at(i1, j1);
            if (!v) continue;
            for (std::size_t i2 = 0; i2 < y.rows; ++i2)
                for (std::size_t j2 = 0; j2 < y.cols; ++j2)
                    z.at(i1 * y.rows + i2, j1 * y.cols + j2) =
                        f.mul(v, y.at(i2, j2));
        }
    return z;
}

/// Tensor product over k with the diagonal G-action.
inline KGModule tensor(const KGModule& a, const KGModule& b) {
    if (a.group != b.group)
        throw std::invalid_argument("tensor: modules over different groups");
    std::vector<FpMatrix> acts;
    for (std::size_t gen : a.group->generators)
        acts.push_back(kronecker(a.act(gen), b.act(gen)));
    return make_module(*a.group, a.dim * b.dim, acts);
}

/// The submodule spanned by the given row vectors (which must be closed
/// under the action), presented on that basis.
inline KGModule submodule_from_basis(const KGModule& m, const FpMatrix& basis) {
    RrefSolver coords(transpose(basis));
    std::vector<FpMatrix> acts;
    for (std::size_t gen : m.group->generators) {
        FpMatrix a(basis.rows, basis.rows, m.group->p);
        for (std::size_t j = 0; j < basis.rows; ++j) {
            FpVector row(basis.a.begin() + j * basis.cols,
                         basis.a.begin() + (j + 1) * basis.cols);
            FpVector image = mul_vec(m.act(gen), row);
            auto c = coords.solve(image);
            if (!c)
                throw std::invalid_argument(
                    "submodule_from_basis: basis not closed under the action");
            for (std::size_t i = 0; i < basis.rows; ++i) a.at(i, j) = (*c)[i];
        }
        acts.push_back(a);
    }
    return make_module(*m.group, basis.rows, acts);
}

}  // namespace cohomod
