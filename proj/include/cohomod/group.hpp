#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/fp.hpp"

namespace cohomod {

/// Finite p-group given by its full multiplication table over element
/// indices, element 0 the identity. Construction validates the group axioms
/// and that every element order is a power of p.
struct PGroup {
    std::uint32_t p = 2;
    std::size_t order = 1;
    std::vector<std::vector<std::size_t>> table;  // table[a][b] = a*b
    std::vector<std::size_t> inverse;
    std::vector<std::size_t> generators;  // indices generating the group

    std::size_t mul(std::size_t a, std::size_t b) const { return table[a][b]; }
    std::size_t inv(std::size_t a) const { return inverse[a]; }

    std::size_t element_order(std::size_t a) const {
        std::size_t x = a, n = 1;
        while (x != 0) {
            x = table[x][a];
            ++n;
        }
        return n;
    }

    std::size_t conj(std::size_t g, std::size_t a) const {
        return table[table[g][a]][inverse[g]];  // g a g^-1
    }
};

namespace detail {

inline void validate_group(const PGroup& g) {
    const std::size_t n = g.order;
    if (g.table.size() != n)
        throw std::invalid_argument("PGroup: table size mismatch");
    for (const auto& row : g.table) {
        if (row.size() != n)
            throw std::invalid_argument("PGroup: table row size mismatch");
        for (std::size_t v : row)
            if (v >= n) throw std::invalid_argument("PGroup: index out of range");
    }
    for (std::size_t a = 0; a < n; ++a)
        if (g.table[0][a] != a || g.table[a][0] != a)
            throw std::invalid_argument("PGroup: element 0 is not an identity");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (g.table[g.table[a][b]][c] != g.table[a][g.table[b][c]])
                    throw std::invalid_argument("PGroup: not associative");
    // inverses: each row is a permutation containing the identity
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<bool> seen(n, false);
        bool has_id = false;
        for (std::size_t b = 0; b < n; ++b) {
            if (seen[g.table[a][b]])
                throw std::invalid_argument("PGroup: row is not a permutation");
            seen[g.table[a][b]] = true;
            if (g.table[a][b] == 0) has_id = true;
        }
        if (!has_id) throw std::invalid_argument("PGroup: missing inverse");
    }
    std::size_t m = n;
    while (m % g.p == 0) m /= g.p;
    if (m != 1)
        throw std::invalid_argument("PGroup: order is not a power of p");
    for (std::size_t a = 0; a < n; ++a) {
        std::size_t o = g.element_order(a), q = o;
        while (q % g.p == 0) q /= g.p;
        if (q != 1)
            throw std::invalid_argument("PGroup: element order not a p-power");
    }
}

inline void fill_inverses(PGroup& g) {
    g.inverse.assign(g.order, 0);
    for (std::size_t a = 0; a < g.order; ++a)
        for (std::size_t b = 0; b < g.order; ++b)
            if (g.table[a][b] == 0) {
                g.inverse[a] = b;
                break;
            }
}

}  // namespace detail

/// Build a p-group from a multiplication table (identity must be index 0).
inline PGroup group_from_table(std::uint32_t p,
                               std::vector<std::vector<std::size_t>> table) {
    PGroup g;
    g.p = p;
    g.order = table.size();
    g.table = std::move(table);
    PrimeField check(p);  // validates primality
    (void)check;
    detail::fill_inverses(g);
    detail::validate_group(g);
    // greedy generating set: adjoin the least element outside the closure
    g.generators.clear();
    std::set<std::size_t> closed{0};
    auto close = [&g, &closed]() {
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::size_t> cur(closed.begin(), closed.end());
            for (std::size_t u : cur)
                for (std::size_t w : cur)
                    if (closed.insert(g.table[u][w]).second) grew = true;
        }
    };
    for (std::size_t a = 1; a < g.order && closed.size() < g.order; ++a) {
        if (closed.count(a)) continue;
        g.generators.push_back(a);
        closed.insert(a);
        close();
    }
    return g;
}

/// Build the group generated by permutations (1-based image arrays over a
/// common finite set). Elements are enumerated breadth-first over generator
/// words, so index 0 is the identity and the enumeration is deterministic.
inline PGroup build_group(std::uint32_t p,
                          const std::vector<std::vector<std::size_t>>& perm_gens,
                          std::size_t order_cap = 128) {
    if (perm_gens.empty())
        throw std::invalid_argument("build_group: no generators");
    const std::size_t deg = perm_gens[0].size();
    std::vector<std::vector<std::size_t>> gens0;  // 0-based
    for (const auto& im : perm_gens) {
        if (im.size() != deg)
            throw std::invalid_argument("build_group: permutation degree mismatch");
        std::vector<std::size_t> v(deg);
        std::vector<bool> seen(deg, false);
        for (std::size_t i = 0; i < deg; ++i) {
            if (im[i] < 1 || im[i] > deg || seen[im[i] - 1])
                throw std::invalid_argument("build_group: not a permutation");
            seen[im[i] - 1] = true;
            v[i] = im[i] - 1;
        }
        gens0.push_back(v);
    }
    std::vector<std::size_t> id(deg);
    for (std::size_t i = 0; i < deg; ++i) id[i] = i;

    auto compose = [deg](const std::vector<std::size_t>& f,
                         const std::vector<std::size_t>& g) {
        // (f*g)(x) = f(g(x))
        std::vector<std::size_t> h(deg);
        for (std::size_t i = 0; i < deg; ++i) h[i] = f[g[i]];
        return h;
    };

    std::vector<std::vector<std::size_t>> elems{id};
    std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
    std::size_t head = 0;
    while (head < elems.size()) {
        auto cur = elems[head];
        for (const auto& gen : gens0) {
            auto nxt = compose(cur, gen);
            if (!index.count(nxt)) {
                if (elems.size() >= order_cap)
                    throw std::runtime_error("build_group: order cap exceeded");
                index[nxt] = elems.size();
                elems.push_back(nxt);
            }
        }
        ++head;
    }
    const std::size_t n = elems.size();
    PGroup g;
    g.p = p;
    g.order = n;
    g.table.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            g.table[a][b] = index.at(compose(elems[a], elems[b]));
    detail::fill_inverses(g);
    PrimeField check(p);
    (void)check;
    detail::validate_group(g);
    for (const auto& gen : gens0) g.generators.push_back(index.at(gen));
    // drop duplicate/identity generators while keeping order
    std::vector<std::size_t> uniq;
    for (std::size_t v : g.generators)
        if (v != 0 && std::find(uniq.begin(), uniq.end(), v) == uniq.end())
            uniq.push_back(v);
    if (uniq.empty()) uniq.push_back(0);
    g.generators = uniq;
    return g;
}

/// Subgroup as a sorted element-index list into the parent.
struct SubgroupEmbedding {
    std::vector<std::size_t> elements;  // sorted, contains 0
    const PGroup* parent = nullptr;

    std::size_t order() const { return elements.size(); }
};

/// Conjugacy-class representatives of the maximal elementary abelian
/// p-subgroups, each with its rank.
struct ElabClassList {
    struct Entry {
        SubgroupEmbedding rep;
        std::size_t rank;
    };
    std::vector<Entry> classes;

    std::size_t p_rank() const {
        std::size_t r = 0;
        for (const auto& e : classes) r = std::max(r, e.rank);
        return r;
    }
};

namespace detail {

inline std::vector<std::size_t> span_closure(const PGroup& g,
                                             std::vector<std::size_t> gens) {
    std::set<std::size_t> s{0};
    for (std::size_t x : gens) s.insert(x);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::size_t> cur(s.begin(), s.end());
        for (std::size_t a : cur)
            for (std::size_t b : cur)
                if (!s.count(g.table[a][b])) {
                    s.insert(g.table[a][b]);
                    grew = true;
                }
    }
    return {s.begin(), s.end()};
}

inline bool is_elementary_abelian(const PGroup& g,
                                  const std::vector<std::size_t>& elems) {
    for (std::size_t a : elems) {
        if (a != 0 && g.element_order(a) != g.p) return false;
        for (std::size_t b : elems)
            if (g.table[a][b] != g.table[b][a]) return false;
    }
    return true;
}

inline std::size_t elab_rank(const PGroup& g, std::size_t order) {
    std::size_t r = 0;
    while (order > 1) {
        order /= g.p;
        ++r;
    }
    return r;
}

}  // namespace detail

/// Elements of the center.
inline std::vector<std::size_t> center_elements(const PGroup& g) {
    std::vector<std::size_t> z;
    for (std::size_t a = 0; a < g.order; ++a) {
        bool central = true;
        for (std::size_t b = 0; b < g.order && central; ++b)
            central = g.table[a][b] == g.table[b][a];
        if (central) z.push_back(a);
    }
    return z;
}

/// p-rank of the center: the rank of its largest elementary abelian
/// subgroup, i.e. log_p of the number of central elements of order dividing p.
inline std::size_t center_rank(const PGroup& g) {
    std::size_t count = 0;
    for (std::size_t a : center_elements(g)) {
        std::size_t x = a;  // a^p by repeated multiplication
        for (std::uint32_t i = 1; i < g.p; ++i) x = g.table[x][a];
        if (x == 0) ++count;
    }
    return detail::elab_rank(g, count);
}

/// Complete, irredundant list of the maximal elementary abelian p-subgroups
/// up to conjugacy. Every elementary abelian subgroup contains the
/// elementary abelian part of the center, so the search grows upward from
/// it; maximality and conjugacy are settled by exhaustive checks.
inline ElabClassList maximal_elementary_abelians(const PGroup& g) {
    // Omega_1 of the center
    std::vector<std::size_t> base_gens;
    for (std::size_t a : center_elements(g)) {
        if (a == 0) continue;
        std::size_t x = a;
        for (std::uint32_t i = 1; i < g.p; ++i) x = g.table[x][a];
        if (x == 0) base_gens.push_back(a);
    }
    std::vector<std::size_t> base = detail::span_closure(g, base_gens);

    std::vector<std::size_t> order_p;  // all elements of order exactly p
    for (std::size_t a = 1; a < g.order; ++a)
        if (g.element_order(a) == g.p) order_p.push_back(a);

    std::set<std::vector<std::size_t>> all;  // elementary abelians above base
    all.insert(base);
    std::vector<std::vector<std::size_t>> frontier{base};
    while (!frontier.empty()) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& e : frontier) {
            for (std::size_t y : order_p) {
                if (std::binary_search(e.begin(), e.end(), y)) continue;
                bool commutes = true;
                for (std::size_t x : e)
                    if (g.table[x][y] != g.table[y][x]) {
                        commutes = false;
                        break;
                    }
                if (!commutes) continue;
                auto bigger = e;
                bigger.push_back(y);
                auto closed = detail::span_closure(g, bigger);
                if (!detail::is_elementary_abelian(g, closed)) continue;
                if (all.insert(closed).second) next.push_back(closed);
            }
        }
        frontier = std::move(next);
    }

    // keep maximal ones
    std::vector<std::vector<std::size_t>> maximal;
    for (const auto& e : all) {
        bool is_max = true;
        for (const auto& f : all)
            if (f.size() > e.size() &&
                std::includes(f.begin(), f.end(), e.begin(), e.end())) {
                is_max = false;
                break;
            }
        if (is_max) maximal.push_back(e);
    }
    std::sort(maximal.begin(), maximal.end());

    // conjugacy classes, representative = lexicographically least member
    ElabClassList out;
    std::set<std::vector<std::size_t>> assigned;
    for (const auto& e : maximal) {
        if (assigned.count(e)) continue;
        std::vector<std::size_t> rep = e;
        for (std::size_t c = 0; c < g.order; ++c) {
            std::vector<std::size_t> im;
            im.reserve(e.size());
            for (std::size_t x : e) im.push_back(g.conj(c, x));
            std::sort(im.begin(), im.end());
            assigned.insert(im);
            if (im < rep) rep = im;
        }
        SubgroupEmbedding sub;
        sub.elements = rep;
        sub.parent = &g;
        out.classes.push_back({sub, detail::elab_rank(g, rep.size())});
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const auto& a, const auto& b) {
                  return a.rep.elements < b.rep.elements;
              });
    return out;
}

inline std::size_t p_rank(const PGroup& g) {
    return maximal_elementary_abelians(g).p_rank();
}

/// The subgroup as a group in its own right; element i of the result is
/// elements[i] of the parent.
inline PGroup subgroup_group(const SubgroupEmbedding& s) {
    const PGroup& g = *s.parent;
    std::map<std::size_t, std::size_t> idx;
    for (std::size_t i = 0; i < s.elements.size(); ++i) idx[s.elements[i]] = i;
    if (!idx.count(0) || idx.at(0) != 0)
        throw std::invalid_argument("subgroup_group: identity must be present");
    std::vector<std::vector<std::size_t>> table(
        s.elements.size(), std::vector<std::size_t>(s.elements.size()));
    for (std::size_t i = 0; i < s.elements.size(); ++i)
        for (std::size_t j = 0; j < s.elements.size(); ++j) {
            std::size_t prod = g.table[s.elements[i]][s.elements[j]];
            auto it = idx.find(prod);
            if (it == idx.end())
                throw std::invalid_argument("subgroup_group: not closed");
            table[i][j] = it->second;
        }
    return group_from_table(g.p, std::move(table));
}

}  // namespace cohomod
