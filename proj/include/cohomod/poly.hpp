#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/fp.hpp"

namespace cohomod {

/// Exponent vector over a fixed generator list.
using Monomial = std::vector<std::uint16_t>;

struct Term {
    std::uint32_t c = 0;
    Monomial m;
};

/// Polynomial in normal form: terms sorted by monomial (lex descending),
/// coefficients nonzero canonical residues, at odd p no squares of
/// odd-degree generators.
struct Poly {
    std::vector<Term> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Poly& o) const {
        if (terms.size() != o.terms.size()) return false;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i].c != o.terms[i].c || terms[i].m != o.terms[i].m)
                return false;
        return true;
    }
};

/// Ring context for polynomial arithmetic: the prime and generator degrees.
/// Generators of odd degree are exterior when p is odd (the sign rule
/// ab = (-1)^{|a||b|} ba forces their squares to vanish).
struct PolyRing {
    std::uint32_t p = 2;
    std::vector<int> degrees;

    std::size_t nvars() const { return degrees.size(); }
    bool exterior(std::size_t i) const {
        return p != 2 && degrees[i] % 2 != 0;
    }
    int monomial_degree(const Monomial& m) const {
        int d = 0;
        for (std::size_t i = 0; i < m.size(); ++i) d += degrees[i] * m[i];
        return d;
    }
};

inline bool monomial_lex_greater(const Monomial& a, const Monomial& b) {
    return a > b;  // lexicographic on exponent vectors
}

namespace detail {

inline void sort_combine(const PolyRing& ring, Poly& q) {
    PrimeField f(ring.p);
    std::sort(q.terms.begin(), q.terms.end(),
              [](const Term& x, const Term& y) { return x.m > y.m; });
    std::vector<Term> out;
    for (auto& t : q.terms) {
        std::uint32_t c = t.c % ring.p;
        if (!c) continue;
        if (!out.empty() && out.back().m == t.m)
            out.back().c = f.add(out.back().c, c);
        else
            out.push_back({c, t.m});
        if (!out.empty() && out.back().c == 0) out.pop_back();
    }
    q.terms = std::move(out);
}

}  // namespace detail

/// Normalize: reduce coefficients, drop exterior squares, sort, combine.
inline Poly normalize(const PolyRing& ring, Poly q) {
    std::vector<Term> keep;
    for (auto& t : q.terms) {
        if (t.m.size() != ring.nvars())
            throw std::invalid_argument("Poly: monomial width mismatch");
        bool dead = false;
        for (std::size_t i = 0; i < t.m.size(); ++i)
            if (t.m[i] > 1 && ring.exterior(i)) dead = true;
        if (!dead) keep.push_back(t);
    }
    q.terms = std::move(keep);
    detail::sort_combine(ring, q);
    return q;
}

inline Poly poly_zero(const PolyRing&) { return {}; }

inline Poly poly_one(const PolyRing& ring) {
    Poly q;
    q.terms.push_back({1, Monomial(ring.nvars(), 0)});
    return q;
}

inline Poly poly_var(const PolyRing& ring, std::size_t i, std::uint16_t e = 1) {
    Poly q;
    Monomial m(ring.nvars(), 0);
    m[i] = e;
    q.terms.push_back({1, m});
    return normalize(ring, q);
}

inline Poly poly_add(const PolyRing& ring, const Poly& a, const Poly& b) {
    Poly q;
    q.terms = a.terms;
    q.terms.insert(q.terms.end(), b.terms.begin(), b.terms.end());
    detail::sort_combine(ring, q);
    return q;
}

inline Poly poly_scale(const PolyRing& ring, std::uint32_t c, const Poly& a) {
    PrimeField f(ring.p);
    Poly q;
    for (const auto& t : a.terms) {
        std::uint32_t v = f.mul(c % ring.p, t.c);
        if (v) q.terms.push_back({v, t.m});
    }
    return q;
}

inline Poly poly_sub(const PolyRing& ring, const Poly& a, const Poly& b) {
    PrimeField f(ring.p);
    return poly_add(ring, a, poly_scale(ring, f.neg(1), b));
}

/// Product of two monomials with the Koszul sign from reordering the
/// odd-degree generators; absent when an exterior square appears.
inline std::optional<std::pair<Monomial, std::uint32_t>> monomial_mul(
    const PolyRing& ring, const Monomial& a, const Monomial& b) {
    Monomial m(ring.nvars());
    long swaps = 0;
    long odd_tail = 0;  // odd-degree generators of a with index > current
    // count inversions: each odd generator of b passes the odd generators
    // of a with larger index
    for (std::size_t i = ring.nvars(); i-- > 0;) {
        if (ring.exterior(i)) {
            swaps += static_cast<long>(b[i]) * odd_tail;
            odd_tail += a[i];
        }
    }
    for (std::size_t i = 0; i < ring.nvars(); ++i) {
        if (ring.exterior(i) && a[i] + b[i] > 1) return std::nullopt;
        m[i] = static_cast<std::uint16_t>(a[i] + b[i]);
    }
    std::uint32_t sign = (ring.p != 2 && (swaps % 2)) ? ring.p - 1 : 1;
    return std::make_pair(std::move(m), sign);
}

inline Poly poly_mul(const PolyRing& ring, const Poly& a, const Poly& b) {
    PrimeField f(ring.p);
    Poly q;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms) {
            auto mt = monomial_mul(ring, s.m, t.m);
            if (!mt) continue;
            q.terms.push_back({f.mul(f.mul(s.c, t.c), mt->second), mt->first});
        }
    detail::sort_combine(ring, q);
    return q;
}

inline Poly poly_pow(const PolyRing& ring, Poly a, std::uint64_t e) {
    Poly r = poly_one(ring);
    while (e) {
        if (e & 1) r = poly_mul(ring, r, a);
        e >>= 1;
        if (e) a = poly_mul(ring, a, a);
    }
    return r;
}

/// Substitute images[i] for generator i; the target ring must make every
/// image homogeneous of the right degree for graded use, but substitution
/// itself is plain composition.
inline Poly substitute(const PolyRing& src, const Poly& q, const PolyRing& dst,
                       const std::vector<Poly>& images) {
    if (images.size() != src.nvars())
        throw std::invalid_argument("substitute: one image per generator");
    Poly out = poly_zero(dst);
    for (const auto& t : q.terms) {
        Poly prod = poly_one(dst);
        for (std::size_t i = 0; i < src.nvars(); ++i)
            if (t.m[i]) prod = poly_mul(dst, prod, poly_pow(dst, images[i], t.m[i]));
        out = poly_add(dst, out, poly_scale(dst, t.c, prod));
    }
    return out;
}

inline bool is_homogeneous(const PolyRing& ring, const Poly& q, int* degree_out = nullptr) {
    if (q.terms.empty()) {
        if (degree_out) *degree_out = -1;
        return true;
    }
    int d = ring.monomial_degree(q.terms[0].m);
    for (const auto& t : q.terms)
        if (ring.monomial_degree(t.m) != d) return false;
    if (degree_out) *degree_out = d;
    return true;
}

inline int poly_degree(const PolyRing& ring, const Poly& q) {
    int d = -1;
    for (const auto& t : q.terms) d = std::max(d, ring.monomial_degree(t.m));
    return d;
}

/// Width-independent polynomial: terms list (generator index, exponent)
/// pairs, so it can be interpreted against any large-enough ring. This is
/// the wire form used for user-supplied elements.
struct SparsePoly {
    struct STerm {
        std::uint32_t c = 0;
        std::vector<std::pair<std::size_t, std::uint16_t>> exps;
    };
    std::vector<STerm> terms;

    std::size_t max_index() const {
        std::size_t m = 0;
        for (const auto& t : terms)
            for (const auto& [v, e] : t.exps)
                if (e) m = std::max(m, v + 1);
        return m == 0 ? 0 : m - 1;
    }

    Poly to_poly(const PolyRing& ring) const {
        Poly q;
        for (const auto& t : terms) {
            Monomial m(ring.nvars(), 0);
            for (const auto& [v, e] : t.exps) {
                if (v >= ring.nvars())
                    throw std::invalid_argument(
                        "SparsePoly: generator index out of range");
                m[v] = static_cast<std::uint16_t>(m[v] + e);
            }
            q.terms.push_back({t.c, m});
        }
        return normalize(ring, q);
    }
};

inline std::string monomial_to_string(const Monomial& m,
                                      const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

inline std::string poly_to_string(const Poly& q,
                                  const std::vector<std::string>& names) {
    if (q.terms.empty()) return "0";
    std::string s;
    for (const auto& t : q.terms) {
        if (!s.empty()) s += " + ";
        if (t.c != 1) s += std::to_string(t.c) + "*";
        s += monomial_to_string(t.m, names);
    }
    return s;
}

}  // namespace cohomod
