#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/extint.hpp"
#include "cohomod/matrix.hpp"
#include "cohomod/poly.hpp"

namespace cohomod {

struct RingGenerator {
    std::string name;
    int degree = 1;
};

/// Finitely presented graded-commutative F_p-algebra: generators with
/// positive degrees and homogeneous relations. H^0 = k and the maximal
/// ideal is the positive-degree part.
struct GradedPresentation {
    std::uint32_t p = 2;
    std::vector<RingGenerator> gens;
    std::vector<Poly> relations;

    PolyRing ring() const {
        PolyRing r;
        r.p = p;
        for (const auto& g : gens) r.degrees.push_back(g.degree);
        return r;
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& g : gens) out.push_back(g.name);
        return out;
    }
    int max_gen_degree() const {
        int d = 0;
        for (const auto& g : gens) d = std::max(d, g.degree);
        return d;
    }
};

inline GradedPresentation make_presentation(std::uint32_t p,
                                            std::vector<RingGenerator> gens,
                                            std::vector<Poly> relations) {
    PrimeField check(p);
    (void)check;
    GradedPresentation pres;
    pres.p = p;
    pres.gens = std::move(gens);
    std::set<std::string> seen;
    for (const auto& g : pres.gens) {
        if (g.degree < 1)
            throw std::invalid_argument("make_presentation: generator degree must be >= 1");
        if (g.name.empty() || !seen.insert(g.name).second)
            throw std::invalid_argument("make_presentation: generator names must be distinct");
    }
    PolyRing ring = pres.ring();
    for (auto& r : relations) {
        Poly q = normalize(ring, std::move(r));
        if (q.is_zero()) continue;  // e.g. odd-degree squares at odd p
        int d = 0;
        if (!is_homogeneous(ring, q, &d) || d < 1)
            throw std::invalid_argument(
                "make_presentation: relations must be homogeneous of positive degree");
        pres.relations.push_back(std::move(q));
    }
    return pres;
}

/// The presentation with extra homogeneous elements imposed as relations.
inline GradedPresentation quotient_presentation(const GradedPresentation& pres,
                                                const std::vector<Poly>& extra) {
    std::vector<Poly> rels = pres.relations;
    rels.insert(rels.end(), extra.begin(), extra.end());
    return make_presentation(pres.p, pres.gens, std::move(rels));
}

/// A generators-and-relations ring together with its truncation degree:
/// the ring presented by everything found in degrees <= N.
struct TruncatedPresentation {
    GradedPresentation base;
    int N = 0;
};

/// Degreewise normal-form machinery. For each degree the span of the
/// relation multiples is row-reduced over the full monomial list; the
/// non-pivot monomials form the normal-form basis and the reduction rows
/// rewrite arbitrary elements. Levels are built on demand and are stable
/// under recomputation.
class DegreeBasis {
public:
    explicit DegreeBasis(GradedPresentation pres)
        : pres_(std::move(pres)), ring_(pres_.ring()) {}

    const GradedPresentation& presentation() const { return pres_; }
    const PolyRing& ring() const { return ring_; }

    void ensure(int degree) {
        while (static_cast<int>(levels_.size()) <= degree) build_level();
    }

    std::size_t dim(int degree) {
        ensure(degree);
        return levels_[degree].basis_cols.size();
    }

    /// Normal-form monomials of the given degree, in column order.
    std::vector<Monomial> basis_monomials(int degree) {
        ensure(degree);
        std::vector<Monomial> out;
        for (std::size_t c : levels_[degree].basis_cols)
            out.push_back(levels_[degree].monomials[c]);
        return out;
    }

    /// Coordinates of a homogeneous polynomial over the normal-form basis
    /// of its degree.
    FpVector reduce(const Poly& q, int degree) {
        ensure(degree);
        const Level& lv = levels_[degree];
        FpVector full(lv.monomials.size(), 0);
        PrimeField f(ring_.p);
        for (const auto& t : q.terms) {
            if (ring_.monomial_degree(t.m) != degree)
                throw std::invalid_argument("DegreeBasis::reduce: wrong degree");
            full[lv.index.at(t.m)] = f.add(full[lv.index.at(t.m)], t.c);
        }
        return reduce_coords(full, degree);
    }

    /// Reduce a coefficient vector over the full monomial list of a degree.
    FpVector reduce_coords(FpVector full, int degree) {
        ensure(degree);
        const Level& lv = levels_[degree];
        PrimeField f(ring_.p);
        for (std::size_t k = 0; k < lv.pivots.size(); ++k) {
            std::uint32_t c = full[lv.pivots[k]];
            if (!c) continue;
            for (std::size_t j = 0; j < full.size(); ++j)
                full[j] = f.sub(full[j], f.mul(c, lv.rows.at(k, j)));
        }
        FpVector out(lv.basis_cols.size(), 0);
        for (std::size_t i = 0; i < lv.basis_cols.size(); ++i)
            out[i] = full[lv.basis_cols[i]];
        return out;
    }

    /// The polynomial with the given normal-form coordinates.
    Poly to_poly(const FpVector& coords, int degree) {
        ensure(degree);
        const Level& lv = levels_[degree];
        Poly q;
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i]) q.terms.push_back({coords[i], lv.monomials[lv.basis_cols[i]]});
        return normalize(ring_, q);
    }

    /// Matrix of multiplication by a homogeneous element from degree n to
    /// degree n + |elem| in normal-form bases (columns indexed by the
    /// degree-n basis).
    FpMatrix mult_matrix(const Poly& elem, int n) {
        int d = 0;
        if (!is_homogeneous(ring_, elem, &d) || elem.is_zero())
            throw std::invalid_argument("mult_matrix: element must be homogeneous and nonzero");
        ensure(n + d);
        FpMatrix m(dim(n + d), dim(n), ring_.p);
        auto mons = basis_monomials(n);
        for (std::size_t j = 0; j < mons.size(); ++j) {
            Poly mon;
            mon.terms.push_back({1, mons[j]});
            FpVector col = reduce(poly_mul(ring_, elem, mon), n + d);
            for (std::size_t i = 0; i < col.size(); ++i) m.at(i, j) = col[i];
        }
        return m;
    }

    /// All monomials of a degree (normal forms and reducible ones alike).
    const std::vector<Monomial>& all_monomials(int degree) {
        ensure(degree);
        return levels_[degree].monomials;
    }

private:
    struct Level {
        std::vector<Monomial> monomials;          // sorted lex descending
        std::map<Monomial, std::size_t> index;
        FpMatrix rows;                            // rref of the relation span
        std::vector<std::size_t> pivots;
        std::vector<std::size_t> basis_cols;      // non-pivot columns
    };

    void enumerate(int degree, std::size_t var, Monomial& cur,
                   std::vector<Monomial>& out) const {
        if (var == ring_.nvars()) {
            if (degree == 0) out.push_back(cur);
            return;
        }
        int step = ring_.degrees[var];
        int cap = degree / step;
        if (ring_.exterior(var)) cap = std::min(cap, 1);
        for (int e = 0; e <= cap; ++e) {
            cur[var] = static_cast<std::uint16_t>(e);
            enumerate(degree - e * step, var + 1, cur, out);
        }
        cur[var] = 0;
    }

    void build_level() {
        const int n = static_cast<int>(levels_.size());
        if (n > 512)
            throw std::runtime_error("DegreeBasis: degree cap exceeded");
        Level lv;
        Monomial cur(ring_.nvars(), 0);
        enumerate(n, 0, cur, lv.monomials);
        if (lv.monomials.size() > 2000000)
            throw std::runtime_error("DegreeBasis: monomial cap exceeded");
        std::sort(lv.monomials.begin(), lv.monomials.end(), monomial_lex_greater);
        for (std::size_t i = 0; i < lv.monomials.size(); ++i)
            lv.index[lv.monomials[i]] = i;

        std::vector<FpVector> rows;
        PrimeField f(ring_.p);
        for (const auto& rel : pres_.relations) {
            int dr = ring_.monomial_degree(rel.terms[0].m);
            if (dr > n) continue;
            std::vector<Monomial> shift;
            Monomial c2(ring_.nvars(), 0);
            enumerate(n - dr, 0, c2, shift);
            for (const auto& mu : shift) {
                Poly mon;
                mon.terms.push_back({1, mu});
                Poly prod = poly_mul(ring_, mon, rel);
                if (prod.is_zero()) continue;
                FpVector row(lv.monomials.size(), 0);
                for (const auto& t : prod.terms)
                    row[lv.index.at(t.m)] = f.add(row[lv.index.at(t.m)], t.c);
                rows.push_back(std::move(row));
            }
        }
        FpMatrix span(rows.size(), lv.monomials.size(), ring_.p);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                span.at(i, j) = rows[i][j];
        RrefResult rr = rref(span);
        lv.pivots = rr.pivots;
        lv.rows = FpMatrix(rr.rank, lv.monomials.size(), ring_.p);
        for (std::size_t i = 0; i < rr.rank; ++i)
            for (std::size_t j = 0; j < lv.monomials.size(); ++j)
                lv.rows.at(i, j) = rr.reduced.at(i, j);
        std::vector<bool> is_pivot(lv.monomials.size(), false);
        for (std::size_t c : lv.pivots) is_pivot[c] = true;
        for (std::size_t c = 0; c < lv.monomials.size(); ++c)
            if (!is_pivot[c]) lv.basis_cols.push_back(c);
        levels_.push_back(std::move(lv));
    }

    GradedPresentation pres_;
    PolyRing ring_;
    std::vector<Level> levels_;
};

/// Degreewise dimensions of the quotient algebra.
inline std::vector<std::size_t> hilbert(const GradedPresentation& pres, int through) {
    DegreeBasis db(pres);
    std::vector<std::size_t> out;
    for (int n = 0; n <= through; ++n) out.push_back(db.dim(n));
    return out;
}

/// Outcome of the finite-length scan of a quotient ring. The certificate
/// rests on positive-degree generation: once every degree in a window of
/// length max-generator-degree above the last nonzero degree vanishes,
/// every higher degree is a sum of generator multiples of vanished ones.
struct FiniteLengthCert {
    bool certified = false;
    int top = -1;       // last nonzero degree seen
    int scanned = -1;   // degrees examined
};

inline FiniteLengthCert certify_finite_length(DegreeBasis& db, int max_bound) {
    const int gmax = db.presentation().max_gen_degree();
    FiniteLengthCert cert;
    int last_nonzero = -1;
    for (int n = 0; n <= max_bound; ++n) {
        if (db.dim(n) > 0) last_nonzero = n;
        cert.scanned = n;
        if (last_nonzero >= 0 && n >= last_nonzero + gmax) {
            cert.certified = true;
            cert.top = last_nonzero;
            return cert;
        }
    }
    cert.top = last_nonzero;
    return cert;
}

/// Homogeneous parameter candidates over a presentation.
struct ParameterSequence {
    std::vector<Poly> elements;
    std::vector<int> degrees;

    std::size_t size() const { return elements.size(); }
    long degree_sum() const {
        long s = 0;
        for (int d : degrees) s += d;
        return s;
    }
    long degree_sum_minus_one() const {  // sum of (n_j - 1)
        return degree_sum() - static_cast<long>(degrees.size());
    }
};

inline ParameterSequence make_parameters(const GradedPresentation& pres,
                                         std::vector<Poly> elems) {
    PolyRing ring = pres.ring();
    ParameterSequence ps;
    for (auto& e : elems) {
        Poly q = normalize(ring, std::move(e));
        int d = 0;
        if (q.is_zero() || !is_homogeneous(ring, q, &d) || d < 1)
            throw std::invalid_argument(
                "make_parameters: parameters must be homogeneous of positive degree");
        if (pres.p != 2 && d % 2 != 0)
            throw std::invalid_argument(
                "make_parameters: at odd p parameters must have even degree");
        ps.elements.push_back(std::move(q));
        ps.degrees.push_back(d);
    }
    return ps;
}

/// A graded module over R = k[zeta_1..zeta_r] presented degreewise: the
/// dimension of every graded piece within the window plus the matrices of
/// multiplication by each parameter.
struct DegreewiseModule {
    std::uint32_t p = 2;
    std::vector<int> param_degrees;
    std::vector<std::size_t> dims;                // degrees 0..window
    std::vector<std::vector<FpMatrix>> mult;      // mult[j][n] : n -> n + n_j

    int window() const { return static_cast<int>(dims.size()) - 1; }
};

inline DegreewiseModule ring_as_module(DegreeBasis& db, const ParameterSequence& params,
                                       int window) {
    DegreewiseModule m;
    m.p = db.ring().p;
    m.param_degrees = params.degrees;
    for (int n = 0; n <= window; ++n) m.dims.push_back(db.dim(n));
    m.mult.resize(params.size());
    for (std::size_t j = 0; j < params.size(); ++j) {
        m.mult[j].resize(window + 1);
        for (int n = 0; n + params.degrees[j] <= window; ++n)
            m.mult[j][n] = db.mult_matrix(params.elements[j], n);
    }
    return m;
}

/// Minimal generators of a degreewise module over R: in each degree the
/// complement (in rref order) of the span of parameter multiples of lower
/// degrees. Generator lifts are unit vectors of the ambient graded piece.
struct ModuleGenerators {
    std::vector<std::pair<int, FpVector>> gens;  // (degree, vector in M^degree)

    std::vector<int> degrees() const {
        std::vector<int> out;
        for (const auto& g : gens) out.push_back(g.first);
        return out;
    }
};

inline ModuleGenerators minimal_generators(const DegreewiseModule& m) {
    ModuleGenerators out;
    for (int n = 0; n <= m.window(); ++n) {
        if (m.dims[n] == 0) continue;
        std::vector<FpVector> span;
        for (std::size_t j = 0; j < m.param_degrees.size(); ++j) {
            int src = n - m.param_degrees[j];
            if (src < 0 || m.dims[src] == 0) continue;
            const FpMatrix& mm = m.mult[j][src];
            for (std::size_t b = 0; b < m.dims[src]; ++b) {
                FpVector col(mm.rows);
                for (std::size_t i = 0; i < mm.rows; ++i) col[i] = mm.at(i, b);
                span.push_back(std::move(col));
            }
        }
        FpMatrix sp(span.size(), m.dims[n], m.p);
        for (std::size_t i = 0; i < span.size(); ++i)
            for (std::size_t j = 0; j < span[i].size(); ++j)
                sp.at(i, j) = span[i][j];
        RrefResult rr = rref(sp);
        std::vector<bool> in_span(m.dims[n], false);
        for (std::size_t c : rr.pivots) in_span[c] = true;
        for (std::size_t c = 0; c < m.dims[n]; ++c)
            if (!in_span[c]) {
                FpVector unit(m.dims[n], 0);
                unit[c] = 1;
                out.gens.push_back({n, std::move(unit)});
            }
    }
    return out;
}

namespace detail {

inline void enumerate_exponents(const std::vector<int>& degs, int degree,
                                std::size_t var, Monomial& cur,
                                std::vector<Monomial>& out) {
    if (var == degs.size()) {
        if (degree == 0) out.push_back(cur);
        return;
    }
    for (int e = 0; e * degs[var] <= degree; ++e) {
        cur[var] = static_cast<std::uint16_t>(e);
        enumerate_exponents(degs, degree - e * degs[var], var + 1, cur, out);
    }
    cur[var] = 0;
}

inline std::vector<Monomial> r_monomials(const std::vector<int>& degs, int degree) {
    std::vector<Monomial> out;
    Monomial cur(degs.size(), 0);
    enumerate_exponents(degs, degree, 0, cur, out);
    std::sort(out.begin(), out.end(), monomial_lex_greater);
    return out;
}

}  // namespace detail

/// One homological step: the free cover F of M on the given generators,
/// the kernel of F -> M as a new degreewise module, and the kernel basis
/// in F-coordinates for syzygy reporting.
struct SyzygyStep {
    // F-coordinates per degree: (generator index, R-monomial)
    struct Coord {
        std::size_t gen;
        Monomial mu;
    };
    std::vector<std::vector<Coord>> coords;  // 0..window
    DegreewiseModule kernel;
    std::vector<FpMatrix> kernel_in_f;               // basis rows over F-coords
};

inline SyzygyStep syzygy_step(const DegreewiseModule& m, const ModuleGenerators& gens) {
    const int W = m.window();
    SyzygyStep st;
    st.coords.resize(W + 1);
    std::vector<std::map<std::pair<std::size_t, Monomial>, std::size_t>> index(W + 1);
    for (int n = 0; n <= W; ++n) {
        for (std::size_t a = 0; a < gens.gens.size(); ++a) {
            int d = n - gens.gens[a].first;
            if (d < 0) continue;
            for (auto& mu : detail::r_monomials(m.param_degrees, d)) {
                index[n][{a, mu}] = st.coords[n].size();
                st.coords[n].push_back({a, mu});
            }
        }
    }
    // values of the cover map on coordinates, degree by degree
    std::vector<std::vector<FpVector>> value(W + 1);
    for (int n = 0; n <= W; ++n) {
        value[n].resize(st.coords[n].size());
        for (std::size_t c = 0; c < st.coords[n].size(); ++c) {
            const auto& co = st.coords[n][c];
            bool constant = true;
            std::size_t j0 = 0;
            for (std::size_t j = 0; j < co.mu.size(); ++j)
                if (co.mu[j]) {
                    constant = false;
                    j0 = j;
                    break;
                }
            if (constant) {
                value[n][c] = gens.gens[co.gen].second;
            } else {
                Monomial prev = co.mu;
                prev[j0] -= 1;
                int src = n - m.param_degrees[j0];
                std::size_t pc = index[src].at({co.gen, prev});
                value[n][c] = mul_vec(m.mult[j0][src], value[src][pc]);
            }
        }
    }
    // kernel of the cover map per degree
    st.kernel.p = m.p;
    st.kernel.param_degrees = m.param_degrees;
    st.kernel.dims.assign(W + 1, 0);
    st.kernel.mult.assign(m.param_degrees.size(), std::vector<FpMatrix>(W + 1));
    std::vector<KernelInfo> kinfo(W + 1);
    st.kernel_in_f.resize(W + 1);
    for (int n = 0; n <= W; ++n) {
        FpMatrix pi(m.dims[n], st.coords[n].size(), m.p);
        for (std::size_t c = 0; c < st.coords[n].size(); ++c)
            for (std::size_t i = 0; i < m.dims[n]; ++i)
                pi.at(i, c) = value[n][c][i];
        kinfo[n] = kernel_with_info(pi);
        st.kernel.dims[n] = kinfo[n].basis.rows;
        st.kernel_in_f[n] = kinfo[n].basis;
    }
    // multiplication by each parameter: shift coordinates, read off in the
    // canonical kernel basis of the target degree
    for (std::size_t j = 0; j < m.param_degrees.size(); ++j) {
        for (int n = 0; n + m.param_degrees[j] <= W; ++n) {
            int tgt = n + m.param_degrees[j];
            FpMatrix mm(st.kernel.dims[tgt], st.kernel.dims[n], m.p);
            for (std::size_t b = 0; b < st.kernel.dims[n]; ++b) {
                FpVector shifted(st.coords[tgt].size(), 0);
                PrimeField f(m.p);
                for (std::size_t c = 0; c < st.coords[n].size(); ++c) {
                    std::uint32_t v = kinfo[n].basis.at(b, c);
                    if (!v) continue;
                    Monomial mu = st.coords[n][c].mu;
                    mu[j] += 1;
                    std::size_t tc = index[tgt].at({st.coords[n][c].gen, mu});
                    shifted[tc] = f.add(shifted[tc], v);
                }
                for (std::size_t i = 0; i < st.kernel.dims[tgt]; ++i)
                    mm.at(i, b) = shifted[kinfo[tgt].free_cols[i]];
            }
            st.kernel.mult[j][tgt - m.param_degrees[j]] = std::move(mm);
        }
    }
    return st;
}

/// Largest generator degrees per homological stage of the minimal
/// R-resolution, -inf for vanishing stages.
struct BettiTable {
    std::vector<ExtInt> beta;  // index 0..r
    bool certified = false;
};

/// H (or a quotient) as a module over R = k[params]: minimal generators,
/// syzygies through homological degree r, and the Betti data, computed
/// degreewise through the window. The alternating Hilbert identity is
/// checked through the window; `confined` reports whether all generator
/// activity of stage i stayed within the caller's stage bounds.
struct RModulePresentation {
    ParameterSequence params;
    std::vector<std::vector<int>> generator_degrees;  // per stage 0..r
    std::vector<std::vector<std::vector<Poly>>> syzygy_matrices;  // stage >= 1, entries over R
    std::vector<ExtInt> betti;
    int window = 0;
    bool hilbert_identity_ok = false;
    bool tail_clear = false;     // stage r+1 kernel vanished through the window
    bool certified = false;      // set by the certification driver
    std::string mode_note;
};

inline RModulePresentation r_module_structure_mechanical(
    DegreeBasis& db, const ParameterSequence& params, int window) {
    const std::size_t r = params.size();
    RModulePresentation out;
    out.params = params;
    out.window = window;

    DegreewiseModule m = ring_as_module(db, params, window);
    std::vector<std::size_t> ring_dims = m.dims;

    DegreewiseModule cur = m;
    std::vector<ModuleGenerators> stage_gens;
    std::vector<SyzygyStep> steps;
    for (std::size_t i = 0; i <= r; ++i) {
        ModuleGenerators g = minimal_generators(cur);
        stage_gens.push_back(g);
        out.generator_degrees.push_back(g.degrees());
        ExtInt b = ExtInt::neg_inf();
        for (int d : g.degrees()) b = ext_max(b, ExtInt::of(d));
        out.betti.push_back(b);
        steps.push_back(syzygy_step(cur, g));
        cur = steps.back().kernel;
    }
    // after stage r the kernel must vanish (finite global dimension)
    out.tail_clear = true;
    for (std::size_t n = 0; n < cur.dims.size(); ++n)
        if (cur.dims[n] != 0) out.tail_clear = false;

    // syzygy matrices over R: stage i generators are kernel vectors of the
    // cover at stage i-1; translate their F-coordinates into R-polynomials
    for (std::size_t i = 1; i <= r; ++i) {
        PolyRing rring;
        rring.p = m.p;
        rring.degrees = params.degrees;
        const SyzygyStep& prev = steps[i - 1];
        const ModuleGenerators& gi = stage_gens[i];
        const ModuleGenerators& gprev = stage_gens[i - 1];
        std::vector<std::vector<Poly>> mat(
            gprev.gens.size(), std::vector<Poly>(gi.gens.size(), Poly{}));
        for (std::size_t col = 0; col < gi.gens.size(); ++col) {
            int n = gi.gens[col].first;
            const FpVector& kv = gi.gens[col].second;  // unit in kernel coords
            // expand to F-coordinates of the previous step
            FpVector fvec(prev.coords[n].size(), 0);
            PrimeField f(m.p);
            for (std::size_t b = 0; b < kv.size(); ++b) {
                if (!kv[b]) continue;
                for (std::size_t c = 0; c < fvec.size(); ++c)
                    fvec[c] = f.add(fvec[c],
                                    f.mul(kv[b], prev.kernel_in_f[n].at(b, c)));
            }
            for (std::size_t c = 0; c < fvec.size(); ++c) {
                if (!fvec[c]) continue;
                const auto& co = prev.coords[n][c];
                mat[co.gen][col].terms.push_back({fvec[c], co.mu});
            }
            for (auto& row : mat) row[col] = normalize(rring, row[col]);
        }
        out.syzygy_matrices.push_back(std::move(mat));
    }

    // alternating Hilbert identity through the window
    out.hilbert_identity_ok = true;
    for (int n = 0; n <= window; ++n) {
        long lhs = 0;
        int sign = 1;
        for (std::size_t i = 0; i <= r; ++i) {
            long hs = 0;
            for (const auto& gdeg : stage_gens[i].gens) {
                int d = n - gdeg.first;
                if (d >= 0)
                    hs += static_cast<long>(
                        detail::r_monomials(params.degrees, d).size());
            }
            lhs += sign * hs;
            sign = -sign;
        }
        if (lhs != static_cast<long>(ring_dims[n])) out.hilbert_identity_ok = false;
    }
    return out;
}

inline BettiTable betti_numbers(const RModulePresentation& rmod) {
    if (!rmod.certified)
        throw std::invalid_argument("betti_numbers: input is not certified complete");
    BettiTable t;
    t.beta = rmod.betti;
    t.certified = true;
    return t;
}

}  // namespace cohomod
