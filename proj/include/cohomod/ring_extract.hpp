#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/gring.hpp"
#include "cohomod/resolution.hpp"

namespace cohomod {

/// Degree-by-degree extraction of the generators-and-relations presentation
/// from a minimal resolution. At each degree the products of the known
/// generators are evaluated through chain-map lifts and compared with the
/// full cocycle space: the kernel of the evaluation supplies new relations,
/// a complement basis (in rref order) supplies new generators. Names are
/// x1, x2, ... in (degree, pivot) order, so the output is reproducible.
///
/// Invariant maintained at each advanced degree n: the presentation has
/// exactly rank(n) normal forms in degree n.
class ExtractionState {
public:
    struct GenInfo {
        std::string name;
        int degree = 1;
        Cocycle cocycle;
    };

    explicit ExtractionState(const MinimalResolution& res) : res_(&res) {
        pres_ = make_presentation(res.group().p, {}, {});
        Level l0;
        l0.mons.push_back(Monomial{});
        l0.index[Monomial{}] = 0;
        l0.M = FpMatrix(1, 1, pres_.p);
        l0.M.at(0, 0) = 1;
        levels_.push_back(std::move(l0));
    }
    // the resolution must outlive the extraction
    explicit ExtractionState(MinimalResolution&&) = delete;

    const MinimalResolution& resolution() const { return *res_; }
    const GradedPresentation& presentation() const { return pres_; }
    int degree() const { return static_cast<int>(levels_.size()) - 1; }
    const std::vector<GenInfo>& generators() const { return gens_; }

    TruncatedPresentation truncated() const {
        TruncatedPresentation t;
        t.base = pres_;
        t.N = degree();
        return t;
    }

    void advance(int to_degree) {
        if (static_cast<std::size_t>(to_degree) > res_->top_degree())
            throw std::invalid_argument("ExtractionState: resolution too short");
        while (degree() < to_degree) advance_one();
    }

    /// Cocycle vector of a homogeneous polynomial in the presentation.
    FpVector cocycle_of_poly(const Poly& q, int n) const {
        if (n > degree())
            throw std::invalid_argument("cocycle_of_poly: degree not extracted");
        const Level& lv = levels_[n];
        PrimeField f(pres_.p);
        FpVector out(res_->rank(n), 0);
        for (const auto& t : q.terms) {
            Monomial key = pad(t.m);
            auto it = lv.index.find(key);
            if (it == lv.index.end())
                throw std::invalid_argument(
                    "cocycle_of_poly: monomial is not in normal form");
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = f.add(out[i], f.mul(t.c, lv.M.at(i, it->second)));
        }
        return out;
    }

    /// The normal-form polynomial representing a cocycle vector (the
    /// correspondence is bijective by the faithfulness invariant).
    Poly poly_of_cocycle(const FpVector& v, int n) {
        if (n > degree())
            throw std::invalid_argument("poly_of_cocycle: degree not extracted");
        Level& lv = levels_[n];
        if (!lv.solver) lv.solver = std::make_shared<RrefSolver>(lv.M);
        auto c = lv.solver->solve(v);
        if (!c)
            throw std::logic_error("poly_of_cocycle: vector outside the image");
        Poly q;
        for (std::size_t j = 0; j < c->size(); ++j)
            if ((*c)[j]) q.terms.push_back({(*c)[j], lv.mons[j]});
        return normalize(pres_.ring(), q);
    }

private:
    struct Level {
        std::vector<Monomial> mons;  // normal-form monomials, full width
        std::map<Monomial, std::size_t> index;
        FpMatrix M;  // rank(n) x mons.size(), columns are cocycle vectors
        std::shared_ptr<RrefSolver> solver;
    };

    Monomial pad(const Monomial& m) const {
        Monomial out = m;
        out.resize(gens_.size(), 0);
        return out;
    }

    void advance_one() {
        const int n = degree() + 1;
        const std::size_t bn = res_->rank(n);
        PrimeField f(pres_.p);

        // normal-form monomials of degree n over the current presentation
        DegreeBasis db(pres_);
        std::vector<Monomial> mons = db.basis_monomials(n);

        // evaluate each monomial: split off the lowest generator and
        // compose its chain lift with the cocycle of the remainder
        FpMatrix A(bn, mons.size(), pres_.p);
        for (std::size_t c = 0; c < mons.size(); ++c) {
            std::size_t v = 0;
            while (v < mons[c].size() && mons[c][v] == 0) ++v;
            if (v == mons[c].size())
                throw std::logic_error("advance_one: empty monomial above degree 0");
            Monomial rest = mons[c];
            rest[v] -= 1;
            const int dv = gens_[v].degree;
            const int nrest = n - dv;
            const Level& lower = levels_[nrest];
            Monomial key = rest;  // already full width
            auto it = lower.index.find(key);
            if (it == lower.index.end())
                throw std::logic_error("advance_one: divisor not in normal form");
            FpVector crest(res_->rank(nrest), 0);
            for (std::size_t i = 0; i < crest.size(); ++i)
                crest[i] = lower.M.at(i, it->second);

            lifts_[v].ensure_level(nrest);
            const FpMatrix& lift = lifts_[v].level(nrest);
            FpVector wrest = cocycle_functional({static_cast<std::size_t>(nrest), crest},
                                                res_->group());
            const std::size_t m = res_->group().order;
            for (std::size_t i = 0; i < bn; ++i) {
                std::uint64_t acc = 0;
                for (std::size_t t = 0; t < lift.rows; ++t)
                    acc += static_cast<std::uint64_t>(wrest[t]) *
                           lift.at(t, i * m + 0);
                A.at(i, c) = static_cast<std::uint32_t>(acc % pres_.p);
            }
        }

        // kernel -> new relations
        FpMatrix ker = kernel_basis(A);
        std::vector<Poly> new_rels;
        for (std::size_t kr = 0; kr < ker.rows; ++kr) {
            Poly rel;
            for (std::size_t c = 0; c < mons.size(); ++c)
                if (ker.at(kr, c)) rel.terms.push_back({ker.at(kr, c), mons[c]});
            new_rels.push_back(normalize(pres_.ring(), rel));
        }

        // complement of the column space -> new generators
        RrefResult colspace = rref(transpose(A));
        std::vector<bool> covered(bn, false);
        for (std::size_t piv : colspace.pivots) covered[piv] = true;
        std::vector<std::size_t> new_gen_rows;
        for (std::size_t t = 0; t < bn; ++t)
            if (!covered[t]) new_gen_rows.push_back(t);

        std::vector<RingGenerator> gens;
        for (const auto& g : gens_) gens.push_back({g.name, g.degree});
        for (std::size_t t : new_gen_rows) {
            GenInfo info;
            info.name = "x" + std::to_string(gens_.size() + 1);
            info.degree = n;
            info.cocycle.degree = n;
            info.cocycle.v.assign(bn, 0);
            info.cocycle.v[t] = 1;
            gens.push_back({info.name, info.degree});
            gens_.push_back(info);
            lifts_.emplace_back(gens_.back().cocycle, *res_);
        }

        // widen existing relation/monomial data and rebuild the presentation
        std::vector<Poly> rels = pres_.relations;
        for (auto& r : rels)
            for (auto& t : r.terms) t.m.resize(gens.size(), 0);
        for (auto& r : new_rels)
            for (auto& t : r.terms) t.m.resize(gens.size(), 0);
        rels.insert(rels.end(), new_rels.begin(), new_rels.end());
        pres_ = make_presentation(pres_.p, gens, rels);
        for (auto& lv : levels_) {
            std::vector<Monomial> widened;
            std::map<Monomial, std::size_t> index;
            for (std::size_t c = 0; c < lv.mons.size(); ++c) {
                Monomial m = lv.mons[c];
                m.resize(gens.size(), 0);
                index[m] = c;
                widened.push_back(std::move(m));
            }
            lv.mons = std::move(widened);
            lv.index = std::move(index);
        }

        // rebuild the degree-n level over the new presentation
        DegreeBasis db2(pres_);
        std::vector<Monomial> final_mons = db2.basis_monomials(n);
        if (final_mons.size() != bn)
            throw std::logic_error(
                "ExtractionState: presentation is not faithful in degree " +
                std::to_string(n));
        Level lv;
        lv.M = FpMatrix(bn, final_mons.size(), pres_.p);
        for (std::size_t c = 0; c < final_mons.size(); ++c) {
            FpVector vec;
            // new generator monomials carry their unit cocycles; everything
            // else was evaluated above
            bool found = false;
            for (std::size_t t = 0; t < new_gen_rows.size(); ++t) {
                Monomial gm(gens.size(), 0);
                gm[gens.size() - new_gen_rows.size() + t] = 1;
                if (final_mons[c] == gm) {
                    vec.assign(bn, 0);
                    vec[new_gen_rows[t]] = 1;
                    found = true;
                    break;
                }
            }
            if (!found) {
                Monomial old = final_mons[c];
                old.resize(mons.empty() ? final_mons[c].size() : mons[0].size());
                std::size_t pos = 0;
                bool located = false;
                for (std::size_t cc = 0; cc < mons.size(); ++cc)
                    if (mons[cc] == old) {
                        pos = cc;
                        located = true;
                        break;
                    }
                if (!located)
                    throw std::logic_error(
                        "ExtractionState: surviving monomial was not evaluated");
                vec.assign(bn, 0);
                for (std::size_t i = 0; i < bn; ++i) vec[i] = A.at(i, pos);
            }
            lv.index[final_mons[c]] = c;
            for (std::size_t i = 0; i < bn; ++i) lv.M.at(i, c) = vec[i];
            lv.mons.push_back(final_mons[c]);
        }
        levels_.push_back(std::move(lv));
    }

    const MinimalResolution* res_;
    GradedPresentation pres_;
    std::vector<GenInfo> gens_;
    std::vector<CocycleLift> lifts_;
    std::vector<Level> levels_;
};

}  // namespace cohomod
