#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/dickson.hpp"
#include "cohomod/extint.hpp"
#include "cohomod/group.hpp"
#include "cohomod/regseq.hpp"
#include "cohomod/ring_extract.hpp"

namespace cohomod {

/// Outcome of the completion certificate on a truncated presentation.
/// complete means every hypothesis was verified with certified inputs and
/// the degree inequality holds; otherwise reasons lists what failed.
struct CompletionVerdict {
    bool complete = false;
    int N = 0;
    ExtInt alpha;  // max over i <= r-2 of (a-invariant bound + i)
    std::size_t r = 0;
    std::vector<int> param_degrees;
    long bound = 0;  // max(alpha, 0) + sum (n_j - 1)
    bool strict = true;
    std::vector<std::string> reasons;
    std::optional<TypeMeasurement> measurement;
};

/// Optimistic target degree 1 + sum (n_j - 1): where the computation lands
/// when the bound's correction term vanishes.
inline long projected_degree(const std::vector<int>& degrees) {
    long s = 1;
    for (int n : degrees) s += n - 1;
    return s;
}

/// Thrown when filter-regularity of the parameters cannot be certified
/// within the certification bound (the caller should extend and retry).
struct CertificationUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The completion certificate: parameters of degree >= 2 in a rank >= 2
/// truncated ring, certified filter-regular there, whose restrictions cut
/// out finite-length quotients on every maximal elementary abelian class;
/// then completeness follows from N > max(alpha, 0) + sum (n_j - 1), with
/// > relaxed to >= when the center has rank at least two.
inline CompletionVerdict completion_test(
    const TruncatedPresentation& tau, int N, const ParameterSequence& params,
    const std::vector<std::vector<Poly>>& param_images_per_class,
    const std::vector<std::size_t>& class_ranks, std::size_t center_rank_hint,
    int cert_bound = 64, std::optional<bool> force_strict = std::nullopt) {
    const std::size_t r = params.size();
    if (r <= 1)
        throw std::invalid_argument(
            "completion_test: rank must exceed 1 (rank-one groups complete "
            "via periodicity)");
    for (int n : params.degrees)
        if (n < 2)
            throw std::invalid_argument(
                "completion_test: parameter degrees must be at least 2");
    if (param_images_per_class.size() != class_ranks.size())
        throw std::invalid_argument("completion_test: class data mismatch");

    CompletionVerdict v;
    v.N = N;
    v.r = r;
    v.param_degrees = params.degrees;
    v.strict = force_strict ? *force_strict : (center_rank_hint < 2);
    v.alpha = ExtInt::neg_inf();
    const long floor_bound = params.degree_sum_minus_one();
    v.bound = floor_bound;

    // arithmetic floor: the bound is at least sum (n_j - 1) regardless of alpha
    if (v.strict ? !(N > floor_bound) : !(N >= floor_bound)) {
        v.reasons.push_back("inequality: N = " + std::to_string(N) +
                            (v.strict ? " is not greater than " : " is below ") +
                            std::to_string(floor_bound));
        return v;
    }
    for (int n : params.degrees)
        if (n > tau.N) {
            v.reasons.push_back("parameter degree " + std::to_string(n) +
                                " exceeds the truncation degree " +
                                std::to_string(tau.N));
            return v;
        }

    // images form an h.s.o.p. in the full ring: finite length on every
    // maximal elementary abelian class
    if (param_images_per_class.empty())
        v.reasons.push_back(
            "no elementary abelian restriction data: cannot verify the "
            "parameters in the full ring");
    for (std::size_t c = 0; c < param_images_per_class.size(); ++c) {
        std::vector<RingGenerator> gens;
        for (std::size_t t = 0; t < class_ranks[c]; ++t)
            gens.push_back({"t" + std::to_string(t + 1), 1});
        std::vector<Poly> cut;
        for (const auto& img : param_images_per_class[c])
            if (!img.is_zero()) cut.push_back(img);
        GradedPresentation quot = make_presentation(tau.base.p, gens, cut);
        DegreeBasis db(quot);
        if (!certify_finite_length(db, cert_bound).certified)
            v.reasons.push_back(
                "restrictions do not have finite-length quotient on "
                "elementary abelian class " + std::to_string(c));
    }

    // certified filter-regularity in the truncated ring
    std::optional<TypeMeasurement> m;
    try {
        m = measure_type(tau.base, params, cert_bound, MeasureMode::certified);
    } catch (const std::invalid_argument&) {
        v.reasons.push_back(
            "parameters are not an h.s.o.p. of the truncated ring within the "
            "certification bound");
    }
    if (m) {
        if (!m->certified)
            throw CertificationUnavailable(
                "completion_test: filter-regularity could not be certified "
                "within the bound (" + m->note + ")");
        v.measurement = m;
        auto bounds = a_invariant_bounds(*m);
        for (std::size_t i = 0; i + 2 <= r; ++i)
            v.alpha = ext_max(v.alpha, bounds[i] + static_cast<long>(i));
        long alpha_f = v.alpha.finite ? std::max(v.alpha.value(), 0L) : 0L;
        v.bound = alpha_f + floor_bound;
        if (v.strict ? !(N > v.bound) : !(N >= v.bound))
            v.reasons.push_back("inequality: N = " + std::to_string(N) +
                                (v.strict ? " is not greater than "
                                          : " is below ") +
                                std::to_string(v.bound));
    }
    v.complete = v.reasons.empty();
    return v;
}

struct PipelineCaps {
    int max_degree = 20;
    int dilation_cap = 4;
    int cert_bound = 64;
    std::size_t order_cap = 128;
    std::size_t max_matrix_entries = 64u * 1024u * 1024u;
    std::vector<int> forced_dilation;       // empty = search
    std::optional<bool> force_strict;       // inequality variant override
};

struct PipelineReport {
    bool complete = false;
    std::string mode;  // "certificate", "periodicity", or "caps-exhausted"
    int N = 0;
    TruncatedPresentation presentation;
    std::vector<std::size_t> ranks;
    ParameterSequence params;
    std::vector<int> dilation;
    std::optional<CompletionVerdict> verdict;
    // envelope of the emitted ring sharpened by the group-cohomology rules
    std::optional<FilterType> sharpened_type;
    std::size_t p_rank = 0;
    std::size_t center_rank = 0;
    std::vector<double> degree_seconds;
};

namespace detail {

struct ElabTracker {
    SubgroupEmbedding emb;
    std::size_t rank = 0;
    std::unique_ptr<PGroup> egroup;
    std::unique_ptr<MinimalResolution> eres;
    std::unique_ptr<ExtractionState> eext;
    std::unique_ptr<RestrictionChain> chain;
    std::vector<Poly> gen_images;  // over the class polynomial ring
};

/// Convert a polynomial of the subgroup's extracted presentation (which for
/// an elementary abelian group at p = 2 is the polynomial ring on rank
/// degree-one generators) to the plain class ring.
inline Poly to_class_ring(const Poly& q, std::size_t rank, std::uint32_t p) {
    PolyRing ring;
    ring.p = p;
    ring.degrees.assign(rank, 1);
    Poly out;
    out.terms = q.terms;
    return normalize(ring, out);
}

inline void update_tracker(ElabTracker& tr, const ExtractionState& ext) {
    const auto& gens = ext.generators();
    while (tr.gen_images.size() < gens.size()) {
        const auto& gen = gens[tr.gen_images.size()];
        tr.eres->extend(gen.degree);
        tr.eext->advance(gen.degree);
        // the subgroup presentation must be the standard polynomial ring
        for (const auto& eg : tr.eext->generators())
            if (eg.degree != 1)
                throw std::logic_error(
                    "elementary abelian extraction produced a generator of "
                    "degree != 1");
        FpMatrix rmat = tr.chain->cohomology_matrix(gen.degree);
        FpVector image = mul_vec(rmat, gen.cocycle.v);
        Poly q = tr.eext->poly_of_cocycle(image, gen.degree);
        tr.gen_images.push_back(
            to_class_ring(q, tr.rank, ext.presentation().p));
    }
}

inline void enumerate_dilations(std::size_t r, int total,
                                std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
    if (cur.size() == r) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int a = 0; a <= total; ++a) {
        cur.push_back(a);
        enumerate_dilations(r, total - a, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// Drive the computation for one group: extend the resolution, extract the
/// presentation, search for parameters with prescribed restrictions, and
/// stop at the first complete verdict. Rank-one groups stop when a syzygy
/// module of dimension one appears (the module is then the trivial module
/// and the cohomology is periodic). Runs to the caps otherwise and reports
/// the partial state without claiming completeness.
inline PipelineReport compute_until_complete(
    const PGroup& g, const PipelineCaps& caps = {},
    const std::vector<SparsePoly>& user_params = {}) {
    if (g.order > caps.order_cap)
        throw std::invalid_argument("compute_until_complete: order cap exceeded");
    PipelineReport rep;
    auto elabs = maximal_elementary_abelians(g);
    rep.p_rank = elabs.p_rank();
    rep.center_rank = center_rank(g);
    const std::size_t r = rep.p_rank;

    ResolutionCaps rcaps;
    rcaps.max_degree = static_cast<std::size_t>(caps.max_degree);
    rcaps.max_matrix_entries = caps.max_matrix_entries;
    MinimalResolution res(g);
    ExtractionState ext(res);

    auto tick = [&rep](auto start) {
        rep.degree_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count());
    };

    if (r <= 1) {
        for (int d = 1; d <= caps.max_degree; ++d) {
            auto start = std::chrono::steady_clock::now();
            res.extend(d, rcaps);
            ext.advance(d);
            tick(start);
            if (res.syzygy_basis(d).rows == 1) {
                // one-dimensional syzygy over a p-group algebra is trivial,
                // so multiplication by the degree-d class is periodicity
                rep.complete = true;
                rep.mode = "periodicity";
                rep.N = d;
                rep.presentation = ext.truncated();
                rep.ranks = res.ranks();
                FpVector unit(res.rank(d), 0);
                unit[0] = 1;
                Poly pi = ext.poly_of_cocycle(unit, d);
                rep.params = make_parameters(ext.presentation(), {pi});
                return rep;
            }
        }
        rep.complete = false;
        rep.mode = "caps-exhausted";
        rep.N = caps.max_degree;
        rep.presentation = ext.truncated();
        rep.ranks = res.ranks();
        return rep;
    }

    if (g.p != 2)
        throw std::runtime_error(
            "compute_until_complete: rank >= 2 at odd p is not supported by "
            "the automatic pipeline; use the ring analyzer");

    std::vector<detail::ElabTracker> trackers;
    for (const auto& cls : elabs.classes) {
        detail::ElabTracker tr;
        tr.emb = cls.rep;
        tr.rank = cls.rank;
        tr.egroup = std::make_unique<PGroup>(subgroup_group(cls.rep));
        tr.eres = std::make_unique<MinimalResolution>(*tr.egroup);
        tr.eext = std::make_unique<ExtractionState>(*tr.eres);
        tr.chain = std::make_unique<RestrictionChain>(tr.emb, res, *tr.eres);
        trackers.push_back(std::move(tr));
    }

    for (int N = 1; N <= caps.max_degree; ++N) {
        auto start = std::chrono::steady_clock::now();
        res.extend(N, rcaps);
        ext.advance(N);
        for (auto& tr : trackers) detail::update_tracker(tr, ext);
        tick(start);

        // candidate parameters: user supplied, or the restriction search
        std::optional<ParameterSequence> cand;
        std::vector<int> dil_used;
        if (!user_params.empty()) {
            bool expressible = true;
            std::vector<Poly> polys;
            PolyRing ring = ext.presentation().ring();
            for (const auto& sp : user_params) {
                if (sp.max_index() >= ring.nvars()) {
                    expressible = false;
                    break;
                }
                polys.push_back(sp.to_poly(ring));
            }
            if (expressible) {
                try {
                    ParameterSequence ps =
                        make_parameters(ext.presentation(), polys);
                    bool in_range = true;
                    for (int d : ps.degrees) in_range = in_range && d <= N;
                    if (in_range) cand = std::move(ps);
                } catch (const std::invalid_argument&) {
                    // malformed user parameters never become valid later
                    throw;
                }
            }
        } else {
            std::vector<ElabRestriction> classes;
            for (const auto& tr : trackers)
                classes.push_back({tr.rank, tr.gen_images});
            if (!caps.forced_dilation.empty()) {
                try {
                    cand = find_parameters(ext.truncated(), classes,
                                           caps.forced_dilation);
                    dil_used = caps.forced_dilation;
                } catch (const ParameterSearchError&) {
                }
            } else {
                for (int total = 0; total <= caps.dilation_cap && !cand; ++total) {
                    std::vector<std::vector<int>> options;
                    std::vector<int> curv;
                    detail::enumerate_dilations(r, total, curv, options);
                    for (const auto& dil : options) {
                        try {
                            cand = find_parameters(ext.truncated(), classes, dil);
                            dil_used = dil;
                            break;
                        } catch (const ParameterSearchError&) {
                        }
                    }
                }
            }
        }
        if (!cand) continue;

        // restriction images of the candidate parameters per class
        std::vector<std::vector<Poly>> images;
        std::vector<std::size_t> ranks;
        PolyRing tring = ext.presentation().ring();
        for (const auto& tr : trackers) {
            PolyRing ering;
            ering.p = g.p;
            ering.degrees.assign(tr.rank, 1);
            std::vector<Poly> per;
            for (const auto& e : cand->elements)
                per.push_back(substitute(tring, e, ering, tr.gen_images));
            images.push_back(std::move(per));
            ranks.push_back(tr.rank);
        }

        try {
            CompletionVerdict verdict = completion_test(
                ext.truncated(), N, *cand, images, ranks, rep.center_rank,
                caps.cert_bound, caps.force_strict);
            rep.verdict = verdict;
            rep.params = *cand;
            rep.dilation = dil_used;
            if (verdict.complete) {
                rep.complete = true;
                rep.mode = "certificate";
                rep.N = N;
                rep.presentation = ext.truncated();
                rep.ranks = res.ranks();
                // the emitted ring is the full cohomology ring, so the
                // group-specific sharpening rules apply to its envelope
                if (verdict.measurement)
                    rep.sharpened_type = sharpen_group_type(
                        verdict.measurement->envelope, r, true);
                return rep;
            }
        } catch (const CertificationUnavailable&) {
            // not enough certified data yet; keep extending
        }
    }
    rep.complete = false;
    rep.mode = "caps-exhausted";
    rep.N = caps.max_degree;
    rep.presentation = ext.truncated();
    rep.ranks = res.ranks();
    return rep;
}

}  // namespace cohomod
