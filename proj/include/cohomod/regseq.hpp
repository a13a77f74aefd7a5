#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomod/extint.hpp"
#include "cohomod/gring.hpp"

namespace cohomod {

/// Degree thresholds (d_0, ..., d_r) of a parameter sequence: d_i bounds the
/// degrees where multiplication by the next parameter on the i-th successive
/// quotient has a kernel, and d_r bounds the top of the full quotient.
/// admissible = steps satisfy d_i >= d_{i-1} - 1 and d_{i-1} >= d_i.
struct FilterType {
    std::vector<ExtInt> d;
    bool admissible = false;

    std::size_t r() const { return d.empty() ? 0 : d.size() - 1; }
};

inline bool check_admissible(const std::vector<ExtInt>& d) {
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (!(d[i] >= d[i - 1] - 1)) return false;  // -inf - 1 stays -inf
        if (!(d[i - 1] >= d[i])) return false;
    }
    return true;
}

inline FilterType make_filter_type(std::vector<ExtInt> d) {
    FilterType t;
    t.admissible = check_admissible(d);
    t.d = std::move(d);
    return t;
}

/// Coordinatewise-least admissible majorant: fixpoint of
/// d_i <- max(d_i, d_{i+1}, d_{i-1} - 1).
inline FilterType admissible_envelope(const FilterType& t) {
    std::vector<ExtInt> d = t.d;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < d.size(); ++i) {
            ExtInt want = d[i];
            if (i + 1 < d.size()) want = ext_max(want, d[i + 1]);
            if (i > 0) want = ext_max(want, d[i - 1] - 1);
            if (want != d[i]) {
                d[i] = want;
                changed = true;
            }
        }
    }
    return make_filter_type(std::move(d));
}

struct RegularityFlags {
    bool quasi = false;
    bool strongly = false;
    bool very_strongly = false;
};

/// Classification of an admissible type against the three reference
/// patterns: (-1,...,-1), (0,-1,...,-r), and (-1,-2,...,-r,-r). A sequence
/// of some type is also of every coordinatewise-larger admissible type, so
/// the checks are coordinatewise comparisons.
inline RegularityFlags classify(const FilterType& t, std::size_t r) {
    if (!t.admissible)
        throw std::invalid_argument("classify: type must be admissible");
    if (t.d.size() != r + 1)
        throw std::invalid_argument("classify: type length must be r + 1");
    RegularityFlags f;
    f.quasi = f.strongly = f.very_strongly = true;
    for (std::size_t i = 0; i <= r; ++i) {
        long li = static_cast<long>(i);
        if (!(t.d[i] <= -1)) f.quasi = false;
        if (!(t.d[i] <= -li)) f.strongly = false;
        long very = (i + 1 <= r) ? -(li + 1) : -static_cast<long>(r);
        if (!(t.d[i] <= very)) f.very_strongly = false;
    }
    return f;
}

enum class MeasureMode { bounded, certified };

/// Result of measuring a parameter sequence against a presentation.
struct TypeMeasurement {
    FilterType measured;   // minimal observed values, -inf when no kernel
    FilterType envelope;   // least admissible majorant
    std::size_t r = 0;
    std::vector<int> param_degrees;
    bool certified = false;
    int window = 0;         // kernel scan window
    int quotient_top = -1;  // exact top degree of H/(params)
    std::size_t depth_prefix = 0;  // leading parameters with zero kernel
    std::optional<RModulePresentation> rmod;  // from the certified run
    std::string note;
};

namespace detail {

/// Kernel dimension of multiplication by parameter i+1 on the i-th
/// successive quotient, in source degree n, from the three quotient
/// Hilbert functions (rank-nullity along Q_i^n -> Q_i^{n+v} -> Q_{i+1}^{n+v} -> 0).
inline long kernel_dim(std::vector<DegreeBasis>& chain, std::size_t i, int n,
                       int nu) {
    long hin = static_cast<long>(chain[i].dim(n));
    long hitv = static_cast<long>(chain[i].dim(n + nu));
    long hnext = static_cast<long>(chain[i + 1].dim(n + nu));
    return hin - hitv + hnext;
}

}  // namespace detail

/// Measure the type of a parameter sequence. In bounded mode values are
/// valid through the window and labeled so. Certified mode runs the
/// degreewise R-module resolution behind adaptive windows and accepts the
/// envelope only when the Betti data confirms it: the resolution-side
/// quantity max_i{beta_{r-i} - d_i} - sum n_j equals max_i{a^i - d_i}, so a
/// non-positive value pins every a-invariant under the envelope.
///
/// Throws when the quotient by the parameters is not certified finite
/// within the bound (not a homogeneous system of parameters as far as this
/// engine can tell).
inline TypeMeasurement measure_type(const GradedPresentation& pres,
                                    const ParameterSequence& params, int bound,
                                    MeasureMode mode) {
    const std::size_t r = params.size();
    if (r == 0) throw std::invalid_argument("measure_type: empty parameter list");
    const int gmax = pres.max_gen_degree();

    // successive quotients Q_0 = H, Q_i = H/(z_1..z_i)
    std::vector<DegreeBasis> chain;
    chain.emplace_back(pres);
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Poly> firsts(params.elements.begin(),
                                 params.elements.begin() + i + 1);
        chain.emplace_back(quotient_presentation(pres, firsts));
    }

    FiniteLengthCert cert = certify_finite_length(chain[r], bound);
    if (!cert.certified)
        throw std::invalid_argument(
            "measure_type: quotient by the parameters does not have certified "
            "finite length within the bound (not an h.s.o.p. within bound)");
    const int T = cert.top;
    long prefix_all = params.degree_sum();

    TypeMeasurement out;
    out.r = r;
    out.param_degrees = params.degrees;
    out.quotient_top = T;

    auto measure_kernels = [&](int W) {
        std::vector<ExtInt> d(r + 1, ExtInt::neg_inf());
        long prefix = 0;
        for (std::size_t i = 0; i < r; ++i) {
            int nu = params.degrees[i];
            ExtInt top = ExtInt::neg_inf();
            for (int n = 0; n <= W; ++n) {
                long k = detail::kernel_dim(chain, i, n, nu);
                if (k < 0)
                    throw std::logic_error("measure_type: negative kernel dimension");
                if (k > 0) top = ext_max(top, ExtInt::of(n - prefix));
            }
            d[i] = top;
            prefix += nu;
        }
        d[r] = ExtInt::of(T - prefix_all);
        return d;
    };

    if (mode == MeasureMode::bounded) {
        int W = bound;
        out.measured = make_filter_type(measure_kernels(W));
        out.envelope = admissible_envelope(out.measured);
        out.window = W;
        out.certified = false;
        out.note = "bounded: kernel data valid through degree " + std::to_string(W);
    } else {
        int W = std::max(T + gmax, 2 * gmax);
        std::vector<ExtInt> meas;
        FilterType env;
        long rho = 0;
        for (int round = 0; round < 16; ++round) {
            meas = measure_kernels(W);
            env = admissible_envelope(make_filter_type(meas));
            rho = 0;
            bool first = true;
            for (std::size_t i = 0; i <= r; ++i)
                if (env.d[i].finite) {
                    long v = env.d[i].value() + static_cast<long>(i);
                    rho = first ? v : std::max(rho, v);
                    first = false;
                }
            long B = rho + static_cast<long>(r) + params.degree_sum_minus_one();
            int Wneed = static_cast<int>(std::max<long>(B, T + gmax));
            if (Wneed <= W) break;
            if (Wneed > bound) {
                out.measured = make_filter_type(meas);
                out.envelope = env;
                out.window = W;
                out.certified = false;
                out.note = "bounded fallback: certification window " +
                           std::to_string(Wneed) + " exceeds bound " +
                           std::to_string(bound);
                break;
            }
            W = Wneed;
        }
        out.measured = make_filter_type(meas);
        out.envelope = env;
        out.window = W;

        if (out.note.empty()) {
            // degreewise minimal R-resolution through the window
            RModulePresentation rmod =
                r_module_structure_mechanical(chain[0], params, W);
            bool confined = true;
            for (std::size_t i = 0; i < rmod.betti.size(); ++i) {
                long cap = rho + static_cast<long>(i) + params.degree_sum_minus_one();
                if (rmod.betti[i].finite && rmod.betti[i].value() > cap)
                    confined = false;
            }
            // resolution-side certificate for the envelope
            ExtInt t55 = ExtInt::neg_inf();
            for (std::size_t i = 0; i <= r; ++i) {
                const ExtInt& b = rmod.betti[r - i];
                if (b.finite && env.d[i].finite)
                    t55 = ext_max(t55, ExtInt::of(b.value() - env.d[i].value()));
                else if (b.finite && !env.d[i].finite)
                    t55 = ExtInt::of(bound + 1);  // unbounded gap, cannot certify
            }
            bool t55_ok = !t55.finite || t55.value() - params.degree_sum() <= 0;
            out.certified = confined && t55_ok && rmod.hilbert_identity_ok &&
                            rmod.tail_clear;
            rmod.certified = out.certified;
            if (out.certified)
                rmod.mode_note = "certified through window " + std::to_string(W);
            else
                rmod.mode_note = "uncertified: consistency checks failed";
            out.rmod = std::move(rmod);
            out.note = out.certified
                           ? "certified through window " + std::to_string(W)
                           : "bounded: resolution-side certificate failed";
        }
    }

    // leading parameters with literally zero kernel
    out.depth_prefix = 0;
    for (std::size_t i = 0; i < r; ++i) {
        if (out.measured.d[i].finite) break;
        ++out.depth_prefix;
    }
    return out;
}

/// Depth = number of leading parameters acting regularly on the successive
/// quotients; exact in certified mode, valid through the window otherwise.
inline std::size_t depth(const GradedPresentation& pres,
                         const ParameterSequence& params, int bound,
                         MeasureMode mode = MeasureMode::certified) {
    return measure_type(pres, params, bound, mode).depth_prefix;
}

/// Per-index upper bounds a^i <= d_i from an admissible measured type, with
/// the sharpening a^i = -inf below the regular prefix (local cohomology
/// vanishes below the depth).
inline std::vector<ExtInt> a_invariant_bounds(const TypeMeasurement& m) {
    std::vector<ExtInt> out(m.r + 1, ExtInt::neg_inf());
    for (std::size_t i = 0; i <= m.r; ++i)
        out[i] = (i < m.depth_prefix) ? ExtInt::neg_inf() : m.envelope.d[i];
    return out;
}

/// Regularity bound max{d_i + i} from the envelope.
inline ExtInt regularity_bound(const TypeMeasurement& m) {
    ExtInt b = ExtInt::neg_inf();
    auto bounds = a_invariant_bounds(m);
    for (std::size_t i = 0; i < bounds.size(); ++i)
        b = ext_max(b, bounds[i] + static_cast<long>(i));
    return b;
}

/// Exact top local-cohomology degree and exact regularity from a certified
/// Betti table over R = k[zeta_1..zeta_r]:
///   max_i a^i = max_i beta_i - sum n_j,
///   Reg      = max_i (beta_i - i) - sum (n_j - 1).
struct ExactRegularity {
    ExtInt a_max;
    ExtInt reg;
};

inline ExactRegularity regularity_exact(const BettiTable& betti,
                                        const std::vector<int>& degrees) {
    if (!betti.certified)
        throw std::invalid_argument("regularity_exact: Betti table not certified");
    long sum = 0, sum1 = 0;
    for (int n : degrees) {
        sum += n;
        sum1 += n - 1;
    }
    ExactRegularity out;
    out.a_max = ExtInt::neg_inf();
    out.reg = ExtInt::neg_inf();
    for (std::size_t i = 0; i < betti.beta.size(); ++i) {
        out.a_max = ext_max(out.a_max, betti.beta[i]);
        out.reg = ext_max(out.reg, betti.beta[i] - static_cast<long>(i));
    }
    out.a_max = out.a_max - sum;
    out.reg = out.reg - sum1;
    return out;
}

/// Full analyzer report for one (ring, parameters) pair.
struct LocalCohomologyReport {
    std::vector<ExtInt> a_bound;
    ExtInt a_max_exact;
    ExtInt reg_exact;
    std::size_t depth = 0;
    bool certified = false;
    ExtInt a0_exact;          // exact top m-torsion degree (certified mode)
    bool a0_known = false;
    std::vector<ExtInt> a_exact;  // full list when depth == r (Cohen-Macaulay)
    bool cm_exact = false;
};

/// Exact top degree of the m-torsion submodule: elements killed by a power
/// of every parameter. Only meaningful with a certified envelope, which
/// confines the torsion below e_0 and the powers within the window.
inline ExtInt a0_exact_mtorsion(const GradedPresentation& pres,
                                const ParameterSequence& params,
                                const TypeMeasurement& m) {
    if (!m.envelope.d[0].finite) return ExtInt::neg_inf();
    const long e0 = m.envelope.d[0].value();
    DegreeBasis db(pres);
    ExtInt top = ExtInt::neg_inf();
    for (long n = 0; n <= e0; ++n) {
        if (db.dim(static_cast<int>(n)) == 0) continue;
        // stack the maps v -> zeta_j^{s_j} v with s_j n_j + n > e0
        std::vector<FpMatrix> blocks;
        for (std::size_t j = 0; j < params.size(); ++j) {
            long s = (e0 - n) / params.degrees[j] + 1;
            FpMatrix acc;
            int cur = static_cast<int>(n);
            for (long k = 0; k < s; ++k) {
                FpMatrix step = db.mult_matrix(params.elements[j], cur);
                acc = (k == 0) ? step : mul(step, acc);
                cur += params.degrees[j];
            }
            blocks.push_back(std::move(acc));
        }
        std::size_t total_rows = 0;
        for (const auto& b : blocks) total_rows += b.rows;
        FpMatrix stacked(total_rows, db.dim(static_cast<int>(n)), pres.p);
        std::size_t row = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.rows; ++i, ++row)
                for (std::size_t c = 0; c < b.cols; ++c)
                    stacked.at(row, c) = b.at(i, c);
        }
        if (kernel_basis(stacked).rows > 0) top = ext_max(top, ExtInt::of(n));
    }
    return top;
}

/// Run the full analysis: measurement, envelope, classification inputs,
/// a-invariant bounds, and (in certified mode) exact regularity data.
inline LocalCohomologyReport local_cohomology_report(
    const GradedPresentation& pres, const ParameterSequence& params,
    const TypeMeasurement& m) {
    LocalCohomologyReport rep;
    rep.a_bound = a_invariant_bounds(m);
    rep.depth = m.depth_prefix;
    rep.certified = m.certified;
    if (m.certified && m.rmod) {
        BettiTable bt = betti_numbers(*m.rmod);
        ExactRegularity ex = regularity_exact(bt, params.degrees);
        rep.a_max_exact = ex.a_max;
        rep.reg_exact = ex.reg;
        rep.a0_exact = a0_exact_mtorsion(pres, params, m);
        rep.a0_known = true;
        if (rep.depth == m.r) {  // Cohen-Macaulay: everything collapses
            rep.cm_exact = true;
            rep.a_exact.assign(m.r + 1, ExtInt::neg_inf());
            rep.a_exact[m.r] = ex.a_max;
        }
    }
    return rep;
}

/// Bigraded cohomology table of the Koszul complex of the ring with respect
/// to the parameters. Column -s holds components indexed by s-subsets of
/// the parameters; the vertical degree of a component for subset S is the
/// module degree shifted up by sum of the degrees in S.
struct KoszulReport {
    std::size_t r = 0;
    int window = 0;
    std::vector<int> param_degrees;
    std::vector<std::vector<std::size_t>> dims;  // dims[s][t], 0 <= s <= r, 0 <= t <= window
};

inline KoszulReport koszul_cohomology(const GradedPresentation& pres,
                                      const ParameterSequence& params,
                                      int window) {
    const std::size_t r = params.size();
    DegreeBasis db(pres);
    db.ensure(window);

    // subsets of {0..r-1} grouped by size, each sorted ascending,
    // enumerated in lexicographic order
    std::vector<std::vector<std::vector<std::size_t>>> subsets(r + 1);
    for (std::size_t mask = 0; mask < (1u << r); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < r; ++j)
            if (mask & (1u << j)) s.push_back(j);
        subsets[s.size()].push_back(std::move(s));
    }
    for (auto& group : subsets) std::sort(group.begin(), group.end());

    auto shift = [&](const std::vector<std::size_t>& s) {
        int n = 0;
        for (std::size_t j : s) n += params.degrees[j];
        return n;
    };
    auto component_dim = [&](const std::vector<std::size_t>& s, int t) {
        int md = t - shift(s);
        return md < 0 ? std::size_t{0} : db.dim(md);
    };

    // differential K^{-s} -> K^{-s+1} at vertical degree t
    auto build_d = [&](std::size_t s, int t) {
        const auto& src = subsets[s];
        const auto& dst = subsets[s - 1];
        std::vector<std::size_t> srcoff(src.size() + 1, 0),
            dstoff(dst.size() + 1, 0);
        for (std::size_t b = 0; b < src.size(); ++b)
            srcoff[b + 1] = srcoff[b] + component_dim(src[b], t);
        for (std::size_t b = 0; b < dst.size(); ++b)
            dstoff[b + 1] = dstoff[b] + component_dim(dst[b], t);
        FpMatrix d(dstoff.back(), srcoff.back(), pres.p);
        PrimeField f(pres.p);
        for (std::size_t b = 0; b < src.size(); ++b) {
            const auto& S = src[b];
            int msrc = t - shift(S);
            if (msrc < 0) continue;
            for (std::size_t pos = 0; pos < S.size(); ++pos) {
                std::size_t j = S[pos];
                std::vector<std::size_t> Sm = S;
                Sm.erase(Sm.begin() + pos);
                std::size_t target =
                    std::lower_bound(dst.begin(), dst.end(), Sm) - dst.begin();
                FpMatrix blk = db.mult_matrix(params.elements[j], msrc);
                std::uint32_t sign = (pos % 2) ? f.neg(1) : 1;
                for (std::size_t i = 0; i < blk.rows; ++i)
                    for (std::size_t c = 0; c < blk.cols; ++c)
                        d.at(dstoff[target] + i, srcoff[b] + c) =
                            f.mul(sign, blk.at(i, c));
            }
        }
        return d;
    };

    KoszulReport rep;
    rep.r = r;
    rep.window = window;
    rep.param_degrees = params.degrees;
    rep.dims.assign(r + 1, std::vector<std::size_t>(window + 1, 0));
    for (int t = 0; t <= window; ++t) {
        for (std::size_t s = 0; s <= r; ++s) {
            std::size_t total = 0;
            for (const auto& S : subsets[s]) total += component_dim(S, t);
            std::size_t kerdim;
            if (s == 0) {
                kerdim = total;  // no outgoing differential
            } else {
                FpMatrix d = build_d(s, t);
                kerdim = total - rref(d).rank;
            }
            std::size_t imdim = 0;
            if (s + 1 <= r) {
                FpMatrix din = build_d(s + 1, t);
                imdim = rref(din).rank;
            }
            rep.dims[s][t] = kerdim - imdim;
        }
    }
    return rep;
}

/// Post-processing valid only for types measured on the full cohomology
/// ring of a group: the last two (rank >= 2) or three (rank >= 3) entries
/// can be replaced by sharper values driven by the periodicity and
/// projectivity of the top tensor factors, then re-enveloped.
///
/// The module-theoretic rules require d_0 >= -1 on their input, so the
/// type is first lifted to its least majorant with that property; the
/// result is the coordinatewise minimum of the original type with the
/// sharpened sequences, re-enveloped (a minimum of valid threshold
/// sequences is again valid, threshold by threshold).
inline FilterType sharpen_group_type(const FilterType& t, std::size_t r,
                                     bool group_cohomology_provenance) {
    if (!group_cohomology_provenance)
        throw std::invalid_argument(
            "sharpen_group_type: only valid for group cohomology types");
    if (!t.admissible)
        throw std::invalid_argument("sharpen_group_type: type must be admissible");
    if (t.d.size() != r + 1)
        throw std::invalid_argument("sharpen_group_type: length mismatch");

    // least majorant with d_0 >= -1 (the rules' admissibility condition)
    std::vector<ExtInt> lifted = t.d;
    lifted[0] = ext_max(lifted[0], ExtInt::of(-1));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i <= r; ++i) {
            ExtInt want = lifted[i];
            if (i == 0) want = ext_max(want, ExtInt::of(-1));
            if (i + 1 <= r) want = ext_max(want, lifted[i + 1]);
            if (i > 0) want = ext_max(want, lifted[i - 1] - 1);
            if (want != lifted[i]) {
                lifted[i] = want;
                changed = true;
            }
        }
    }

    std::vector<ExtInt> best = t.d;
    auto take_min = [&](const std::vector<ExtInt>& cand) {
        for (std::size_t i = 0; i <= r; ++i)
            if (cand[i] < best[i]) best[i] = cand[i];
    };
    if (r >= 2) {
        std::vector<ExtInt> c = lifted;
        c[r - 1] = lifted[r - 2] - 1;
        c[r] = lifted[r - 2] - 1;
        take_min(c);
    }
    if (r >= 3) {
        std::vector<ExtInt> c = lifted;
        c[r - 2] = lifted[r - 3] - 1;
        c[r - 1] = lifted[r - 3] - 2;
        c[r] = lifted[r - 3] - 2;
        take_min(c);
    }
    return admissible_envelope(make_filter_type(std::move(best)));
}

}  // namespace cohomod
