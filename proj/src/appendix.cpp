#include "qmclose/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "qmclose/linalg.hpp"
#include "qmclose/lp.hpp"

namespace qmclose {

namespace {

int auto_bound(const AppendixPoint& x) {
    // Atoms of a conic decomposition carry coords as small as
    // minpos / lambda with lambda up to the largest coordinate, so the
    // complete threshold bound scales with maxcoord / minpos.
    double minpos = 1.0, maxc = 1.0;
    bool any = false;
    for (double c : x.coords) {
        maxc = std::max(maxc, c);
        if (c > kAppendixTol) {
            minpos = std::min(minpos, c);
            any = true;
        }
    }
    int b = any ? static_cast<int>(std::ceil(maxc / minpos)) : 1;
    return std::max(10, b + 1);
}

bool in_unit_range(const AppendixPoint& x) {
    for (double c : x.coords)
        if (c < -kAppendixTol || c > 1.0 + kAppendixTol) return false;
    return true;
}

// Enumerate compositions (c_0..c_{parts-1}), each >= 1, sum <= total.
void for_compositions(int parts, int total, const std::function<bool(const std::vector<int>&)>& fn) {
    std::vector<int> c(static_cast<size_t>(parts), 1);
    if (parts == 0) {
        fn(c);
        return;
    }
    std::function<bool(int, int)> rec = [&](int idx, int left) -> bool {
        if (idx == parts - 1) {
            for (int v = 1; v <= left; ++v) {
                c[static_cast<size_t>(idx)] = v;
                if (!fn(c)) return false;
            }
            return true;
        }
        for (int v = 1; v <= left - (parts - 1 - idx); ++v) {
            c[static_cast<size_t>(idx)] = v;
            if (!rec(idx + 1, left - v)) return false;
        }
        return true;
    };
    if (parts <= total) rec(0, total);
}

double block_min(const AppendixPoint& x, int start, int span) {
    double v = 1.0;
    for (int i = 0; i < span; ++i) v = std::min(v, x.at(static_cast<size_t>(start + i)));
    return v;
}

// Smallest integer l with 1/l <= value + tol, or 0 when value is
// effectively zero.
int min_threshold_int(double value) {
    if (value <= kAppendixTol) return 0;
    int l = static_cast<int>(std::ceil(1.0 / (value + kAppendixTol)));
    return std::max(l, 1);
}

}  // namespace

bool in_U(const AppendixPoint& x, const BlockSignature& sig, int n) {
    if (sig.steps() != n || n < 1) throw std::invalid_argument("in_U: malformed signature");
    for (int v : sig.l)
        if (v < 1) throw std::invalid_argument("in_U: signature entries must be >= 1");
    if (!in_unit_range(x)) return false;
    int pos = 0;
    for (int b = 0; b < n; ++b) {
        int span = sig.l[static_cast<size_t>(b)];
        double thr = 1.0 / static_cast<double>(sig.l[static_cast<size_t>(b) + 1]);
        for (int i = 0; i < span; ++i)
            if (x.at(static_cast<size_t>(pos + i)) < thr - kAppendixTol) return false;
        pos += span;
    }
    return true;  // tail already checked by the unit-range test
}

MnResult in_Mn(const AppendixPoint& x, int n, int search_bound) {
    if (n < 1) throw std::invalid_argument("in_Mn: n must be >= 1");
    MnResult out;
    if (!in_unit_range(x)) return out;
    int bound = search_bound > 0 ? search_bound : auto_bound(x);
    for_compositions(n, x.m, [&](const std::vector<int>& c) {
        // Interior thresholds are fixed by the composition itself.
        int pos = 0;
        for (int b = 0; b + 1 < n; ++b) {
            double thr = 1.0 / static_cast<double>(c[static_cast<size_t>(b) + 1]);
            if (block_min(x, pos, c[static_cast<size_t>(b)]) < thr - kAppendixTol) return true;
            pos += c[static_cast<size_t>(b)];
        }
        int ln = min_threshold_int(block_min(x, pos, c[static_cast<size_t>(n) - 1]));
        if (ln == 0 || ln > bound) return true;
        BlockSignature sig;
        sig.l = c;
        sig.l.push_back(ln);
        out.member = true;
        out.signature = std::move(sig);
        return false;  // stop enumeration
    });
    return out;
}

LimitEvidence limit_detect_Mn(const AppendixPoint& x, int n, int search_bound) {
    if (n < 1) throw std::invalid_argument("limit_detect_Mn: n must be >= 1");
    LimitEvidence out;
    if (!in_unit_range(x)) return out;
    int bound = search_bound > 0 ? search_bound : auto_bound(x);
    const std::vector<int> ks = {2, 4, 8, 16};

    // Candidate lift: signature (c_0..c_{n-2}, span_last, k) where the final
    // block is raised to 1/k.  span_last doubles as the threshold
    // denominator of block n-2, so the weakest choice span_last = bound is
    // complete; only the prefix needs searching.
    int span_last = n == 1 ? 1 : bound;
    auto try_prefix = [&](const std::vector<int>& pre) -> bool {  // false stops
        int pos = 0;
        for (int b = 0; b + 1 < n; ++b) {
            int span = pre[static_cast<size_t>(b)];
            double thr = (b + 2 < n) ? 1.0 / static_cast<double>(pre[static_cast<size_t>(b) + 1])
                                     : 1.0 / static_cast<double>(span_last);
            if (block_min(x, pos, span) < thr - kAppendixTol) return true;
            pos += span;
        }
        bool all_ok = true;
        double delta = 0;
        for (int k : ks) {
            AppendixPoint lifted;
            lifted.m = std::max(x.m, pos + span_last);
            lifted.coords.assign(static_cast<size_t>(lifted.m), 0.0);
            for (int i = 0; i < lifted.m; ++i)
                lifted.coords[static_cast<size_t>(i)] = x.at(static_cast<size_t>(i));
            for (int i = 0; i < span_last; ++i) {
                auto idx = static_cast<size_t>(pos + i);
                double nv = std::max(lifted.coords[idx], 1.0 / k);
                delta = std::max(delta, nv - lifted.coords[idx]);
                lifted.coords[idx] = nv;
            }
            // Membership by definition: the lifted point carries the
            // explicit signature (pre..., span_last, k).
            BlockSignature sig;
            sig.l = pre;
            sig.l.push_back(span_last);
            sig.l.push_back(k);
            if (!in_U(lifted, sig, n)) {
                all_ok = false;
                break;
            }
        }
        if (!all_ok) return true;
        out.detected = true;
        out.lift_spans = pre;
        out.lift_spans.push_back(span_last);
        out.ks = ks;
        out.max_delta = delta;
        return false;
    };
    if (n == 1) {
        try_prefix({});
    } else {
        for_compositions(n - 1, x.m, try_prefix);
    }
    return out;
}

// ---------------------------------------------------------------------------
// conic hull

namespace {

struct BoxFamily {
    std::vector<std::vector<double>> lows;  // per composition, per coordinate
    std::vector<std::vector<int>> comps;
};

// Maximal box per span composition (final threshold at the search bound;
// boxes are nested in that threshold, so only the largest matters for
// membership).
BoxFamily cc_boxes(int n, int m, int bound) {
    BoxFamily fam;
    for_compositions(n, m, [&](const std::vector<int>& c) {
        std::vector<double> lo(static_cast<size_t>(m), 0.0);
        int pos = 0;
        for (int b = 0; b < n; ++b) {
            double thr = b + 1 < n ? 1.0 / static_cast<double>(c[static_cast<size_t>(b) + 1])
                                   : 1.0 / static_cast<double>(bound);
            for (int i = 0; i < c[static_cast<size_t>(b)]; ++i)
                lo[static_cast<size_t>(pos + i)] = thr;
            pos += c[static_cast<size_t>(b)];
        }
        fam.lows.push_back(std::move(lo));
        fam.comps.push_back(c);
        return true;
    });
    return fam;
}

// Caratheodory reduction: keep at most m atoms by cancelling along null
// directions of the weighted atom matrix.
void reduce_support(std::vector<ConicAtom>* atoms, int m) {
    while (static_cast<int>(atoms->size()) > m) {
        size_t cnt = atoms->size();
        Mat vt(cnt, static_cast<size_t>(m));
        for (size_t i = 0; i < cnt; ++i)
            for (int j = 0; j < m; ++j)
                vt(i, static_cast<size_t>(j)) =
                    (*atoms)[i].coefficient *
                    (j < static_cast<int>((*atoms)[i].coords.size()) ? (*atoms)[i].coords[static_cast<size_t>(j)] : 0.0);
        // Null direction of V^T (cnt > m guarantees one): smallest
        // eigenvector of V V^T.
        Mat gram(cnt, cnt);
        for (size_t i = 0; i < cnt; ++i)
            for (size_t j = 0; j < cnt; ++j) {
                double s = 0;
                for (int k = 0; k < m; ++k)
                    s += vt(i, static_cast<size_t>(k)) * vt(j, static_cast<size_t>(k));
                gram(i, j) = s;
            }
        EigenSym eig = jacobi_eigensym(gram);
        std::vector<double> mu(cnt);
        for (size_t i = 0; i < cnt; ++i) mu[i] = eig.vectors(i, 0);
        // Scale so the most positive mu_i hits 1: weights (1 - mu) stay >= 0
        // and at least one atom drops out.
        double mx = 0;
        for (double v : mu) mx = std::max(mx, v);
        if (mx <= 1e-13) {
            for (auto& v : mu) v = -v;
            mx = 0;
            for (double v : mu) mx = std::max(mx, v);
            if (mx <= 1e-13) break;  // numerically degenerate; stop reducing
        }
        std::vector<ConicAtom> next;
        for (size_t i = 0; i < cnt; ++i) {
            double w = 1.0 - mu[i] / mx;
            if (w <= 1e-12) continue;
            ConicAtom a = (*atoms)[i];
            a.coefficient *= w;
            next.push_back(std::move(a));
        }
        if (next.size() >= atoms->size()) break;
        *atoms = std::move(next);
    }
}

}  // namespace

CcResult in_ccMn(const AppendixPoint& x, int n, int search_bound) {
    if (n < 1) throw std::invalid_argument("in_ccMn: n must be >= 1");
    CcResult out;
    bool zero = true;
    for (double c : x.coords)
        if (std::fabs(c) > kAppendixTol) zero = false;
    if (zero) {
        out.member = true;
        out.combination = ConicCombination{};
        return out;
    }
    for (double c : x.coords)
        if (c < -kAppendixTol) return out;
    int bound = search_bound > 0 ? search_bound : auto_bound(x);
    BoxFamily fam = cc_boxes(n, x.m, bound);
    size_t nb = fam.lows.size();
    if (nb == 0) return out;
    int m = x.m;

    // Variables per box: y in R^m (free >= via constraints) and lambda >= 0;
    // rows: sum_b y_b = x; y_bj >= lambda_b * lo_j; y_bj <= lambda_b.
    size_t nv = nb * (static_cast<size_t>(m) + 1);
    auto yvar = [&](size_t b, int j) { return b * (static_cast<size_t>(m) + 1) + static_cast<size_t>(j); };
    auto lvar = [&](size_t b) { return b * (static_cast<size_t>(m) + 1) + static_cast<size_t>(m); };

    LpProblem lp;
    lp.nvars = nv;
    lp.nonneg.assign(nv, 0);
    for (size_t b = 0; b < nb; ++b) lp.nonneg[lvar(b)] = 1;
    lp.a_eq = Mat(static_cast<size_t>(m), nv);
    lp.b_eq.assign(static_cast<size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        for (size_t b = 0; b < nb; ++b) lp.a_eq(static_cast<size_t>(j), yvar(b, j)) = 1.0;
        lp.b_eq[static_cast<size_t>(j)] = x.at(static_cast<size_t>(j));
    }
    lp.a_ge = Mat(2 * nb * static_cast<size_t>(m), nv);
    lp.b_ge.assign(2 * nb * static_cast<size_t>(m), 0.0);
    size_t row = 0;
    for (size_t b = 0; b < nb; ++b) {
        for (int j = 0; j < m; ++j) {
            lp.a_ge(row, yvar(b, j)) = 1.0;
            lp.a_ge(row, lvar(b)) = -fam.lows[b][static_cast<size_t>(j)];
            ++row;
            lp.a_ge(row, yvar(b, j)) = -1.0;
            lp.a_ge(row, lvar(b)) = 1.0;
            ++row;
        }
    }
    LpSolution sol = lp_feasible(lp, 1e-10);
    if (sol.status != LpStatus::feasible) return out;

    ConicCombination comb;
    for (size_t b = 0; b < nb; ++b) {
        double lam = sol.x[lvar(b)];
        if (lam <= 1e-9) continue;
        ConicAtom atom;
        atom.coefficient = lam;
        atom.coords.resize(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            double v = sol.x[yvar(b, j)] / lam;
            v = std::min(1.0, std::max(v, fam.lows[b][static_cast<size_t>(j)]));
            atom.coords[static_cast<size_t>(j)] = v;
        }
        atom.signature.l = fam.comps[b];
        // Final threshold integer: tightest level the atom actually meets.
        int pos = 0;
        for (size_t bi = 0; bi + 1 < fam.comps[b].size(); ++bi) pos += fam.comps[b][bi];
        AppendixPoint ap{atom.coords, m};
        int ln = min_threshold_int(block_min(ap, pos, fam.comps[b].back()));
        atom.signature.l.push_back(ln == 0 ? bound : std::min(ln, bound));
        comb.atoms.push_back(std::move(atom));
    }
    reduce_support(&comb.atoms, m);
    out.member = true;
    out.combination = std::move(comb);
    return out;
}

LimitEvidence limit_detect_ccMn(const AppendixPoint& x, int n, int search_bound) {
    LimitEvidence out;
    for (double c : x.coords)
        if (c < -kAppendixTol) return out;
    // Constant sequence when the point is already in the cone.
    CcResult direct = in_ccMn(x, n, search_bound);
    if (direct.member) {
        out.detected = true;
        out.ks = {1};
        return out;
    }
    const std::vector<int> ks = {2, 4, 8, 16};
    if (n == 1) {
        // cc(M_1) misses only points with vanishing first coordinate; lift it.
        bool ok = true;
        double delta = 0;
        for (int k : ks) {
            AppendixPoint lifted = x;
            if (lifted.coords.empty()) lifted.coords.assign(1, 0.0);
            if (lifted.m < 1) lifted.m = 1;
            double nv = std::max(lifted.coords[0], 1.0 / k);
            delta = std::max(delta, nv - lifted.coords[0]);
            lifted.coords[0] = nv;
            if (!in_ccMn(lifted, 1, search_bound).member) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.detected = true;
            out.ks = ks;
            out.max_delta = delta;
        }
        return out;
    }
    // Decompose in cc(M_{n-1}), lift each atom's final block into M_n, and
    // verify the lifted atoms; the lifted combination converges to x.
    CcResult prev = in_ccMn(x, n - 1, search_bound);
    if (!prev.member || !prev.combination) return out;
    double delta = 0;
    for (int k : ks) {
        for (const auto& atom : prev.combination->atoms) {
            const auto& spans = atom.signature.l;  // (c_0..c_{n-2}, l_{n-1})
            int prefix = 0;
            for (size_t i = 0; i + 2 < spans.size(); ++i) prefix += spans[i];
            int last_span = spans[spans.size() - 2];
            int lift_span = spans.back();  // threshold integer becomes a span
            AppendixPoint lifted;
            lifted.m = std::max(x.m, prefix + last_span + lift_span);
            lifted.coords.assign(static_cast<size_t>(lifted.m), 0.0);
            for (size_t i = 0; i < atom.coords.size(); ++i) lifted.coords[i] = atom.coords[i];
            for (int i = 0; i < lift_span; ++i) {
                auto idx = static_cast<size_t>(prefix + last_span + i);
                double nv = std::max(lifted.coords[idx], 1.0 / k);
                delta = std::max(delta, (nv - lifted.coords[idx]) * atom.coefficient);
                lifted.coords[idx] = nv;
            }
            BlockSignature sig;
            sig.l = atom.signature.l;  // (c_0..c_{n-2}, l_{n-1}) plus new k
            sig.l.push_back(k);
            if (!in_U(lifted, sig, n)) return out;
        }
    }
    out.detected = true;
    out.ks = ks;
    out.max_delta = delta;
    return out;
}

// ---------------------------------------------------------------------------
// peeling verification

namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<double>> sample_points(int n, int m, int samples, uint64_t seed, bool cone) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    // Crafted boundary points: zeros in leading slots, exact thresholds,
    // step patterns.
    std::vector<double> v(static_cast<size_t>(m), 0.0);
    pts.push_back(v);  // origin
    v.assign(static_cast<size_t>(m), 1.0);
    pts.push_back(v);  // all ones
    for (int i = 0; i < m && i < 4; ++i) {
        v.assign(static_cast<size_t>(m), 0.0);
        v[static_cast<size_t>(i)] = 1.0;
        pts.push_back(v);  // unit slots
    }
    // Ones up to a zero gap: witnesses for strict peeling.
    for (int z = 1; z < std::min(m, n + 2); ++z) {
        v.assign(static_cast<size_t>(m), 0.0);
        for (int i = 0; i < z; ++i) v[static_cast<size_t>(i)] = 1.0;
        if (z + 1 < m) v[static_cast<size_t>(z) + 1] = 0.7;
        pts.push_back(v);
    }
    // Threshold-valued entries 1/k.
    for (int k : {2, 3, 5}) {
        v.assign(static_cast<size_t>(m), 1.0 / k);
        pts.push_back(v);
        v[0] = 1.0;
        pts.push_back(v);
    }
    while (static_cast<int>(pts.size()) < samples) {
        v.resize(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            double u = unit_double(rng);
            // Mix in exact zeros and threshold values to exercise edges.
            if (u < 0.15) v[static_cast<size_t>(j)] = 0.0;
            else if (u < 0.25) v[static_cast<size_t>(j)] = 1.0 / (1 + static_cast<int>(u * 40) % 6);
            else v[static_cast<size_t>(j)] = unit_double(rng);
        }
        double scale = cone ? (unit_double(rng) < 0.3 ? 1.0 : 5.0 * unit_double(rng)) : 1.0;
        std::vector<double> p = v;
        if (cone)
            for (auto& c : p) c *= scale;
        pts.push_back(p);
    }
    pts.resize(static_cast<size_t>(samples));
    return pts;
}

}  // namespace

StepReport seq_step_verify(int n, int m, int samples, uint64_t seed) {
    if (n < 1 || m < n) throw std::invalid_argument("seq_step_verify: need n >= 1 and m >= n");
    if (samples < 1) throw std::invalid_argument("seq_step_verify: sample budget must be positive");
    StepReport rep;
    rep.n = n;
    rep.m = m;
    rep.samples = samples;
    rep.seed = seed;
    auto pts = sample_points(n, m, samples, seed, false);
    for (const auto& c : pts) {
        AppendixPoint x{c, m};
        PointVerdict pv;
        pv.coords = c;
        if (n >= 2) {
            MnResult prev = in_Mn(x, n - 1);
            pv.in_prev = prev.member;
            pv.prev_signature = prev.signature;
        } else {
            pv.in_prev = in_unit_range(x);  // terminal closed form: the box
        }
        LimitEvidence ev = limit_detect_Mn(x, n);
        pv.limit_detected = ev.detected;
        pv.lift_spans = ev.lift_spans;
        pv.ks = ev.ks;
        pv.agree = pv.in_prev == pv.limit_detected;
        if (!pv.agree) ++rep.discrepancies;
        // Strictness: a point of the peeled set not in M_n itself.
        if (!rep.strictness_found && pv.in_prev && !in_Mn(x, n).member) {
            rep.strictness_found = true;
            rep.strictness_witness = c;
        }
        rep.points.push_back(std::move(pv));
    }
    return rep;
}

StepReport cc_seq_step_verify(int n, int m, int samples, uint64_t seed) {
    if (n < 1 || m < n) throw std::invalid_argument("cc_seq_step_verify: need n >= 1 and m >= n");
    if (samples < 1) throw std::invalid_argument("cc_seq_step_verify: sample budget must be positive");
    StepReport rep;
    rep.n = n;
    rep.m = m;
    rep.samples = samples;
    rep.seed = seed;
    rep.cone_variant = true;
    auto pts = sample_points(n, m, samples, seed, true);
    for (const auto& c : pts) {
        AppendixPoint x{c, m};
        PointVerdict pv;
        pv.coords = c;
        if (n >= 2) {
            pv.in_prev = in_ccMn(x, n - 1).member;
        } else {
            bool ok = true;  // terminal closed form: the nonnegative orthant
            for (double v : c)
                if (v < -kAppendixTol) ok = false;
            pv.in_prev = ok;
        }
        LimitEvidence ev = limit_detect_ccMn(x, n);
        pv.limit_detected = ev.detected;
        pv.ks = ev.ks;
        pv.agree = pv.in_prev == pv.limit_detected;
        if (!pv.agree) ++rep.discrepancies;
        if (!rep.strictness_found && pv.in_prev && !in_ccMn(x, n).member) {
            rep.strictness_found = true;
            rep.strictness_witness = c;
        }
        rep.points.push_back(std::move(pv));
    }
    return rep;
}

}  // namespace qmclose
