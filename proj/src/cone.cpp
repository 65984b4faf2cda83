#include "qmclose/cone.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qmclose {

namespace {

constexpr size_t kMaxDim = 12;
constexpr size_t kMaxGens = 200;

Rational inner(const RatVec& a, const RatVec& b) {
    Rational s;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RatVec axpy(const RatVec& x, const Rational& c, const RatVec& y) {
    RatVec r = x;
    for (size_t i = 0; i < r.size(); ++i) r[i] += c * y[i];
    return r;
}

bool is_zero_vec(const RatVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

using ZeroSet = std::vector<char>;

}  // namespace

RatVec canonical_ray(const RatVec& v) {
    // Positive scaling only: clear denominators, divide by gcd.
    BigInt l(1);
    for (const auto& x : v) {
        BigInt g = BigInt::gcd(l, x.den());
        l = l / g * x.den();
    }
    BigInt g(0);
    std::vector<BigInt> nums;
    nums.reserve(v.size());
    for (const auto& x : v) {
        BigInt n = x.num() * (l / x.den());
        g = BigInt::gcd(g, n);
        nums.push_back(std::move(n));
    }
    RatVec r(v.size());
    if (g.is_zero()) return RatVec(v.size(), Rational(0));
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rational(nums[i] / g, BigInt(1));
    return r;
}

std::vector<RatVec> rref(std::vector<RatVec> rows) {
    size_t r = 0;
    size_t cols = rows.empty() ? 0 : rows[0].size();
    for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        size_t piv = r;
        while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        Rational inv = Rational(1) / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            Rational f = rows[i][c];
            for (size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

RatVec reduce_mod_span(const std::vector<RatVec>& span_rref, RatVec v) {
    for (const auto& row : span_rref) {
        size_t lead = 0;
        while (lead < row.size() && row[lead].is_zero()) ++lead;
        if (lead == row.size()) continue;
        Rational f = v[lead];  // pivot normalized to 1 in RREF
        if (f.is_zero()) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] -= f * row[j];
    }
    return v;
}

DdResult dd_rays(size_t dim, const std::vector<RatVec>& rows) {
    if (dim > kMaxDim) throw LimitError("cone: dimension beyond double-description limit");
    if (rows.size() > kMaxGens) throw LimitError("cone: too many halfspaces");

    std::vector<RatVec> lineality;
    for (size_t i = 0; i < dim; ++i) {
        RatVec e(dim, Rational(0));
        e[i] = Rational(1);
        lineality.push_back(std::move(e));
    }
    std::vector<RatVec> rays;
    std::vector<ZeroSet> zsets;  // per ray, indexed by processed row

    for (size_t ri = 0; ri < rows.size(); ++ri) {
        const RatVec& a = rows[ri];
        std::vector<Rational> lv(lineality.size());
        size_t pivot = lineality.size();
        for (size_t i = 0; i < lineality.size(); ++i) {
            lv[i] = inner(a, lineality[i]);
            if (pivot == lineality.size() && !lv[i].is_zero()) pivot = i;
        }
        if (pivot != lineality.size()) {
            RatVec l0 = lineality[pivot];
            Rational w0 = lv[pivot];
            if (w0.sign() < 0) {
                for (auto& x : l0) x = -x;
                w0 = -w0;
            }
            std::vector<RatVec> newlin;
            for (size_t i = 0; i < lineality.size(); ++i) {
                if (i == pivot) continue;
                newlin.push_back(axpy(lineality[i], -(lv[i] / w0), l0));
            }
            lineality = std::move(newlin);
            for (size_t i = 0; i < rays.size(); ++i) {
                Rational w = inner(a, rays[i]);
                if (!w.is_zero()) rays[i] = axpy(rays[i], -(w / w0), l0);
                rays[i] = canonical_ray(rays[i]);
                zsets[i].push_back(1);
            }
            // The pivot becomes the one ray strict on this constraint.
            ZeroSet z(ri + 1, 1);
            z[ri] = 0;
            rays.push_back(canonical_ray(l0));
            zsets.push_back(std::move(z));
            continue;
        }

        std::vector<Rational> w(rays.size());
        bool any_neg = false;
        for (size_t i = 0; i < rays.size(); ++i) {
            w[i] = inner(a, rays[i]);
            if (w[i].sign() < 0) any_neg = true;
        }
        if (!any_neg) {
            for (size_t i = 0; i < rays.size(); ++i) zsets[i].push_back(w[i].is_zero() ? 1 : 0);
            continue;
        }

        auto adjacent = [&](size_t p, size_t q) {
            ZeroSet common(ri, 0);
            size_t count = 0;
            for (size_t t = 0; t < ri; ++t) {
                common[t] = zsets[p][t] && zsets[q][t];
                count += common[t];
            }
            (void)count;
            for (size_t o = 0; o < rays.size(); ++o) {
                if (o == p || o == q) continue;
                bool superset = true;
                for (size_t t = 0; t < ri && superset; ++t)
                    if (common[t] && !zsets[o][t]) superset = false;
                if (superset) return false;
            }
            return true;
        };

        std::vector<RatVec> keep;
        std::vector<ZeroSet> keepz;
        for (size_t i = 0; i < rays.size(); ++i) {
            if (w[i].sign() >= 0) {
                ZeroSet z = zsets[i];
                z.push_back(w[i].is_zero() ? 1 : 0);
                keep.push_back(rays[i]);
                keepz.push_back(std::move(z));
            }
        }
        for (size_t p = 0; p < rays.size(); ++p) {
            if (w[p].sign() <= 0) continue;
            for (size_t q = 0; q < rays.size(); ++q) {
                if (w[q].sign() >= 0) continue;
                if (!adjacent(p, q)) continue;
                // combination w_p * r_q - w_q * r_p (both coefficients positive)
                RatVec nr(dim, Rational(0));
                for (size_t j = 0; j < dim; ++j) nr[j] = w[p] * rays[q][j] - w[q] * rays[p][j];
                nr = canonical_ray(nr);
                if (is_zero_vec(nr)) continue;
                ZeroSet z(ri + 1, 0);
                for (size_t t = 0; t < ri; ++t) z[t] = zsets[p][t] && zsets[q][t];
                z[ri] = 1;
                bool dup = false;
                for (const auto& kr : keep)
                    if (kr == nr) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    keep.push_back(std::move(nr));
                    keepz.push_back(std::move(z));
                }
            }
        }
        rays = std::move(keep);
        zsets = std::move(keepz);
        if (rays.size() > 4 * kMaxGens) throw LimitError("cone: double description blew up");
    }

    DdResult out;
    out.lineality = std::move(lineality);
    out.rays = std::move(rays);
    return out;
}

// ---------------------------------------------------------------------------

TruncatedCone TruncatedCone::from_generators(size_t dim, std::vector<RatVec> gens) {
    if (gens.size() > kMaxGens) throw LimitError("cone: too many generators");
    TruncatedCone c;
    c.dim_ = dim;
    c.rep_ = ConeRep::generators;
    for (auto& g : gens)
        if (g.size() != dim) throw std::invalid_argument("cone: generator dimension mismatch");
    c.gens_ = std::move(gens);
    return c;
}

TruncatedCone TruncatedCone::from_halfspaces(size_t dim, std::vector<RatVec> rows) {
    TruncatedCone c;
    c.dim_ = dim;
    c.rep_ = ConeRep::halfspaces;
    for (auto& r : rows)
        if (r.size() != dim) throw std::invalid_argument("cone: halfspace dimension mismatch");
    c.rows_ = std::move(rows);
    return c;
}

TruncatedCone TruncatedCone::from_lexicographic(size_t dim, std::vector<RatVec> functionals) {
    TruncatedCone c;
    c.dim_ = dim;
    c.rep_ = ConeRep::lexicographic;
    c.lex_ = std::move(functionals);
    return c;
}

TruncatedCone TruncatedCone::from_sdp_slice(size_t dim, SdpSlice slice) {
    TruncatedCone c;
    c.dim_ = dim;
    c.rep_ = ConeRep::sdp_slice;
    c.slice_ = std::move(slice);
    return c;
}

void TruncatedCone::ensure_converted() const {
    if (converted_) return;
    auto* self = const_cast<TruncatedCone*>(this);
    if (rep_ == ConeRep::sdp_slice || rep_ == ConeRep::lexicographic)
        throw std::invalid_argument("cone: representation conversion unsupported for this kind");
    if (rep_ == ConeRep::halfspaces) {
        DdResult dd = dd_rays(dim_, rows_);
        self->lineality_ = dd.lineality;
        self->rays_ = dd.rays;
        self->gens_ = dd.rays;
        for (const auto& l : dd.lineality) {
            self->gens_.push_back(l);
            RatVec neg = l;
            for (auto& x : neg) x = -x;
            self->gens_.push_back(std::move(neg));
        }
    } else {
        // generators -> halfspaces: rows of C^v computed from the dual's
        // generator description; then C = {x : <w,x> >= 0 for those w}.
        DdResult dual = dd_rays(dim_, gens_);
        std::vector<RatVec> rows = dual.rays;
        for (const auto& l : dual.lineality) {
            rows.push_back(l);
            RatVec neg = l;
            for (auto& x : neg) x = -x;
            rows.push_back(std::move(neg));
        }
        self->rows_ = rows;
        DdResult dd = dd_rays(dim_, self->rows_);
        self->lineality_ = dd.lineality;
        self->rays_ = dd.rays;
    }
    self->converted_ = true;
}

const std::vector<RatVec>& TruncatedCone::generators() const {
    if (rep_ == ConeRep::generators) return gens_;
    ensure_converted();
    return gens_;
}

const std::vector<RatVec>& TruncatedCone::halfspaces() const {
    if (rep_ == ConeRep::halfspaces) return rows_;
    ensure_converted();
    return rows_;
}

const std::vector<RatVec>& TruncatedCone::lineality() const {
    ensure_converted();
    return lineality_;
}

const std::vector<RatVec>& TruncatedCone::extreme_rays() const {
    ensure_converted();
    return rays_;
}

bool TruncatedCone::member(const RatVec& v) const {
    if (v.size() != dim_) throw std::invalid_argument("cone: vector dimension mismatch");
    switch (rep_) {
        case ConeRep::halfspaces: {
            for (const auto& r : rows_)
                if (inner(r, v).sign() < 0) return false;
            return true;
        }
        case ConeRep::generators: {
            ensure_converted();
            for (const auto& r : rows_)
                if (inner(r, v).sign() < 0) return false;
            return true;
        }
        case ConeRep::lexicographic: {
            for (const auto& f : lex_) {
                int s = inner(f, v).sign();
                if (s > 0) return true;
                if (s < 0) return false;
            }
            return true;  // all zero
        }
        case ConeRep::sdp_slice: {
            SdpProblem p = slice_->base;
            for (size_t i = 0; i < slice_->proj.size(); ++i)
                p.constraints.push_back(SdpConstraint{slice_->proj[i], v[i].to_double()});
            return sdp_feasible(p).status == SdpStatus::feasible;
        }
    }
    return false;
}

TruncatedCone dual_cone(const TruncatedCone& c) {
    switch (c.rep()) {
        case ConeRep::generators:
            return TruncatedCone::from_halfspaces(c.dim(), c.generators());
        case ConeRep::halfspaces:
            // The dual of {x : Ax >= 0} is the cone generated by the rows.
            return TruncatedCone::from_generators(c.dim(), c.halfspaces());
        default:
            throw std::invalid_argument("dual_cone: unsupported representation");
    }
}

InteriorResult is_interior(const TruncatedCone& c, const RatVec& v) {
    if (c.rep() == ConeRep::sdp_slice || c.rep() == ConeRep::lexicographic)
        throw std::invalid_argument("is_interior: polyhedral representation required");
    TruncatedCone dual = dual_cone(c);
    // Nonzero lineality in C^v means C lies in a hyperplane: no interior.
    const auto& lin = dual.lineality();
    for (const auto& l : lin) {
        Rational val = inner(l, v);
        if (val.sign() <= 0) return {false, l};
        RatVec neg = l;
        for (auto& x : neg) x = -x;
        return {false, neg};  // one of +-l evaluates <= 0 (or both are 0)
    }
    for (const auto& w : dual.extreme_rays())
        if (inner(w, v).sign() <= 0) return {false, w};
    return {true, std::nullopt};
}

ShiftResult interior_shift(const TruncatedCone& c, const RatVec& q_interior,
                           const RatVec& v, const Rational& eps) {
    if (eps.sign() <= 0) return {ShiftOutcome::precondition_failed, "eps must be positive"};
    InteriorResult qi = is_interior(c, q_interior);
    if (!qi.interior) return {ShiftOutcome::precondition_failed, "q is not interior"};
    // v must lie in the closure (the polyhedral cone itself).
    for (const auto& r : c.halfspaces())
        if (inner(r, v).sign() < 0)
            return {ShiftOutcome::precondition_failed, "v is not in the closure"};
    RatVec shifted = axpy(v, eps, q_interior);
    InteriorResult si = is_interior(c, shifted);
    return {si.interior ? ShiftOutcome::holds : ShiftOutcome::fails,
            si.interior ? "interior" : "violating functional found"};
}

bool semispace_closed(const TruncatedCone& c) {
    if (c.rep() == ConeRep::lexicographic) {
        // C u -C = V holds for every lexicographic cone; the support is the
        // common kernel, so the quotient dimension is the functional rank.
        std::vector<RatVec> r = rref(c.lex_functionals());
        return r.size() <= 1;
    }
    if (c.rep() == ConeRep::sdp_slice)
        throw std::invalid_argument("semispace_closed: unsupported representation");
    // A closed cone satisfies C u -C = V iff it is the whole space or a
    // halfspace over its lineality: codim(lineality) = 0, or codim = 1 with
    // C strictly larger than the lineality.
    const auto& lin = c.lineality();
    size_t codim = c.dim() - lin.size();
    if (codim == 0) return true;
    if (codim == 1 && !c.extreme_rays().empty()) return true;
    throw std::invalid_argument("semispace_closed: hypothesis C u -C = V fails");
}

SeqClosureWitness seq_closure_member(const MembershipOracle& oracle, const RatVec& v,
                                     const RatVec& q, const std::vector<Rational>& eps_schedule) {
    for (size_t i = 1; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]))
            throw std::invalid_argument("seq_closure: eps schedule must be strictly decreasing");
    for (const auto& e : eps_schedule)
        if (e.sign() <= 0) throw std::invalid_argument("seq_closure: eps must be positive");
    SeqClosureWitness w;
    w.base = v;
    w.perturber = q;
    w.eps_schedule = eps_schedule;
    w.verdict = SeqVerdict::in_closure;
    for (const auto& eps : eps_schedule) {
        int r = oracle(axpy(v, eps, q));
        w.verdicts.push_back(r);
        if (r < 0) {
            w.verdict = SeqVerdict::inconclusive;
            break;
        }
        if (r == 0) {
            w.verdict = SeqVerdict::not_detected;
            break;
        }
    }
    return w;
}

ConeCanonical canonical_form(const TruncatedCone& c) {
    ConeCanonical out;
    out.lineality_rref = rref(c.lineality());
    std::vector<RatVec> reduced;
    for (const auto& r : c.extreme_rays()) {
        RatVec v = canonical_ray(reduce_mod_span(out.lineality_rref, r));
        if (!is_zero_vec(v)) reduced.push_back(std::move(v));
    }
    std::sort(reduced.begin(), reduced.end(), [](const RatVec& a, const RatVec& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
    out.rays = std::move(reduced);
    return out;
}

}  // namespace qmclose
