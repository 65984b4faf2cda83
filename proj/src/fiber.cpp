#include "qmclose/fiber.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmclose {

namespace {

std::vector<Rational> default_bound_schedule() {
    return {Rational(0),      Rational(1, 4),  Rational(-1, 4), Rational(1, 2), Rational(-1, 2),
            Rational(1),      Rational(-1),    Rational(2),     Rational(-2),   Rational(4),
            Rational(-4)};
}

BoundSideResult certify_side(const Polynomial& target, const QuadraticModuleSpec& M, int d,
                             const Tolerances& tol, bool allow_seq) {
    BoundSideResult out;
    MemberResult r = member(target, M, d, tol);
    if (r.status == MemberStatus::member) {
        out.certified = true;
        out.certificate = r.certificate;
        return out;
    }
    out.note = r.note;
    if (!allow_seq) return out;
    int e = target.degree() / 2 + 1;
    if (2 * e > d) return out;
    std::vector<Rational> schedule = {Rational(1), Rational(1, 10), Rational(1, 100)};
    SeqMemberResult sq = seq_member(target, M, d, e, schedule, tol);
    if (sq.in_closure_at_schedule) {
        out.certified = true;
        out.via_seq = true;
        out.seq = std::move(sq);
    }
    return out;
}

}  // namespace

BoundedElementWitness certify_bounds(const Polynomial& f, const QuadraticModuleSpec& M,
                                     const Rational& a, const Rational& b, int d,
                                     const Tolerances& tol, bool allow_seq) {
    if (b < a) throw std::invalid_argument("certify_bounds: need a <= b");
    BoundedElementWitness w;
    w.f = f;
    w.a = a;
    w.b = b;
    Polynomial bp = Polynomial::constant(M.vars, b) - f;
    Polynomial ap = f - Polynomial::constant(M.vars, a);
    w.upper = certify_side(bp, M, d, tol, allow_seq);
    w.lower = certify_side(ap, M, d, tol, allow_seq);
    return w;
}

FiberDecomposition fiber_decompose(const QuadraticModuleSpec& M, const std::string& var,
                                   const Rational& a, const Rational& b, int grid_size) {
    if (grid_size < 1) throw std::invalid_argument("fiber_decompose: grid_size must be >= 1");
    auto it = std::find(M.vars.begin(), M.vars.end(), var);
    if (it == M.vars.end()) throw std::invalid_argument("fiber_decompose: unknown coordinate " + var);
    FiberDecomposition out;
    out.base = M;
    out.var = var;
    out.a = a;
    out.b = b;
    if (a == b || grid_size == 1) {
        out.grid.push_back(a);
    } else {
        for (int j = 0; j < grid_size; ++j)
            out.grid.push_back(a + (b - a) * Rational(j, grid_size - 1));
    }
    std::vector<std::string> rest = M.vars;
    rest.erase(std::find(rest.begin(), rest.end(), var));
    for (const auto& lambda : out.grid) {
        QuadraticModuleSpec fib;
        fib.vars = rest;
        fib.kind = M.kind;
        fib.name = M.name.empty() ? "" : M.name + "|" + var + "=" + lambda.to_string();
        for (const auto& g : M.generators) fib.generators.push_back(g.substitute(var, lambda));
        out.fibers.push_back(std::move(fib));
    }
    return out;
}

FiberMemberResult fiber_member(const Polynomial& f_test, const FiberDecomposition& decomp, int d,
                               const Tolerances& tol) {
    FiberMemberResult out;
    out.member_on_all_grid_fibers = true;
    for (size_t i = 0; i < decomp.fibers.size(); ++i) {
        Polynomial sub = f_test.substitute(decomp.var, decomp.grid[i]);
        MemberResult r = member(sub, decomp.fibers[i], d, tol);
        out.per_fiber.push_back(r.status);
        if (r.status != MemberStatus::member && out.member_on_all_grid_fibers) {
            out.member_on_all_grid_fibers = false;
            out.first_failure = i;
        }
    }
    return out;
}

namespace {

struct BoundsSearchOutcome {
    bool found = false;
    Rational a, b;
    bool overridden = false;
};

// Tightest certifiable bounds from the schedule: smallest upper bound b
// with b - x in M (or its sequential closure), largest lower bound a.
BoundsSearchOutcome search_coordinate_bounds(const QuadraticModuleSpec& M, size_t var_index,
                                             const WeakClosureOptions& opts) {
    Polynomial x = Polynomial::variable(M.vars, var_index);
    std::vector<Rational> sched =
        opts.bound_schedule.empty() ? default_bound_schedule() : opts.bound_schedule;
    std::sort(sched.begin(), sched.end());

    BoundsSearchOutcome out;
    bool have_b = false;
    Rational bbest;
    for (const auto& b : sched) {  // ascending: first success is tightest
        BoundSideResult r = certify_side(Polynomial::constant(M.vars, b) - x, M, opts.d, opts.tol,
                                         opts.allow_seq_bounds);
        if (r.certified) {
            bbest = b;
            have_b = true;
            break;
        }
    }
    if (!have_b) return out;
    bool have_a = false;
    Rational abest;
    for (auto it = sched.rbegin(); it != sched.rend(); ++it) {  // descending
        if (bbest < *it) continue;
        BoundSideResult r = certify_side(x - Polynomial::constant(M.vars, *it), M, opts.d, opts.tol,
                                         opts.allow_seq_bounds);
        if (r.certified) {
            abest = *it;
            have_a = true;
            break;
        }
    }
    if (!have_a) return out;
    out.found = true;
    out.a = abest;
    out.b = bbest;
    return out;
}

WeakClosureResult weak_rec(const Polynomial& f_test, const QuadraticModuleSpec& M,
                           const WeakClosureOptions& opts, int depth) {
    WeakClosureResult out;
    out.trace = std::make_shared<WeakClosureTrace>();
    out.trace->module_name = M.name;
    out.trace->vars = M.vars;
    for (const auto& g : M.generators) out.trace->generators.push_back(g.to_string());
    out.trace->depth = depth;

    // Improper fiber: a certified negative constant makes everything a
    // member; member() emits the explicit certificate.
    for (const auto& g : M.generators) {
        if (g.is_constant() && !g.is_zero() && g.terms().begin()->second.sign() < 0) {
            out.trace->case_taken = "improper";
            MemberResult r = member(f_test, M, std::max(opts.d, 2 * ((f_test.degree() + 1) / 2)),
                                    opts.tol);
            out.trace->leaf_status = r.status;
            out.trace->note = "negative constant generator; -1 in module after scaling";
            out.verdict = r.status == MemberStatus::member ? WeakClosureVerdict::member_at_grid
                                                           : WeakClosureVerdict::no_certificate;
            return out;
        }
    }

    // Direct membership suffices at any node: the module sits inside its
    // weak closure, so fibering is only needed when this fails.
    MemberResult direct = member(f_test, M, opts.d, opts.tol);
    if (direct.status == MemberStatus::member) {
        out.trace->case_taken = "direct_member";
        out.trace->leaf_status = direct.status;
        out.verdict = WeakClosureVerdict::member_at_grid;
        return out;
    }

    if (depth < 0) {
        out.verdict = WeakClosureVerdict::depth_exhausted;
        out.trace->case_taken = "depth_exhausted";
        return out;
    }

    // Lowest-index certified bounded coordinate (deterministic choice).
    size_t chosen = M.vars.size();
    BoundsSearchOutcome bounds;
    for (size_t vi = 0; vi < M.vars.size(); ++vi) {
        for (const auto& ov : opts.overrides) {
            if (ov.var == M.vars[vi]) {
                bounds.found = true;
                bounds.a = ov.a;
                bounds.b = ov.b;
                bounds.overridden = true;
                chosen = vi;
                break;
            }
        }
        if (bounds.found) break;
        BoundsSearchOutcome s = search_coordinate_bounds(M, vi, opts);
        if (s.found) {
            bounds = s;
            chosen = vi;
            break;
        }
    }

    if (chosen == M.vars.size()) {
        out.trace->case_taken = "no_bounded_coordinate";
        out.trace->note = "weak closure equals the module at this node";
        out.trace->leaf_status = direct.status;
        out.verdict = WeakClosureVerdict::no_certificate;
        return out;
    }

    out.trace->case_taken = "fibered";
    out.trace->chosen_var = M.vars[chosen];
    out.trace->a = bounds.a;
    out.trace->b = bounds.b;
    out.trace->interval_overridden = bounds.overridden;

    // Eligibility probe at the midpoint: a certified support member means
    // the coordinate sits in R + support and fibers degenerate; recorded,
    // then the grid handles it anyway.
    Rational mid = (bounds.a + bounds.b) / Rational(2);
    Polynomial probe = Polynomial::variable(M.vars, chosen) - Polynomial::constant(M.vars, mid);
    auto sup = support_probe(M, opts.d, {probe}, opts.tol);
    out.trace->midpoint_support_probe_certified = !sup.empty();

    FiberDecomposition dec =
        fiber_decompose(M, M.vars[chosen], bounds.a, bounds.b, bounds.a == bounds.b ? 1 : opts.grid_size);
    out.trace->grid = dec.grid;
    out.verdict = WeakClosureVerdict::member_at_grid;
    for (size_t i = 0; i < dec.fibers.size(); ++i) {
        Polynomial sub = f_test.substitute(dec.var, dec.grid[i]);
        WeakClosureResult child = weak_rec(sub, dec.fibers[i], opts, depth - 1);
        out.trace->children.push_back(child.trace);
        if (child.verdict != WeakClosureVerdict::member_at_grid &&
            out.verdict == WeakClosureVerdict::member_at_grid) {
            out.verdict = child.verdict == WeakClosureVerdict::depth_exhausted
                              ? WeakClosureVerdict::depth_exhausted
                              : WeakClosureVerdict::no_certificate;
            out.failed_at = dec.grid[i];
        }
    }
    return out;
}

}  // namespace

WeakClosureResult weak_closure_member(const Polynomial& f_test, const QuadraticModuleSpec& M,
                                      const WeakClosureOptions& opts) {
    if (opts.depth_limit < 0) throw std::invalid_argument("weak_closure: depth_limit must be >= 0");
    return weak_rec(f_test, M, opts, opts.depth_limit);
}

}  // namespace qmclose
