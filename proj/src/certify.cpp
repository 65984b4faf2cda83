#include "qmclose/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qmclose {

void split_monomial(const Monomial& m, int half, Monomial* b1, Monomial* b2) {
    int total = m.degree();
    if (total > 2 * half) throw std::invalid_argument("split_monomial: degree too large");
    Monomial lo{std::vector<int>(m.exps.size(), 0)};
    int want = total / 2;
    int got = 0;
    for (size_t i = 0; i < m.exps.size() && got < want; ++i) {
        int take = std::min(m.exps[i], want - got);
        lo.exps[i] = take;
        got += take;
    }
    Monomial hi = m;
    for (size_t i = 0; i < m.exps.size(); ++i) hi.exps[i] -= lo.exps[i];
    *b1 = std::move(lo);
    *b2 = std::move(hi);
}

namespace {

struct BlockLayout {
    std::map<Monomial, size_t, GradedLexLess> index;  // basis monomial -> position
    Monomial lead;                                    // leading monomial of the weight
    Rational lead_coeff;
    int half = 0;  // max degree of a basis monomial
};

Polynomial expand_block(const IdentityBlockSpec& spec, const RationalMatrix& g) {
    Polynomial sigma(spec.weight.vars());
    size_t n = spec.basis.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (g[i][j].is_zero()) continue;
            Monomial m = spec.basis[i];
            for (size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += spec.basis[j].exps[k];
            sigma.add_term(m, g[i][j]);
        }
    }
    return spec.weight * sigma;
}

}  // namespace

Polynomial expand_gram_identity(const GramIdentityProblem& prob,
                                const std::vector<RationalMatrix>& grams) {
    Polynomial acc(prob.vars);
    for (size_t b = 0; b < prob.blocks.size(); ++b)
        acc = acc + expand_block(prob.blocks[b], grams[b]);
    return acc;
}

GramIdentityResult solve_gram_identity(const GramIdentityProblem& prob,
                                       const Tolerances& tol, long long den_cap) {
    GramIdentityResult out;
    const int nvars = static_cast<int>(prob.vars.size());
    if (prob.target.degree() > prob.degree)
        throw std::invalid_argument("gram identity: target degree exceeds truncation");

    // Constraint rows, one per monomial of degree <= d.
    std::vector<Monomial> rows = monomial_basis(nvars, prob.degree);
    std::map<Monomial, size_t, GradedLexLess> row_of;
    for (size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
    out.constraint_monomials = rows;

    SdpProblem sdp;
    std::vector<BlockLayout> layout(prob.blocks.size());
    for (size_t b = 0; b < prob.blocks.size(); ++b) {
        const auto& spec = prob.blocks[b];
        if (spec.weight.is_zero()) throw std::invalid_argument("gram identity: zero block weight");
        if (spec.basis.empty()) throw std::invalid_argument("gram identity: empty block basis");
        sdp.block_sizes.push_back(static_cast<int>(spec.basis.size()));
        for (size_t i = 0; i < spec.basis.size(); ++i) {
            layout[b].index[spec.basis[i]] = i;
            layout[b].half = std::max(layout[b].half, spec.basis[i].degree());
        }
        if (2 * layout[b].half + spec.weight.degree() > prob.degree)
            throw std::invalid_argument("gram identity: block exceeds truncation degree");
        layout[b].lead = spec.weight.terms().rbegin()->first;
        layout[b].lead_coeff = spec.weight.terms().rbegin()->second;
    }

    std::vector<SdpConstraint> cons(rows.size());
    for (size_t b = 0; b < prob.blocks.size(); ++b) {
        const auto& spec = prob.blocks[b];
        size_t nb = spec.basis.size();
        for (size_t i = 0; i < nb; ++i) {
            for (size_t j = i; j < nb; ++j) {
                Monomial bij = spec.basis[i];
                for (size_t k = 0; k < bij.exps.size(); ++k) bij.exps[k] += spec.basis[j].exps[k];
                for (const auto& [delta, c] : spec.weight.terms()) {
                    Monomial m = bij;
                    for (size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += delta.exps[k];
                    auto it = row_of.find(m);
                    if (it == row_of.end()) continue;  // unreachable after degree validation
                    double w = c.to_double() * (i == j ? 1.0 : 2.0);
                    cons[it->second].entries.push_back(
                        SdpEntry{static_cast<int>(b), static_cast<int>(i), static_cast<int>(j), w});
                }
            }
        }
    }
    for (size_t r = 0; r < rows.size(); ++r) cons[r].rhs = prob.target.coeff(rows[r]).to_double();

    // Empty rows decide immediately: 0 = rhs.
    SdpProblem pruned;
    pruned.block_sizes = sdp.block_sizes;
    std::vector<size_t> kept_rows;
    for (size_t r = 0; r < rows.size(); ++r) {
        if (cons[r].entries.empty()) {
            if (std::fabs(cons[r].rhs) > 0) {
                out.solver_status = SdpStatus::infeasible;
                out.dual_ray.assign(rows.size(), 0.0);
                out.dual_ray[r] = cons[r].rhs > 0 ? 1.0 : -1.0;
                out.ray_margin = std::fabs(cons[r].rhs);
                out.ray_psd_slack = 0.0;
                out.note = "coefficient unreachable at this truncation";
                return out;
            }
            continue;
        }
        pruned.constraints.push_back(cons[r]);
        kept_rows.push_back(r);
    }

    SdpSolution sol = sdp_feasible(pruned, tol);
    out.solver_status = sol.status;
    out.iterations = sol.iterations;
    out.note = sol.note;
    if (sol.status == SdpStatus::infeasible) {
        out.dual_ray.assign(rows.size(), 0.0);
        for (size_t i = 0; i < kept_rows.size(); ++i) out.dual_ray[kept_rows[i]] = sol.dual_ray[i];
        out.ray_margin = sol.ray_margin;
        out.ray_psd_slack = sol.ray_psd_slack;
        return out;
    }
    if (sol.status != SdpStatus::feasible && sol.blocks.empty()) return out;

    // Rationalize, then repair the identity exactly: walk monomials from the
    // top of the graded-lex order; each fixup only disturbs strictly smaller
    // monomials, so one pass zeroes the defect.  Coarser denominator caps
    // snap near-boundary entries onto the exact simple rationals, so the
    // ladder below handles thin feasible sets with rational solutions.
    auto attempt = [&](long long cap, std::vector<RationalMatrix>* grams, double* mineig) {
        grams->assign(prob.blocks.size(), RationalMatrix());
        for (size_t b = 0; b < prob.blocks.size(); ++b) {
            size_t nb = prob.blocks[b].basis.size();
            (*grams)[b].assign(nb, std::vector<Rational>(nb));
            for (size_t i = 0; i < nb; ++i) {
                for (size_t j = i; j < nb; ++j) {
                    Rational v;
                    if (!Rational::rationalize(sol.blocks[b](i, j), cap, &v)) return false;
                    (*grams)[b][i][j] = v;
                    (*grams)[b][j][i] = v;
                }
            }
        }
        Polynomial defect = prob.target - expand_gram_identity(prob, *grams);
        for (size_t r = rows.size(); r-- > 0;) {
            const Monomial& alpha = rows[r];
            Rational c = defect.coeff(alpha);
            if (c.is_zero()) continue;
            // Candidate slots across blocks; prefer diagonal adjustments on
            // healthy diagonals so boundary rows stay positive semidefinite.
            size_t best_b = prob.blocks.size();
            size_t best_i = 0, best_j = 0;
            Monomial best_gamma;
            double best_score = -1e300;
            for (size_t b = 0; b < prob.blocks.size(); ++b) {
                const Monomial& lead = layout[b].lead;
                bool divisible = true;
                Monomial gamma = alpha;
                for (size_t k = 0; k < alpha.exps.size(); ++k) {
                    gamma.exps[k] -= lead.exps[k];
                    if (gamma.exps[k] < 0) divisible = false;
                }
                if (!divisible || gamma.degree() > 2 * layout[b].half) continue;
                auto consider = [&](const Monomial& b1, const Monomial& b2) {
                    auto i1 = layout[b].index.find(b1);
                    auto i2 = layout[b].index.find(b2);
                    if (i1 == layout[b].index.end() || i2 == layout[b].index.end()) return;
                    double d1 = (*grams)[b][i1->second][i1->second].to_double();
                    double d2 = (*grams)[b][i2->second][i2->second].to_double();
                    double score = (i1->second == i2->second ? 1e6 : 0.0) + std::min(d1, d2);
                    if (score > best_score) {
                        best_score = score;
                        best_b = b;
                        best_i = i1->second;
                        best_j = i2->second;
                        best_gamma = gamma;
                    }
                };
                bool all_even = true;
                for (int e : gamma.exps)
                    if (e % 2) all_even = false;
                if (all_even) {
                    Monomial half_m = gamma;
                    for (auto& e : half_m.exps) e /= 2;
                    consider(half_m, half_m);
                }
                Monomial b1, b2;
                split_monomial(gamma, layout[b].half, &b1, &b2);
                consider(b1, b2);
            }
            if (best_b == prob.blocks.size()) return false;
            Rational adj = c / layout[best_b].lead_coeff;
            Polynomial delta_poly =
                prob.blocks[best_b].weight * Polynomial::monomial_term(prob.vars, best_gamma, adj);
            if (best_i == best_j) {
                (*grams)[best_b][best_i][best_i] += adj;
            } else {
                Rational half_adj = adj / Rational(2);
                (*grams)[best_b][best_i][best_j] += half_adj;
                (*grams)[best_b][best_j][best_i] += half_adj;
            }
            defect = defect - delta_poly;
        }
        if (!defect.is_zero()) throw std::logic_error("gram identity: correction left a defect");

        double meig = 0.0;
        bool first = true;
        for (size_t b = 0; b < prob.blocks.size(); ++b) {
            size_t nb = (*grams)[b].size();
            if (nb == 0) continue;
            Mat m(nb, nb);
            for (size_t i = 0; i < nb; ++i)
                for (size_t j = 0; j < nb; ++j) m(i, j) = (*grams)[b][i][j].to_double();
            double e = jacobi_eigensym(m).values.front();
            meig = first ? e : std::min(meig, e);
            first = false;
        }
        *mineig = meig;
        return meig >= -tol.psd;
    };

    for (long long cap : {den_cap, den_cap / 100, 10000LL, 1000LL, 100LL, 24LL, 8LL, 2LL}) {
        if (cap < 1) continue;
        std::vector<RationalMatrix> grams;
        double meig = 0;
        if (attempt(cap, &grams, &meig)) {
            out.grams = std::move(grams);
            out.mineig = meig;
            out.residual = Rational(0);
            out.exact = true;
            // The exact rational identity stands on its own, whatever the
            // floating solve reported.
            out.solver_status = SdpStatus::feasible;
            return out;
        }
    }
    out.note = "rationalized grams lost positive semidefiniteness at every denominator cap";
    out.solver_status = SdpStatus::inconclusive;
    return out;
}

}  // namespace qmclose
