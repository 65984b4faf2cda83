#include "qmclose/qmodule.hpp"

#include "qmclose/cone.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qmclose {

std::vector<Polynomial> QuadraticModuleSpec::working_generators(int d) const {
    std::vector<Polynomial> out;
    out.push_back(Polynomial::constant(vars, Rational(1)));
    if (kind == ModuleKind::quadratic_module) {
        for (const auto& g : generators)
            if (!g.is_zero()) out.push_back(g);
        return out;
    }
    if (generators.size() > 12) throw LimitError("preordering: too many generators to close under products");
    size_t s = generators.size();
    std::set<std::string> seen;
    for (size_t mask = 1; mask < (1u << s); ++mask) {
        Polynomial prod = Polynomial::constant(vars, Rational(1));
        int deg = 0;
        bool ok = true;
        for (size_t i = 0; i < s && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            if (generators[i].is_zero()) {
                ok = false;
                break;
            }
            deg += generators[i].degree();
            if (deg > d) ok = false;
            else prod = prod * generators[i];
        }
        if (!ok) continue;
        std::string key = prod.to_string();
        if (seen.insert(key).second) out.push_back(std::move(prod));
    }
    return out;
}

namespace {

// Blocks of the membership identity f = sum sigma_i g_i at degree d:
// sigma_i ranges over SOS of degree <= 2*floor((d - deg g_i)/2).
std::vector<IdentityBlockSpec> membership_blocks(const QuadraticModuleSpec& M, int d,
                                                 std::vector<Polynomial>* gens_out) {
    std::vector<IdentityBlockSpec> blocks;
    std::vector<Polynomial> gens = M.working_generators(d);
    for (const auto& g : gens) {
        if (g.degree() > d) continue;
        int half = (d - g.degree()) / 2;
        IdentityBlockSpec spec;
        spec.weight = g;
        spec.basis = monomial_basis(static_cast<int>(M.vars.size()), half);
        blocks.push_back(std::move(spec));
        if (gens_out) gens_out->push_back(g);
    }
    return blocks;
}

MembershipCertificate certificate_from(const GramIdentityResult& res,
                                       const std::vector<IdentityBlockSpec>& blocks, int d,
                                       const Tolerances& tol) {
    MembershipCertificate cert;
    cert.degree = d;
    cert.tol = tol;
    cert.residual = res.residual;
    cert.mineig = res.mineig;
    for (size_t b = 0; b < blocks.size(); ++b) {
        GramBlockCert gb;
        gb.generator = blocks[b].weight;
        gb.basis = blocks[b].basis;
        gb.gram = res.grams[b];
        cert.blocks.push_back(std::move(gb));
    }
    return cert;
}

// Exact certificate for a module containing a negative constant: any f of
// suitable degree is sigma_0 + sigma * (-v) with sigma_0 = f + t*g^e made
// diagonally dominant.
std::optional<MembershipCertificate> improper_certificate(const Polynomial& f,
                                                          const QuadraticModuleSpec& M, int d,
                                                          const Tolerances& tol) {
    int neg_idx = -1;
    for (size_t i = 0; i < M.generators.size(); ++i) {
        const auto& g = M.generators[i];
        if (g.is_constant() && !g.is_zero() && g.terms().begin()->second.sign() < 0) {
            neg_idx = static_cast<int>(i);
            break;
        }
    }
    if (neg_idx < 0) return std::nullopt;
    int e = std::max(1, (std::max(f.degree(), 0) + 1) / 2);
    if (2 * e > d) return std::nullopt;
    int n = static_cast<int>(M.vars.size());
    std::vector<Monomial> basis = monomial_basis(n, e);
    std::map<Monomial, size_t, GradedLexLess> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;

    size_t nb = basis.size();
    RationalMatrix gf(nb, std::vector<Rational>(nb));
    for (const auto& [m, c] : f.terms()) {
        Monomial b1, b2;
        split_monomial(m, e, &b1, &b2);
        size_t i = index.at(b1), j = index.at(b2);
        if (i == j) {
            gf[i][i] += c;
        } else {
            Rational h = c / Rational(2);
            gf[i][j] += h;
            gf[j][i] += h;
        }
    }
    Polynomial ge = perturber(M.vars, e);
    std::vector<Rational> diag(nb);
    for (size_t i = 0; i < nb; ++i) {
        Monomial sq = basis[i];
        for (auto& x : sq.exps) x *= 2;
        diag[i] = ge.coeff(sq);  // multinomial coefficient, >= 1
    }
    // Diagonal dominance: t * diag_i >= sum_j |gf[i][j]| + margin.
    Rational t(0);
    for (size_t i = 0; i < nb; ++i) {
        Rational rowsum(1);
        for (size_t j = 0; j < nb; ++j) rowsum += gf[i][j].abs();
        Rational need = rowsum / diag[i];
        if (t < need) t = need;
    }
    Rational v = -M.generators[static_cast<size_t>(neg_idx)].terms().begin()->second;  // v > 0

    MembershipCertificate cert;
    cert.degree = d;
    cert.tol = tol;
    cert.residual = Rational(0);
    // sigma_0 = f + t*g^e in the degree-e basis.
    GramBlockCert b0;
    b0.generator = Polynomial::constant(M.vars, Rational(1));
    b0.basis = basis;
    b0.gram = gf;
    for (size_t i = 0; i < nb; ++i) b0.gram[i][i] += t * diag[i];
    // sigma for the negative-constant generator: (t/v) * g^e, diagonal.
    GramBlockCert bn;
    bn.generator = M.generators[static_cast<size_t>(neg_idx)];
    bn.basis = basis;
    bn.gram.assign(nb, std::vector<Rational>(nb));
    Rational tv = t / v;
    for (size_t i = 0; i < nb; ++i) bn.gram[i][i] = tv * diag[i];
    cert.blocks.push_back(std::move(b0));
    cert.blocks.push_back(std::move(bn));

    double meig = 0;  // diagonally dominant by construction; recompute anyway
    for (const auto& blk : cert.blocks) {
        Mat m(nb, nb);
        for (size_t i = 0; i < nb; ++i)
            for (size_t j = 0; j < nb; ++j) m(i, j) = blk.gram[i][j].to_double();
        meig = std::min(meig, jacobi_eigensym(m).values.front());
    }
    cert.mineig = meig;
    return cert;
}

}  // namespace

Polynomial MembershipCertificate::expand(const std::vector<std::string>& vars) const {
    Polynomial acc(vars);
    for (const auto& blk : blocks) {
        Polynomial sigma(vars);
        size_t nb = blk.basis.size();
        for (size_t i = 0; i < nb; ++i)
            for (size_t j = 0; j < nb; ++j) {
                if (blk.gram[i][j].is_zero()) continue;
                Monomial m = blk.basis[i];
                for (size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += blk.basis[j].exps[k];
                sigma.add_term(m, blk.gram[i][j]);
            }
        acc = acc + sigma * blk.generator;
    }
    return acc;
}

MemberResult member(const Polynomial& f, const QuadraticModuleSpec& M, int d,
                    const Tolerances& tol) {
    if (f.vars() != M.vars) throw std::invalid_argument("member: variable set mismatch");
    if (f.degree() > d) throw std::invalid_argument("member: deg f exceeds truncation degree");
    MemberResult out;

    if (f.is_zero()) {
        // 0 = empty combination.
        out.status = MemberStatus::member;
        MembershipCertificate cert;
        cert.degree = d;
        cert.tol = tol;
        cert.residual = Rational(0);
        cert.mineig = 0.0;
        out.certificate = std::move(cert);
        out.note = "zero polynomial";
        return out;
    }
    if (auto cert = improper_certificate(f, M, d, tol)) {
        out.status = MemberStatus::member;
        out.certificate = std::move(*cert);
        out.note = "module contains a negative constant; explicit certificate";
        return out;
    }

    // Monotonicity in the truncation degree: a certificate at any d' <= d
    // pads to one at d.  Scanning upward also lands on the small thin
    // problems whose unique solutions rationalize exactly.
    GramIdentityResult res;
    std::vector<int> last_shape;
    for (int dd = std::max(f.degree(), 0); dd <= d; ++dd) {
        GramIdentityProblem prob;
        prob.vars = M.vars;
        prob.target = f;
        prob.degree = dd;
        prob.blocks = membership_blocks(M, dd, nullptr);
        if (prob.blocks.empty()) continue;
        std::vector<int> shape;
        for (const auto& b : prob.blocks) shape.push_back(static_cast<int>(b.basis.size()));
        if (dd < d && shape == last_shape) continue;  // identical subproblem
        last_shape = shape;
        res = solve_gram_identity(prob, tol);
        out.iterations += res.iterations;
        if (res.solver_status == SdpStatus::feasible && res.exact) {
            out.status = MemberStatus::member;
            out.certificate = certificate_from(res, prob.blocks, d, tol);
            out.note = res.note;
            return out;
        }
        if (dd == d) break;
    }
    out.note = res.note;
    switch (res.solver_status) {
        case SdpStatus::feasible:
            out.status = MemberStatus::no_certificate_at_d;
            break;
        case SdpStatus::infeasible: {
            out.status = MemberStatus::infeasible_at_d;
            DualRayCert ray;
            ray.monomials = res.constraint_monomials;
            ray.values = res.dual_ray;
            ray.margin = res.ray_margin;
            ray.psd_slack = res.ray_psd_slack;
            out.ray = std::move(ray);
            break;
        }
        case SdpStatus::inconclusive:
            out.status = MemberStatus::no_certificate_at_d;
            break;
    }
    return out;
}

SeqMemberResult seq_member(const Polynomial& f, const QuadraticModuleSpec& M, int d, int e,
                           const std::vector<Rational>& eps_schedule, const Tolerances& tol) {
    if (2 * e <= f.degree()) throw std::invalid_argument("seq_member: need 2e > deg f");
    if (2 * e > d) throw std::invalid_argument("seq_member: degree d too small for f + eps*g^e");
    SeqMemberResult out;
    out.e = e;
    out.eps_schedule = eps_schedule;
    Polynomial ge = perturber(M.vars, e);
    out.in_closure_at_schedule = true;
    for (const auto& eps : eps_schedule) {
        if (eps.sign() <= 0) throw std::invalid_argument("seq_member: eps must be positive");
        MemberResult r = member(f + ge.scale(eps), M, d, tol);
        out.per_eps.push_back(r.status);
        if (r.status == MemberStatus::member) {
            out.last_certificate = r.certificate;
        } else {
            out.in_closure_at_schedule = false;
            out.note = "failed at eps = " + eps.to_string() + " (" + r.note + ")";
            break;
        }
    }
    return out;
}

PosSemiResult pos_semiordering(const Polynomial& f, const QuadraticModuleSpec& M, int d,
                               int m_max, const Tolerances& tol) {
    if (f.vars() != M.vars) throw std::invalid_argument("pos_semiordering: variable set mismatch");
    PosSemiResult out;
    if (f.is_zero()) {
        // p = 1, q = 0, m arbitrary: 0 = 0 + 0.
        out.status = MemberStatus::member;
        PosYCertificate cert;
        cert.m = 1;
        cert.p_block.generator = Polynomial::constant(M.vars, Rational(1));
        cert.p_block.basis = monomial_basis(static_cast<int>(M.vars.size()), 0);
        cert.p_block.gram = {{Rational(1)}};
        cert.q_cert.degree = d;
        cert.q_cert.tol = tol;
        cert.residual = Rational(0);
        out.certificate = std::move(cert);
        return out;
    }
    int degf = f.degree();
    bool any_fit = false;
    for (int m = 1; m <= m_max; ++m) {
        if (2 * m * degf > d) break;
        any_fit = true;
        // Identity p*f - sum sigma_i g_i = f^{2m}; block weights: f for the
        // p Gram, -g_i for the module part.
        GramIdentityProblem prob;
        prob.vars = M.vars;
        prob.degree = d;
        prob.target = f.pow(static_cast<unsigned>(2 * m));

        std::vector<IdentityBlockSpec> qblocks = membership_blocks(M, d, nullptr);
        IdentityBlockSpec pblock;
        pblock.weight = f;
        pblock.basis = monomial_basis(static_cast<int>(M.vars.size()), (d - degf) / 2);
        prob.blocks.push_back(pblock);
        for (auto& qb : qblocks) {
            qb.weight = -qb.weight;
            prob.blocks.push_back(qb);
        }

        GramIdentityResult res = solve_gram_identity(prob, tol);
        if (res.solver_status == SdpStatus::feasible && res.exact) {
            out.status = MemberStatus::member;
            PosYCertificate cert;
            cert.m = m;
            cert.p_block.generator = f;
            cert.p_block.basis = prob.blocks[0].basis;
            cert.p_block.gram = res.grams[0];
            cert.q_cert.degree = d;
            cert.q_cert.tol = tol;
            cert.q_cert.residual = Rational(0);
            cert.q_cert.mineig = res.mineig;
            for (size_t b = 1; b < prob.blocks.size(); ++b) {
                GramBlockCert gb;
                gb.generator = -prob.blocks[b].weight;  // original g_i
                gb.basis = prob.blocks[b].basis;
                gb.gram = res.grams[b];
                cert.q_cert.blocks.push_back(std::move(gb));
            }
            cert.residual = res.residual;
            out.certificate = std::move(cert);
            out.note = "m = " + std::to_string(m);
            return out;
        }
        if (res.solver_status == SdpStatus::infeasible)
            out.note += "m=" + std::to_string(m) + " infeasible; ";
        else
            out.note += "m=" + std::to_string(m) + " " + res.note + "; ";
    }
    if (!any_fit) throw std::invalid_argument("pos_semiordering: f^{2m} exceeds degree d for all m");
    out.status = MemberStatus::no_certificate_at_d;
    return out;
}

PowerCertificates bounded_power_certificates(const Polynomial& p, const Polynomial& q,
                                             const Polynomial& f, const Rational& ell, int i_max) {
    const auto& vars = p.vars();
    Polynomial one = Polynomial::constant(vars, Rational(1));
    Rational ell2 = ell * ell;
    // Precondition: (l^2 - f^2) p = 1 + q exactly.
    Polynomial lhs = (one.scale(ell2) - f * f) * p;
    if (lhs != one + q)
        throw std::invalid_argument("bounded_power_certificates: identity (l^2-f^2)p = 1+q fails");

    PowerCertificates out;
    // claim1, i = 1: l^2 p - f^2 p = 1 + q  ->  1*1 + 1*q.
    std::vector<PowerCertPair> c1 = {{one, one}, {one, q}};
    Polynomial t1 = lhs;
    // l^2 p - 1 = q + f^2 p, used by claim2.
    std::vector<PowerCertPair> l2p_minus_1 = {{one, q}, {f * f * p, one}};
    for (int i = 1; i <= i_max; ++i) {
        out.claim1.push_back(c1);
        out.claim1_targets.push_back(t1);

        Polynomial f2i = f.pow(static_cast<unsigned>(2 * i));
        // claim2(i): l^{2i+2} p - f^{2i} = l^2 * claim1(i) + f^{2i} * (l^2 p - 1)
        std::vector<PowerCertPair> c2;
        for (const auto& pr : c1) c2.push_back({pr.sos_weight.scale(ell2), pr.module_element});
        for (const auto& pr : l2p_minus_1) c2.push_back({f2i * pr.sos_weight, pr.module_element});
        out.claim2.push_back(c2);
        out.claim2_targets.push_back(p.scale(ell2.pow(static_cast<unsigned>(i + 1))) - f2i);

        // claim1(i+1) = l^2 * claim1(i) + f^{2i} * (1 + q)
        std::vector<PowerCertPair> next;
        for (const auto& pr : c1) next.push_back({pr.sos_weight.scale(ell2), pr.module_element});
        next.push_back({f2i, one});
        next.push_back({f2i, q});
        c1 = std::move(next);
        t1 = (p.scale(ell2.pow(static_cast<unsigned>(i + 1))) -
              f.pow(static_cast<unsigned>(2 * i + 2)) * p);
    }
    return out;
}

ArchimedeanResult archimedean_probe(const QuadraticModuleSpec& M,
                                    const std::vector<Rational>& k_schedule, int d,
                                    const Tolerances& tol) {
    ArchimedeanResult out;
    Polynomial sumx2 = Polynomial(M.vars);
    for (size_t i = 0; i < M.vars.size(); ++i) {
        Polynomial xi = Polynomial::variable(M.vars, i);
        sumx2 = sumx2 + xi * xi;
    }
    for (const auto& k : k_schedule) {
        Polynomial target = Polynomial::constant(M.vars, k) - sumx2;
        MemberResult r = member(target, M, d, tol);
        out.probes.emplace_back(k, r.status);
        if (r.status == MemberStatus::member) {
            out.certified = true;
            out.k = k;
            out.certificate = r.certificate;
            return out;
        }
    }
    return out;
}

std::vector<SupportCertification> support_probe(const QuadraticModuleSpec& M, int d,
                                                const std::vector<Polynomial>& candidates,
                                                const Tolerances& tol) {
    std::vector<SupportCertification> out;
    for (const auto& h : candidates) {
        if (h.degree() > d) continue;
        MemberResult pos = member(h, M, d, tol);
        if (pos.status != MemberStatus::member) continue;
        MemberResult neg = member(-h, M, d, tol);
        if (neg.status != MemberStatus::member) continue;
        out.push_back(SupportCertification{h, *pos.certificate, *neg.certificate});
    }
    return out;
}

QuadraticModuleSpec stable_closure(const QuadraticModuleSpec& M,
                                   const std::vector<Polynomial>& radical_gens) {
    QuadraticModuleSpec out = M;
    for (const auto& r : radical_gens) {
        out.generators.push_back(r);
        out.generators.push_back(-r);
    }
    if (!radical_gens.empty() && !out.name.empty()) out.name += "+radical";
    return out;
}

// ---------------------------------------------------------------------------
// poly_stability

namespace {

struct LinearForm {
    Rational constant;
    std::vector<Rational> coeffs;
};

bool extract_linear(const Polynomial& g, LinearForm* out) {
    if (g.degree() > 1) return false;
    out->constant = Rational(0);
    out->coeffs.assign(g.vars().size(), Rational(0));
    for (const auto& [m, c] : g.terms()) {
        if (m.degree() == 0) {
            out->constant = c;
        } else {
            for (size_t i = 0; i < m.exps.size(); ++i)
                if (m.exps[i] == 1) out->coeffs[i] = c;
        }
    }
    return true;
}

Polynomial form_to_poly(const std::vector<std::string>& vars, const std::vector<Rational>& coeffs,
                        const Rational& constant) {
    Polynomial p = Polynomial::constant(vars, constant);
    for (size_t i = 0; i < vars.size(); ++i)
        if (!coeffs[i].is_zero()) p = p + Polynomial::variable(vars, i).scale(coeffs[i]);
    return p;
}

// max/min of a linear form over {g_i >= 0}; returns {bounded, value}.
std::pair<bool, double> lp_extreme(const std::vector<LinearForm>& gens, size_t nvars,
                                   const std::vector<Rational>& form, bool maximize) {
    LpProblem lp;
    lp.nvars = nvars;
    lp.nonneg.assign(nvars, 0);
    lp.a_ge = Mat(gens.size(), nvars);
    lp.b_ge.assign(gens.size(), 0.0);
    for (size_t i = 0; i < gens.size(); ++i) {
        for (size_t j = 0; j < nvars; ++j) lp.a_ge(i, j) = gens[i].coeffs[j].to_double();
        lp.b_ge[i] = -gens[i].constant.to_double();
    }
    lp.objective.assign(nvars, 0.0);
    for (size_t j = 0; j < nvars; ++j)
        lp.objective[j] = (maximize ? -1.0 : 1.0) * form[j].to_double();
    LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::unbounded) return {false, 0.0};
    if (sol.status != LpStatus::optimal) return {false, 0.0};
    return {true, maximize ? -sol.objective_value : sol.objective_value};
}

}  // namespace

StabilityEvidence poly_stability(const QuadraticModuleSpec& M,
                                 const std::vector<Polynomial>& user_forms,
                                 const Tolerances& tol) {
    StabilityEvidence out;
    size_t n = M.vars.size();
    std::vector<LinearForm> gens;
    for (const auto& g : M.generators) {
        LinearForm lf;
        if (!extract_linear(g, &lf)) {
            out.status = StabilityStatus::not_applicable;
            out.note = "non-linear generator present";
            return out;
        }
        gens.push_back(std::move(lf));
    }

    // Base point in K_M.
    LpProblem base_lp;
    base_lp.nvars = n;
    base_lp.nonneg.assign(n, 0);
    base_lp.a_ge = Mat(gens.size(), n);
    base_lp.b_ge.assign(gens.size(), 0.0);
    for (size_t i = 0; i < gens.size(); ++i) {
        for (size_t j = 0; j < n; ++j) base_lp.a_ge(i, j) = gens[i].coeffs[j].to_double();
        base_lp.b_ge[i] = -gens[i].constant.to_double();
    }
    LpSolution base = lp_feasible(base_lp);
    if (base.status != LpStatus::feasible) {
        out.status = StabilityStatus::empty_k;
        out.note = "K_M is empty (LP Farkas certificate)";
        return out;
    }
    out.base_point = base.x;
    std::vector<Rational> base_rat(n);
    for (size_t j = 0; j < n; ++j) {
        Rational r;
        if (!Rational::rationalize(base.x[j], 1000000, &r)) r = Rational(0);
        base_rat[j] = r;
    }

    // Boundedness probes: coordinates, then user-supplied forms.  A bounded
    // nonconstant form must sit in R + (certified support), else the
    // stability hypothesis fails with that witness.
    std::vector<std::vector<Rational>> support_span;  // homogeneous parts
    std::vector<std::vector<Rational>> probe_forms;
    std::vector<Polynomial> probe_polys;
    for (size_t j = 0; j < n; ++j) {
        std::vector<Rational> e(n, Rational(0));
        e[j] = Rational(1);
        probe_forms.push_back(e);
        probe_polys.push_back(Polynomial::variable(M.vars, j));
    }
    for (const auto& uf : user_forms) {
        LinearForm lf;
        if (!extract_linear(uf, &lf)) continue;
        probe_forms.push_back(lf.coeffs);
        probe_polys.push_back(uf);
    }
    for (size_t pi = 0; pi < probe_forms.size(); ++pi) {
        auto [hib, hi] = lp_extreme(gens, n, probe_forms[pi], true);
        if (!hib) continue;
        auto [lob, lo] = lp_extreme(gens, n, probe_forms[pi], false);
        if (!lob) continue;
        BoundedFormEvidence ev;
        ev.form = probe_polys[pi];
        ev.lo = lo;
        ev.hi = hi;
        Rational mid;
        if (!Rational::rationalize((lo + hi) / 2.0, 1000000, &mid)) mid = Rational(0);
        Polynomial shifted = probe_polys[pi] - Polynomial::constant(M.vars, mid);
        auto certs = support_probe(M, 2, {shifted}, tol);
        ev.in_support = !certs.empty();
        out.bounded_forms.push_back(ev);
        if (!ev.in_support) {
            out.status = StabilityStatus::hypothesis_failed;
            out.witness = probe_polys[pi];
            out.note = "bounded form not certified in R + support";
            return out;
        }
        support_span.push_back(probe_forms[pi]);
    }

    // Reduce generator linear parts modulo the certified support span and
    // test positive linear independence; iterate as the span grows.
    for (int round = 0; round < static_cast<int>(gens.size()) + 2; ++round) {
        std::vector<std::vector<Rational>> span_rref = rref(support_span);
        std::vector<std::vector<Rational>> forms;
        std::vector<size_t> owner;
        for (size_t i = 0; i < gens.size(); ++i) {
            std::vector<Rational> h = gens[i].coeffs;
            bool zero = true;
            for (const auto& c : h)
                if (!c.is_zero()) zero = false;
            if (zero) continue;
            std::vector<Rational> red = reduce_mod_span(span_rref, h);
            zero = true;
            for (const auto& c : red)
                if (!c.is_zero()) zero = false;
            if (zero) continue;
            forms.push_back(red);
            owner.push_back(i);
        }
        if (forms.empty()) {
            out.status = StabilityStatus::stable;
            out.direction.assign(n, 0.0);
            out.note = "all generators lie in R + support; K_M is an affine subspace";
            return out;
        }
        // Dependence LP: lambda >= 0, sum lambda = 1, mu free:
        // sum lambda_v forms_v + span.mu = 0.
        size_t nf = forms.size(), ns = support_span.size();
        LpProblem dep;
        dep.nvars = nf + ns;
        dep.nonneg.assign(nf + ns, 0);
        for (size_t i = 0; i < nf; ++i) dep.nonneg[i] = 1;
        dep.a_eq = Mat(n + 1, nf + ns);
        dep.b_eq.assign(n + 1, 0.0);
        for (size_t j = 0; j < n; ++j) {
            for (size_t i = 0; i < nf; ++i) dep.a_eq(j, i) = forms[i][j].to_double();
            for (size_t s = 0; s < ns; ++s) dep.a_eq(j, nf + s) = support_span[s][j].to_double();
        }
        for (size_t i = 0; i < nf; ++i) dep.a_eq(n, i) = 1.0;
        dep.b_eq[n] = 1.0;
        LpSolution depsol = lp_feasible(dep);
        if (depsol.status == LpStatus::feasible) {
            // Positively dependent: some participating generator is bounded
            // on K_M.  Try to absorb it into the support; else fail.
            size_t witness_i = nf;
            for (size_t i = 0; i < nf; ++i)
                if (depsol.x[i] > 1e-7 && gens[owner[i]].constant.sign() > 0) witness_i = std::min(witness_i, i);
            if (witness_i == nf)
                for (size_t i = 0; i < nf; ++i)
                    if (depsol.x[i] > 1e-7) witness_i = std::min(witness_i, i);
            const auto& lf = gens[owner[witness_i]];
            Polynomial wit = form_to_poly(M.vars, lf.coeffs, Rational(0));
            Rational val_at_base(0);
            for (size_t j = 0; j < n; ++j) val_at_base += lf.coeffs[j] * base_rat[j];
            Polynomial shifted = wit - Polynomial::constant(M.vars, val_at_base);
            auto certs = support_probe(M, 2, {shifted}, tol);
            if (!certs.empty()) {
                support_span.push_back(lf.coeffs);
                continue;
            }
            out.status = StabilityStatus::hypothesis_failed;
            out.witness = form_to_poly(M.vars, lf.coeffs, lf.constant);
            out.note = "positively dependent generators force a bounded polynomial";
            return out;
        }
        // Independent: strictly positive direction exists.
        LpProblem dir;
        dir.nvars = n;
        dir.nonneg.assign(n, 0);
        dir.a_ge = Mat(nf, n);
        dir.b_ge.assign(nf, 1.0);
        for (size_t i = 0; i < nf; ++i)
            for (size_t j = 0; j < n; ++j) dir.a_ge(i, j) = forms[i][j].to_double();
        LpSolution dirsol = lp_feasible(dir);
        if (dirsol.status != LpStatus::feasible) {
            out.status = StabilityStatus::hypothesis_failed;
            out.note = "no strictly positive direction despite independence (numerical)";
            return out;
        }
        out.status = StabilityStatus::stable;
        out.direction = dirsol.x;
        out.note = "positively independent; interior direction found";
        return out;
    }
    out.status = StabilityStatus::hypothesis_failed;
    out.note = "support absorption did not stabilize";
    return out;
}

// ---------------------------------------------------------------------------
// dual moment check

PseudoMoments PseudoMoments::dirac(const std::vector<std::string>& vars,
                                   const std::vector<double>& point, int d) {
    PseudoMoments L;
    L.degree2d = 2 * d;
    L.basis = monomial_basis(static_cast<int>(vars.size()), 2 * d);
    L.values.reserve(L.basis.size());
    for (const auto& m : L.basis) {
        double v = 1.0;
        for (size_t i = 0; i < point.size(); ++i)
            for (int e = 0; e < m.exps[i]; ++e) v *= point[i];
        L.values.push_back(v);
    }
    return L;
}

double PseudoMoments::value_at(const Monomial& m) const {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == m) return values[i];
    throw std::invalid_argument("pseudo-moments: monomial outside indexed range");
}

MomentCheckResult dual_moment_check(const PseudoMoments& L, const QuadraticModuleSpec& M, int d,
                                    const Tolerances& tol) {
    size_t n = M.vars.size();
    std::vector<Monomial> full = monomial_basis(static_cast<int>(n), L.degree2d);
    if (L.basis != full || L.values.size() != full.size())
        throw std::invalid_argument("pseudo-moments: index mismatch with degree 2d basis");
    if (2 * d > L.degree2d) throw std::invalid_argument("dual_moment_check: d exceeds moment degree");
    std::map<Monomial, double, GradedLexLess> val;
    for (size_t i = 0; i < full.size(); ++i) val[full[i]] = L.values[i];
    // Nonzero L in the dual of a quadratic module has L(1) > 0.
    Monomial one{std::vector<int>(n, 0)};
    bool nonzero = false;
    for (double v : L.values)
        if (v != 0.0) nonzero = true;
    if (nonzero && val[one] <= 0)
        throw std::invalid_argument("pseudo-moments: L(1) must be positive for nonzero L");

    MomentCheckResult out;
    out.psd_pass = true;
    std::vector<Polynomial> gens = M.working_generators(2 * d);
    // gens[0] = 1 gives the moment matrix itself.
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const Polynomial& g = gens[gi];
        if (g.degree() > 2 * d) continue;
        int half = (2 * d - g.degree()) / 2;
        std::vector<Monomial> basis = monomial_basis(static_cast<int>(n), half);
        Mat mm(basis.size(), basis.size());
        for (size_t i = 0; i < basis.size(); ++i) {
            for (size_t j = i; j < basis.size(); ++j) {
                double s = 0;
                for (const auto& [delta, c] : g.terms()) {
                    Monomial m = basis[i];
                    for (size_t k = 0; k < m.exps.size(); ++k)
                        m.exps[k] += basis[j].exps[k] + delta.exps[k];
                    s += c.to_double() * val.at(m);
                }
                mm(i, j) = s;
                mm(j, i) = s;
            }
        }
        EigenSym eig = jacobi_eigensym(mm);
        double meig = eig.values.front();
        out.mineigs.push_back(meig);
        if (meig < -tol.psd && out.psd_pass) {
            out.psd_pass = false;
            out.failing_block = gi == 0 ? -1 : static_cast<int>(gi);
            out.witness_value = meig;
            out.witness_vector.resize(basis.size());
            for (size_t i = 0; i < basis.size(); ++i) out.witness_vector[i] = eig.vectors(i, 0);
            // Witness polynomial (b.v)^2 * g with L-value = v' M v < 0.
            Polynomial bv(M.vars);
            for (size_t i = 0; i < basis.size(); ++i) {
                Rational c;
                if (Rational::rationalize(out.witness_vector[i], 1000000, &c))
                    bv.add_term(basis[i], c);
            }
            out.witness_polynomial = bv * bv * g;
        }
    }
    return out;
}

}  // namespace qmclose
