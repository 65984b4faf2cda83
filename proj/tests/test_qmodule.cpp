#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmclose/instances.hpp"
#include "qmclose/qmodule.hpp"

using namespace qmclose;

namespace {

QuadraticModuleSpec qm(const std::vector<std::string>& vars, std::vector<std::string> gens,
                       ModuleKind kind = ModuleKind::quadratic_module) {
    QuadraticModuleSpec M;
    M.vars = vars;
    M.kind = kind;
    for (const auto& g : gens) M.generators.push_back(parse_polynomial(g, vars));
    return M;
}

// Random certified member: sigma_0 + sum sigma_i g_i with random small
// square multipliers.
Polynomial random_member(std::mt19937_64& rng, const QuadraticModuleSpec& M, int d) {
    auto rnd_square = [&](int half) {
        Polynomial s(M.vars);
        auto basis = monomial_basis(static_cast<int>(M.vars.size()), half);
        Polynomial lin(M.vars);
        for (const auto& m : basis) {
            long long c = static_cast<long long>(rng() % 7) - 3;
            if (c) lin.add_term(m, Rational(c, 1 + static_cast<long long>(rng() % 2)));
        }
        return lin * lin;
    };
    Polynomial f = rnd_square(d / 2);
    for (const auto& g : M.generators) {
        int half = (d - g.degree()) / 2;
        if (half < 0) continue;
        if (rng() % 2) f = f + rnd_square(half) * g;
    }
    return f;
}

}  // namespace

TEST_CASE("member: constants and the zero polynomial") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial one = Polynomial::constant(M.vars, Rational(1));
    MemberResult r = member(one, M, 2);
    REQUIRE(r.status == MemberStatus::member);
    CHECK(r.certificate->residual.is_zero());
    CHECK(r.certificate->expand(M.vars) == one);

    MemberResult z = member(Polynomial(M.vars), M, 2);
    CHECK(z.status == MemberStatus::member);
}

TEST_CASE("member: x(1-x) in QM(x, 1-x) at degree 3, certificate re-expands exactly") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial f = parse_polynomial("x*(1-x)", M.vars);
    MemberResult r = member(f, M, 3);
    REQUIRE(r.status == MemberStatus::member);
    CHECK(r.certificate->residual.is_zero());
    CHECK(r.certificate->mineig >= -1e-8);
    CHECK(r.certificate->expand(M.vars) == f);
}

TEST_CASE("member degree preconditions") {
    QuadraticModuleSpec M = qm({"x"}, {"x"});
    Polynomial f = parse_polynomial("x^4", M.vars);
    CHECK_THROWS_AS(member(f, M, 3), std::invalid_argument);
    Polynomial g = parse_polynomial("x+1", {"x", "y"});
    CHECK_THROWS_AS(member(g, M, 3), std::invalid_argument);
}

TEST_CASE("member: couex separation, x has no representation at d in {4,6,8}") {
    QuadraticModuleSpec N = instance_couex();
    Polynomial x = Polynomial::variable(N.vars, 0);
    for (int d : {4, 6, 8}) {
        MemberResult r = member(x, N, d);
        REQUIRE(r.status == MemberStatus::infeasible_at_d);
        REQUIRE(r.ray.has_value());
        CHECK(r.ray->margin > 1e-8);
        CHECK(r.ray->psd_slack >= -1e-8);
    }
}

TEST_CASE("member monotone in degree") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial f = parse_polynomial("x*(1-x)", M.vars);
    for (int d : {3, 4, 5, 6}) CHECK(member(f, M, d).status == MemberStatus::member);
}

TEST_CASE("certificate soundness on random instances") {
    std::mt19937_64 rng(101);
    std::vector<QuadraticModuleSpec> modules = {
        qm({"x"}, {"x", "1-x"}),
        qm({"x", "y"}, {"1-x^2-y^2"}),
        qm({"x", "y"}, {"x", "y", "1-x-y"}),
    };
    int certified = 0;
    for (int it = 0; it < 15; ++it) {
        const auto& M = modules[it % modules.size()];
        int d = 4;
        Polynomial f = random_member(rng, M, d);
        if (f.degree() > d) continue;
        MemberResult r = member(f, M, d);
        if (r.status == MemberStatus::member) {
            ++certified;
            CHECK(r.certificate->residual.is_zero());
            CHECK(r.certificate->expand(M.vars) == f);
            CHECK(r.certificate->mineig >= -1e-8);
        }
    }
    CHECK(certified >= 12);  // constructed members should essentially always certify
}

TEST_CASE("improper module: negative constant generator certifies everything") {
    QuadraticModuleSpec M = qm({"x"}, {"-1/4"});
    Polynomial f = parse_polynomial("x^3 - 7*x + 2", M.vars);
    MemberResult r = member(f, M, 4);
    REQUIRE(r.status == MemberStatus::member);
    CHECK(r.certificate->residual.is_zero());
    CHECK(r.certificate->expand(M.vars) == f);
}

TEST_CASE("seq_member: members stay members under the perturbation") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial f = parse_polynomial("x*(1-x)", M.vars);
    SeqMemberResult r = seq_member(f, M, 4, 2, {Rational(1), Rational(1, 10)});
    CHECK(r.in_closure_at_schedule);
}

TEST_CASE("seq_member: QM(x^3) diagnostic, frozen small-eps verdict") {
    // At d = 4 the multiplier of x^3 is a nonnegative constant c; a PSD
    // Gram with zero x^4 entry forces c = 0 and then eps*x^2 + x + eps is a
    // square sum iff eps >= 1/2.  So eps = 1/4 has no representation and
    // eps = 1 does.
    QuadraticModuleSpec M = qm({"x"}, {"x^3"});
    Polynomial x = Polynomial::variable(M.vars, 0);
    SeqMemberResult small = seq_member(x, M, 4, 1, {Rational(1, 4)});
    CHECK(!small.in_closure_at_schedule);
    CHECK(small.per_eps[0] != MemberStatus::member);
    SeqMemberResult big = seq_member(x, M, 4, 1, {Rational(1)});
    CHECK(big.in_closure_at_schedule);
}

TEST_CASE("seq_member: ball module absorbs eps for a nonnegative polynomial") {
    QuadraticModuleSpec M = instance_ball(2);
    Polynomial f = parse_polynomial("1-x1", M.vars);
    // f + eps in M for each scheduled eps (archimedean case).
    for (const auto& eps : {Rational(1, 10), Rational(1, 100)}) {
        Polynomial target = f + Polynomial::constant(M.vars, eps);
        CHECK(member(target, M, 2).status == MemberStatus::member);
    }
    SeqMemberResult r = seq_member(f, M, 4, 1, {Rational(1, 10), Rational(1, 100)});
    CHECK(r.in_closure_at_schedule);
}

TEST_CASE("seq_member preconditions") {
    QuadraticModuleSpec M = qm({"x"}, {"x"});
    Polynomial f = parse_polynomial("x^2", M.vars);
    CHECK_THROWS_AS(seq_member(f, M, 8, 1, {Rational(1)}), std::invalid_argument);  // 2e <= deg f
    CHECK_THROWS_AS(seq_member(f, M, 2, 2, {Rational(1)}), std::invalid_argument);  // d < 2e
}

TEST_CASE("pos_semiordering: trivial and derived instances") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial one = Polynomial::constant(M.vars, Rational(1));
    PosSemiResult r1 = pos_semiordering(one, M, 4, 1);
    CHECK(r1.status == MemberStatus::member);

    // p*x = x^2 + q with p = 1, q = x(1-x): a certificate exists at m=1, d=4.
    Polynomial x = Polynomial::variable(M.vars, 0);
    PosSemiResult r2 = pos_semiordering(x, M, 4, 1);
    REQUIRE(r2.status == MemberStatus::member);
    CHECK(r2.certificate->m == 1);
    CHECK(r2.certificate->residual.is_zero());

    // Bounded-element setting: p = 4, q = x^2(4 - x^2) certifies 4 - x^2.
    QuadraticModuleSpec Mb = qm({"x"}, {"4-x^2"});
    Polynomial f = parse_polynomial("4-x^2", Mb.vars);
    PosSemiResult r3 = pos_semiordering(f, Mb, 4, 1);
    CHECK(r3.status == MemberStatus::member);
}

TEST_CASE("pos_semiordering exactness: certified identity re-expands") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    Polynomial x = Polynomial::variable(M.vars, 0);
    PosSemiResult r = pos_semiordering(x, M, 4, 2);
    REQUIRE(r.status == MemberStatus::member);
    const auto& cert = *r.certificate;
    // p*f = f^{2m} + q exactly.
    Polynomial p(M.vars);
    {
        const auto& b = cert.p_block;
        for (size_t i = 0; i < b.basis.size(); ++i)
            for (size_t j = 0; j < b.basis.size(); ++j) {
                if (b.gram[i][j].is_zero()) continue;
                Monomial m = b.basis[i];
                for (size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += b.basis[j].exps[k];
                p.add_term(m, b.gram[i][j]);
            }
    }
    Polynomial q = cert.q_cert.expand(M.vars);
    CHECK(p * x == x.pow(static_cast<unsigned>(2 * cert.m)) + q);
}

TEST_CASE("bounded_power_certificates: spec identities") {
    std::vector<std::string> vars = {"x"};
    Polynomial p = Polynomial::constant(vars, Rational(1));
    Polynomial x = Polynomial::variable(vars, 0);

    // (1 - x^2)*1 = 1 + (-x^2)
    Polynomial q1 = -(x * x);
    PowerCertificates c1 = bounded_power_certificates(p, q1, x, Rational(1), 3);
    for (size_t i = 0; i < c1.claim1.size(); ++i) {
        Polynomial acc(vars);
        for (const auto& pr : c1.claim1[i]) acc = acc + pr.sos_weight * pr.module_element;
        CHECK(acc == c1.claim1_targets[i]);
    }

    // (4 - x^2)*1 = 1 + (3 - x^2); i = 2 gives 16 - x^4 = 4(4-x^2) + x^2(4-x^2).
    Polynomial q2 = Polynomial::constant(vars, Rational(3)) - x * x;
    PowerCertificates c2 = bounded_power_certificates(p, q2, x, Rational(2), 5);
    for (size_t i = 0; i < c2.claim1.size(); ++i) {
        Polynomial acc(vars);
        for (const auto& pr : c2.claim1[i]) acc = acc + pr.sos_weight * pr.module_element;
        CHECK(acc == c2.claim1_targets[i]);
        Polynomial acc2(vars);
        for (const auto& pr : c2.claim2[i]) acc2 = acc2 + pr.sos_weight * pr.module_element;
        CHECK(acc2 == c2.claim2_targets[i]);
    }
    // Explicit i = 2 target: 2^4*1 - x^4 = 16 - x^4.
    CHECK(c2.claim1_targets[1] == Polynomial::constant(vars, Rational(16)) - x.pow(4));

    // Identity precondition is enforced.
    CHECK_THROWS_AS(bounded_power_certificates(p, q2, x, Rational(1), 2), std::invalid_argument);
}

TEST_CASE("bounded_power_certificates: random instances re-expand exactly") {
    std::mt19937_64 rng(55);
    std::vector<std::string> vars = {"x", "y"};
    for (int it = 0; it < 5; ++it) {
        Polynomial lin(vars);
        auto basis = monomial_basis(2, 1);
        for (const auto& m : basis)
            lin.add_term(m, Rational(static_cast<long long>(rng() % 5) - 2, 1));
        Polynomial p = lin * lin + Polynomial::constant(vars, Rational(1));
        Polynomial f(vars);
        for (const auto& m : basis)
            f.add_term(m, Rational(static_cast<long long>(rng() % 5) - 2, 1));
        Rational ell(1 + static_cast<long long>(rng() % 4), 1);
        Polynomial q = (Polynomial::constant(vars, ell * ell) - f * f) * p -
                       Polynomial::constant(vars, Rational(1));
        PowerCertificates c = bounded_power_certificates(p, q, f, ell, 5);
        for (size_t i = 0; i < 5; ++i) {
            Polynomial a1(vars), a2(vars);
            for (const auto& pr : c.claim1[i]) a1 = a1 + pr.sos_weight * pr.module_element;
            for (const auto& pr : c.claim2[i]) a2 = a2 + pr.sos_weight * pr.module_element;
            CHECK(a1 == c.claim1_targets[i]);
            CHECK(a2 == c.claim2_targets[i]);
        }
    }
}

TEST_CASE("archimedean probe: ball certifies at k = 1, d = 2") {
    ArchimedeanResult r = archimedean_probe(instance_ball(2), {Rational(1)}, 2);
    REQUIRE(r.certified);
    CHECK(r.k == Rational(1));
    ArchimedeanResult r3 = archimedean_probe(instance_ball(3), {Rational(1)}, 2);
    CHECK(r3.certified);
}

TEST_CASE("archimedean probe: hyperbola-corner module stays unknown") {
    QuadraticModuleSpec M = instance_3_3(2, Rational(1));
    std::vector<Rational> ks = {Rational(1), Rational(10), Rational(100), Rational(1000),
                                Rational(10000)};
    for (int d : {2, 4, 6, 8}) {
        ArchimedeanResult r = archimedean_probe(M, ks, d);
        CHECK(!r.certified);  // one-sided: unknown, never a refutation
    }
}

TEST_CASE("archimedean probe: boxed variant certifies with a small k") {
    // Generators cut out a box, so k - |x|^2 has a degree-2 certificate:
    // 52 - x1^2 - x2^2 = 2 + (3/2)(x1-5)^2 + (3/2)(x2-5)^2 + (5/2)g1 + (5/2)g2
    // with g_i = 4 - (x_i - 3)^2.
    QuadraticModuleSpec M = qm({"x1", "x2"},
                               {"x1-1", "x2-1", "8-x1*x2", "4-(x1-3)^2", "4-(x2-3)^2"});
    ArchimedeanResult r = archimedean_probe(M, {Rational(1), Rational(52), Rational(100)}, 2);
    REQUIRE(r.certified);
    CHECK(r.k <= Rational(100));
}

TEST_CASE("support probe") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "-x"});
    Polynomial x = Polynomial::variable(M.vars, 0);
    auto certs = support_probe(M, 2, {x});
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].pos.expand(M.vars) == x);
    CHECK(certs[0].neg.expand(M.vars) == -x);

    // x^2 + y^2 generates an ideal-like support; x itself is in the radical
    // but not in the support at low degree.
    QuadraticModuleSpec M2 = qm({"x", "y"}, {"x^2+y^2", "-x^2-y^2"});
    Polynomial f = parse_polynomial("x^2+y^2", M2.vars);
    Polynomial xx = Polynomial::variable(M2.vars, 0);
    auto certs2 = support_probe(M2, 2, {f, xx});
    REQUIRE(certs2.size() == 1);
    CHECK(certs2[0].h == f);
}

TEST_CASE("stable_closure adds the ideal part") {
    QuadraticModuleSpec M = qm({"x"}, {"-x^2"});
    QuadraticModuleSpec same = stable_closure(M, {});
    CHECK(same.generators.size() == M.generators.size());

    Polynomial x = Polynomial::variable(M.vars, 0);
    QuadraticModuleSpec out = stable_closure(M, {x});
    CHECK(out.generators.size() == 3);
    CHECK(member(x, out, 2).status == MemberStatus::member);
    // Radical members reach the closure even though x was not in M at d=2.
    CHECK(member(x, M, 2).status != MemberStatus::member);
}

TEST_CASE("poly_stability: quadrant is stable with a strictly positive direction") {
    QuadraticModuleSpec M = qm({"x", "y"}, {"x", "y"});
    StabilityEvidence ev = poly_stability(M);
    REQUIRE(ev.status == StabilityStatus::stable);
    REQUIRE(ev.direction.size() == 2);
    CHECK(ev.direction[0] > 0.5);
    CHECK(ev.direction[1] > 0.5);
}

TEST_CASE("poly_stability: +-x generators are handled through the support quotient") {
    QuadraticModuleSpec M = qm({"x", "y", "z"}, {"x", "-x", "y"});
    StabilityEvidence ev = poly_stability(M);
    REQUIRE(ev.status == StabilityStatus::stable);
    bool saw_support_form = false;
    for (const auto& b : ev.bounded_forms)
        if (b.in_support) saw_support_form = true;
    CHECK(saw_support_form);
}

TEST_CASE("poly_stability: bounded coordinate outside the support fails the hypothesis") {
    QuadraticModuleSpec M = qm({"x", "y"}, {"x", "1-x", "y"});
    StabilityEvidence ev = poly_stability(M);
    REQUIRE(ev.status == StabilityStatus::hypothesis_failed);
    REQUIRE(ev.witness.has_value());
    CHECK(ev.witness->to_string() == "x");
}

TEST_CASE("poly_stability: empty K and non-linear generators are distinct statuses") {
    QuadraticModuleSpec empty = qm({"x"}, {"x", "-x-1"});
    CHECK(poly_stability(empty).status == StabilityStatus::empty_k);
    QuadraticModuleSpec quad = qm({"x"}, {"1-x^2"});
    CHECK(poly_stability(quad).status == StabilityStatus::not_applicable);
}

TEST_CASE("dual_moment_check: dirac moments pass, indefinite toy fails") {
    QuadraticModuleSpec M = instance_ball(2);
    PseudoMoments L = PseudoMoments::dirac(M.vars, {0.3, -0.2}, 3);
    MomentCheckResult r = dual_moment_check(L, M, 3);
    CHECK(r.psd_pass);

    QuadraticModuleSpec Mx = qm({"x"}, {"x"});
    PseudoMoments bad;
    bad.degree2d = 2;
    bad.basis = monomial_basis(1, 2);
    bad.values = {1.0, 0.0, -1.0};  // L(1)=1, L(x)=0, L(x^2)=-1
    MomentCheckResult rb = dual_moment_check(bad, Mx, 1);
    REQUIRE(!rb.psd_pass);
    CHECK(rb.failing_block == -1);  // the moment matrix itself
    CHECK(rb.witness_value < 0);
    REQUIRE(rb.witness_polynomial.has_value());
}

TEST_CASE("dual_moment_check: Lebesgue moments on [0,1] against QM(x, 1-x)") {
    QuadraticModuleSpec M = qm({"x"}, {"x", "1-x"});
    PseudoMoments L;
    L.degree2d = 4;
    L.basis = monomial_basis(1, 4);
    L.values.resize(L.basis.size());
    for (size_t i = 0; i < L.basis.size(); ++i)
        L.values[i] = 1.0 / (L.basis[i].exps[0] + 1);  // int_0^1 x^k dx
    MomentCheckResult r = dual_moment_check(L, M, 2);
    CHECK(r.psd_pass);
    for (double e : r.mineigs) CHECK(e >= -1e-10);
}

TEST_CASE("duality consistency: certified members are nonnegative against passing moments") {
    QuadraticModuleSpec M = instance_ball(2);
    std::mt19937_64 rng(77);
    auto pts = sample_k_points(M, 5, 99);
    for (int it = 0; it < 5; ++it) {
        Polynomial f = random_member(rng, M, 4);
        if (f.degree() > 4) continue;
        MemberResult r = member(f, M, 4);
        if (r.status != MemberStatus::member) continue;
        for (const auto& p : pts) {
            PseudoMoments L = PseudoMoments::dirac(M.vars, p, 2);
            MomentCheckResult mc = dual_moment_check(L, M, 2);
            CHECK(mc.psd_pass);
            double lf = 0;
            for (const auto& [m, c] : f.terms()) lf += c.to_double() * L.value_at(m);
            CHECK(lf >= -1e-7);
        }
    }
}

TEST_CASE("preordering consistency: closure under products matches explicit product list") {
    std::mt19937_64 rng(303);
    std::vector<std::string> vars = {"x"};
    QuadraticModuleSpec P = qm(vars, {"x", "1-x"}, ModuleKind::preordering);
    QuadraticModuleSpec Q = qm(vars, {"x", "1-x", "x*(1-x)"});
    for (int it = 0; it < 20; ++it) {
        Polynomial f = it % 2 ? random_member(rng, Q, 4) : [&] {
            Polynomial g(vars);
            for (const auto& m : monomial_basis(1, 3))
                g.add_term(m, Rational(static_cast<long long>(rng() % 9) - 4, 1));
            return g;
        }();
        if (f.degree() > 4) continue;
        MemberStatus a = member(f, P, 4).status;
        MemberStatus b = member(f, Q, 4).status;
        CHECK(a == b);
    }
}
