#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmclose/lp.hpp"
#include "qmclose/polynomial.hpp"
#include "qmclose/sdp.hpp"

using namespace qmclose;

TEST_CASE("min eigenvalue basics") {
    CHECK(min_eigenvalue(Mat::identity(3)) == doctest::Approx(1.0));
    Mat d(2, 2);
    d(0, 0) = 2;
    d(1, 1) = -5;
    CHECK(min_eigenvalue(d) == doctest::Approx(-5.0));
    Mat a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 2;
    CHECK(min_eigenvalue(a) == doctest::Approx(1.0).epsilon(1e-9));
    Mat bad(2, 2);
    bad(0, 1) = 1;  // not symmetric
    CHECK_THROWS_AS(min_eigenvalue(bad), std::invalid_argument);
}

TEST_CASE("lp feasible point") {
    // {x >= 0, x = 1}
    LpProblem p = LpProblem::feasibility(1);
    p.nonneg = {1};
    p.a_eq = Mat(1, 1);
    p.a_eq(0, 0) = 1;
    p.b_eq = {1.0};
    LpSolution s = lp_feasible(p);
    REQUIRE(s.status == LpStatus::feasible);
    CHECK(s.x[0] == doctest::Approx(1.0));
}

TEST_CASE("lp infeasible with verified farkas multiplier") {
    // {x >= 0, x = -1}
    LpProblem p = LpProblem::feasibility(1);
    p.nonneg = {1};
    p.a_eq = Mat(1, 1);
    p.a_eq(0, 0) = 1;
    p.b_eq = {-1.0};
    LpSolution s = lp_feasible(p);
    REQUIRE(s.status == LpStatus::infeasible);
    // y*b > 0 and y*A <= 0 on the nonnegative variable.
    CHECK(s.farkas_margin > 1e-9);
    CHECK(s.farkas_eq[0] * p.b_eq[0] > 0);
    CHECK(s.farkas_eq[0] * p.a_eq(0, 0) <= 1e-9);
}

TEST_CASE("lp strict positivity system has an interior point") {
    // x >= 1, y >= 1 (strict system for the quadrant forms scaled to >= 1).
    LpProblem p = LpProblem::feasibility(2);
    p.a_ge = Mat(2, 2);
    p.a_ge(0, 0) = 1;
    p.a_ge(1, 1) = 1;
    p.b_ge = {1.0, 1.0};
    LpSolution s = lp_feasible(p);
    REQUIRE(s.status == LpStatus::feasible);
    CHECK(s.x[0] >= 1.0 - 1e-9);
    CHECK(s.x[1] >= 1.0 - 1e-9);
}

TEST_CASE("lp optimization and unboundedness") {
    // min -x subject to x <= 5 (i.e. -x >= -5), x >= 0.
    LpProblem p = LpProblem::feasibility(1);
    p.nonneg = {1};
    p.a_ge = Mat(1, 1);
    p.a_ge(0, 0) = -1;
    p.b_ge = {-5.0};
    p.objective = {-1.0};
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(5.0));
    CHECK(s.objective_value == doctest::Approx(-5.0));

    LpProblem q = LpProblem::feasibility(1);
    q.nonneg = {1};
    q.objective = {-1.0};  // min -x, x >= 0: unbounded
    LpSolution su = lp_solve(q);
    REQUIRE(su.status == LpStatus::unbounded);
    REQUIRE(su.ray.size() == 1);
    CHECK(su.ray[0] > 0);
}

namespace {

SdpProblem rank1_fix_problem() {
    // One 2x2 block with all entries forced to 1.
    SdpProblem p;
    p.block_sizes = {2};
    SdpConstraint c00{{{0, 0, 0, 1.0}}, 1.0};
    SdpConstraint c01{{{0, 0, 1, 1.0}}, 1.0};  // addresses X_01 (symmetrized)
    SdpConstraint c11{{{0, 1, 1, 1.0}}, 1.0};
    p.constraints = {c00, c01, c11};
    return p;
}

}  // namespace

TEST_CASE("sdp feasibility: rank-1 all-ones block") {
    SdpSolution s = sdp_feasible(rank1_fix_problem());
    REQUIRE(s.status == SdpStatus::feasible);
    CHECK(s.residual <= 1e-8);
    // Independent re-verification.
    CHECK(sdp_residual(rank1_fix_problem(), s.blocks) <= 1e-8);
    CHECK(sdp_min_eig(s.blocks) >= -1e-8);
    CHECK(sdp_min_eig(s.blocks) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sdp infeasibility: negative diagonal entry") {
    SdpProblem p;
    p.block_sizes = {2};
    p.constraints = {SdpConstraint{{{0, 0, 0, 1.0}}, -1.0}};
    SdpSolution s = sdp_feasible(p);
    REQUIRE(s.status == SdpStatus::infeasible);
    double margin, slack;
    sdp_ray_quality(p, s.dual_ray, &margin, &slack);
    CHECK(margin > 1e-8);
    CHECK(slack >= -1e-8);
}

TEST_CASE("sdp status invariant under row permutation and positive scaling") {
    SdpProblem p = rank1_fix_problem();
    SdpProblem q = p;
    std::swap(q.constraints[0], q.constraints[2]);
    for (auto& c : q.constraints) {
        for (auto& e : c.entries) e.coeff *= 3.5;
        c.rhs *= 3.5;
    }
    CHECK(sdp_feasible(p).status == sdp_feasible(q).status);

    SdpProblem inf;
    inf.block_sizes = {2};
    inf.constraints = {SdpConstraint{{{0, 0, 0, 1.0}}, -1.0},
                       SdpConstraint{{{0, 1, 1, 1.0}}, 1.0}};
    SdpProblem inf2 = inf;
    std::swap(inf2.constraints[0], inf2.constraints[1]);
    for (auto& c : inf2.constraints) {
        for (auto& e : c.entries) e.coeff *= 0.25;
        c.rhs *= 0.25;
    }
    CHECK(sdp_feasible(inf).status == sdp_feasible(inf2).status);
}

namespace {

// Gram feasibility of a polynomial as a plain sum of squares at degree 2h.
SdpProblem sos_gram_problem(const Polynomial& f, int h) {
    int n = static_cast<int>(f.vars().size());
    auto basis = monomial_basis(n, h);
    std::map<Monomial, size_t, GradedLexLess> row_of;
    auto rows = monomial_basis(n, 2 * h);
    SdpProblem p;
    p.block_sizes = {static_cast<int>(basis.size())};
    p.constraints.resize(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            Monomial m = basis[i];
            for (size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += basis[j].exps[k];
            p.constraints[row_of[m]].entries.push_back(SdpEntry{
                0, static_cast<int>(i), static_cast<int>(j), i == j ? 1.0 : 2.0});
        }
    for (size_t r = 0; r < rows.size(); ++r) p.constraints[r].rhs = f.coeff(rows[r]).to_double();
    // Rows with no producing entries and nonzero target are plainly infeasible;
    // keep them (the solver must certify).
    return p;
}

Polynomial motzkin() {
    std::vector<std::string> vars = {"x", "y"};
    Polynomial x = Polynomial::variable(vars, 0), y = Polynomial::variable(vars, 1);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    return x.pow(4) * y * y + x * x * y.pow(4) - (x * x * y * y).scale(Rational(3)) + one;
}

}  // namespace

TEST_CASE("motzkin form is not a sum of squares (solver + independent witness)") {
    SdpProblem p = sos_gram_problem(motzkin(), 3);
    SdpSolution s = sdp_feasible(p);
    REQUIRE(s.status == SdpStatus::infeasible);
    double margin, slack;
    sdp_ray_quality(p, s.dual_ray, &margin, &slack);
    CHECK(margin > 1e-8);
    CHECK(slack >= -1e-8);

    // Independent pseudo-moment witness: search a deterministic grid of
    // parity-symmetric moment vectors for one that is PSD on the degree-3
    // moment matrix yet negative on the form.
    Polynomial f = motzkin();
    auto basis = monomial_basis(2, 3);
    bool found = false;
    for (double t : {0.8, 0.9, 0.95}) {
        for (double a : {1.0, 1.2, 1.5}) {
            for (double b : {2.0, 4.0, 6.0}) {
                for (double e : {30.0, 50.0, 80.0}) {
                    auto moment = [&](const Monomial& m) -> double {
                        int dx = m.exps[0], dy = m.exps[1];
                        if (dx % 2 || dy % 2) return 0.0;
                        int key = dx * 10 + dy;
                        switch (key) {
                            case 0: return t;
                            case 20: case 2: return a;
                            case 40: case 4: return b;
                            case 22: return 1.0;
                            case 60: case 6: return e;
                            case 42: case 24: return 1.0;
                            default: return 0.0;
                        }
                    };
                    Mat mm(basis.size(), basis.size());
                    for (size_t i = 0; i < basis.size(); ++i)
                        for (size_t j = 0; j < basis.size(); ++j) {
                            Monomial m = basis[i];
                            for (size_t k = 0; k < 2; ++k) m.exps[k] += basis[j].exps[k];
                            mm(i, j) = moment(m);
                        }
                    if (jacobi_eigensym(mm).values.front() < 0) continue;
                    double lf = 0;
                    for (const auto& [m, c] : f.terms()) lf += c.to_double() * moment(m);
                    if (lf < -1e-9) found = true;
                }
            }
        }
    }
    CHECK(found);
}

TEST_CASE("sdp optimization minimizes a diagonal objective") {
    // min X_00 s.t. X_00 + X_11 = 2, X psd: optimum 0.
    SdpProblem p;
    p.block_sizes = {2};
    p.constraints = {SdpConstraint{{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}, 2.0}};
    p.objective = {{0, 0, 0, 1.0}};
    SdpSolution s = sdp_solve(p);
    REQUIRE(s.status == SdpStatus::feasible);
    CHECK(s.objective_value == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("dimension limits raise LimitError") {
    SdpProblem p;
    p.block_sizes = {1000};
    CHECK_THROWS_AS(sdp_feasible(p), LimitError);
}
