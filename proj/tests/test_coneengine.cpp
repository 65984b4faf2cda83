#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmclose/cone.hpp"

using namespace qmclose;

namespace {

RatVec rv(std::initializer_list<long long> xs) {
    RatVec v;
    for (long long x : xs) v.push_back(Rational(x));
    return v;
}

TruncatedCone orthant2() {
    return TruncatedCone::from_generators(2, {rv({1, 0}), rv({0, 1})});
}

MembershipOracle exact_oracle(const TruncatedCone& c) {
    return [&c](const RatVec& v) { return c.member(v) ? 1 : 0; };
}

std::vector<Rational> eps_schedule() {
    return {Rational(1), Rational(1, 10), Rational(1, 100)};
}

}  // namespace

TEST_CASE("dual of the first orthant is itself") {
    TruncatedCone d = dual_cone(orthant2());
    ConeCanonical a = canonical_form(orthant2());
    ConeCanonical b = canonical_form(d);
    CHECK(a == b);
}

TEST_CASE("dual of the zero cone is the whole space") {
    TruncatedCone zero = TruncatedCone::from_generators(2, {rv({0, 0})});
    TruncatedCone d = dual_cone(zero);
    // Whole dual space: lineality has full dimension.
    CHECK(d.lineality().size() == 2);
    CHECK(d.extreme_rays().empty());
    CHECK(d.member(rv({-3, 5})));
}

TEST_CASE("dual of a single ray is its halfplane") {
    TruncatedCone ray = TruncatedCone::from_generators(2, {rv({1, 1})});
    TruncatedCone d = dual_cone(ray);
    // {y : y1 + y2 >= 0}: lineality is the antidiagonal, one extreme ray.
    CHECK(d.member(rv({1, 0})));
    CHECK(d.member(rv({0, 1})));
    CHECK(d.member(rv({1, -1})));
    CHECK(d.member(rv({-1, 1})));
    CHECK(!d.member(rv({-1, 0})));
    CHECK(d.lineality().size() == 1);
}

TEST_CASE("double dual equals closure on random polyhedral cones") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 50; ++it) {
        size_t dim = 2 + rng() % 5;  // up to 6
        size_t ngen = 1 + rng() % 6;
        std::vector<RatVec> gens;
        for (size_t g = 0; g < ngen; ++g) {
            RatVec v(dim);
            for (size_t i = 0; i < dim; ++i)
                v[i] = Rational(static_cast<long long>(rng() % 7) - 3);
            gens.push_back(std::move(v));
        }
        TruncatedCone c = TruncatedCone::from_generators(dim, gens);
        TruncatedCone dd = dual_cone(dual_cone(c));
        CHECK(canonical_form(c) == canonical_form(dd));
    }
}

TEST_CASE("is_interior examples") {
    InteriorResult r1 = is_interior(orthant2(), rv({1, 1}));
    CHECK(r1.interior);
    InteriorResult r2 = is_interior(orthant2(), rv({1, 0}));
    CHECK(!r2.interior);
    REQUIRE(r2.violating_functional);
    // The violating functional is the second coordinate functional (up to
    // positive scaling) and vanishes at (1,0).
    Rational val = (*r2.violating_functional)[0] * Rational(1) +
                   (*r2.violating_functional)[1] * Rational(0);
    CHECK(val.sign() <= 0);

    TruncatedCone c = TruncatedCone::from_generators(2, {rv({1, 0}), rv({1, 1})});
    CHECK(is_interior(c, rv({2, 1})).interior);
    CHECK(!is_interior(c, rv({1, 1})).interior);
    CHECK(!is_interior(c, rv({-1, 0})).interior);

    // A cone inside a hyperplane has no interior.
    TruncatedCone flat = TruncatedCone::from_generators(2, {rv({1, 0})});
    CHECK(!is_interior(flat, rv({1, 0})).interior);
}

TEST_CASE("interior_shift holds on examples and fails preconditions loudly") {
    ShiftResult a = interior_shift(orthant2(), rv({1, 1}), rv({1, 0}), Rational(1, 2));
    CHECK(a.outcome == ShiftOutcome::holds);
    ShiftResult b = interior_shift(orthant2(), rv({1, 1}), rv({0, 0}), Rational(1, 1000000));
    CHECK(b.outcome == ShiftOutcome::holds);
    TruncatedCone c = TruncatedCone::from_generators(2, {rv({1, 0}), rv({1, 1})});
    ShiftResult d = interior_shift(c, rv({2, 1}), rv({1, 1}), Rational(1, 10));
    CHECK(d.outcome == ShiftOutcome::holds);
    // Precondition violations are distinct from property failure.
    ShiftResult e = interior_shift(orthant2(), rv({1, 0}), rv({1, 0}), Rational(1));
    CHECK(e.outcome == ShiftOutcome::precondition_failed);
    ShiftResult f = interior_shift(orthant2(), rv({1, 1}), rv({-1, 0}), Rational(1));
    CHECK(f.outcome == ShiftOutcome::precondition_failed);
}

TEST_CASE("interior shift property on sampled eps") {
    // v' in closure, v interior => v' + eps v interior for sampled eps.
    TruncatedCone c = TruncatedCone::from_generators(2, {rv({1, 0}), rv({1, 1})});
    for (const auto& eps : {Rational(1), Rational(1, 10), Rational(1, 100)}) {
        for (const auto& boundary : {rv({1, 0}), rv({1, 1}), rv({0, 0})}) {
            ShiftResult r = interior_shift(c, rv({2, 1}), boundary, eps);
            CHECK(r.outcome == ShiftOutcome::holds);
        }
    }
}

TEST_CASE("seq_closure_member examples") {
    TruncatedCone orth = orthant2();
    SeqClosureWitness w1 =
        seq_closure_member(exact_oracle(orth), rv({0, 1}), rv({1, 1}), eps_schedule());
    CHECK(w1.verdict == SeqVerdict::in_closure);

    // Open right halfplane plus the origin: x > 0 or v = 0.
    MembershipOracle open_half = [](const RatVec& v) {
        if (v[0].sign() > 0) return 1;
        return (v[0].is_zero() && v[1].is_zero()) ? 1 : 0;
    };
    SeqClosureWitness w2 = seq_closure_member(open_half, rv({0, 1}), rv({1, 0}), eps_schedule());
    CHECK(w2.verdict == SeqVerdict::in_closure);

    SeqClosureWitness w3 =
        seq_closure_member(exact_oracle(orth), rv({-1, 0}), rv({0, 1}), eps_schedule());
    CHECK(w3.verdict == SeqVerdict::not_detected);

    // Oracle failure propagates as inconclusive.
    MembershipOracle failing = [](const RatVec&) { return -1; };
    SeqClosureWitness w4 = seq_closure_member(failing, rv({0, 0}), rv({1, 1}), eps_schedule());
    CHECK(w4.verdict == SeqVerdict::inconclusive);

    CHECK_THROWS_AS(seq_closure_member(exact_oracle(orth), rv({0, 0}), rv({1, 1}),
                                       {Rational(1, 10), Rational(1)}),
                    std::invalid_argument);
}

TEST_CASE("seq closure is monotone under schedule shrinking") {
    TruncatedCone c = TruncatedCone::from_generators(2, {rv({1, 0}), rv({1, 1})});
    std::mt19937_64 rng(9);
    for (int it = 0; it < 20; ++it) {
        RatVec v{Rational(static_cast<long long>(rng() % 9) - 4),
                 Rational(static_cast<long long>(rng() % 9) - 4)};
        RatVec q{Rational(2), Rational(1)};
        auto full = eps_schedule();
        SeqClosureWitness wf = seq_closure_member(exact_oracle(c), v, q, full);
        std::vector<Rational> shrunk = {full[0], full[2]};
        SeqClosureWitness ws = seq_closure_member(exact_oracle(c), v, q, shrunk);
        if (wf.verdict == SeqVerdict::in_closure) CHECK(ws.verdict == SeqVerdict::in_closure);
    }
}

TEST_CASE("closure points found via dual cone are found via interior perturbation") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 20; ++it) {
        // Random full-dimensional cone: include the positive orthant plus
        // random rays so an interior point is guaranteed.
        std::vector<RatVec> gens = {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})};
        for (int g = 0; g < 2; ++g) {
            RatVec v(3);
            for (size_t i = 0; i < 3; ++i) v[i] = Rational(static_cast<long long>(rng() % 7) - 3);
            gens.push_back(v);
        }
        TruncatedCone c = TruncatedCone::from_generators(3, gens);
        RatVec q = rv({1, 1, 1});
        for (auto& g : c.generators()) {
            RatVec sum(3, Rational(0));
            for (size_t i = 0; i < 3; ++i) sum[i] = q[i] + g[i];
        }
        if (!is_interior(c, q).interior) continue;
        // Closure points: the generators themselves (cone is closed).
        for (const auto& v : c.generators()) {
            SeqClosureWitness w = seq_closure_member(exact_oracle(c), v, q, eps_schedule());
            CHECK(w.verdict == SeqVerdict::in_closure);
        }
    }
}

TEST_CASE("semispace dichotomy: closed cases") {
    // Upper halfplane: C u -C = V, support is the x-axis, quotient dim 1.
    TruncatedCone upper = TruncatedCone::from_halfspaces(2, {rv({0, 1})});
    CHECK(semispace_closed(upper));
    // The whole plane: quotient dim 0.
    TruncatedCone whole = TruncatedCone::from_halfspaces(2, {});
    CHECK(semispace_closed(whole));
    // First orthant: C u -C != V, hypothesis fails loudly.
    CHECK_THROWS_AS(semispace_closed(orthant2()), std::invalid_argument);
}

TEST_CASE("semispace dichotomy: lexicographic cone is not closed") {
    // Member iff the first nonzero of (y, x) is positive: quotient dim 2.
    TruncatedCone lex = TruncatedCone::from_lexicographic(2, {rv({0, 1}), rv({1, 0})});
    CHECK(!semispace_closed(lex));
    // Brute-force boundary sampling agrees: (-1, 1/k) lies in the cone for
    // every k, the limit (-1, 0) does not.
    for (long long k = 1; k <= 1000; k *= 10) CHECK(lex.member({Rational(-1), Rational(1, k)}));
    CHECK(!lex.member(rv({-1, 0})));
    // Rank-1 lexicographic cone (a closed halfspace) is closed.
    TruncatedCone half = TruncatedCone::from_lexicographic(2, {rv({0, 1})});
    CHECK(semispace_closed(half));
}

TEST_CASE("dimension limit raises LimitError") {
    std::vector<RatVec> gens;
    RatVec g(13, Rational(1));
    gens.push_back(g);
    CHECK_THROWS_AS(TruncatedCone::from_generators(13, gens).halfspaces(), LimitError);
}

TEST_CASE("sdp slice cones answer membership through the oracle") {
    // Projection of {X psd 2x2, X_00 = v0, X_11 = v1, X_01 = 1} onto
    // (v0, v1): membership iff v0*v1 >= 1 with v0, v1 >= 0.
    SdpSlice slice;
    slice.base.block_sizes = {2};
    slice.base.constraints = {SdpConstraint{{{0, 0, 1, 1.0}}, 1.0}};
    slice.proj = {{{0, 0, 0, 1.0}}, {{0, 1, 1, 1.0}}};
    TruncatedCone c = TruncatedCone::from_sdp_slice(2, slice);
    CHECK(c.member(rv({2, 2})));
    CHECK(c.member(rv({1, 1})));
    CHECK(!c.member(rv({1, 0})));
    CHECK_THROWS_AS(c.halfspaces(), std::invalid_argument);
    CHECK_THROWS_AS(is_interior(c, rv({2, 2})), std::invalid_argument);
}
