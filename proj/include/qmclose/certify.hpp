#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmclose/polynomial.hpp"
#include "qmclose/sdp.hpp"

namespace qmclose {

// One PSD unknown of a weighted Gram identity
//   sum_b weight_b(x) * (m_b(x)^T G_b m_b(x)) = target(x),
// where m_b is the monomial column over `basis`.
struct IdentityBlockSpec {
    Polynomial weight;
    std::vector<Monomial> basis;
};

struct GramIdentityProblem {
    std::vector<std::string> vars;
    std::vector<IdentityBlockSpec> blocks;
    Polynomial target;
    int degree = 0;  // identity compared on all monomials of degree <= this
};

using RationalMatrix = std::vector<std::vector<Rational>>;

struct GramIdentityResult {
    SdpStatus solver_status = SdpStatus::inconclusive;
    // Exact certificate: rationalized Grams corrected onto the constraint
    // subspace, so the identity holds with residual exactly zero.
    bool exact = false;
    std::vector<RationalMatrix> grams;
    Rational residual;             // exact; 0 when `exact`
    double mineig = 0.0;           // over rationalized blocks
    std::vector<Monomial> constraint_monomials;
    std::vector<double> dual_ray;  // per constraint monomial, when infeasible
    double ray_margin = 0.0;
    double ray_psd_slack = 0.0;
    int iterations = 0;
    std::string note;
};

GramIdentityResult solve_gram_identity(const GramIdentityProblem& prob,
                                       const Tolerances& tol = {},
                                       long long den_cap = 1000000);

// Exact re-expansion sum_b weight_b * (m^T G m); the certificate soundness
// check is `expand == target`.
Polynomial expand_gram_identity(const GramIdentityProblem& prob,
                                const std::vector<RationalMatrix>& grams);

// Split m into b1 + b2 with deg(b1), deg(b2) <= half (requires
// deg(m) <= 2*half); deterministic.
void split_monomial(const Monomial& m, int half, Monomial* b1, Monomial* b2);

}  // namespace qmclose
