#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmclose/certify.hpp"
#include "qmclose/lp.hpp"
#include "qmclose/polynomial.hpp"

namespace qmclose {

enum class ModuleKind { quadratic_module, preordering };

// Finitely generated quadratic module / preordering of R[vars].
// g_0 = 1 is implicit; a preordering closes the generators under products
// up to the working degree.
struct QuadraticModuleSpec {
    std::vector<std::string> vars;
    std::vector<Polynomial> generators;
    ModuleKind kind = ModuleKind::quadratic_module;
    std::string name;  // optional label for reports

    // Generator list with 1 prepended; for preorderings, closed under
    // products of distinct generators with degree <= d.
    std::vector<Polynomial> working_generators(int d) const;
};

enum class MemberStatus { member, no_certificate_at_d, infeasible_at_d };

struct GramBlockCert {
    Polynomial generator;
    std::vector<Monomial> basis;
    RationalMatrix gram;
};

struct MembershipCertificate {
    int degree = 0;
    Tolerances tol;
    std::vector<GramBlockCert> blocks;
    Rational residual;  // exact coefficient mismatch, 0 after correction
    double mineig = 0.0;

    // Exact re-expansion sum_i sigma_i g_i of the certified identity.
    Polynomial expand(const std::vector<std::string>& vars) const;
};

struct DualRayCert {
    std::vector<Monomial> monomials;
    std::vector<double> values;
    double margin = 0.0;
    double psd_slack = 0.0;
};

struct MemberResult {
    MemberStatus status = MemberStatus::no_certificate_at_d;
    std::optional<MembershipCertificate> certificate;
    std::optional<DualRayCert> ray;
    int iterations = 0;
    std::string note;
};

MemberResult member(const Polynomial& f, const QuadraticModuleSpec& M, int d,
                    const Tolerances& tol = {});

struct SeqMemberResult {
    bool in_closure_at_schedule = false;
    int e = 0;
    std::vector<Rational> eps_schedule;
    std::vector<MemberStatus> per_eps;
    std::optional<MembershipCertificate> last_certificate;
    std::string note;
};

// Tests f + eps*(1+sum x_i^2)^e membership for every eps in the schedule;
// one-sided: a pass is "in the sequential closure at this schedule",
// never an unconditional claim.
SeqMemberResult seq_member(const Polynomial& f, const QuadraticModuleSpec& M, int d, int e,
                           const std::vector<Rational>& eps_schedule, const Tolerances& tol = {});

struct PosYCertificate {
    int m = 0;
    GramBlockCert p_block;  // SOS multiplier
    MembershipCertificate q_cert;
    Rational residual;  // of p*f - f^{2m} - q, exact
};

struct PosSemiResult {
    MemberStatus status = MemberStatus::no_certificate_at_d;
    std::optional<PosYCertificate> certificate;
    std::string note;
};

// Searches m = 1..m_max for p*f = f^{2m} + q with p a sum of squares and
// q in M, all at truncation degree d.
PosSemiResult pos_semiordering(const Polynomial& f, const QuadraticModuleSpec& M, int d,
                               int m_max = 3, const Tolerances& tol = {});

struct PowerCertPair {
    Polynomial sos_weight;
    Polynomial module_element;  // 1 or q
};

struct PowerCertificates {
    // claim1[i-1]: pairs summing to l^{2i} p - f^{2i} p
    // claim2[i-1]: pairs summing to l^{2i+2} p - f^{2i}
    std::vector<std::vector<PowerCertPair>> claim1, claim2;
    std::vector<Polynomial> claim1_targets, claim2_targets;
};

// Requires the exact identity (l^2 - f^2) p = 1 + q; emits explicit
// representations via the recursions
//   l^{2i+2}p - f^{2i+2}p = l^2 (l^{2i}p - f^{2i}p) + f^{2i} (l^2 p - f^2 p)
//   l^{2i+2}p - f^{2i}    = l^2 (l^{2i}p - f^{2i}p) + f^{2i} (l^2 p - 1).
PowerCertificates bounded_power_certificates(const Polynomial& p, const Polynomial& q,
                                             const Polynomial& f, const Rational& ell, int i_max);

struct ArchimedeanResult {
    bool certified = false;
    Rational k;
    std::optional<MembershipCertificate> certificate;
    std::vector<std::pair<Rational, MemberStatus>> probes;
};

// Certified iff k - sum x_i^2 has a membership certificate for some k in
// the schedule; `unknown` (certified=false) otherwise.  One-sided.
ArchimedeanResult archimedean_probe(const QuadraticModuleSpec& M,
                                    const std::vector<Rational>& k_schedule, int d,
                                    const Tolerances& tol = {});

struct SupportCertification {
    Polynomial h;
    MembershipCertificate pos, neg;
};

// Candidates h with both h and -h certified in M at degree d.
std::vector<SupportCertification> support_probe(const QuadraticModuleSpec& M, int d,
                                                const std::vector<Polynomial>& candidates,
                                                const Tolerances& tol = {});

// M plus +-radical_gens as generators (the ideal part of the stable
// closure formula; radical generators are caller-supplied).
QuadraticModuleSpec stable_closure(const QuadraticModuleSpec& M,
                                   const std::vector<Polynomial>& radical_gens);

enum class StabilityStatus { stable, hypothesis_failed, not_applicable, empty_k };

struct BoundedFormEvidence {
    Polynomial form;
    double lo = 0.0, hi = 0.0;
    bool in_support = false;  // +-(form - mid) certified in M at degree 2
};

struct StabilityEvidence {
    StabilityStatus status = StabilityStatus::not_applicable;
    std::vector<double> base_point;
    std::vector<double> direction;  // strictly positive on the reduced forms
    std::vector<BoundedFormEvidence> bounded_forms;
    std::optional<Polynomial> witness;  // bounded, not in R + support
    std::string note;
};

// Linear-generator stability test: base point by LP, boundedness probes on
// coordinates/user forms, positive linear independence modulo the certified
// support, and an interior direction by the theorem of alternatives.
StabilityEvidence poly_stability(const QuadraticModuleSpec& M,
                                 const std::vector<Polynomial>& user_forms = {},
                                 const Tolerances& tol = {});

struct PseudoMoments {
    int degree2d = 0;  // values indexed by monomials of degree <= 2d
    std::vector<Monomial> basis;
    std::vector<double> values;

    static PseudoMoments dirac(const std::vector<std::string>& vars,
                               const std::vector<double>& point, int d);
    double value_at(const Monomial& m) const;
};

struct MomentCheckResult {
    bool psd_pass = false;
    // Failing data: block -1 is the moment matrix, otherwise the index of
    // the localizing generator.
    int failing_block = -2;
    std::vector<double> witness_vector;
    double witness_value = 0.0;
    std::optional<Polynomial> witness_polynomial;  // (b.v)^2 * g with L < 0
    std::vector<double> mineigs;
};

// Necessary-condition dual side: moment matrix plus one localizing matrix
// per generator, all required PSD within tolerance.
MomentCheckResult dual_moment_check(const PseudoMoments& L, const QuadraticModuleSpec& M, int d,
                                    const Tolerances& tol = {});

}  // namespace qmclose
