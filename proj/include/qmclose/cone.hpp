#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qmclose/rational.hpp"
#include "qmclose/sdp.hpp"

namespace qmclose {

using RatVec = std::vector<Rational>;

// Spectrahedral-slice handle: the feasible set of `base` projected by the
// linear map `proj` (one functional per output coordinate).  Membership
// oracle only; no polyhedral conversions.
struct SdpSlice {
    SdpProblem base;
    std::vector<std::vector<SdpEntry>> proj;
};

enum class ConeRep { generators, halfspaces, lexicographic, sdp_slice };

// Finite-dimensional convex cone.  Polyhedral representations are exact
// (rational) and closed; the lexicographic representation covers the
// C u -C = V examples that are not closed; SdpSlice is oracle-only.
class TruncatedCone {
  public:
    static TruncatedCone from_generators(size_t dim, std::vector<RatVec> gens);
    static TruncatedCone from_halfspaces(size_t dim, std::vector<RatVec> rows);
    // Member iff the first functional with nonzero value is positive.
    static TruncatedCone from_lexicographic(size_t dim, std::vector<RatVec> functionals);
    static TruncatedCone from_sdp_slice(size_t dim, SdpSlice slice);

    size_t dim() const { return dim_; }
    ConeRep rep() const { return rep_; }

    // Polyhedral data (throws for sdp_slice / lexicographic where absent).
    // Conversions run exact double description, eagerly cached; limits
    // dim <= 12, generators/rows <= 200.
    const std::vector<RatVec>& generators() const;
    const std::vector<RatVec>& halfspaces() const;
    const std::vector<RatVec>& lineality() const;   // of the closed cone
    const std::vector<RatVec>& extreme_rays() const;  // modulo lineality
    const std::vector<RatVec>& lex_functionals() const { return lex_; }
    const SdpSlice& slice() const { return *slice_; }

    bool member(const RatVec& v) const;  // exact for polyhedral/lex reps

  private:
    size_t dim_ = 0;
    ConeRep rep_ = ConeRep::generators;
    std::vector<RatVec> gens_, rows_, lex_;
    std::vector<RatVec> lineality_, rays_;
    std::optional<SdpSlice> slice_;
    bool converted_ = false;

    void ensure_converted() const;
};

// Exact double description: extreme rays and lineality of {x : Ax >= 0}.
struct DdResult {
    std::vector<RatVec> lineality;
    std::vector<RatVec> rays;
};
DdResult dd_rays(size_t dim, const std::vector<RatVec>& rows);

// C^v as a cone (representation swapped, conversions cached).
TruncatedCone dual_cone(const TruncatedCone& c);

struct InteriorResult {
    bool interior = false;
    std::optional<RatVec> violating_functional;  // nonzero L in C^v, L(v) <= 0
};
InteriorResult is_interior(const TruncatedCone& c, const RatVec& v);

enum class ShiftOutcome { holds, fails, precondition_failed };
struct ShiftResult {
    ShiftOutcome outcome;
    std::string detail;
};
// Checks that v + eps*q is interior given q interior and v in the closure.
ShiftResult interior_shift(const TruncatedCone& c, const RatVec& q_interior,
                           const RatVec& v, const Rational& eps);

// dim(V/(C n -C)) <= 1 for cones with C u -C = V; throws
// std::invalid_argument when the hypothesis fails.
bool semispace_closed(const TruncatedCone& c);

// One-sided sequential-closure membership over a finite epsilon schedule.
enum class SeqVerdict { in_closure, not_detected, inconclusive };
struct SeqClosureWitness {
    RatVec base;
    RatVec perturber;
    std::vector<Rational> eps_schedule;
    std::vector<int> verdicts;  // 1 member, 0 not, -1 oracle failure
    SeqVerdict verdict = SeqVerdict::not_detected;
};
// Oracle decides membership in C of a rational vector: 1 / 0 / -1 unknown.
using MembershipOracle = std::function<int(const RatVec&)>;
SeqClosureWitness seq_closure_member(const MembershipOracle& oracle, const RatVec& v,
                                     const RatVec& q, const std::vector<Rational>& eps_schedule);

// Helpers shared with tests.
RatVec canonical_ray(const RatVec& v);  // primitive integer direction
std::vector<RatVec> rref(std::vector<RatVec> rows);
RatVec reduce_mod_span(const std::vector<RatVec>& span_rref, RatVec v);
// Canonical (lineality RREF, sorted reduced rays) pair for set comparison.
struct ConeCanonical {
    std::vector<RatVec> lineality_rref;
    std::vector<RatVec> rays;
    bool operator==(const ConeCanonical& o) const = default;
};
ConeCanonical canonical_form(const TruncatedCone& c);

}  // namespace qmclose
