#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmclose/qmodule.hpp"

namespace qmclose {

struct BoundSideResult {
    bool certified = false;
    bool via_seq = false;  // certificate came from the eps-perturbed test
    std::optional<MembershipCertificate> certificate;
    std::optional<SeqMemberResult> seq;
    std::string note;
};

// a <= f <= b evidence: b - f and f - a membership (or sequential-closure)
// certificates.
struct BoundedElementWitness {
    Polynomial f;
    Rational a, b;
    BoundSideResult upper;  // b - f
    BoundSideResult lower;  // f - a
    bool both() const { return upper.certified && lower.certified; }
};

BoundedElementWitness certify_bounds(const Polynomial& f, const QuadraticModuleSpec& M,
                                     const Rational& a, const Rational& b, int d,
                                     const Tolerances& tol = {}, bool allow_seq = true);

struct FiberDecomposition {
    QuadraticModuleSpec base;
    std::string var;
    Rational a, b;
    std::vector<Rational> grid;
    std::vector<QuadraticModuleSpec> fibers;  // generators substituted at grid values
};

// Uniform grid on [a,b] (grid_size points, endpoints included); fiber at
// lambda has generators substitute(g, var, lambda) over the remaining
// variables.  Requires var to be a coordinate.
FiberDecomposition fiber_decompose(const QuadraticModuleSpec& M, const std::string& var,
                                   const Rational& a, const Rational& b, int grid_size);

struct FiberMemberResult {
    std::vector<MemberStatus> per_fiber;
    bool member_on_all_grid_fibers = false;
    std::optional<size_t> first_failure;  // grid index
};

// Runs member on every grid fiber (f_test substituted accordingly).  A pass
// is grid-sampled evidence only and is labeled as such in reports.
FiberMemberResult fiber_member(const Polynomial& f_test, const FiberDecomposition& decomp, int d,
                               const Tolerances& tol = {});

struct BoundOverride {
    std::string var;
    Rational a, b;
};

struct WeakClosureOptions {
    int depth_limit = 4;
    int d = 6;
    int grid_size = 33;
    Tolerances tol;
    bool allow_seq_bounds = true;
    std::vector<BoundOverride> overrides;  // caller-asserted intervals
    std::vector<Rational> bound_schedule;  // candidate bound magnitudes
};

enum class WeakClosureVerdict { member_at_grid, no_certificate, depth_exhausted };

struct WeakClosureTrace {
    std::string module_name;
    std::vector<std::string> vars;
    std::vector<std::string> generators;
    int depth = 0;
    std::string case_taken;  // "improper", "no_bounded_coordinate", "fibered"
    std::string chosen_var;
    Rational a, b;
    bool interval_overridden = false;
    bool midpoint_support_probe_certified = false;
    std::string note;
    MemberStatus leaf_status = MemberStatus::no_certificate_at_d;
    std::vector<Rational> grid;
    std::vector<std::shared_ptr<WeakClosureTrace>> children;
};

struct WeakClosureResult {
    WeakClosureVerdict verdict = WeakClosureVerdict::no_certificate;
    std::optional<Rational> failed_at;  // grid value of the first failing fiber
    std::shared_ptr<WeakClosureTrace> trace;
};

// Recursive weak-closure membership: fiber over the lowest-index certified
// bounded coordinate; when none certifies, the weak closure equals the
// module at this node and the verdict is plain membership.  All positives
// are grid- and depth-qualified.
WeakClosureResult weak_closure_member(const Polynomial& f_test, const QuadraticModuleSpec& M,
                                      const WeakClosureOptions& opts = {});

}  // namespace qmclose
