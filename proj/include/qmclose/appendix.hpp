#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmclose {

// Point of the truncation W_m (trailing zeros implicit beyond coords).
struct AppendixPoint {
    std::vector<double> coords;
    int m = 0;

    double at(size_t i) const { return i < coords.size() ? coords[i] : 0.0; }
};

// l = (l_0,...,l_n): l_0..l_{n-1} are block spans, and 1/l_{i+1} is the
// threshold of block i (so interior entries play both roles).
struct BlockSignature {
    std::vector<int> l;
    int steps() const { return static_cast<int>(l.size()) - 1; }
};

// Coordinate comparisons use this tolerance against the exact rational
// thresholds 1/l.
inline constexpr double kAppendixTol = 1e-12;

bool in_U(const AppendixPoint& x, const BlockSignature& l, int n);

struct MnResult {
    bool member = false;
    std::optional<BlockSignature> signature;
};

// Exhaustive signature search with spans summing to <= x.m and the final
// threshold integer <= search_bound (0 = max(10, ceil(1/min positive
// coordinate)), which makes the search complete for x).
MnResult in_Mn(const AppendixPoint& x, int n, int search_bound = 0);

// Constructive sequential-closure detection for M_n: lifts the final block
// to 1/k and verifies each lifted point via in_Mn.  Approximating points
// may live in W_{m'} for m' > x.m (the ambient space is the union of all
// truncations).
struct LimitEvidence {
    bool detected = false;
    std::vector<int> lift_spans;   // composition (c_0..c_{n-1})
    std::vector<int> ks;           // verified lift parameters
    double max_delta = 0.0;        // ||x^k - x||_inf at the last k
};
LimitEvidence limit_detect_Mn(const AppendixPoint& x, int n, int search_bound = 0);

struct ConicAtom {
    std::vector<double> coords;
    BlockSignature signature;
    double coefficient = 0.0;
};

struct ConicCombination {
    std::vector<ConicAtom> atoms;  // size bounded by m+1 (Caratheodory)
};

struct CcResult {
    bool member = false;
    std::optional<ConicCombination> combination;
};

// Conic-hull membership by LP over the maximal boxes per span composition,
// with the combination reduced to Caratheodory-bounded support.
CcResult in_ccMn(const AppendixPoint& x, int n, int search_bound = 0);

LimitEvidence limit_detect_ccMn(const AppendixPoint& x, int n, int search_bound = 0);

// Per-point comparison record of a peeling run.
struct PointVerdict {
    std::vector<double> coords;
    bool in_prev = false;       // membership in the peeled set
    bool limit_detected = false;
    bool agree = false;
    std::optional<BlockSignature> prev_signature;
    std::vector<int> lift_spans;
    std::vector<int> ks;
};

struct StepReport {
    int n = 0, m = 0;
    int samples = 0;
    uint64_t seed = 0;
    bool cone_variant = false;
    std::vector<PointVerdict> points;
    int discrepancies = 0;
    bool strictness_found = false;              // witness in M_{n-1} \ M_n
    std::vector<double> strictness_witness;
};

// Samples W_m (uniform plus crafted boundary points) and compares
// membership in the peeled set against the constructive limit oracle.
// n = 1 compares against the terminal closed form ([0,1]-box, resp. the
// nonnegative orthant for the cone variant).
StepReport seq_step_verify(int n, int m, int samples, uint64_t seed);
StepReport cc_seq_step_verify(int n, int m, int samples, uint64_t seed);

}  // namespace qmclose
