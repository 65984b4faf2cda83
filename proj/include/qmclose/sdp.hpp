#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qmclose/linalg.hpp"

namespace qmclose {

struct Tolerances {
    double feas = 1e-8;
    double psd = 1e-8;
};

// One addend of a linear functional on block-diagonal symmetric X:
// contributes coeff * X[block](i,j).  X is symmetric, so (i,j) and (j,i)
// address the same unknown; the materialized constraint matrix is the
// symmetrized accumulation.
struct SdpEntry {
    int block;
    int i, j;
    double coeff;
};

struct SdpConstraint {
    std::vector<SdpEntry> entries;
    double rhs = 0.0;
};

// Feasibility/optimization problem over block-diagonal PSD matrices with
// linear equality constraints.  Dense, desk scale (block side <= ~300).
struct SdpProblem {
    std::vector<int> block_sizes;
    std::vector<SdpConstraint> constraints;
    std::vector<SdpEntry> objective;  // empty = pure feasibility
    int max_block = 400;
    size_t max_constraints = 20000;

    void check_limits() const;  // throws LimitError beyond configured sizes
};

enum class SdpStatus { feasible, infeasible, inconclusive };

struct SdpSolution {
    SdpStatus status = SdpStatus::inconclusive;
    std::vector<Mat> blocks;        // X, when feasible
    double residual = 0.0;          // max-norm constraint violation of X
    double mineig = 0.0;            // smallest eigenvalue over blocks of X
    double objective_value = 0.0;
    std::vector<double> dual_ray;   // y, when infeasible (inf-norm 1)
    double ray_margin = 0.0;        // b.y of the normalized ray
    double ray_psd_slack = 0.0;     // lambda_min(-A*(y))
    int iterations = 0;
    std::string note;
};

struct LimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Three-valued feasibility via a phase-1 interior-point method.  `feasible`
// and `infeasible` both carry certificates that are re-verified post hoc;
// solver stall is reported as `inconclusive`, never silently converted.
SdpSolution sdp_feasible(const SdpProblem& prob, const Tolerances& tol = {});

// Minimize the objective assuming feasibility (infeasible start IPM).
SdpSolution sdp_solve(const SdpProblem& prob, const Tolerances& tol = {});

// Post-hoc checks, independent of the solver path.
double sdp_residual(const SdpProblem& prob, const std::vector<Mat>& x);
double sdp_min_eig(const std::vector<Mat>& x);
// Margin b.y and PSD slack lambda_min(-A*(y)) of a Farkas-type ray.
void sdp_ray_quality(const SdpProblem& prob, const std::vector<double>& y,
                     double* margin, double* psd_slack);

}  // namespace qmclose
