#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmclose/linalg.hpp"

namespace qmclose {

// min c.x  s.t.  A_eq x = b_eq,  A_ge x >= b_ge,  x_j >= 0 for j with
// nonneg[j] (free otherwise).  Objective optional (feasibility when empty).
struct LpProblem {
    size_t nvars = 0;
    Mat a_eq;                  // may be 0 x n
    std::vector<double> b_eq;
    Mat a_ge;                  // may be 0 x n
    std::vector<double> b_ge;
    std::vector<char> nonneg;  // size nvars; 1 = x_j >= 0
    std::vector<double> objective;  // empty = pure feasibility

    static LpProblem feasibility(size_t nvars);
};

enum class LpStatus { feasible, infeasible, optimal, unbounded };

struct LpSolution {
    LpStatus status;
    std::vector<double> x;           // feasible/optimal point
    double objective_value = 0.0;
    // Farkas certificate when infeasible: multipliers y_eq (free) and
    // y_ge >= 0 with y.A componentwise <= 0 on nonneg vars, = 0 on free
    // vars, and y.b > 0.
    std::vector<double> farkas_eq;
    std::vector<double> farkas_ge;
    double farkas_margin = 0.0;
    std::vector<double> ray;         // improving ray when unbounded
};

// Two-phase dense simplex with Bland anti-cycling.  Suitable for desk
// scale (up to ~1e4 variables).
LpSolution lp_solve(const LpProblem& prob, double tol = 1e-9);

// Convenience: feasibility status only.
LpSolution lp_feasible(const LpProblem& prob, double tol = 1e-9);

}  // namespace qmclose
