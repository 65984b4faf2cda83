#include "qmclose/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmclose {

LpProblem LpProblem::feasibility(size_t nvars) {
    LpProblem p;
    p.nvars = nvars;
    p.nonneg.assign(nvars, 0);
    return p;
}

namespace {

// Dense tableau simplex.  Columns: standard variables then artificials;
// last column is the rhs.  Rows: constraints, then the active objective.
struct Tableau {
    size_t m, ncols;  // constraint rows, structural columns (no rhs)
    std::vector<std::vector<double>> t;
    std::vector<size_t> basis;
    double tol;

    double& at(size_t i, size_t j) { return t[i][j]; }

    void pivot(size_t row, size_t col) {
        double inv = 1.0 / t[row][col];
        for (size_t j = 0; j <= ncols; ++j) t[row][j] *= inv;
        for (size_t i = 0; i < t.size(); ++i) {
            if (i == row) continue;
            double f = t[i][col];
            if (f == 0.0) continue;
            for (size_t j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    }

    // Minimize objective in row `obj`.  Columns with allowed[j]==0 never
    // enter.  Bland's rule (smallest entering index; among exact minimal
    // ratios the smallest basis index leaves), which cannot cycle.
    bool run(size_t obj, const std::vector<char>& allowed, size_t* unb_col) {
        size_t guard = 2000 * (m + ncols) + 10000;
        for (size_t it = 0; it < guard; ++it) {
            size_t enter = ncols;
            for (size_t j = 0; j < ncols; ++j) {
                if (!allowed[j]) continue;
                if (t[obj][j] < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols) return true;
            size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < m; ++i) {
                if (t[i][enter] > tol) {
                    double ratio = t[i][ncols] / t[i][enter];
                    if (ratio < best || (ratio == best && (leave == m || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) {
                if (unb_col) *unb_col = enter;
                return false;
            }
            pivot(leave, enter);
        }
        throw std::runtime_error("lp: pivot guard exceeded");
    }
};

}  // namespace

LpSolution lp_solve(const LpProblem& prob, double tol) {
    size_t n = prob.nvars;
    size_t m_eq = prob.b_eq.size();
    size_t m_ge = prob.b_ge.size();
    size_t m = m_eq + m_ge;
    if (prob.nonneg.size() != n) throw std::invalid_argument("lp: nonneg mask size mismatch");

    // Standard-form columns: for nonneg vars one column, for free vars a
    // split pair (u - w); then one surplus column per >= row.
    std::vector<size_t> col_of(n), neg_col_of(n, SIZE_MAX);
    size_t nc = 0;
    for (size_t j = 0; j < n; ++j) {
        col_of[j] = nc++;
        if (!prob.nonneg[j]) neg_col_of[j] = nc++;
    }
    size_t surplus0 = nc;
    nc += m_ge;
    size_t art0 = nc;
    nc += m;  // one artificial per row keeps the start basis trivial

    Tableau tb;
    tb.m = m;
    tb.ncols = nc;
    tb.tol = tol;
    tb.t.assign(m + 2, std::vector<double>(nc + 1, 0.0));
    tb.basis.assign(m, 0);

    std::vector<int> row_sign(m, 1);
    auto fill_row = [&](size_t row, const Mat& a, size_t src_row, double rhs, bool ge) {
        double sign = rhs < 0 ? -1.0 : 1.0;
        row_sign[row] = rhs < 0 ? -1 : 1;
        for (size_t j = 0; j < n; ++j) {
            double v = sign * a(src_row, j);
            tb.at(row, col_of[j]) = v;
            if (neg_col_of[j] != SIZE_MAX) tb.at(row, neg_col_of[j]) = -v;
        }
        if (ge) tb.at(row, surplus0 + src_row) = -sign;
        tb.at(row, nc) = sign * rhs;
        tb.at(row, art0 + row) = 1.0;
        tb.basis[row] = art0 + row;
    };
    for (size_t i = 0; i < m_eq; ++i) fill_row(i, prob.a_eq, i, prob.b_eq[i], false);
    for (size_t i = 0; i < m_ge; ++i) fill_row(m_eq + i, prob.a_ge, i, prob.b_ge[i], true);

    // Row m: phase-2 objective; row m+1: phase-1 objective (sum of
    // artificials, expressed through the rows to start reduced).
    if (!prob.objective.empty()) {
        for (size_t j = 0; j < n; ++j) {
            tb.at(m, col_of[j]) = prob.objective[j];
            if (neg_col_of[j] != SIZE_MAX) tb.at(m, neg_col_of[j]) = -prob.objective[j];
        }
    }
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= nc; ++j) tb.at(m + 1, j) -= tb.at(i, j);
    for (size_t i = 0; i < m; ++i) tb.at(m + 1, art0 + i) = 0.0;

    std::vector<char> allowed(nc, 1);
    size_t unb_col = 0;
    tb.run(m + 1, allowed, &unb_col);  // phase-1 is always bounded below
    double phase1 = -tb.at(m + 1, nc);

    LpSolution sol;
    if (phase1 > tol * 10) {
        // Infeasible.  Phase-1 duals read off the reduced objective row:
        // the artificial column entry is 1 - y_i.  Undo the row sign flips.
        sol.status = LpStatus::infeasible;
        std::vector<double> y(m);
        for (size_t i = 0; i < m; ++i) y[i] = 1.0 - tb.at(m + 1, art0 + i);
        for (size_t i = 0; i < m; ++i) y[i] *= row_sign[i];
        sol.farkas_eq.assign(y.begin(), y.begin() + static_cast<long>(m_eq));
        sol.farkas_ge.assign(y.begin() + static_cast<long>(m_eq), y.end());
        double margin = 0;
        for (size_t i = 0; i < m_eq; ++i) margin += sol.farkas_eq[i] * prob.b_eq[i];
        for (size_t i = 0; i < m_ge; ++i) margin += sol.farkas_ge[i] * prob.b_ge[i];
        sol.farkas_margin = margin;
        return sol;
    }

    // Drive leftover artificials out of the basis; rows with no real pivot
    // are redundant and get dropped (their artificial stays fixed at zero).
    for (size_t i = tb.m; i-- > 0;) {
        if (tb.basis[i] < art0) continue;
        size_t piv = nc;
        for (size_t j = 0; j < art0; ++j) {
            if (std::fabs(tb.t[i][j]) > tol * 100) {
                piv = j;
                break;
            }
        }
        if (piv != nc) {
            tb.pivot(i, piv);
        } else {
            tb.t.erase(tb.t.begin() + static_cast<long>(i));
            tb.basis.erase(tb.basis.begin() + static_cast<long>(i));
            tb.m -= 1;
        }
    }
    size_t m_eff = tb.m;
    (void)m_eff;

    auto extract_x = [&]() {
        std::vector<double> x(n, 0.0);
        std::vector<double> zval(nc, 0.0);
        for (size_t i = 0; i < tb.m; ++i)
            if (tb.basis[i] < nc) zval[tb.basis[i]] = tb.at(i, nc);
        for (size_t j = 0; j < n; ++j) {
            x[j] = zval[col_of[j]];
            if (neg_col_of[j] != SIZE_MAX) x[j] -= zval[neg_col_of[j]];
        }
        return x;
    };

    if (prob.objective.empty()) {
        sol.status = LpStatus::feasible;
        sol.x = extract_x();
        return sol;
    }

    // Phase 2: artificials must not re-enter.
    for (size_t i = 0; i < m; ++i) allowed[art0 + i] = 0;
    bool bounded = tb.run(tb.m, allowed, &unb_col);
    if (!bounded) {
        sol.status = LpStatus::unbounded;
        sol.x = extract_x();
        // Improving ray: unit step on the entering column, basis adjusts.
        std::vector<double> dz(nc, 0.0);
        dz[unb_col] = 1.0;
        for (size_t i = 0; i < tb.m; ++i)
            if (tb.basis[i] < nc) dz[tb.basis[i]] = -tb.at(i, unb_col);
        sol.ray.assign(n, 0.0);
        for (size_t j = 0; j < n; ++j) {
            sol.ray[j] = dz[col_of[j]];
            if (neg_col_of[j] != SIZE_MAX) sol.ray[j] -= dz[neg_col_of[j]];
        }
        return sol;
    }
    sol.status = LpStatus::optimal;
    sol.x = extract_x();
    sol.objective_value = dot(prob.objective, sol.x);
    return sol;
}

LpSolution lp_feasible(const LpProblem& prob, double tol) {
    LpProblem p = prob;
    p.objective.clear();
    return lp_solve(p, tol);
}

}  // namespace qmclose
