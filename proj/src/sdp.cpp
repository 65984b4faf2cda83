#include "qmclose/sdp.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qmclose {

void SdpProblem::check_limits() const {
    for (int s : block_sizes)
        if (s <= 0 || s > max_block) throw LimitError("sdp: block size beyond configured limit");
    if (constraints.size() > max_constraints) throw LimitError("sdp: too many constraints");
}

namespace {

using BlockDiag = std::vector<Mat>;

BlockDiag make_blocks(const std::vector<int>& sizes, double diag) {
    BlockDiag b;
    b.reserve(sizes.size());
    for (int s : sizes) {
        Mat m(static_cast<size_t>(s), static_cast<size_t>(s));
        for (int i = 0; i < s; ++i) m(static_cast<size_t>(i), static_cast<size_t>(i)) = diag;
        b.push_back(std::move(m));
    }
    return b;
}

// Materialize the symmetric constraint matrices per block.
std::vector<BlockDiag> materialize(const SdpProblem& p) {
    std::vector<BlockDiag> mats(p.constraints.size());
    for (size_t k = 0; k < p.constraints.size(); ++k) {
        mats[k] = make_blocks(p.block_sizes, 0.0);
        for (const auto& e : p.constraints[k].entries) {
            Mat& m = mats[k][static_cast<size_t>(e.block)];
            if (e.i == e.j) {
                m(static_cast<size_t>(e.i), static_cast<size_t>(e.i)) += e.coeff;
            } else {
                m(static_cast<size_t>(e.i), static_cast<size_t>(e.j)) += 0.5 * e.coeff;
                m(static_cast<size_t>(e.j), static_cast<size_t>(e.i)) += 0.5 * e.coeff;
            }
        }
    }
    return mats;
}

double inner(const BlockDiag& a, const BlockDiag& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += frob_inner(a[i], b[i]);
    return s;
}

BlockDiag add_scaled(const BlockDiag& a, const BlockDiag& b, double t) {
    BlockDiag r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i].scaled(t);
    return r;
}

// Largest step alpha in (0,1] keeping a + alpha*d positive definite,
// located by bisection against Cholesky.
double max_step(const BlockDiag& a, const BlockDiag& d) {
    auto pd_at = [&](double alpha) {
        for (size_t i = 0; i < a.size(); ++i) {
            Mat trial = a[i] + d[i].scaled(alpha);
            Mat l;
            if (!cholesky(trial, &l)) return false;
        }
        return true;
    };
    if (pd_at(2.0)) return 2.0;  // full unit step fits comfortably
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (pd_at(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

struct IpmState {
    BlockDiag x, s;
    std::vector<double> y;
};

struct IpmProblem {
    std::vector<int> sizes;
    std::vector<BlockDiag> a;  // constraint matrices
    std::vector<double> b;
    BlockDiag c;
    size_t m() const { return a.size(); }
    double total_dim() const {
        double n = 0;
        for (int s : sizes) n += s;
        return n;
    }
};

BlockDiag adjoint(const IpmProblem& p, const std::vector<double>& y) {
    BlockDiag r = make_blocks(p.sizes, 0.0);
    for (size_t k = 0; k < p.m(); ++k)
        for (size_t bl = 0; bl < r.size(); ++bl) r[bl] = r[bl] + p.a[k][bl].scaled(y[k]);
    return r;
}

std::vector<double> apply_constraints(const IpmProblem& p, const BlockDiag& x) {
    std::vector<double> v(p.m());
    for (size_t k = 0; k < p.m(); ++k) v[k] = inner(p.a[k], x);
    return v;
}

struct IpmResult {
    bool converged = false;
    bool stalled = false;
    bool early = false;
    IpmState st;
    int iters = 0;
};

// Primal-dual path following with HKM directions and Mehrotra
// predictor-corrector.  Infeasible start, residuals folded into the
// Newton system.  `early_stop` may end the run once the caller's decision
// criteria are already met.
IpmResult ipm_run(const IpmProblem& p,
                  const std::function<bool(const IpmState&, int)>& early_stop = {},
                  int max_iter = 200, double start_scale = 1.0) {
    IpmState st;
    double bscale = 1.0;
    for (double v : p.b) bscale = std::max(bscale, std::fabs(v));
    double cscale = 1.0;
    for (const auto& blk : p.c) cscale = std::max(cscale, blk.max_abs());
    st.x = make_blocks(p.sizes, std::max(1.0, bscale) * start_scale);
    st.s = make_blocks(p.sizes, std::max(1.0, cscale) * start_scale);
    st.y.assign(p.m(), 0.0);
    size_t m = p.m();
    double n = p.total_dim();

    IpmResult out;
    int slow = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iters = iter;
        // Residuals.
        std::vector<double> ax = apply_constraints(p, st.x);
        std::vector<double> rp(m);
        double rp_inf = 0;
        for (size_t k = 0; k < m; ++k) {
            rp[k] = p.b[k] - ax[k];
            rp_inf = std::max(rp_inf, std::fabs(rp[k]));
        }
        BlockDiag asy = adjoint(p, st.y);
        BlockDiag rd = p.c;
        double rd_inf = 0;
        for (size_t bl = 0; bl < rd.size(); ++bl) {
            rd[bl] = rd[bl] - st.s[bl] - asy[bl];
            rd_inf = std::max(rd_inf, rd[bl].max_abs());
        }
        double mu = inner(st.x, st.s) / n;
        if (!std::isfinite(mu) || !std::isfinite(rp_inf) || !std::isfinite(rd_inf)) {
            out.stalled = true;
            break;
        }
        if (mu < 1e-14 * (1 + bscale)) {
            out.stalled = true;  // complementarity exhausted; keep best iterate
            break;
        }
        double gap_ref = 1.0 + std::fabs(inner(p.c, st.x)) + std::fabs(dot(p.b, st.y));
        if (rp_inf < 1e-10 * (1 + bscale) && rd_inf < 1e-10 * (1 + cscale) && mu * n / gap_ref < 1e-11) {
            out.converged = true;
            break;
        }
        if (early_stop && early_stop(st, iter)) {
            out.early = true;
            break;
        }

        // Factor each S block once per iteration.
        std::vector<Mat> sinv(p.sizes.size());
        bool ok = true;
        for (size_t bl = 0; bl < sinv.size(); ++bl) {
            Mat l;
            if (!cholesky(st.s[bl], &l)) {
                ok = false;
                break;
            }
            size_t nb = st.s[bl].rows();
            Mat inv(nb, nb);
            std::vector<double> e(nb, 0.0);
            for (size_t col = 0; col < nb; ++col) {
                e.assign(nb, 0.0);
                e[col] = 1.0;
                std::vector<double> sol = chol_solve(l, e);
                for (size_t r = 0; r < nb; ++r) inv(r, col) = sol[r];
            }
            sinv[bl] = std::move(inv);
        }
        if (!ok) {
            out.stalled = true;
            break;
        }

        // Schur complement M_kl = sum_b tr(A_k X A_l S^-1).
        std::vector<BlockDiag> xasi(m);
        for (size_t k = 0; k < m; ++k) {
            xasi[k] = make_blocks(p.sizes, 0.0);
            for (size_t bl = 0; bl < sinv.size(); ++bl)
                xasi[k][bl] = st.x[bl] * p.a[k][bl] * sinv[bl];
        }
        Mat schur(m, m);
        for (size_t k = 0; k < m; ++k)
            for (size_t l = 0; l < m; ++l) schur(k, l) = inner(p.a[k], xasi[l]);
        schur.symmetrize();
        Mat lfac;
        double reg = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            Mat reg_m = schur;
            if (reg > 0)
                for (size_t i = 0; i < m; ++i) reg_m(i, i) += reg;
            if (cholesky(reg_m, &lfac)) {
                ok = true;
                break;
            }
            ok = false;
            reg = reg == 0.0 ? 1e-12 * (1 + schur.max_abs()) : reg * 100;
        }
        if (!ok) {
            out.stalled = true;
            break;
        }

        auto solve_direction = [&](double mu_target, const BlockDiag* corr,
                                   BlockDiag* dx, std::vector<double>* dy, BlockDiag* ds) {
            // dX = mu S^-1 - X - (corr) S^-1 - X (Rd - A*(dy)) S^-1
            BlockDiag base = make_blocks(p.sizes, 0.0);
            for (size_t bl = 0; bl < base.size(); ++bl) {
                base[bl] = sinv[bl].scaled(mu_target) - st.x[bl] - st.x[bl] * rd[bl] * sinv[bl];
                if (corr) base[bl] = base[bl] - (*corr)[bl] * sinv[bl];
            }
            std::vector<double> rhs(m);
            std::vector<double> abase = apply_constraints(p, base);
            for (size_t k = 0; k < m; ++k) rhs[k] = rp[k] - abase[k];
            *dy = chol_solve(lfac, rhs);
            *ds = rd;
            BlockDiag ady = adjoint(p, *dy);
            for (size_t bl = 0; bl < ds->size(); ++bl) (*ds)[bl] = (*ds)[bl] - ady[bl];
            *dx = base;
            for (size_t bl = 0; bl < dx->size(); ++bl) {
                (*dx)[bl] = (*dx)[bl] - st.x[bl] * (*ds)[bl] * sinv[bl];
                (*dx)[bl].symmetrize();
            }
        };

        // Predictor (affine scaling).
        BlockDiag dxa, dsa;
        std::vector<double> dya;
        solve_direction(0.0, nullptr, &dxa, &dya, &dsa);
        double ap = std::min(1.0, 0.98 * max_step(st.x, dxa));
        double ad = std::min(1.0, 0.98 * max_step(st.s, dsa));
        double mu_aff = inner(add_scaled(st.x, dxa, ap), add_scaled(st.s, dsa, ad)) / n;
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        sigma = std::min(sigma, 1.0);

        // Corrector with second-order term dXa * dSa.
        BlockDiag corr = make_blocks(p.sizes, 0.0);
        for (size_t bl = 0; bl < corr.size(); ++bl) corr[bl] = dxa[bl] * dsa[bl];
        BlockDiag dx, ds;
        std::vector<double> dy;
        solve_direction(sigma * mu, &corr, &dx, &dy, &ds);

        double alpha_p = std::min(1.0, 0.98 * max_step(st.x, dx));
        double alpha_d = std::min(1.0, 0.98 * max_step(st.s, ds));
        if (alpha_p < 1e-8 && alpha_d < 1e-8) {
            if (++slow >= 3) {
                out.stalled = true;
                break;
            }
        } else {
            slow = 0;
        }
        for (size_t bl = 0; bl < st.x.size(); ++bl) {
            st.x[bl] = st.x[bl] + dx[bl].scaled(alpha_p);
            st.s[bl] = st.s[bl] + ds[bl].scaled(alpha_d);
        }
        for (size_t k = 0; k < m; ++k) st.y[k] += alpha_d * dy[k];
    }
    out.st = std::move(st);
    return out;
}

}  // namespace

double sdp_residual(const SdpProblem& prob, const std::vector<Mat>& x) {
    auto mats = materialize(prob);
    double r = 0;
    for (size_t k = 0; k < prob.constraints.size(); ++k) {
        double v = 0;
        for (size_t bl = 0; bl < x.size(); ++bl) v += frob_inner(mats[k][bl], x[bl]);
        r = std::max(r, std::fabs(v - prob.constraints[k].rhs));
    }
    return r;
}

double sdp_min_eig(const std::vector<Mat>& x) {
    double m = 0;
    bool first = true;
    for (const auto& blk : x) {
        if (blk.rows() == 0) continue;
        double e = jacobi_eigensym(blk).values.front();
        m = first ? e : std::min(m, e);
        first = false;
    }
    return m;
}

void sdp_ray_quality(const SdpProblem& prob, const std::vector<double>& y,
                     double* margin, double* psd_slack) {
    auto mats = materialize(prob);
    double bm = 0;
    for (size_t k = 0; k < prob.constraints.size(); ++k) bm += y[k] * prob.constraints[k].rhs;
    BlockDiag w = make_blocks(prob.block_sizes, 0.0);
    for (size_t k = 0; k < prob.constraints.size(); ++k)
        for (size_t bl = 0; bl < w.size(); ++bl) w[bl] = w[bl] + mats[k][bl].scaled(-y[k]);
    double slack = 0;
    bool first = true;
    for (const auto& blk : w) {
        double e = jacobi_eigensym(blk).values.front();
        slack = first ? e : std::min(slack, e);
        first = false;
    }
    *margin = bm;
    *psd_slack = slack;
}

SdpSolution sdp_feasible(const SdpProblem& prob, const Tolerances& tol) {
    prob.check_limits();
    SdpSolution sol;
    size_t m = prob.constraints.size();
    if (m == 0) {
        sol.status = SdpStatus::feasible;
        for (int s : prob.block_sizes) sol.blocks.push_back(Mat::identity(static_cast<size_t>(s)));
        sol.mineig = prob.block_sizes.empty() ? 0.0 : 1.0;
        return sol;
    }

    // Phase-1 embedding with a trace cap: blocks (X, s, t) with
    //   <A_k,X> + t (b_k - <A_k,I>) = b_k,
    //   tr(X) + s + t (T - tr(I) - 1) = T,
    // minimizing t.  X = I, s = 1, t = 1 is exactly feasible.  The cap
    // compactifies unbounded feasible sets so the central path exists; a
    // candidate ray leaning on the cap row fails verification against the
    // original problem and degrades to `inconclusive` honestly.
    IpmProblem ip;
    ip.sizes = prob.block_sizes;
    ip.sizes.push_back(1);  // s
    ip.sizes.push_back(1);  // t
    size_t sblock = ip.sizes.size() - 2;
    size_t tblock = ip.sizes.size() - 1;
    auto mats = materialize(prob);

    double bref = 1.0;
    for (const auto& c : prob.constraints) bref = std::max(bref, std::fabs(c.rhs));
    double total_dim = 0;
    for (int s : prob.block_sizes) total_dim += s;
    double trace_cap = 1000.0 * (total_dim + 1.0) * std::max(1.0, bref);

    // Row scaling for conditioning; solutions are unchanged.
    std::vector<double> rowscale(m, 1.0);
    ip.a.resize(m + 1);
    ip.b.resize(m + 1);
    for (size_t k = 0; k < m; ++k) {
        double mx = std::fabs(prob.constraints[k].rhs);
        for (const auto& blk : mats[k]) mx = std::max(mx, blk.max_abs());
        rowscale[k] = mx > 0 ? 1.0 / mx : 1.0;
        ip.a[k] = make_blocks(ip.sizes, 0.0);
        double trace_a = 0;
        for (size_t bl = 0; bl < mats[k].size(); ++bl) {
            ip.a[k][bl] = mats[k][bl].scaled(rowscale[k]);
            for (size_t i = 0; i < ip.a[k][bl].rows(); ++i) trace_a += ip.a[k][bl](i, i);
        }
        double b_k = prob.constraints[k].rhs * rowscale[k];
        ip.a[k][tblock](0, 0) = b_k - trace_a;
        ip.b[k] = b_k;
    }
    {
        double capscale = 1.0 / trace_cap;
        ip.a[m] = make_blocks(ip.sizes, 0.0);
        for (size_t bl = 0; bl + 2 < ip.sizes.size(); ++bl)
            for (size_t i = 0; i < ip.a[m][bl].rows(); ++i) ip.a[m][bl](i, i) = capscale;
        ip.a[m][sblock](0, 0) = capscale;
        ip.a[m][tblock](0, 0) = capscale * (trace_cap - total_dim - 1.0);
        ip.b[m] = 1.0;  // = trace_cap * capscale
    }
    ip.c = make_blocks(ip.sizes, 0.0);
    ip.c[tblock](0, 0) = 1.0;

    // Stop once the extracted point meets the decision thresholds or the
    // dual ray already verifies; remember the best candidate seen, since
    // iterates can degrade once complementarity is exhausted.
    auto fast_residual = [&](const std::vector<Mat>& cand) {
        double r = 0;
        for (size_t k = 0; k < m; ++k) {
            double v = 0;
            for (size_t bl = 0; bl < cand.size(); ++bl) v += frob_inner(mats[k][bl], cand[bl]);
            r = std::max(r, std::fabs(v - prob.constraints[k].rhs));
        }
        return r;
    };
    std::vector<Mat> best_cand;
    double best_resid = std::numeric_limits<double>::infinity();
    auto early_stop = [&](const IpmState& st, int iter) {
        std::vector<Mat> cand(st.x.begin(), st.x.end() - 2);
        double r = fast_residual(cand);
        if (r < best_resid) {
            best_resid = r;
            best_cand = cand;
        }
        if (r <= 0.5 * tol.feas * bref) return true;
        if (iter >= 8 && iter % 4 == 0) {
            std::vector<double> yr(m);
            double ymax = 0;
            for (size_t k = 0; k < m; ++k) {
                yr[k] = st.y[k] * rowscale[k];
                ymax = std::max(ymax, std::fabs(yr[k]));
            }
            if (ymax > 0) {
                for (auto& v : yr) v /= ymax;
                double margin, slack;
                sdp_ray_quality(prob, yr, &margin, &slack);
                if (margin > 2 * tol.feas && slack >= -0.5 * tol.psd) return true;
            }
        }
        return false;
    };

    // Affine polish: push a near-feasible candidate exactly onto the
    // constraint subspace; accepted only when the eigenvalue check still
    // passes afterwards.
    auto polish = [&](std::vector<Mat> cand) -> std::vector<Mat> {
        size_t mm = prob.constraints.size();
        Mat gram(mm, mm);
        for (size_t k = 0; k < mm; ++k)
            for (size_t l = k; l < mm; ++l) {
                double s = 0;
                for (size_t bl = 0; bl < mats[k].size(); ++bl)
                    s += frob_inner(mats[k][bl], mats[l][bl]);
                gram(k, l) = s;
                gram(l, k) = s;
            }
        std::vector<double> rp(mm);
        for (size_t k = 0; k < mm; ++k) {
            double v = 0;
            for (size_t bl = 0; bl < cand.size(); ++bl) v += frob_inner(mats[k][bl], cand[bl]);
            rp[k] = prob.constraints[k].rhs - v;
        }
        Mat lfac;
        Mat reg = gram;
        for (size_t i = 0; i < mm; ++i) reg(i, i) += 1e-12 * (1 + gram.max_abs());
        if (!cholesky(reg, &lfac)) return cand;
        std::vector<double> w = chol_solve(lfac, rp);
        for (size_t k = 0; k < mm; ++k)
            for (size_t bl = 0; bl < cand.size(); ++bl)
                cand[bl] = cand[bl] + mats[k][bl].scaled(w[k]);
        return cand;
    };

    for (double start_scale : {1.0, 0.1, 10.0}) {
        IpmResult res = ipm_run(ip, early_stop, 200, start_scale);
        sol.iterations += res.iters;

        // Candidate primal point (best iterate seen), then its polish.
        std::vector<Mat> x(res.st.x.begin(), res.st.x.end() - 2);
        if (!best_cand.empty() && best_resid < fast_residual(x)) x = best_cand;
        for (int attempt = 0; attempt < 2; ++attempt) {
            double resid = sdp_residual(prob, x);
            double meig = sdp_min_eig(x);
            if (resid <= tol.feas * bref && meig >= -tol.psd) {
                sol.status = SdpStatus::feasible;
                sol.blocks = std::move(x);
                sol.residual = resid;
                sol.mineig = meig;
                sol.note = attempt == 0 ? "phase1 feasible" : "phase1 feasible (polished)";
                return sol;
            }
            if (attempt == 0) {
                sol.residual = resid;
                sol.mineig = meig;
                x = polish(std::move(x));
            }
        }

        // Candidate Farkas ray from the dual variables (undo row scaling,
        // normalize to inf-norm 1).
        std::vector<double> y(m);
        double ymax = 0;
        for (size_t k = 0; k < m; ++k) {
            y[k] = res.st.y[k] * rowscale[k];
            ymax = std::max(ymax, std::fabs(y[k]));
        }
        if (ymax > 0) {
            for (auto& v : y) v /= ymax;
            double margin, slack;
            sdp_ray_quality(prob, y, &margin, &slack);
            if (margin > tol.feas && slack >= -tol.psd) {
                sol.status = SdpStatus::infeasible;
                sol.dual_ray = std::move(y);
                sol.ray_margin = margin;
                sol.ray_psd_slack = slack;
                sol.note = "farkas ray verified";
                return sol;
            }
        }
        sol.note = res.stalled ? "interior point stalled" : "no verified certificate at tolerance";
        // Keep the best candidate for callers that can certify exactly.
        if (sol.blocks.empty() && !x.empty()) {
            sol.blocks = x;
            sol.residual = sdp_residual(prob, x);
            sol.mineig = sdp_min_eig(x);
        }
    }

    sol.status = SdpStatus::inconclusive;
    return sol;
}

SdpSolution sdp_solve(const SdpProblem& prob, const Tolerances& tol) {
    prob.check_limits();
    if (prob.objective.empty()) return sdp_feasible(prob, tol);
    IpmProblem ip;
    ip.sizes = prob.block_sizes;
    auto mats = materialize(prob);
    size_t m = prob.constraints.size();
    ip.a.resize(m);
    ip.b.resize(m);
    for (size_t k = 0; k < m; ++k) {
        ip.a[k] = mats[k];
        ip.b[k] = prob.constraints[k].rhs;
    }
    SdpProblem objwrap = prob;
    objwrap.constraints.assign(1, SdpConstraint{prob.objective, 0.0});
    ip.c = materialize(objwrap)[0];

    double bref = 1.0;
    for (const auto& c : prob.constraints) bref = std::max(bref, std::fabs(c.rhs));
    double n_total = ip.total_dim();
    auto early_stop = [&](const IpmState& st, int) {
        double rp = 0;
        std::vector<double> ax = apply_constraints(ip, st.x);
        for (size_t k = 0; k < m; ++k) rp = std::max(rp, std::fabs(ip.b[k] - ax[k]));
        double gap = inner(st.x, st.s) / std::max(1.0, n_total);
        double ref = 1.0 + std::fabs(inner(ip.c, st.x));
        return rp <= 0.1 * tol.feas * bref && gap / ref <= 1e-9;
    };

    IpmResult res = ipm_run(ip, early_stop);
    SdpSolution sol;
    sol.iterations = res.iters;
    double resid = sdp_residual(prob, res.st.x);
    double meig = sdp_min_eig(res.st.x);
    if ((res.converged || res.early) && resid <= tol.feas * bref && meig >= -tol.psd) {
        sol.status = SdpStatus::feasible;
        sol.blocks = res.st.x;
        sol.residual = resid;
        sol.mineig = meig;
        sol.objective_value = inner(ip.c, res.st.x);
    } else {
        sol.status = SdpStatus::inconclusive;
        sol.residual = resid;
        sol.mineig = meig;
        sol.note = "optimization did not converge to tolerance";
    }
    return sol;
}

}  // namespace qmclose
