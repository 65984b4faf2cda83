#include "qmclose/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmclose {

Mat Mat::identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Mat: dimension mismatch");
    Mat r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t k = 0; k < cols_; ++k) {
            double a = (*this)(i, k);
            if (a == 0.0) continue;
            const double* orow = o.data_.data() + k * o.cols_;
            double* rrow = r.data_.data() + i * o.cols_;
            for (size_t j = 0; j < o.cols_; ++j) rrow[j] += a * orow[j];
        }
    }
    return r;
}

Mat Mat::scaled(double s) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

Mat Mat::transposed() const {
    Mat r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

void Mat::symmetrize() {
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = i + 1; j < cols_; ++j) {
            double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = v;
            (*this)(j, i) = v;
        }
}

double Mat::max_abs() const {
    double m = 0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double frob_inner(const Mat& a, const Mat& b) {
    double s = 0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (size_t i = 0; i < a.rows() * a.cols(); ++i) s += pa[i] * pb[i];
    return s;
}

EigenSym jacobi_eigensym(const Mat& a, int max_sweeps) {
    size_t n = a.rows();
    Mat m = a;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-30 * (1.0 + m.max_abs() * m.max_abs())) break;
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = m(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (m(q, q) - m(p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1);
                double s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigenSym out;
    out.values.resize(n);
    for (size_t i = 0; i < n; ++i) out.values[i] = m(i, i);
    // Sort ascending, permuting eigenvector columns alongside.
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return out.values[x] < out.values[y]; });
    EigenSym sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n, n);
    for (size_t j = 0; j < n; ++j) {
        sorted.values[j] = out.values[idx[j]];
        for (size_t i = 0; i < n; ++i) sorted.vectors(i, j) = v(i, idx[j]);
    }
    return sorted;
}

double min_eigenvalue(const Mat& a, double sym_tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_eigenvalue: not square");
    double scale = std::max(1.0, a.max_abs());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > sym_tol * scale)
                throw std::invalid_argument("min_eigenvalue: matrix not symmetric");
    if (a.rows() == 0) return 0.0;
    return jacobi_eigensym(a).values.front();
}

bool cholesky(const Mat& a, Mat* lout, double tol) {
    size_t n = a.rows();
    Mat l(n, n);
    for (size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= tol) return false;
        l(j, j) = std::sqrt(d);
        for (size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    *lout = std::move(l);
    return true;
}

std::vector<double> chol_solve(const Mat& l, const std::vector<double>& b) {
    size_t n = l.rows();
    std::vector<double> y(n), x(n);
    for (size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (size_t i = n; i-- > 0;) {
        double s = y[i];
        for (size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

bool lu_solve(Mat a, std::vector<double> b, std::vector<double>* x) {
    size_t n = a.rows();
    std::vector<size_t> piv(n);
    for (size_t i = 0; i < n; ++i) piv[i] = i;
    for (size_t col = 0; col < n; ++col) {
        size_t best = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(best, col))) best = r;
        if (std::fabs(a(best, col)) < 1e-14) return false;
        if (best != col) {
            for (size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            std::swap(b[col], b[best]);
        }
        for (size_t r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> sol(n);
    for (size_t i = n; i-- > 0;) {
        double s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a(i, j) * sol[j];
        sol[i] = s / a(i, i);
    }
    *x = std::move(sol);
    return true;
}

}  // namespace qmclose
