#pragma once

#include <cstddef>
#include <vector>

namespace qmclose {

// Dense row-major matrix of doubles.  Desk-scale; no sparsity.
class Mat {
  public:
    Mat() = default;
    Mat(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    static Mat identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat scaled(double s) const;
    Mat transposed() const;
    void symmetrize();  // (A + A^T)/2

    double max_abs() const;

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double frob_inner(const Mat& a, const Mat& b);

// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix
// by cyclic Jacobi rotations.
struct EigenSym {
    std::vector<double> values;
    Mat vectors;
};
EigenSym jacobi_eigensym(const Mat& a, int max_sweeps = 64);

// Smallest eigenvalue of a symmetric matrix; throws if the input is not
// symmetric within sym_tol.
double min_eigenvalue(const Mat& a, double sym_tol = 1e-12);

// Cholesky factorization A = L L^T; returns false when A is not positive
// definite (pivot below tol).
bool cholesky(const Mat& a, Mat* l, double tol = 0.0);
// Solve A x = b given the Cholesky factor L.
std::vector<double> chol_solve(const Mat& l, const std::vector<double>& b);

// Solve a general square system by partially pivoted LU; returns false on
// (numerical) singularity.
bool lu_solve(Mat a, std::vector<double> b, std::vector<double>* x);

}  // namespace qmclose
