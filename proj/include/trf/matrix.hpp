#pragma once

#include <cstddef>
#include <vector>

namespace trf {

// Dense row-major matrix of doubles.  Sized for this project's needs
// (site-by-site covariance blocks, site-by-time fields); no expression
// templates, just contiguous storage with checked construction.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
// Throws std::runtime_error naming the failing pivot if A is not positive
// definite (pivot <= rel_tol * max diagonal).
Matrix cholesky(const Matrix& a, double rel_tol = 1e-12);

// Positive *semi*-definite variant: a pivot within tolerance of zero yields
// a zero row in L (exact coincident-site handling); a pivot below minus the
// tolerance still throws.  cholesky_psd of a correlation matrix with a
// duplicated site reproduces the duplicate series exactly.
Matrix cholesky_psd(const Matrix& a, double rel_tol = 1e-10);

// Solves L y = b (forward) and L^T x = y (backward) for Cholesky factors.
std::vector<double> solve_lower(const Matrix& l, const std::vector<double>& b);
std::vector<double> solve_upper_t(const Matrix& l, const std::vector<double>& b);

// Solves the SPD system A x = b via Cholesky.
std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b);

} // namespace trf
