#include "trf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trf {

namespace {

Matrix cholesky_impl(const Matrix& a, double rel_tol, bool allow_semidefinite) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a(i, i)));
    if (scale == 0.0) scale = 1.0;
    const double tol = rel_tol * scale;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d > tol) {
            const double ljj = std::sqrt(d);
            l(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                const double* li = l.row(i);
                const double* lj = l.row(j);
                for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
                l(i, j) = s / ljj;
            }
        } else if (allow_semidefinite && d > -tol) {
            // Singular direction (e.g. coincident sites): zero column.
            l(j, j) = 0.0;
        } else {
            throw std::runtime_error("cholesky: matrix not positive " +
                                     std::string(allow_semidefinite ? "semi-definite" : "definite") +
                                     " (pivot " + std::to_string(j) + " = " +
                                     std::to_string(d) + ")");
        }
    }
    return l;
}

} // namespace

Matrix cholesky(const Matrix& a, double rel_tol) {
    return cholesky_impl(a, rel_tol, false);
}

Matrix cholesky_psd(const Matrix& a, double rel_tol) {
    return cholesky_impl(a, rel_tol, true);
}

std::vector<double> solve_lower(const Matrix& l, const std::vector<double>& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("solve_lower: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        const double* li = l.row(i);
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
        if (li[i] == 0.0) throw std::runtime_error("solve_lower: singular factor at row " + std::to_string(i));
        y[i] = s / li[i];
    }
    return y;
}

std::vector<double> solve_upper_t(const Matrix& l, const std::vector<double>& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("solve_upper_t: size mismatch");
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        if (l(ii, ii) == 0.0) throw std::runtime_error("solve_upper_t: singular factor at row " + std::to_string(ii));
        x[ii] = s / l(ii, ii);
    }
    return x;
}

std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b) {
    const Matrix l = cholesky(a);
    return solve_upper_t(l, solve_lower(l, b));
}

} // namespace trf
