#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mlf/errors.hpp"
#include "mlf/series.hpp"

namespace mlf {

/// Dense row-major real matrix with value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DomainError("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::vector<double>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Largest absolute entry.
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("Matrix product: shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DomainError("Matrix difference: shape mismatch");
        for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
        return a;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Eigenvalues with a diagonalising basis: A = P diag(eigenvalues) P^-1.
struct Spectrum {
    std::size_t order = 0;
    std::vector<double> eigenvalues;
    Matrix basis;
    Matrix basis_inverse;

    /// Builds a caller-supplied spectrum, checking shapes and |P P^-1 - I|_max <= 1e-10.
    static Spectrum from_parts(std::vector<double> eigenvalues, Matrix basis, Matrix basis_inverse) {
        const std::size_t n = eigenvalues.size();
        if (n == 0) throw DomainError("Spectrum: order must be >= 1");
        if (basis.rows() != n || basis.cols() != n || basis_inverse.rows() != n ||
            basis_inverse.cols() != n)
            throw DomainError("Spectrum: basis shapes do not match the eigenvalue count");
        if ((basis * basis_inverse - Matrix::identity(n)).max_abs() > 1e-10)
            throw DomainError("Spectrum: basis_inverse is not the inverse of basis");
        return Spectrum{n, std::move(eigenvalues), std::move(basis), std::move(basis_inverse)};
    }

    /// P diag(eigenvalues) P^-1.
    Matrix reconstruct() const { return basis * Matrix::diagonal(eigenvalues) * basis_inverse; }
};

/// |P diag P^-1 - A|_max.
inline double reconstruction_error(const Spectrum& spec, const Matrix& a) {
    return (spec.reconstruct() - a).max_abs();
}

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kJacobiOffTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Sweeps plane rotations over all (p, q) pairs until the off-diagonal
/// Frobenius norm is at most 1e-12 * max(1, |A|_F). Eigenvalues come back in
/// descending order; the basis is orthogonal and basis_inverse its transpose.
inline Spectrum eig_symmetric(const Matrix& input) {
    if (!input.square() || input.rows() == 0)
        throw DomainError("eig_symmetric: matrix must be square and non-empty");
    const std::size_t n = input.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(input(i, j)) || !std::isfinite(input(i, i)))
                throw DomainError("eig_symmetric: non-finite entry");
            if (std::abs(input(i, j) - input(j, i)) > kSymmetryTol)
                throw DomainError("eig_symmetric: matrix is not symmetric at (" +
                                  std::to_string(i) + ", " + std::to_string(j) + ")");
        }

    Matrix a = input;
    Matrix v = Matrix::identity(n);
    const double stop = kJacobiOffTol * std::max(1.0, input.frobenius());

    int sweep = 0;
    while (detail::off_diagonal_norm(a) > stop) {
        if (++sweep > kJacobiMaxSweeps)
            throw ConvergenceError("eig_symmetric: no convergence after 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t l, std::size_t r) { return a(l, l) > a(r, r); });

    Spectrum spec;
    spec.order = n;
    spec.eigenvalues.resize(n);
    spec.basis = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        spec.eigenvalues[c] = a(idx[c], idx[c]);
        for (std::size_t r = 0; r < n; ++r) spec.basis(r, c) = v(r, idx[c]);
    }
    spec.basis_inverse = spec.basis.transpose();
    return spec;
}

/// E_alpha(A t^alpha) = P diag(E_alpha(lambda_j t^alpha)) P^-1; identity at t = 0.
///
/// A failing eigenvalue is reported as EigenvalueError carrying its index.
inline Matrix ml_matrix(double alpha, const Spectrum& spec, double t, const SeriesConfig& cfg = {}) {
    detail::check_alpha(alpha);
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("ml_matrix: t must be a finite value >= 0");
    if (t == 0.0) return Matrix::identity(spec.order);

    std::vector<double> diag(spec.order);
    for (std::size_t j = 0; j < spec.order; ++j) {
        try {
            diag[j] = certified(ml_at_time({.alpha = alpha, .lambda = spec.eigenvalues[j]}, t, cfg),
                                "ml_matrix");
        } catch (const Error& e) {
            throw EigenvalueError(j, e.what());
        }
    }
    return spec.basis * Matrix::diagonal(diag) * spec.basis_inverse;
}

/// |E(A(t+s)^a) - E(At^a) E(As^a)|_max.
inline double matrix_defect(double alpha, const Spectrum& spec, double t, double s,
                            const SeriesConfig& cfg = {}) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw DomainError("matrix_defect: t and s must be >= 0");
    const Matrix joint = ml_matrix(alpha, spec, t + s, cfg);
    const Matrix prod = ml_matrix(alpha, spec, t, cfg) * ml_matrix(alpha, spec, s, cfg);
    return (joint - prod).max_abs();
}

/// Sup of matrix_defect over the square grid.
inline double matrix_defect_sup(double alpha, const Spectrum& spec, const std::vector<double>& axis,
                                const SeriesConfig& cfg = {}) {
    double sup = 0.0;
    for (double t : axis)
        for (double s : axis) sup = std::max(sup, matrix_defect(alpha, spec, t, s, cfg));
    return sup;
}

}  // namespace mlf
