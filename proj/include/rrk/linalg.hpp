#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rrk {

using Vector = std::vector<double>;

/// Small dense row-major matrix. Sized for Butcher tableaux and spectral
/// operators of a few hundred rows; no attempt at blocking.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    Matrix transpose() const;
    Vector apply(std::span<const double> x) const;

    /// Largest |m_ij|.
    double max_abs() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(double s, const Matrix& a);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SymmetricEigen {
    Vector values;  // ascending
    Matrix vectors;  // column k is the eigenvector of values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Only the symmetric part of
/// `m` is used.
SymmetricEigen jacobi_eigen(const Matrix& m, double tol = 1e-15, int max_sweeps = 100);

/// LU factorization with partial pivoting. Returns nullopt when a pivot is
/// (numerically) zero.
class LuFactor {
public:
    static std::optional<LuFactor> factor(const Matrix& m, double pivot_tol = 1e-14);

    Vector solve(std::span<const double> rhs) const;
    /// Solves x^T M = y^T, i.e. M^T x = y.
    Vector solve_transpose(std::span<const double> rhs) const;
    Matrix inverse() const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace rrk
