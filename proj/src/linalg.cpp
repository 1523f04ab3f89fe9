#include "rrk/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <utility>

#include "rrk/error.hpp"

namespace rrk {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw ArgumentError("Matrix::from_rows: ragged rows");
        std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * c);
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector Matrix::apply(std::span<const double> x) const {
    assert(x.size() == cols_);
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* r = data_.data() + i * cols_;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (double& v : c.data_) v *= s;
    return c;
}

SymmetricEigen jacobi_eigen(const Matrix& m, double tol, int max_sweeps) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ArgumentError("jacobi_eigen: matrix must be square");

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix v = Matrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale += a(i, j) * a(i, j);
    scale = std::sqrt(scale);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= tol * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
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

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    out.sweeps = sweep;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::optional<LuFactor> LuFactor::factor(const Matrix& m, double pivot_tol) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ArgumentError("LuFactor: matrix must be square");
    LuFactor f;
    f.lu_ = m;
    f.perm_.resize(n);
    std::iota(f.perm_.begin(), f.perm_.end(), 0);
    Matrix& lu = f.lu_;
    const double scale = std::max(m.max_abs(), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (std::abs(lu(piv, k)) <= pivot_tol * scale) return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(f.perm_[k], f.perm_[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu(i, k) /= lu(k, k);
            const double lik = lu(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
        }
    }
    return f;
}

Vector LuFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = lu_.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

Vector LuFactor::solve_transpose(std::span<const double> rhs) const {
    // P M = L U  =>  M^T = U^T L^T P, solve U^T w = y, L^T z = w, x = P^T z.
    const std::size_t n = lu_.rows();
    Vector w(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) w[i] -= lu_(j, i) * w[j];
        w[i] /= lu_(i, i);
    }
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = i + 1; j < n; ++j) w[i] -= lu_(j, i) * w[j];
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = w[i];
    return x;
}

Matrix LuFactor::inverse() const {
    const std::size_t n = lu_.rows();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        const Vector col = solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace rrk
