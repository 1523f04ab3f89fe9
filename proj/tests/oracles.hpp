#pragma once

// Test-only reference computations. Nothing here calls into the library's
// stepping or analysis code paths.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rrk/linalg.hpp"
#include "rrk/tableau.hpp"

namespace oracle {

using HighPrec = boost::multiprecision::cpp_dec_float_50;
using Rational = boost::multiprecision::cpp_rational;

/// Relaxation parameter of one explicit step on the nonlinear oscillator,
/// evaluated entirely in 50-digit arithmetic. Coefficients are passed as
/// exact rationals so no double rounding enters.
inline HighPrec oscillator_gamma(const std::vector<std::vector<Rational>>& a,
                                 const std::vector<Rational>& b, HighPrec u1, HighPrec u2,
                                 HighPrec dt) {
    const std::size_t s = b.size();
    std::vector<std::array<HighPrec, 2>> f(s);
    for (std::size_t i = 0; i < s; ++i) {
        HighPrec y1 = u1, y2 = u2;
        for (std::size_t j = 0; j < i; ++j) {
            const HighPrec aij(a[i][j]);
            y1 += dt * aij * f[j][0];
            y2 += dt * aij * f[j][1];
        }
        const HighPrec n2 = y1 * y1 + y2 * y2;
        f[i] = {-y2 / n2, y1 / n2};
    }
    HighPrec num = 0, den = 0;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            const HighPrec g = f[i][0] * f[j][0] + f[i][1] * f[j][1];
            num += HighPrec(b[i] * a[i][j]) * g;
            den += HighPrec(b[i] * b[j]) * g;
        }
    return 2 * num / den;
}

/// Exact rational coefficients of E(y) = 1 - R(iy) R(-iy) for
/// R(z) = 1 + gamma sum alpha_k z^k, by multiplying out the polynomials.
inline std::vector<Rational> e_polynomial_exact(const std::vector<Rational>& alphas, Rational gamma) {
    const std::size_t s = alphas.size();
    // Complex rationals as (re, im) pairs; p(y) = R(iy), q(y) = R(-iy).
    std::vector<std::pair<Rational, Rational>> p(s + 1), q(s + 1);
    p[0] = q[0] = {1, 0};
    for (std::size_t k = 1; k <= s; ++k) {
        const Rational c = gamma * alphas[k - 1];
        // i^k
        std::pair<Rational, Rational> ik;
        switch (k % 4) {
            case 0: ik = {1, 0}; break;
            case 1: ik = {0, 1}; break;
            case 2: ik = {-1, 0}; break;
            default: ik = {0, -1}; break;
        }
        p[k] = {c * ik.first, c * ik.second};
        const Rational sign = (k % 2 == 0) ? 1 : -1;  // (-i)^k = (-1)^k i^k
        q[k] = {sign * c * ik.first, sign * c * ik.second};
    }
    std::vector<Rational> e(2 * s + 1, 0);
    for (std::size_t k = 0; k <= s; ++k)
        for (std::size_t l = 0; l <= s; ++l) {
            // real part of p_k q_l (imaginary parts cancel in the sum)
            e[k + l] -= p[k].first * q[l].first - p[k].second * q[l].second;
        }
    e[0] += 1;
    return e;
}

/// |R_gamma(iy)| from the tableau directly via std::complex and one
/// explicit step on u' = i y u.
inline double r_modulus_on_axis(const rrk::ButcherTableau& tab, double gamma, double y) {
    const std::size_t s = tab.stages();
    const std::complex<double> z(0.0, y);
    std::vector<std::complex<double>> k(s);
    for (std::size_t i = 0; i < s; ++i) {
        std::complex<double> stage = 1.0;
        for (std::size_t j = 0; j < i; ++j) stage += tab.a()(i, j) * k[j];
        k[i] = z * stage;
    }
    std::complex<double> r = 1.0;
    for (std::size_t j = 0; j < s; ++j) r += gamma * tab.b()[j] * k[j];
    return std::abs(r);
}

/// Four absolute-monotonicity conditions at z = -r for an explicit tableau,
/// with (I + rA)^{-1} = sum_{k<s} (-rA)^k (A is nilpotent).
inline bool absolutely_monotonic_neumann(const rrk::ButcherTableau& tab, double r, double tol = -1e-10) {
    const std::size_t s = tab.stages();
    rrk::Matrix inv = rrk::Matrix::identity(s);
    rrk::Matrix term = rrk::Matrix::identity(s);
    const rrk::Matrix step = (-r) * tab.a();
    for (std::size_t k = 1; k < s; ++k) {
        term = term * step;
        inv = inv + term;
    }
    const rrk::Matrix ainv = tab.a() * inv;
    double r_val = 1.0;
    for (std::size_t i = 0; i < s; ++i) {
        double row = 0.0, bcol = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            if (ainv(i, j) < tol) return false;
            row += inv(i, j);
            bcol += tab.b()[j] * inv(j, i);
        }
        if (row < tol || bcol < tol) return false;
        r_val -= r * bcol;
    }
    return r_val >= tol;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace oracle
