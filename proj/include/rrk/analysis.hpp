#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rrk/linalg.hpp"
#include "rrk/tableau.hpp"

namespace rrk {

struct ComplexValue {
    double re = 0.0;
    double im = 0.0;

    double abs_sq() const { return re * re + im * im; }
    double abs() const;

    friend ComplexValue operator+(ComplexValue a, ComplexValue b) { return {a.re + b.re, a.im + b.im}; }
    friend ComplexValue operator-(ComplexValue a, ComplexValue b) { return {a.re - b.re, a.im - b.im}; }
    friend ComplexValue operator*(ComplexValue a, ComplexValue b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexValue operator*(double s, ComplexValue a) { return {s * a.re, s * a.im}; }
};

/// R(z) = 1 + sum_{k=1}^s alpha_k z^k of an explicit method.
struct StabilityPolynomial {
    Vector alphas;  // alphas[k-1] = alpha_k

    std::size_t degree() const { return alphas.size(); }
    /// sum_k alpha_k z^k (without the leading 1).
    ComplexValue increment(ComplexValue z) const;
    double increment(double x) const;
};

/// alpha_k = b^T A^{k-1} e. Throws CapabilityError for implicit tableaux.
StabilityPolynomial stability_polynomial(const ButcherTableau& tab);

/// R_gamma(z) = 1 + gamma sum_k alpha_k z^k, Horner in complex arithmetic.
ComplexValue eval_R_gamma(const StabilityPolynomial& sp, double gamma, ComplexValue z);

/// E_gamma(y) = 1 - R_gamma(iy) R_gamma(-iy), stored densely; only even
/// powers are nonzero.
struct EPolynomial {
    Vector coeffs;  // coeffs[n] multiplies y^n, n = 0..2s
    /// Rounding bound on each coefficient: 64 eps times the sum of the
    /// magnitudes of the products that formed it.
    Vector roundoff;

    double operator()(double y) const;
};

EPolynomial e_polynomial(const StabilityPolynomial& sp, double gamma);

/// Length of the stable segment [0, y*] of the imaginary axis. A coarse
/// sign scan of E_gamma followed by bisection of the first crossing.
/// Coefficients below their rounding bound are treated as zero.
double imaginary_interval(const StabilityPolynomial& sp, double gamma);

struct RegionGrid {
    double gamma = 1.0;
    Vector re;                // abscissae, size nx
    Vector im;                // ordinates, size ny
    std::vector<char> stable; // stable[j * nx + i] for (re[i], im[j])
    std::vector<ComplexValue> boundary;

    bool at(std::size_t i, std::size_t j) const { return stable[j * re.size() + i] != 0; }
};

/// Flags |R_gamma(z)| <= 1 on a uniform grid and collects boundary points
/// by linear interpolation of |R_gamma| - 1 across grid edges where it
/// changes sign. Throws ArgumentError for empty ranges or resolution < 2.
RegionGrid stability_region_scan(const StabilityPolynomial& sp, double gamma,
                                 std::pair<double, double> re_range,
                                 std::pair<double, double> im_range,
                                 std::size_t resolution_re, std::size_t resolution_im);

enum class StabilityClass { algebraically_stable, symplectic, neither };

std::string to_string(StabilityClass c);

struct AlgebraicStabilityReport {
    Matrix m;  // BA + A^T B - b b^T
    Vector eigenvalues;
    StabilityClass classification = StabilityClass::neither;
};

AlgebraicStabilityReport algebraic_stability_matrix(const ButcherTableau& tab);

/// Smallest entry of each absolute-monotonicity condition at z = -r:
/// A(I+rA)^{-1}, (I+rA)^{-1} e, b^T (I+rA)^{-1}, R(-r).
struct MonotonicityResiduals {
    double a_inv = 0.0;
    double inv_e = 0.0;
    double b_inv = 0.0;
    double r_value = 0.0;
    bool singular = false;

    double min() const;
};

inline constexpr double kMonotonicityTol = -1e-10;
inline constexpr double kSspBisectionWidth = 1e-8;

MonotonicityResiduals monotonicity_residuals(const ButcherTableau& tab, double r);
bool absolutely_monotonic_at(const ButcherTableau& tab, double r);

struct SspReport {
    double ssp_coeff = 0.0;
    std::optional<double> gamma_star;  // set when ssp_coeff > 0
    int iterations = 0;
    MonotonicityResiduals residuals;   // at ssp_coeff
    bool unbounded = false;            // bracket search hit its cap
};

/// Radius of absolute monotonicity: bracket doubling then bisection to
/// width 1e-8. A radius that cannot be resolved from zero at that width is
/// reported as 0.
SspReport ssp_coefficient(const ButcherTableau& tab);

/// gamma_* = -1 / (R(-C) - 1). Throws ArgumentError when C = 0.
double gamma_star(const ButcherTableau& tab);

}  // namespace rrk
