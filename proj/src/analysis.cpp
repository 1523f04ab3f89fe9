#include "rrk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrk/error.hpp"

namespace rrk {

double ComplexValue::abs() const { return std::hypot(re, im); }

ComplexValue StabilityPolynomial::increment(ComplexValue z) const {
    ComplexValue acc{0.0, 0.0};
    for (std::size_t k = alphas.size(); k-- > 0;) acc = (acc + ComplexValue{alphas[k], 0.0}) * z;
    return acc;
}

double StabilityPolynomial::increment(double x) const {
    double acc = 0.0;
    for (std::size_t k = alphas.size(); k-- > 0;) acc = (acc + alphas[k]) * x;
    return acc;
}

StabilityPolynomial stability_polynomial(const ButcherTableau& tab) {
    if (!tab.is_explicit())
        throw CapabilityError("stability_polynomial: '" + tab.name() +
                              "' is implicit; rational stability functions are not supported");
    const std::size_t s = tab.stages();
    StabilityPolynomial sp;
    sp.alphas.reserve(s);
    Vector v(s, 1.0);
    for (std::size_t k = 0; k < s; ++k) {
        sp.alphas.push_back(dot(tab.b(), v));
        v = tab.a().apply(v);
    }
    return sp;
}

ComplexValue eval_R_gamma(const StabilityPolynomial& sp, double gamma, ComplexValue z) {
    return ComplexValue{1.0, 0.0} + gamma * sp.increment(z);
}

double EPolynomial::operator()(double y) const {
    double acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * y + coeffs[n];
    return acc;
}

EPolynomial e_polynomial(const StabilityPolynomial& sp, double gamma) {
    // R_gamma(iy) = sum_k r_k i^k y^k with r_0 = 1, r_k = gamma alpha_k.
    // The y^n coefficient of R_gamma(iy) R_gamma(-iy) is
    // i^n sum_{k+l=n} (-1)^l r_k r_l, which vanishes for odd n.
    const std::size_t s = sp.degree();
    Vector r(s + 1);
    r[0] = 1.0;
    for (std::size_t k = 1; k <= s; ++k) r[k] = gamma * sp.alphas[k - 1];

    EPolynomial e;
    e.coeffs.assign(2 * s + 1, 0.0);
    e.roundoff.assign(2 * s + 1, 0.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t n = 0; n <= 2 * s; n += 2) {
        double sum = 0.0;
        double mag = 0.0;
        for (std::size_t k = (n > s ? n - s : 0); k <= std::min(n, s); ++k) {
            const std::size_t l = n - k;
            const double term = (l % 2 == 0 ? 1.0 : -1.0) * r[k] * r[l];
            sum += term;
            mag += std::abs(term);
        }
        const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
        e.coeffs[n] = (n == 0 ? 1.0 : 0.0) - sign * sum;
        e.roundoff[n] = 64.0 * eps * mag;
    }
    e.coeffs[0] = 0.0;
    return e;
}

double imaginary_interval(const StabilityPolynomial& sp, double gamma) {
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    EPolynomial e = e_polynomial(sp, gamma);
    for (std::size_t n = 0; n < e.coeffs.size(); ++n)
        if (std::abs(e.coeffs[n]) <= e.roundoff[n]) e.coeffs[n] = 0.0;

    double sum_abs = 0.0;
    for (double a : sp.alphas) sum_abs += std::abs(a);
    const double s = static_cast<double>(sp.degree());
    // The stable set of R_gamma scales roughly like gamma^{-1/s}; widen the
    // scan for gamma < 1 so the crossing stays inside it.
    const double y_max = 2.0 * sum_abs * s * std::max(1.0, 1.0 / std::abs(gamma));
    constexpr int kGrid = 10000;
    const double h = y_max / kGrid;

    double lo = 0.0;
    for (int k = 1; k <= kGrid; ++k) {
        const double y = k * h;
        if (e(y) < 0.0) {
            if (k == 1 && e(0.5 * h) < 0.0) {
                // E < 0 immediately right of the origin.
                double a = 0.0, b = 0.5 * h;
                for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                    const double mid = 0.5 * (a + b);
                    (e(mid) < 0.0 ? b : a) = mid;
                }
                return a < 1e-12 ? 0.0 : a;
            }
            double a = lo, b = y;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
                const double mid = 0.5 * (a + b);
                (e(mid) < 0.0 ? b : a) = mid;
            }
            return a;
        }
        lo = y;
    }
    return y_max;
}

RegionGrid stability_region_scan(const StabilityPolynomial& sp, double gamma,
                                 std::pair<double, double> re_range,
                                 std::pair<double, double> im_range,
                                 std::size_t resolution_re, std::size_t resolution_im) {
    if (!(re_range.first < re_range.second) || !(im_range.first < im_range.second))
        throw ArgumentError("stability_region_scan: empty range");
    if (resolution_re < 2 || resolution_im < 2)
        throw ArgumentError("stability_region_scan: resolution must be at least 2 per axis");

    RegionGrid g;
    g.gamma = gamma;
    g.re.resize(resolution_re);
    g.im.resize(resolution_im);
    for (std::size_t i = 0; i < resolution_re; ++i)
        g.re[i] = re_range.first + (re_range.second - re_range.first) * static_cast<double>(i) /
                                       static_cast<double>(resolution_re - 1);
    for (std::size_t j = 0; j < resolution_im; ++j)
        g.im[j] = im_range.first + (im_range.second - im_range.first) * static_cast<double>(j) /
                                       static_cast<double>(resolution_im - 1);

    // |R_gamma|^2 - 1 = gamma (2 Re w + gamma |w|^2) with w = sum alpha_k z^k.
    // This form is monotone in gamma in floating point as well.
    std::vector<double> margin(resolution_re * resolution_im);
    g.stable.resize(margin.size());
    for (std::size_t j = 0; j < resolution_im; ++j) {
        for (std::size_t i = 0; i < resolution_re; ++i) {
            const ComplexValue w = sp.increment(ComplexValue{g.re[i], g.im[j]});
            const double mval = gamma * (2.0 * w.re + gamma * w.abs_sq());
            margin[j * resolution_re + i] = mval;
            g.stable[j * resolution_re + i] = mval <= 0.0 ? 1 : 0;
        }
    }

    auto add_crossing = [&](ComplexValue a, ComplexValue b, double ma, double mb) {
        const double t = ma / (ma - mb);
        g.boundary.push_back(a + t * (b - a));
    };
    for (std::size_t j = 0; j < resolution_im; ++j)
        for (std::size_t i = 0; i + 1 < resolution_re; ++i) {
            const double ma = margin[j * resolution_re + i];
            const double mb = margin[j * resolution_re + i + 1];
            if ((ma <= 0.0) != (mb <= 0.0))
                add_crossing({g.re[i], g.im[j]}, {g.re[i + 1], g.im[j]}, ma, mb);
        }
    for (std::size_t i = 0; i < resolution_re; ++i)
        for (std::size_t j = 0; j + 1 < resolution_im; ++j) {
            const double ma = margin[j * resolution_re + i];
            const double mb = margin[(j + 1) * resolution_re + i];
            if ((ma <= 0.0) != (mb <= 0.0))
                add_crossing({g.re[i], g.im[j]}, {g.re[i], g.im[j + 1]}, ma, mb);
        }
    return g;
}

std::string to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::algebraically_stable: return "algebraically stable";
        case StabilityClass::symplectic: return "symplectic";
        case StabilityClass::neither: return "neither";
    }
    return "neither";
}

AlgebraicStabilityReport algebraic_stability_matrix(const ButcherTableau& tab) {
    const std::size_t s = tab.stages();
    const auto& a = tab.a();
    const auto& b = tab.b();
    AlgebraicStabilityReport rep;
    rep.m = Matrix(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) rep.m(i, j) = b[i] * a(i, j) + b[j] * a(j, i) - b[i] * b[j];
    rep.eigenvalues = jacobi_eigen(rep.m).values;

    const bool nonneg = std::all_of(b.begin(), b.end(), [](double v) { return v >= 0.0; });
    if (rep.m.max_abs() <= 1e-12)
        rep.classification = StabilityClass::symplectic;
    else if (nonneg && rep.eigenvalues.front() >= -1e-12)
        rep.classification = StabilityClass::algebraically_stable;
    else
        rep.classification = StabilityClass::neither;
    return rep;
}

double MonotonicityResiduals::min() const {
    if (singular) return -std::numeric_limits<double>::infinity();
    return std::min({a_inv, inv_e, b_inv, r_value});
}

MonotonicityResiduals monotonicity_residuals(const ButcherTableau& tab, double r) {
    const std::size_t s = tab.stages();
    const Matrix k = Matrix::identity(s) + r * tab.a();
    MonotonicityResiduals res;
    const auto lu = LuFactor::factor(k);
    if (!lu) {
        res.singular = true;
        return res;
    }
    const Matrix inv = lu->inverse();
    const Matrix a_inv = tab.a() * inv;
    const Vector inv_e = inv.apply(Vector(s, 1.0));
    const Vector b_inv = lu->solve_transpose(tab.b());

    res.a_inv = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) res.a_inv = std::min(res.a_inv, a_inv(i, j));
    res.inv_e = *std::min_element(inv_e.begin(), inv_e.end());
    res.b_inv = *std::min_element(b_inv.begin(), b_inv.end());
    double btie = 0.0;
    for (double v : b_inv) btie += v;
    res.r_value = 1.0 - r * btie;
    return res;
}

bool absolutely_monotonic_at(const ButcherTableau& tab, double r) {
    const auto res = monotonicity_residuals(tab, r);
    return !res.singular && res.min() >= kMonotonicityTol;
}

SspReport ssp_coefficient(const ButcherTableau& tab) {
    SspReport rep;
    constexpr double kCap = 1u << 20;
    if (!absolutely_monotonic_at(tab, 0.0)) {
        rep.ssp_coeff = 0.0;
        rep.residuals = monotonicity_residuals(tab, 0.0);
        return rep;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (absolutely_monotonic_at(tab, hi)) {
        ++rep.iterations;
        lo = hi;
        hi *= 2.0;
        if (hi > kCap) {
            rep.unbounded = true;
            rep.ssp_coeff = lo;
            rep.residuals = monotonicity_residuals(tab, lo);
            return rep;
        }
    }
    while (hi - lo > kSspBisectionWidth) {
        ++rep.iterations;
        const double mid = 0.5 * (lo + hi);
        (absolutely_monotonic_at(tab, mid) ? lo : hi) = mid;
    }
    rep.ssp_coeff = lo <= kSspBisectionWidth ? 0.0 : lo;
    rep.residuals = monotonicity_residuals(tab, rep.ssp_coeff);
    if (rep.ssp_coeff > 0.0) rep.gamma_star = -1.0 / (rep.residuals.r_value - 1.0);
    return rep;
}

double gamma_star(const ButcherTableau& tab) {
    const SspReport rep = ssp_coefficient(tab);
    if (!rep.gamma_star)
        throw ArgumentError("gamma_star: SSP coefficient of '" + tab.name() + "' is zero; gamma_* undefined");
    const double g = *rep.gamma_star;
    if (g < 1.0 - 1e-9)
        throw Error("gamma_star: computed value " + std::to_string(g) + " is below one");
    return g;
}

}  // namespace rrk
