#include "rrk/problems.hpp"

#include <cmath>
#include <numbers>

#include "rrk/error.hpp"
#include "rrk/relaxation.hpp"

namespace rrk {

namespace {
constexpr double kPi = std::numbers::pi;
}

IvpProblem oscillator() {
    IvpProblem p;
    p.id = "oscillator";
    p.dim = 2;
    p.rhs = [](double, const State& u) -> State {
        const double n2 = u[0] * u[0] + u[1] * u[1];
        if (n2 == 0.0) throw SingularStateError("oscillator rhs undefined at u = 0");
        return {-u[1] / n2, u[0] / n2};
    };
    p.space = InnerProductSpace(2);
    p.exact = [](double t) -> State { return {std::cos(t), std::sin(t)}; };
    p.classification = Classification::conservative;
    p.u0 = {1.0, 0.0};
    return p;
}

Matrix sun_shu_matrix() {
    return Matrix::from_rows({{-1, -2, -2}, {0, -1, -2}, {0, 0, -1}});
}

IvpProblem sun_shu(State u0) {
    if (u0.size() != 3) throw ArgumentError("sun_shu: initial state must have three components");
    const Matrix a = sun_shu_matrix();
    IvpProblem p;
    p.id = "sunshu";
    p.dim = 3;
    p.rhs = [a](double, const State& u) { return a.apply(u); };
    p.space = InnerProductSpace(3);
    // A = -I + N with N nilpotent (N^3 = 0): exp(tA) = e^{-t} (I + tN + t^2 N^2 / 2).
    const Matrix n = a + Matrix::identity(3);
    const Matrix n2 = n * n;
    p.exact = [n, n2, u0](double t) {
        const Matrix e = std::exp(-t) * (Matrix::identity(3) + t * n + (0.5 * t * t) * n2);
        return e.apply(u0);
    };
    p.classification = Classification::dissipative;
    p.u0 = std::move(u0);
    return p;
}

SunShuSvd sun_shu_svd(double dt, const StabilityPolynomial& sp) {
    if (!(dt > 0.0)) throw ArgumentError("sun_shu_svd: dt must be positive");
    const Matrix z = dt * sun_shu_matrix();
    const Matrix id = Matrix::identity(3);
    // sum_k alpha_k Z^k = Z (alpha_1 I + Z (alpha_2 I + ... ))
    Matrix inc(3, 3);
    for (std::size_t k = sp.degree(); k-- > 0;) inc = (sp.alphas[k] * id + inc) * z;
    const Matrix k = id + inc;
    const SymmetricEigen eig = jacobi_eigen(k.transpose() * k);
    SunShuSvd out;
    out.sigma_max = std::sqrt(std::max(0.0, eig.values.back()));
    out.right_vector.resize(3);
    for (std::size_t i = 0; i < 3; ++i) out.right_vector[i] = eig.vectors(i, 2);
    return out;
}

SpectralAdvection make_spectral_advection(std::size_t m) {
    if (m < 4 || m % 2 != 0) throw ArgumentError("spectral advection needs an even m >= 4");
    SpectralAdvection s;
    s.m = m;
    s.x.resize(m);
    const double h = 2.0 * kPi / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) s.x[j] = h * static_cast<double>(j);
    s.d = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            if (j == k) continue;
            const long diff = static_cast<long>(j) - static_cast<long>(k);
            const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            s.d(j, k) = 0.5 * sign / std::tan(0.5 * h * static_cast<double>(diff));
        }
    return s;
}

namespace {

// splitmix64; any fixed 64-bit generator works since only the statistics of
// the phases matter.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// u_j = sum_xi c_xi exp(i xi x_j) for a Hermitian-symmetric spectrum.
State synthesize(const std::vector<ComplexValue>& coeffs, std::size_t m) {
    const double h = 2.0 * kPi / static_cast<double>(m);
    const long half = static_cast<long>(m / 2);
    State u(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (long xi = -half; xi < half; ++xi) {
            const double arg = static_cast<double>(xi) * h * static_cast<double>(j);
            const ComplexValue c = coeffs[static_cast<std::size_t>(xi + half)];
            acc += c.re * std::cos(arg) - c.im * std::sin(arg);
        }
        u[j] = acc;
    }
    return u;
}

}  // namespace

State white_noise_state(std::size_t m, std::uint64_t seed) {
    if (m < 4 || m % 2 != 0) throw ArgumentError("white noise needs an even m >= 4");
    SplitMix64 rng(seed);
    const long half = static_cast<long>(m / 2);
    std::vector<ComplexValue> c(m);
    auto slot = [&](long xi) -> ComplexValue& { return c[static_cast<std::size_t>(xi + half)]; };
    slot(0) = {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0};
    slot(-half) = {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0};
    for (long xi = 1; xi < half; ++xi) {
        const double theta = 2.0 * kPi * rng.uniform();
        slot(xi) = {std::cos(theta), std::sin(theta)};
        slot(-xi) = {std::cos(theta), -std::sin(theta)};
    }
    return synthesize(c, m);
}

State sech2_state(const Vector& x) {
    State u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double s = 1.0 / std::cosh(7.5 * (x[j] - kPi + 1.0));
        u[j] = s * s;
    }
    return u;
}

DftSpectrum dft(std::span<const double> u) {
    const std::size_t m = u.size();
    if (m < 2 || m % 2 != 0) throw ArgumentError("dft: length must be even");
    const double h = 2.0 * kPi / static_cast<double>(m);
    const long half = static_cast<long>(m / 2);
    DftSpectrum out;
    out.m = m;
    out.coeffs.resize(m);
    for (long xi = -half; xi < half; ++xi) {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            // Reduce xi * j mod m first so the angle stays accurate.
            const long kj = ((xi * static_cast<long>(j)) % static_cast<long>(m) + static_cast<long>(m)) %
                            static_cast<long>(m);
            const double arg = h * static_cast<double>(kj);
            re += u[j] * std::cos(arg);
            im -= u[j] * std::sin(arg);
        }
        out.coeffs[static_cast<std::size_t>(xi + half)] = {re / static_cast<double>(m), im / static_cast<double>(m)};
    }
    return out;
}

IvpProblem spectral_advection(std::size_t m, const AdvectionInitial& ic) {
    SpectralAdvection disc = make_spectral_advection(m);
    State u0 = std::holds_alternative<WhiteNoise>(ic) ? white_noise_state(m, std::get<WhiteNoise>(ic).seed)
                                                      : sech2_state(disc.x);
    const DftSpectrum spec = dft(u0);

    IvpProblem p;
    p.id = "advection";
    p.dim = m;
    p.rhs = [d = std::move(disc.d)](double, const State& u) { return d.apply(u); };
    p.space = InnerProductSpace(m);
    // D annihilates the Nyquist mode; every other mode rotates as exp(i xi t).
    p.exact = [spec, m](double t) {
        const long half = static_cast<long>(m / 2);
        std::vector<ComplexValue> c(m);
        for (long xi = -half; xi < half; ++xi) {
            const ComplexValue c0 = spec.at(xi);
            const double w = xi == -half ? 0.0 : static_cast<double>(xi) * t;
            c[static_cast<std::size_t>(xi + half)] = c0 * ComplexValue{std::cos(w), std::sin(w)};
        }
        return synthesize(c, m);
    };
    p.classification = Classification::conservative;
    p.u0 = std::move(u0);
    return p;
}

double dt_max(const StabilityPolynomial& sp, double gamma, std::size_t m) {
    if (m == 0 || m % 2 != 0) throw ArgumentError("dt_max: m must be even");
    return 2.0 / static_cast<double>(m) * imaginary_interval(sp, gamma);
}

std::vector<std::optional<double>> mode_amplification(std::span<const double> u0,
                                                      std::span<const double> un) {
    if (u0.size() != un.size()) throw ArgumentError("mode_amplification: size mismatch");
    const DftSpectrum s0 = dft(u0);
    const DftSpectrum sn = dft(un);
    const long half = static_cast<long>(u0.size() / 2);
    std::vector<std::optional<double>> out;
    out.reserve(static_cast<std::size_t>(half));
    for (long xi = 0; xi < half; ++xi) {
        const double a0 = s0.at(xi).abs();
        if (a0 <= 1e-14) {
            out.emplace_back(std::nullopt);
            continue;
        }
        out.emplace_back((sn.at(xi).abs() - a0) / a0);
    }
    return out;
}

Vector burgers_grid(const BurgersConfig& cfg) {
    Vector x(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) x[i] = -1.0 + cfg.dx() * static_cast<double>(i);
    return x;
}

IvpProblem burgers(const BurgersConfig& cfg) {
    if (cfg.n < 3) throw ArgumentError("burgers: need at least three cells");
    const std::size_t n = cfg.n;
    const double dx = cfg.dx();
    const double eps = cfg.flux == BurgersFlux::dissipative ? cfg.epsilon : 0.0;

    IvpProblem p;
    p.id = cfg.flux == BurgersFlux::conservative ? "burgers-cons" : "burgers-diss";
    p.dim = n;
    p.rhs = [n, dx, eps](double, const State& u) {
        // flux[i] = F_{i+1/2}
        State flux(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ul = u[i];
            const double ur = u[(i + 1) % n];
            flux[i] = (ul * ul + ul * ur + ur * ur) / 6.0 - eps * (ur - ul);
        }
        State du(n);
        for (std::size_t i = 0; i < n; ++i) du[i] = -(flux[i] - flux[(i + n - 1) % n]) / dx;
        return du;
    };
    p.space = InnerProductSpace(Vector(n, dx));
    p.classification = cfg.flux == BurgersFlux::conservative ? Classification::conservative
                                                             : Classification::dissipative;
    const Vector x = burgers_grid(cfg);
    p.u0.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.u0[i] = std::exp(-30.0 * x[i] * x[i]);
    return p;
}

IvpProblem with_reference_solution(IvpProblem prob, ButcherTableau tab, double dt_ref) {
    if (!(dt_ref > 0.0)) throw ArgumentError("with_reference_solution: dt_ref must be positive");
    IvpProblem base = prob;
    base.exact.reset();
    prob.exact = [base = std::move(base), tab = std::move(tab), dt_ref](double t) {
        const double span = t - base.t0;
        if (span <= 0.0) return base.u0;
        const double steps = std::ceil(span / dt_ref);
        IntegrateOptions opts;
        opts.store_states = false;
        return integrate(tab, base, base.t0, base.u0, span / steps, t, Mode::baseline, opts).final().state;
    };
    return prob;
}

IvpProblem zero_problem(State u0) {
    IvpProblem p;
    p.id = "zero";
    p.dim = u0.size();
    p.rhs = [](double, const State& u) { return State(u.size(), 0.0); };
    p.space = InnerProductSpace(u0.size());
    const State init = u0;
    p.exact = [init](double) { return init; };
    p.classification = Classification::conservative;
    p.u0 = std::move(u0);
    return p;
}

}  // namespace rrk
