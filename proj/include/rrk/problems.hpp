#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rrk/analysis.hpp"
#include "rrk/ivp.hpp"
#include "rrk/tableau.hpp"

namespace rrk {

/// u' = (-u2, u1) / |u|^2, u(0) = (1, 0), exact solution (cos t, sin t).
/// The rhs throws SingularStateError at the origin.
IvpProblem oscillator();

/// Sun & Shu's non-normal dissipative system u' = A u with A upper
/// triangular, rows (-1,-2,-2), (0,-1,-2), (0,0,-1). The exact solution is
/// attached for the stored u0.
IvpProblem sun_shu(State u0 = {1.0, 1.0, 1.0});
Matrix sun_shu_matrix();

struct SunShuSvd {
    double sigma_max = 0.0;
    State right_vector;  // unit Euclidean norm
};

/// Largest singular value of K = R(dt A) and its right singular vector,
/// from the Jacobi eigensolution of K^T K.
SunShuSvd sun_shu_svd(double dt, const StabilityPolynomial& sp);

/// Fourier collocation on x_j = 2 pi j / m, j = 0..m-1.
struct SpectralAdvection {
    std::size_t m = 0;
    Matrix d;  // D_jk = (1/2)(-1)^{j-k} cot((x_j - x_k)/2), D_jj = 0
    Vector x;
};

/// Throws ArgumentError unless m is even and >= 4.
SpectralAdvection make_spectral_advection(std::size_t m);

struct WhiteNoise {
    std::uint64_t seed = 0;
};
struct Sech2 {};
using AdvectionInitial = std::variant<WhiteNoise, Sech2>;

/// White-noise data: unit-modulus Fourier coefficients with seeded
/// uniform phases, made Hermitian so the state is real.
State white_noise_state(std::size_t m, std::uint64_t seed);
/// sech^2(7.5 (x - pi + 1)) on the nodes x_j.
State sech2_state(const Vector& x);

/// U_t = U_x on [0, 2 pi), f(u) = D u; the exact semi-discrete solution is
/// attached. Unit inner-product weights.
IvpProblem spectral_advection(std::size_t m, const AdvectionInitial& ic);

/// (2/m) I(A, gamma b). Throws ArgumentError for odd m.
double dt_max(const StabilityPolynomial& sp, double gamma, std::size_t m);

/// u_hat_xi = (1/m) sum_j u_j exp(-i xi x_j), xi = -m/2 .. m/2-1.
struct DftSpectrum {
    std::size_t m = 0;
    std::vector<ComplexValue> coeffs;  // coeffs[xi + m/2]

    ComplexValue at(long xi) const { return coeffs[static_cast<std::size_t>(xi + static_cast<long>(m / 2))]; }
};

/// Direct O(m^2) transform.
DftSpectrum dft(std::span<const double> u);

/// (|u_hat^N_xi| - |u_hat^0_xi|) / |u_hat^0_xi| for xi = 0..m/2-1;
/// nullopt where |u_hat^0_xi| <= 1e-14.
std::vector<std::optional<double>> mode_amplification(std::span<const double> u0,
                                                      std::span<const double> un);

enum class BurgersFlux { conservative, dissipative };

struct BurgersConfig {
    std::size_t n = 50;
    BurgersFlux flux = BurgersFlux::conservative;
    double epsilon = 0.01;

    double dx() const { return 2.0 / static_cast<double>(n); }
};

/// Cell positions x_i = -1 + i dx on the periodic domain [-1, 1).
Vector burgers_grid(const BurgersConfig& cfg);

/// Flux-differencing Burgers with u0 = exp(-30 x^2). Inner product weights
/// are dx. Throws ArgumentError for n < 3.
IvpProblem burgers(const BurgersConfig& cfg);

/// Copy of `prob` whose exact solution is a fine-step baseline integration
/// from (t0, u0) with `tab`, using uniform steps no larger than dt_ref.
IvpProblem with_reference_solution(IvpProblem prob, ButcherTableau tab, double dt_ref);

/// u' = 0; used as a stub in tests and the CLI.
IvpProblem zero_problem(State u0);

}  // namespace rrk
