#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rrk/analysis.hpp"
#include "rrk/error.hpp"
#include "rrk/problems.hpp"
#include "rrk/relaxation.hpp"

using namespace rrk;

namespace {

double euclid(const State& u) { return std::sqrt(dot(u, u)); }

State scaled(const State& u, double s) {
    State out = u;
    for (double& v : out) v *= s;
    return out;
}

}  // namespace

TEST_CASE("oscillator") {
    const auto p = oscillator();
    CHECK(p.classification == Classification::conservative);
    CHECK(p.u0 == State{1.0, 0.0});
    const auto ex = (*p.exact)(1.3);
    CHECK(ex[0] == doctest::Approx(std::cos(1.3)));
    CHECK(ex[1] == doctest::Approx(std::sin(1.3)));
    const auto f = p.rhs(0.0, {3.0, 4.0});
    CHECK(f[0] == doctest::Approx(-4.0 / 25.0));
    CHECK(f[1] == doctest::Approx(3.0 / 25.0));
    std::mt19937_64 rng(1);
    std::vector<State> samples;
    for (int k = 0; k < 20; ++k) samples.push_back(oracle::random_vector(rng, 2));
    CHECK(check_classification(p, samples).holds);
    CHECK_THROWS_AS(p.rhs(0.0, {0.0, 0.0}), SingularStateError);
}

TEST_CASE("Sun-Shu system") {
    const auto p = sun_shu();
    CHECK(p.classification == Classification::dissipative);
    const Matrix a = sun_shu_matrix();
    // Symmetric part is negative semidefinite.
    const auto eig = jacobi_eigen(a + a.transpose());
    CHECK(eig.values.back() <= 1e-14);
    // Exact solution satisfies u' = Au by central difference.
    const double h = 1e-5;
    const auto up = (*p.exact)(0.5 + h), um = (*p.exact)(0.5 - h), u = (*p.exact)(0.5);
    const auto au = a.apply(u);
    for (std::size_t i = 0; i < 3; ++i) CHECK((up[i] - um[i]) / (2 * h) == doctest::Approx(au[i]).epsilon(1e-8));

    const auto tab = builtin("RK(4,4)");
    const auto sp = stability_polynomial(tab);
    const auto svd5 = sun_shu_svd(0.5, sp);
    CHECK(svd5.sigma_max >= 1.0005);
    CHECK(svd5.sigma_max <= 1.0015);
    CHECK(euclid(svd5.right_vector) == doctest::Approx(1.0));

    double increase5 = 0.0;
    for (double dt : {0.5, 0.7}) {
        CAPTURE(dt);
        const auto svd = sun_shu_svd(dt, sp);
        const auto q = sun_shu(svd.right_vector);
        const auto base = relaxation_step(tab, q, 0.0, svd.right_vector, dt, Mode::baseline);
        const double growth = std::sqrt(base.energy_after) - 1.0;
        CHECK(growth > 0.0);
        CHECK(std::sqrt(base.energy_after) == doctest::Approx(svd.sigma_max).epsilon(1e-12));
        const auto rrk = relaxation_step(tab, q, 0.0, svd.right_vector, dt, Mode::rrk);
        CHECK(std::sqrt(rrk.energy_after) <= 1.0 + 1e-12);
        if (dt == 0.5) increase5 = growth;
        else CHECK(growth > increase5);
    }
}

TEST_CASE("spectral differentiation matrix") {
    const auto sa = make_spectral_advection(32);
    const Matrix& d = sa.d;
    CHECK(d.max_abs() > 0.0);
    for (std::size_t i = 0; i < 32; ++i)
        for (std::size_t j = 0; j < 32; ++j) CHECK(d(i, j) == doctest::Approx(-d(j, i)).scale(1.0));
    const auto d1 = d.apply(State(32, 1.0));
    for (double v : d1) CHECK(std::abs(v) <= 1e-12);
    State c(32), s3(32), c3(32);
    for (std::size_t j = 0; j < 32; ++j) {
        c[j] = std::cos(sa.x[j]);
        s3[j] = std::sin(3 * sa.x[j]);
        c3[j] = std::cos(3 * sa.x[j]);
    }
    const auto dc = d.apply(c);
    const auto ds3 = d.apply(s3);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(dc[j] == doctest::Approx(-std::sin(sa.x[j])).scale(1.0).epsilon(1e-12));
        CHECK(ds3[j] == doctest::Approx(3 * c3[j]).scale(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_spectral_advection(31), ArgumentError);
    CHECK_THROWS_AS(make_spectral_advection(2), ArgumentError);
}

TEST_CASE("DFT and initial data") {
    const std::size_t m = 64;
    const auto u = white_noise_state(m, 42);
    REQUIRE(u.size() == m);
    CHECK(u == white_noise_state(m, 42));
    CHECK(u != white_noise_state(m, 43));
    const auto spec = dft(u);
    double parseval = 0.0;
    for (const auto& c : spec.coeffs) parseval += c.abs_sq();
    CHECK(parseval * m == doctest::Approx(dot(u, u)).epsilon(1e-12));
    for (long xi = 1; xi < static_cast<long>(m / 2); ++xi) {
        CHECK(spec.at(xi).re == doctest::Approx(spec.at(-xi).re).scale(1.0).epsilon(1e-13));
        CHECK(spec.at(xi).im == doctest::Approx(-spec.at(-xi).im).scale(1.0).epsilon(1e-13));
        CHECK(spec.at(xi).abs() == doctest::Approx(spec.at(1).abs()).epsilon(1e-12));
    }
    CHECK(std::abs(std::abs(spec.at(0).re) - spec.at(1).abs()) <= 1e-12);

    const auto sa = make_spectral_advection(128);
    const auto s2 = sech2_state(sa.x);
    CHECK(*std::max_element(s2.begin(), s2.end()) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(s2.front() <= 1e-5);
    const auto s2spec = dft(s2);
    CHECK(s2spec.at(63).abs() <= 1e-4 * s2spec.at(0).abs());
}

TEST_CASE("advection problem and dt_max") {
    const auto p = spectral_advection(32, Sech2{});
    CHECK(p.classification == Classification::conservative);
    const auto traj = integrate(builtin("RK(4,4)"), p, 0.0, p.u0, 0.01, 0.5, Mode::baseline);
    const auto ex = (*p.exact)(0.5);
    for (std::size_t j = 0; j < 32; ++j) CHECK(std::abs(traj.final().state[j] - ex[j]) <= 1e-4);

    const auto sp = stability_polynomial(builtin("RK(4,4)"));
    CHECK(dt_max(sp, 1.0, 128) == doctest::Approx(2.0 / 128.0 * 2.0 * std::sqrt(2.0)).epsilon(1e-7));
    CHECK(dt_max(sp, 1.0, 64) == doctest::Approx(2.0 * dt_max(sp, 1.0, 128)));
    CHECK_THROWS_AS(dt_max(sp, 1.0, 33), ArgumentError);
}

TEST_CASE("mode amplification") {
    const State u0{1.0, 2.0, 0.0, -1.0};
    const auto same = mode_amplification(u0, u0);
    REQUIRE(same.size() == 2);
    for (const auto& v : same) {
        REQUIRE(v.has_value());
        CHECK(*v == 0.0);
    }
    const auto doubled = mode_amplification(u0, scaled(u0, 2.0));
    CHECK(*doubled[0] == doctest::Approx(1.0));
    const auto none = mode_amplification(State{1.0, 1.0, 1.0, 1.0}, State{1.0, 1.0, 1.0, 1.0});
    CHECK(none[0].has_value());
    CHECK_FALSE(none[1].has_value());

    SUBCASE("baseline steps follow |R(i xi dt)|^N") {
        const std::size_t m = 32;
        const auto p = spectral_advection(m, WhiteNoise{7});
        const auto tab = builtin("RK(4,4)");
        const auto sp = stability_polynomial(tab);
        const double dt = 0.05;
        const int steps = 20;
        State u = p.u0;
        for (int k = 0; k < steps; ++k) u = rk_step(tab, p, k * dt, u, dt).u_next;
        const auto amp = mode_amplification(p.u0, u);
        for (std::size_t xi = 0; xi < m / 2; ++xi) {
            CAPTURE(xi);
            REQUIRE(amp[xi].has_value());
            const double r = eval_R_gamma(sp, 1.0, {0.0, static_cast<double>(xi) * dt}).abs();
            CHECK(*amp[xi] == doctest::Approx(std::pow(r, steps) - 1.0).scale(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("Burgers") {
    for (auto flux : {BurgersFlux::conservative, BurgersFlux::dissipative}) {
        BurgersConfig cfg;
        cfg.flux = flux;
        const auto p = burgers(cfg);
        CHECK(p.id == (flux == BurgersFlux::conservative ? "burgers-cons" : "burgers-diss"));
        CHECK(p.dim == 50);
        const auto x = burgers_grid(cfg);
        CHECK(x.front() == -1.0);
        CHECK(x[25] == doctest::Approx(0.0).scale(1.0));
        CHECK(p.u0[25] == doctest::Approx(1.0));

        const auto fc = p.rhs(0.0, State(50, 0.7));
        for (double v : fc) CHECK(std::abs(v) <= 1e-13);

        std::mt19937_64 rng(3);
        for (int k = 0; k < 20; ++k) {
            const State u = oracle::random_vector(rng, 50, -2.0, 2.0);
            const State f = p.rhs(0.0, u);
            double mass = 0.0;
            for (double v : f) mass += v;
            CHECK(std::abs(mass) <= 1e-11);
            const double prod = p.space.inner(u, f);
            if (flux == BurgersFlux::conservative) CHECK(std::abs(prod) <= 1e-11);
            else CHECK(prod < 0.0);
        }
    }
    BurgersConfig bad;
    bad.n = 2;
    CHECK_THROWS_AS(burgers(bad), ArgumentError);

    SUBCASE("reference solution") {
        const auto p = with_reference_solution(burgers(BurgersConfig{}), builtin("RK(4,4)"), 1e-3);
        REQUIRE(p.exact.has_value());
        const auto r0 = (*p.exact)(0.0);
        CHECK(r0 == p.u0);
        const auto r1 = (*p.exact)(0.01);
        const auto direct = integrate(builtin("RK(4,4)"), p, 0.0, p.u0, 1e-3, 0.01, Mode::baseline).final().state;
        for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i] == doctest::Approx(direct[i]).epsilon(1e-12));
    }
}
