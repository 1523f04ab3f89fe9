#include "rrk/relaxation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <limits>

#include "rrk/error.hpp"

namespace rrk {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::baseline: return "baseline";
        case Mode::idt: return "idt";
        case Mode::rrk: return "rrk";
    }
    return "baseline";
}

Mode parse_mode(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "baseline") return Mode::baseline;
    if (lower == "idt") return Mode::idt;
    if (lower == "rrk") return Mode::rrk;
    throw LookupError("unknown mode '" + std::string(s) + "'; valid: baseline idt rrk");
}

namespace {

bool all_finite(const State& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void axpy(double alpha, const State& x, State& y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

}  // namespace

RkStepResult rk_step(const ButcherTableau& tab, const IvpProblem& prob, double t,
                     const State& u, double dt) {
    if (!tab.is_explicit())
        throw CapabilityError("rk_step: '" + tab.name() + "' is implicit; only explicit stepping is supported");
    if (!(dt > 0.0)) throw ArgumentError("rk_step: dt must be positive");

    const std::size_t s = tab.stages();
    const auto& a = tab.a();
    const auto& b = tab.b();
    const auto& c = tab.c();

    RkStepResult out;
    StageWorkspace& ws = out.ws;
    ws.start = u;
    ws.stages.reserve(s);
    ws.stage_derivs.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        State y = u;
        for (std::size_t j = 0; j < i; ++j)
            if (a(i, j) != 0.0) axpy(dt * a(i, j), ws.stage_derivs[j], y);
        State f = prob.rhs(t + c[i] * dt, y);
        if (f.size() != u.size())
            throw ArgumentError("rk_step: rhs returned a vector of the wrong size");
        if (!all_finite(f) || !all_finite(y))
            throw NonFiniteStateError("non-finite state at stage " + std::to_string(i + 1),
                                      static_cast<std::ptrdiff_t>(i + 1));
        ws.stages.push_back(std::move(y));
        ws.stage_derivs.push_back(std::move(f));
    }
    ws.direction.assign(u.size(), 0.0);
    for (std::size_t j = 0; j < s; ++j)
        if (b[j] != 0.0) axpy(b[j], ws.stage_derivs[j], ws.direction);
    out.u_next = u;
    axpy(dt, ws.direction, out.u_next);
    return out;
}

double denominator_threshold(double start_norm_sq, std::size_t stages) {
    const double s = static_cast<double>(stages);
    return std::numeric_limits<double>::epsilon() * std::max(1.0, start_norm_sq) * s * s;
}

GammaValue gamma_direct(const ButcherTableau& tab, const StageWorkspace& ws,
                        const InnerProductSpace& space) {
    const std::size_t s = tab.stages();
    const double tau = denominator_threshold(space.norm_sq(ws.start), s);
    if (space.norm_sq(ws.direction) <= tau) return {1.0, true};

    const auto& a = tab.a();
    const auto& b = tab.b();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double g = space.inner(ws.stage_derivs[i], ws.stage_derivs[j]);
            num += b[i] * a(i, j) * g;
            den += b[i] * b[j] * g;
        }
    }
    return {2.0 * num / den, false};
}

GammaValue gamma_efficient(const ButcherTableau& tab, const StageWorkspace& ws,
                           std::span<const double> u_n, double dt,
                           const InnerProductSpace& space) {
    if (!(dt > 0.0)) throw ArgumentError("gamma_efficient: dt must be positive");
    const std::size_t s = tab.stages();
    const double den = space.norm_sq(ws.direction);
    if (den <= denominator_threshold(space.norm_sq(u_n), s)) return {1.0, true};

    const auto& b = tab.b();
    const auto& w = space.weights();
    double num = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        if (b[i] == 0.0) continue;
        const State& f = ws.stage_derivs[i];
        const State& y = ws.stages[i];
        double ip = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) ip += w[k] * f[k] * (y[k] - u_n[k]);
        num += b[i] * ip;
    }
    return {2.0 * num / (dt * den), false};
}

namespace {

void require_second_order(const ButcherTableau& tab) {
    double sb = 0.0;
    double sbc = 0.0;
    for (std::size_t j = 0; j < tab.stages(); ++j) {
        sb += tab.b()[j];
        sbc += tab.b()[j] * tab.c()[j];
    }
    if (std::abs(sb - 1.0) > kOrderConditionTol || std::abs(sbc - 0.5) > kOrderConditionTol)
        throw CapabilityError("relaxation requires a method of order at least two; '" + tab.name() +
                              "' is not");
}

}  // namespace

StepOutcome relaxation_step(const ButcherTableau& tab, const IvpProblem& prob, double t,
                            const State& u, double dt, Mode mode, const StepOptions& opts) {
    if (mode != Mode::baseline) require_second_order(tab);

    auto [u_next, ws] = rk_step(tab, prob, t, u, dt);
    StepOutcome out;
    out.energy_before = prob.space.norm_sq(u);

    if (mode == Mode::baseline) {
        out.u_next = std::move(u_next);
        out.t_next = t + dt;
        out.gamma = 1.0;
    } else {
        const GammaValue g = opts.formula == GammaFormula::direct
                                 ? gamma_direct(tab, ws, prob.space)
                                 : gamma_efficient(tab, ws, u, dt, prob.space);
        if (!std::isfinite(g.gamma))
            throw NonFiniteStateError("relaxation parameter is not finite");
        if (!(g.gamma > 0.0))
            throw NonpositiveGammaError("relaxation parameter gamma = " + std::to_string(g.gamma) +
                                        " <= 0; reduce the step size");
        out.gamma = g.gamma;
        out.fallback_used = g.fallback;
        out.u_next = u;
        axpy(g.gamma * dt, ws.direction, out.u_next);
        out.t_next = mode == Mode::rrk ? t + g.gamma * dt : t + dt;
    }
    out.energy_after = prob.space.norm_sq(out.u_next);
    return out;
}

namespace {

template <class E>
[[noreturn]] void rethrow_at_step(const E& e, std::size_t step) {
    throw E("step " + std::to_string(step) + ": " + e.what(), static_cast<std::ptrdiff_t>(step));
}

}  // namespace

Trajectory integrate(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                     const State& u0, double dt, double t_end, Mode mode,
                     const IntegrateOptions& opts) {
    if (!(t_end > t0)) throw ArgumentError("integrate: t_end must exceed t0");
    if (!(dt > 0.0)) throw ArgumentError("integrate: dt must be positive");
    if (u0.size() != prob.dim) throw ArgumentError("integrate: initial state has the wrong size");

    Trajectory traj;
    auto& meta = traj.metadata;
    meta.method = tab.name();
    meta.mode = mode;
    meta.dt = dt;
    meta.t_end = t_end;

    traj.records.push_back({t0, u0, 1.0, prob.space.norm_sq(u0)});

    const double stop = t_end - 1e-12 * (t_end - t0);
    double t_nominal = t0;
    double t = t0;
    State u = u0;
    bool first_gamma = true;
    std::size_t step = 0;
    while (t_nominal < stop) {
        if (step >= opts.max_steps)
            throw RunawayError("integrate: step count exceeded " + std::to_string(opts.max_steps),
                               static_cast<std::ptrdiff_t>(step));
        const double h = std::min(dt, t_end - t_nominal);
        StepOutcome out;
        try {
            out = relaxation_step(tab, prob, t, u, h, mode, opts.step);
        } catch (const NonpositiveGammaError& e) {
            rethrow_at_step(e, step + 1);
        } catch (const NonFiniteStateError& e) {
            rethrow_at_step(e, step + 1);
        } catch (const SingularStateError& e) {
            rethrow_at_step(e, step + 1);
        } catch (const NumericalError& e) {
            rethrow_at_step(e, step + 1);
        }
        ++step;
        t_nominal += h;
        t = out.t_next;
        u = std::move(out.u_next);

        if (first_gamma) {
            meta.gamma_min = meta.gamma_max = out.gamma;
            first_gamma = false;
        } else {
            meta.gamma_min = std::min(meta.gamma_min, out.gamma);
            meta.gamma_max = std::max(meta.gamma_max, out.gamma);
        }
        if (out.fallback_used) ++meta.fallback_steps;
        if (out.gamma < 0.5 || out.gamma > 1.5) meta.gamma_warnings.push_back(step);

        const bool last = !(t_nominal < stop);
        if (opts.store_states || last)
            traj.records.push_back({t, u, out.gamma, out.energy_after});
        else
            traj.records.push_back({t, {}, out.gamma, out.energy_after});
    }
    meta.steps = step;
    meta.achieved_t = t;
    return traj;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
        if (!(y[k] > 0.0) || !(x[k] > 0.0)) continue;
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw ArgumentError("loglog_slope: need at least two positive points");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw ArgumentError("loglog_slope: degenerate abscissae");
    return (dn * sxy - sx * sy) / denom;
}

ConvergenceResult convergence_study(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                                    const State& u0, std::span<const double> dt_list,
                                    double t_end, Mode mode, const IntegrateOptions& opts) {
    if (!prob.exact) throw CapabilityError("convergence_study: problem '" + prob.id + "' has no exact solution");
    if (dt_list.size() < 2) throw ArgumentError("convergence_study: need at least two step sizes");
    for (std::size_t k = 1; k < dt_list.size(); ++k)
        if (!(dt_list[k] < dt_list[k - 1]))
            throw ArgumentError("convergence_study: dt_list must be strictly decreasing");

    IntegrateOptions run_opts = opts;
    run_opts.store_states = false;

    std::vector<std::future<ConvergencePoint>> jobs;
    jobs.reserve(dt_list.size());
    for (double dt : dt_list) {
        jobs.push_back(std::async(std::launch::async, [&, dt] {
            const Trajectory traj = integrate(tab, prob, t0, u0, dt, t_end, mode, run_opts);
            const auto& fin = traj.final();
            State diff = (*prob.exact)(fin.t);
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = fin.state[k] - diff[k];
            return ConvergencePoint{dt, prob.space.norm(diff), fin.t, fin.gamma};
        }));
    }
    ConvergenceResult out;
    for (auto& j : jobs) out.points.push_back(j.get());

    std::vector<double> xs, ys;
    for (const auto& p : out.points) {
        xs.push_back(p.dt);
        ys.push_back(p.error);
    }
    out.slope = loglog_slope(xs, ys);
    return out;
}

GammaStudyResult gamma_study(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                             const State& u0, std::span<const double> dt_list,
                             const StepOptions& opts) {
    GammaStudyResult out;
    std::vector<double> xs, ys;
    for (double dt : dt_list) {
        const StepOutcome step = relaxation_step(tab, prob, t0, u0, dt, Mode::rrk, opts);
        const double err = std::abs(step.gamma - 1.0);
        out.points.push_back({dt, err});
        xs.push_back(dt);
        ys.push_back(err);
    }
    out.slope = loglog_slope(xs, ys);
    return out;
}

}  // namespace rrk
