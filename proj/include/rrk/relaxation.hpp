#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rrk/ivp.hpp"
#include "rrk/tableau.hpp"

namespace rrk {

/// How the relaxed update is used.
///  - baseline: plain RK step, gamma = 1.
///  - idt: relaxed state u + gamma dt d assigned to t + dt.
///  - rrk: same state assigned to t + gamma dt.
enum class Mode { baseline, idt, rrk };

std::string to_string(Mode m);
/// Accepts "baseline", "idt", "rrk" (case-insensitive). Throws LookupError.
Mode parse_mode(std::string_view s);

/// Stage data of one explicit RK step, kept so gamma can be computed
/// without re-evaluating the right-hand side.
struct StageWorkspace {
    State start;                     // u^n
    std::vector<State> stages;       // y_i
    std::vector<State> stage_derivs; // f_i = f(t + c_i dt, y_i)
    State direction;                 // d = sum_j b_j f_j
};

struct RkStepResult {
    State u_next;
    StageWorkspace ws;
};

/// One explicit RK step. Throws CapabilityError for implicit tableaux,
/// ArgumentError for dt <= 0 and NonFiniteStateError (index = stage) when
/// the rhs produces non-finite values.
RkStepResult rk_step(const ButcherTableau& tab, const IvpProblem& prob, double t,
                     const State& u, double dt);

struct GammaValue {
    double gamma = 1.0;
    bool fallback = false;  // denominator below the zero threshold
};

/// Threshold under which ||d||^2 counts as zero:
/// eps * max(1, ||u^n||^2) * s^2.
double denominator_threshold(double start_norm_sq, std::size_t stages);

/// gamma = 2 sum_ij b_i a_ij <f_i,f_j> / sum_ij b_i b_j <f_i,f_j> from the full
/// s x s Gram matrix.
GammaValue gamma_direct(const ButcherTableau& tab, const StageWorkspace& ws,
                        const InnerProductSpace& space);

/// Same quantity from s+1 inner products: the numerator uses
/// y_i - u^n = dt sum_j a_ij f_j. Throws ArgumentError for dt <= 0.
GammaValue gamma_efficient(const ButcherTableau& tab, const StageWorkspace& ws,
                           std::span<const double> u_n, double dt,
                           const InnerProductSpace& space);

enum class GammaFormula { direct, efficient };

struct StepOptions {
    GammaFormula formula = GammaFormula::direct;
};

struct StepOutcome {
    State u_next;
    double t_next = 0.0;
    double gamma = 1.0;
    double energy_before = 0.0;  // ||u^n||^2
    double energy_after = 0.0;   // ||u^{n+1}||^2
    bool fallback_used = false;
};

/// Throws CapabilityError if the tableau is not at least second order in
/// idt/rrk mode and NonpositiveGammaError if gamma <= 0.
StepOutcome relaxation_step(const ButcherTableau& tab, const IvpProblem& prob, double t,
                            const State& u, double dt, Mode mode, const StepOptions& opts = {});

struct TrajectoryRecord {
    double t;
    State state;
    double gamma;
    double energy_sq;
};

struct TrajectoryMetadata {
    std::string method;
    Mode mode = Mode::baseline;
    double dt = 0.0;
    std::size_t steps = 0;
    double t_end = 0.0;       // requested
    double achieved_t = 0.0;  // time attached to the final state
    double gamma_min = 1.0;
    double gamma_max = 1.0;
    std::size_t fallback_steps = 0;
    /// Steps whose gamma fell outside [0.5, 1.5].
    std::vector<std::size_t> gamma_warnings;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    TrajectoryMetadata metadata;

    const TrajectoryRecord& final() const { return records.back(); }
};

struct IntegrateOptions {
    StepOptions step;
    bool store_states = true;  // when false only the first and last states are kept
    std::size_t max_steps = 100'000'000;
};

/// Fixed-step driver. The nominal step is shrunk on the last step so the
/// nominal time lands on t_end; in rrk mode the achieved time t + gamma dt
/// is what gets recorded. Numerical errors are rethrown with the step index.
Trajectory integrate(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                     const State& u0, double dt, double t_end, Mode mode,
                     const IntegrateOptions& opts = {});

/// Least-squares slope of log(y) against log(x). Points with y <= 0 are
/// skipped; needs at least two usable points.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ConvergencePoint {
    double dt;
    double error;
    double achieved_t;
    double final_gamma;
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;
};

/// Runs integrate() for each dt (concurrently) and measures
/// ||u_final - exact(achieved_t)||. Throws CapabilityError without an exact
/// solution and ArgumentError unless dt_list is strictly decreasing.
ConvergenceResult convergence_study(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                                    const State& u0, std::span<const double> dt_list,
                                    double t_end, Mode mode, const IntegrateOptions& opts = {});

struct GammaStudyPoint {
    double dt;
    double gamma_error;  // |gamma_1 - 1|
};

struct GammaStudyResult {
    std::vector<GammaStudyPoint> points;
    double slope = 0.0;
};

/// Single relaxation step per dt; slope of log|gamma - 1| against log dt.
GammaStudyResult gamma_study(const ButcherTableau& tab, const IvpProblem& prob, double t0,
                             const State& u0, std::span<const double> dt_list,
                             const StepOptions& opts = {});

}  // namespace rrk
