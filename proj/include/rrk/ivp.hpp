#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "rrk/linalg.hpp"

namespace rrk {

using State = Vector;

/// Weighted Euclidean inner product <u,v> = sum_i w_i u_i v_i.
class InnerProductSpace {
public:
    /// Unit weights.
    explicit InnerProductSpace(std::size_t dim);
    /// Throws ArgumentError unless every weight is positive and finite.
    explicit InnerProductSpace(Vector weights);

    std::size_t dim() const { return weights_.size(); }
    const Vector& weights() const { return weights_; }

    double inner(std::span<const double> u, std::span<const double> v) const;
    double norm_sq(std::span<const double> u) const { return inner(u, u); }
    double norm(std::span<const double> u) const;

private:
    Vector weights_;
};

enum class Classification { conservative, dissipative, generic };

std::string to_string(Classification c);

/// u'(t) = f(t, u(t)). The rhs must be pure and re-entrant.
struct IvpProblem {
    using Rhs = std::function<State(double t, const State& u)>;
    using Exact = std::function<State(double t)>;

    std::string id;
    std::size_t dim = 0;
    Rhs rhs;
    InnerProductSpace space{0};
    std::optional<Exact> exact;
    Classification classification = Classification::generic;
    double t0 = 0.0;
    State u0;
};

struct ClassificationCheck {
    bool holds = true;
    double worst_ratio = 0.0;  // max <u,f> / (|u| |f|) over the samples
};

/// Checks <u, f(t,u)> against the declared classification on the given
/// sample states, using the 1e-11 relative threshold.
ClassificationCheck check_classification(const IvpProblem& prob, std::span<const State> samples,
                                         double t = 0.0);

}  // namespace rrk
