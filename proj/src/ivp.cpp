#include "rrk/ivp.hpp"

#include <algorithm>
#include <cmath>

#include "rrk/error.hpp"

namespace rrk {

InnerProductSpace::InnerProductSpace(std::size_t dim) : weights_(dim, 1.0) {}

InnerProductSpace::InnerProductSpace(Vector weights) : weights_(std::move(weights)) {
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw ArgumentError("InnerProductSpace: weights must be positive and finite");
}

double InnerProductSpace::inner(std::span<const double> u, std::span<const double> v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * u[i] * v[i];
    return s;
}

double InnerProductSpace::norm(std::span<const double> u) const { return std::sqrt(norm_sq(u)); }

std::string to_string(Classification c) {
    switch (c) {
        case Classification::conservative: return "conservative";
        case Classification::dissipative: return "dissipative";
        case Classification::generic: return "generic";
    }
    return "generic";
}

ClassificationCheck check_classification(const IvpProblem& prob, std::span<const State> samples,
                                         double t) {
    ClassificationCheck out;
    for (const auto& u : samples) {
        const State f = prob.rhs(t, u);
        const double scale = prob.space.norm(u) * prob.space.norm(f);
        const double ip = prob.space.inner(u, f);
        const double ratio = scale > 0.0 ? ip / scale : 0.0;
        out.worst_ratio = std::max(out.worst_ratio, prob.classification == Classification::conservative
                                                        ? std::abs(ratio)
                                                        : ratio);
        const double tol = 1e-11 * scale;
        if (prob.classification == Classification::conservative && std::abs(ip) > tol) out.holds = false;
        if (prob.classification == Classification::dissipative && ip > tol) out.holds = false;
    }
    return out;
}

}  // namespace rrk
