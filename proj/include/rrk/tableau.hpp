#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rrk/linalg.hpp"

namespace rrk {

/// Butcher tableau (A, b, c) of an s-stage Runge-Kutta method.
///
/// Immutable after construction. The constructor checks shapes only; use
/// validate() for consistency diagnostics.
class ButcherTableau {
public:
    ButcherTableau(std::string name, Matrix a, Vector b, Vector c);
    /// c computed as row sums of A.
    ButcherTableau(std::string name, Matrix a, Vector b);

    const std::string& name() const { return name_; }
    std::size_t stages() const { return b_.size(); }
    const Matrix& a() const { return a_; }
    const Vector& b() const { return b_; }
    const Vector& c() const { return c_; }

    /// True iff a_ij = 0 for all j >= i.
    bool is_explicit() const { return explicit_; }

    /// Same A and c with the weights scaled by `factor`.
    ButcherTableau with_scaled_weights(double factor) const;

private:
    std::string name_;
    Matrix a_;
    Vector b_;
    Vector c_;
    bool explicit_;
};

/// Names accepted by builtin(), in registry order.
const std::vector<std::string>& builtin_names();

/// One of the registry methods: SSPRK(2,2), SSPRK(3,3), SSPRK(10,4),
/// RK(4,4), BSRK(8,5). Throws LookupError for anything else.
ButcherTableau builtin(std::string_view name);

/// Order the builtin method is designed for (the p in its label).
int builtin_design_order(std::string_view name);

struct TreeResidual {
    std::string tree;  // bracket notation, e.g. "[[.].]"
    int order;
    double density;
    double residual;
};

struct OrderReport {
    int order = 0;
    std::vector<TreeResidual> residuals;
};

/// Residual threshold below which an order condition counts as satisfied.
inline constexpr double kOrderConditionTol = 1e-10;

/// Checks sum_j b_j Phi_j(t) = 1/gamma(t) for all rooted trees of order
/// <= max_order. Throws ArgumentError when max_order < 1.
OrderReport order_via_trees(const ButcherTableau& tab, int max_order);

/// Bushy-tree residuals |b^T c^{k-1} - 1/k| for k = 1..max_order.
std::vector<double> bushy_tree_residuals(const ButcherTableau& tab, int max_order);

struct TableauDiagnostics {
    bool c_consistent = false;
    bool is_explicit = false;
    bool nonneg_weights = false;
    double positivity_sum = 0.0;  // sum_{i,j} b_i a_ij
    int order = 0;
    std::vector<TreeResidual> residuals;
};

/// Never throws for a well-formed tableau; failures show up as flags.
TableauDiagnostics validate(const ButcherTableau& tab, int max_order = 5);

/// Plain-text format:
///   s
///   s rows of A
///   b
///   [c]          (optional, defaults to row sums of A)
/// '#' starts a comment. Throws ParseError.
ButcherTableau parse_tableau(std::string_view text, std::string name = "custom");
ButcherTableau load_tableau(const std::filesystem::path& path);

}  // namespace rrk
