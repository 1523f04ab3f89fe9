#pragma once

#include <span>
#include <string>
#include <vector>

#include "rrk/linalg.hpp"

namespace rrk {

/// Rooted tree in canonical form: children are kept sorted, so two trees
/// with the same shape compare equal.
class RootedTree {
public:
    /// Single node.
    RootedTree() = default;
    explicit RootedTree(std::vector<RootedTree> children);

    const std::vector<RootedTree>& children() const { return children_; }

    /// Number of nodes.
    int order() const { return order_; }
    /// rho(t) * prod density(children); 1 for the single node.
    double density() const { return density_; }

    /// Bracket notation: "." for a leaf, "[..]" otherwise.
    const std::string& key() const { return key_; }

    /// Phi_j(t) for j = 0..s-1 under coefficient matrix `a`.
    Vector elementary_weights(const Matrix& a) const;

    friend bool operator==(const RootedTree& x, const RootedTree& y) { return x.key_ == y.key_; }
    friend bool operator<(const RootedTree& x, const RootedTree& y);

private:
    std::vector<RootedTree> children_;
    int order_ = 1;
    double density_ = 1.0;
    std::string key_ = ".";
};

/// All distinct rooted trees with exactly `order` nodes.
std::vector<RootedTree> trees_of_order(int order);

/// All distinct rooted trees with 1..max_order nodes, grouped by order.
std::vector<RootedTree> trees_up_to(int max_order);

}  // namespace rrk
