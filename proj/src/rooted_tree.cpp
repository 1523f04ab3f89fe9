#include "rrk/rooted_tree.hpp"

#include <algorithm>
#include <map>

#include "rrk/error.hpp"

namespace rrk {

RootedTree::RootedTree(std::vector<RootedTree> children) : children_(std::move(children)) {
    std::sort(children_.begin(), children_.end());
    order_ = 1;
    density_ = 1.0;
    key_.clear();
    if (children_.empty()) {
        key_ = ".";
        return;
    }
    key_ = "[";
    for (const auto& ch : children_) {
        order_ += ch.order_;
        density_ *= ch.density_;
        key_ += ch.key_;
    }
    key_ += "]";
    density_ *= order_;
}

bool operator<(const RootedTree& x, const RootedTree& y) {
    if (x.order_ != y.order_) return x.order_ < y.order_;
    return x.key_ < y.key_;
}

Vector RootedTree::elementary_weights(const Matrix& a) const {
    const std::size_t s = a.rows();
    Vector phi(s, 1.0);
    for (const auto& ch : children_) {
        const Vector inner = a.apply(ch.elementary_weights(a));
        for (std::size_t j = 0; j < s; ++j) phi[j] *= inner[j];
    }
    return phi;
}

namespace {

// Every tree obtained by attaching one new leaf to some node of `t`.
std::vector<RootedTree> grow(const RootedTree& t) {
    std::vector<RootedTree> out;
    {
        auto kids = t.children();
        kids.emplace_back();
        out.emplace_back(std::move(kids));
    }
    const auto& kids = t.children();
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0 && kids[i] == kids[i - 1]) continue;
        for (auto& g : grow(kids[i])) {
            auto copy = kids;
            copy[i] = std::move(g);
            out.emplace_back(std::move(copy));
        }
    }
    return out;
}

}  // namespace

std::vector<RootedTree> trees_of_order(int order) {
    if (order < 1) throw ArgumentError("trees_of_order: order must be >= 1");
    std::vector<RootedTree> level{RootedTree{}};
    for (int n = 2; n <= order; ++n) {
        std::map<std::string, RootedTree> next;
        for (const auto& t : level)
            for (auto& g : grow(t)) next.try_emplace(g.key(), std::move(g));
        level.clear();
        for (auto& [key, tree] : next) level.push_back(std::move(tree));
    }
    return level;
}

std::vector<RootedTree> trees_up_to(int max_order) {
    std::vector<RootedTree> all;
    for (int n = 1; n <= max_order; ++n) {
        auto level = trees_of_order(n);
        all.insert(all.end(), std::make_move_iterator(level.begin()),
                   std::make_move_iterator(level.end()));
    }
    return all;
}

}  // namespace rrk
