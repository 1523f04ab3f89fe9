#include "rrk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rrk/error.hpp"
#include "rrk/rooted_tree.hpp"

namespace rrk {

namespace {

Vector row_sums(const Matrix& a) {
    Vector c(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (double v : a.row(i)) c[i] += v;
    return c;
}

bool strictly_lower(const Matrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (a(i, j) != 0.0) return false;
    return true;
}

}  // namespace

ButcherTableau::ButcherTableau(std::string name, Matrix a, Vector b, Vector c)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    const std::size_t s = b_.size();
    if (s == 0) throw ArgumentError("ButcherTableau: at least one stage required");
    if (a_.rows() != s || a_.cols() != s || c_.size() != s)
        throw ArgumentError("ButcherTableau '" + name_ + "': inconsistent dimensions");
    explicit_ = strictly_lower(a_);
}

ButcherTableau::ButcherTableau(std::string name, Matrix a, Vector b)
    : ButcherTableau(std::move(name), a, std::move(b), row_sums(a)) {}

ButcherTableau ButcherTableau::with_scaled_weights(double factor) const {
    Vector b = b_;
    for (double& v : b) v *= factor;
    return ButcherTableau(name_, a_, std::move(b), c_);
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"SSPRK(2,2)", "SSPRK(3,3)", "SSPRK(10,4)",
                                                "RK(4,4)", "BSRK(8,5)"};
    return names;
}

namespace {

ButcherTableau ssprk22() {
    return {"SSPRK(2,2)", Matrix::from_rows({{0, 0}, {1, 0}}), {0.5, 0.5}};
}

ButcherTableau ssprk33() {
    return {"SSPRK(3,3)", Matrix::from_rows({{0, 0, 0}, {1, 0, 0}, {0.25, 0.25, 0}}),
            {1.0 / 6, 1.0 / 6, 2.0 / 3}};
}

// Ten-stage fourth-order SSP method: two blocks of five first-order stages of
// size dt/6 joined by the convex combination u6 = 3/5 u0 + 2/5 u5.
ButcherTableau ssprk104() {
    Matrix a(10, 10);
    for (std::size_t i = 1; i < 5; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = 1.0 / 6;
    for (std::size_t i = 5; i < 10; ++i) {
        for (std::size_t j = 0; j < 5; ++j) a(i, j) = 1.0 / 15;
        for (std::size_t j = 5; j < i; ++j) a(i, j) = 1.0 / 6;
    }
    return {"SSPRK(10,4)", std::move(a), Vector(10, 0.1)};
}

ButcherTableau rk44() {
    return {"RK(4,4)",
            Matrix::from_rows({{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1, 0}}),
            {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}};
}

// Bogacki-Shampine 5(4) pair, fifth-order propagating weights only. The
// weights equal the last row of A (FSAL), so b_8 = 0.
ButcherTableau bsrk85() {
    Matrix a(8, 8);
    a(1, 0) = 1.0 / 6;
    a(2, 0) = 2.0 / 27;
    a(2, 1) = 4.0 / 27;
    a(3, 0) = 183.0 / 1372;
    a(3, 1) = -162.0 / 343;
    a(3, 2) = 1053.0 / 1372;
    a(4, 0) = 68.0 / 297;
    a(4, 1) = -4.0 / 11;
    a(4, 2) = 42.0 / 143;
    a(4, 3) = 1960.0 / 3861;
    a(5, 0) = 597.0 / 22528;
    a(5, 1) = 81.0 / 352;
    a(5, 2) = 63099.0 / 585728;
    a(5, 3) = 58653.0 / 366080;
    a(5, 4) = 4617.0 / 20480;
    a(6, 0) = 174197.0 / 959244;
    a(6, 1) = -30942.0 / 79937;
    a(6, 2) = 8152137.0 / 19744439;
    a(6, 3) = 666106.0 / 1039181;
    a(6, 4) = -29421.0 / 29068;
    a(6, 5) = 482048.0 / 414219;
    a(7, 0) = 587.0 / 8064;
    a(7, 1) = 0.0;
    a(7, 2) = 4440339.0 / 15491840;
    a(7, 3) = 24353.0 / 124800;
    a(7, 4) = 387.0 / 44800;
    a(7, 5) = 2152.0 / 5985;
    a(7, 6) = 7267.0 / 94080;
    Vector b(8, 0.0);
    for (std::size_t j = 0; j < 7; ++j) b[j] = a(7, j);
    return {"BSRK(8,5)", std::move(a), std::move(b)};
}

}  // namespace

ButcherTableau builtin(std::string_view name) {
    if (name == "SSPRK(2,2)") return ssprk22();
    if (name == "SSPRK(3,3)") return ssprk33();
    if (name == "SSPRK(10,4)") return ssprk104();
    if (name == "RK(4,4)") return rk44();
    if (name == "BSRK(8,5)") return bsrk85();
    std::string msg = "unknown method '" + std::string(name) + "'; valid names:";
    for (const auto& n : builtin_names()) msg += " " + n;
    throw LookupError(msg);
}

int builtin_design_order(std::string_view name) {
    if (name == "SSPRK(2,2)") return 2;
    if (name == "SSPRK(3,3)") return 3;
    if (name == "SSPRK(10,4)" || name == "RK(4,4)") return 4;
    if (name == "BSRK(8,5)") return 5;
    throw LookupError("unknown method '" + std::string(name) + "'");
}

OrderReport order_via_trees(const ButcherTableau& tab, int max_order) {
    if (max_order < 1) throw ArgumentError("order_via_trees: max_order must be >= 1");
    OrderReport report;
    report.order = max_order;
    bool all_ok = true;
    for (int n = 1; n <= max_order; ++n) {
        bool level_ok = true;
        for (const auto& t : trees_of_order(n)) {
            const double res = std::abs(dot(tab.b(), t.elementary_weights(tab.a())) - 1.0 / t.density());
            report.residuals.push_back({t.key(), n, t.density(), res});
            if (!(res <= kOrderConditionTol)) level_ok = false;
        }
        if (all_ok && !level_ok) {
            report.order = n - 1;
            all_ok = false;
        }
    }
    return report;
}

std::vector<double> bushy_tree_residuals(const ButcherTableau& tab, int max_order) {
    std::vector<double> out;
    const auto& b = tab.b();
    const auto& c = tab.c();
    for (int k = 1; k <= max_order; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) s += b[j] * std::pow(c[j], k - 1);
        out.push_back(std::abs(s - 1.0 / k));
    }
    return out;
}

TableauDiagnostics validate(const ButcherTableau& tab, int max_order) {
    TableauDiagnostics d;
    const auto& a = tab.a();
    const auto& b = tab.b();
    const auto& c = tab.c();
    const std::size_t s = tab.stages();

    d.c_consistent = true;
    for (std::size_t i = 0; i < s; ++i) {
        double row = 0.0;
        for (double v : a.row(i)) row += v;
        if (!(std::abs(row - c[i]) <= 1e-13)) d.c_consistent = false;
    }
    d.is_explicit = tab.is_explicit();
    d.nonneg_weights = std::all_of(b.begin(), b.end(), [](double v) { return v >= 0.0; });
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) d.positivity_sum += b[i] * a(i, j);

    auto report = order_via_trees(tab, std::max(max_order, 1));
    d.order = report.order;
    d.residuals = std::move(report.residuals);
    return d;
}

namespace {

std::vector<double> parse_numbers(const std::string& line, std::size_t lineno) {
    std::istringstream in(line);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw ParseError("tableau line " + std::to_string(lineno) + ": bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

ButcherTableau parse_tableau(std::string_view text, std::string name) {
    std::vector<std::pair<std::size_t, std::vector<double>>> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto nums = parse_numbers(raw, lineno);
        if (!nums.empty()) lines.emplace_back(lineno, std::move(nums));
    }
    if (lines.empty()) throw ParseError("tableau: empty input");

    const auto& head = lines.front().second;
    if (head.size() != 1 || head[0] < 1 || head[0] != std::floor(head[0]))
        throw ParseError("tableau line " + std::to_string(lines.front().first) +
                         ": expected a positive stage count");
    const auto s = static_cast<std::size_t>(head[0]);
    if (lines.size() != s + 2 && lines.size() != s + 3)
        throw ParseError("tableau: expected " + std::to_string(s + 2) + " or " +
                         std::to_string(s + 3) + " data lines, got " + std::to_string(lines.size()));

    auto expect_len = [&](std::size_t k) -> const std::vector<double>& {
        const auto& [no, v] = lines[k];
        if (v.size() != s)
            throw ParseError("tableau line " + std::to_string(no) + ": expected " + std::to_string(s) +
                             " values, got " + std::to_string(v.size()));
        return v;
    };

    Matrix a(s, s);
    for (std::size_t i = 0; i < s; ++i) {
        const auto& r = expect_len(1 + i);
        for (std::size_t j = 0; j < s; ++j) a(i, j) = r[j];
    }
    Vector b = expect_len(1 + s);
    if (lines.size() == s + 3) return ButcherTableau(std::move(name), std::move(a), std::move(b), expect_len(2 + s));
    return ButcherTableau(std::move(name), std::move(a), std::move(b));
}

ButcherTableau load_tableau(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open tableau file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tableau(ss.str(), path.stem().string());
}

}  // namespace rrk
