#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rrk::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream f(p);
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> row(1);
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    row.back() += '"';
                    ++i;
                } else if (ch == '"') {
                    quoted = false;
                } else {
                    row.back() += ch;
                }
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                row.emplace_back();
            } else {
                row.back() += ch;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rrk_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

/// Replays dir/manifest.json into a second directory and compares every
/// listed output byte for byte.
void check_replay(const TempDir& tmp, const std::string& dir) {
    const std::string again = dir + "_replay";
    const auto r = run({"--manifest", dir + "/manifest.json", "--out", again});
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(slurp(fs::path(dir) / "manifest.json"));
    REQUIRE_FALSE(manifest.at("outputs").empty());
    for (const auto& name : manifest.at("outputs")) {
        CAPTURE(name.get<std::string>());
        CHECK(slurp(fs::path(dir) / name.get<std::string>()) == slurp(fs::path(again) / name.get<std::string>()));
    }
    (void)tmp;
}

}  // namespace

TEST_CASE("list-methods and ssp-table") {
    TempDir tmp;
    const auto r = run({"list-methods"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("method,stages,order,ssp_coeff,gamma_star\n") == 0);
    CHECK(r.out.find("\"SSPRK(3,3)\",3,3,1,1.5\n") != std::string::npos);
    CHECK(r.out.find("\"SSPRK(10,4)\",10,4,6,1.0416666") != std::string::npos);
    CHECK(r.out.find("\"RK(4,4)\",4,4,0,\n") != std::string::npos);

    const auto dir = tmp.sub("ssp");
    const auto s = run({"ssp-table", "--out", dir});
    REQUIRE(s.code == 0);
    const auto rows = read_csv(fs::path(dir) / "ssp_table.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"method", "ssp_coeff", "gamma_star"});
    CHECK(rows[1][0] == "SSPRK(2,2)");
    CHECK(std::stod(rows[1][2]) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rows[4][2].empty());
    check_replay(tmp, dir);
}

TEST_CASE("validate, including a tableau file") {
    TempDir tmp;
    const auto file = tmp.path / "heun.txt";
    std::ofstream(file) << "# Heun\n2\n0 0\n1 0\n0.5 0.5\n";
    const auto dir = tmp.sub("val");
    const auto r = run({"validate", "--tableau-file", file.string(), "--out", dir});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("order 2\n") != std::string::npos);
    CHECK(r.out.find("ssp coefficient 1\n") != std::string::npos);
    const auto rows = read_csv(fs::path(dir) / "order_conditions.csv");
    CHECK(rows.front() == std::vector<std::string>{"tree", "order", "density", "residual"});
    CHECK(rows.size() == 1 + 37);
    check_replay(tmp, dir);

    std::ofstream(tmp.path / "bad.txt") << "2\n0 0\n";
    CHECK(run({"validate", "--tableau-file", (tmp.path / "bad.txt").string(), "--out", dir}).code == 1);
    CHECK(run({"validate", "--method", "nope", "--out", dir}).code == 1);
}

TEST_CASE("integrate and energy") {
    TempDir tmp;
    const auto dir = tmp.sub("int");
    auto r = run({"integrate", "--method", "RK(4,4)", "--problem", "oscillator", "--dt", "0.9", "--t-end", "20",
                  "--out", dir});
    REQUIRE(r.code == 0);
    auto rows = read_csv(fs::path(dir) / "trajectory.csv");
    CHECK(rows[0] == std::vector<std::string>{"t", "gamma", "energy", "energy_sq"});
    REQUIRE(rows.size() == 1 + 24);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::abs(std::stod(rows[k][3]) - 1.0) <= 1e-11);
    check_replay(tmp, dir);

    const auto edir = tmp.sub("energy");
    r = run({"energy", "--method", "SSPRK(3,3)", "--mode", "baseline", "--dt", "0.1", "--t-end", "2", "--out", edir});
    REQUIRE(r.code == 0);
    rows = read_csv(fs::path(edir) / "energy.csv");
    CHECK(rows[0] == std::vector<std::string>{"t", "energy_sq", "energy_change"});
    for (std::size_t k = 2; k < rows.size(); ++k) CHECK(std::stod(rows[k][1]) > std::stod(rows[k - 1][1]));
    check_replay(tmp, edir);

    SUBCASE("zero problem gives a constant state") {
        const auto zdir = tmp.sub("zero");
        REQUIRE(run({"integrate", "--problem", "zero", "--dt", "0.25", "--t-end", "1", "--dump-state", "--out", zdir})
                    .code == 0);
        rows = read_csv(fs::path(zdir) / "trajectory.csv");
        CHECK(rows[0].size() == 6);
        REQUIRE(rows.size() == 6);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            CHECK(rows[k][4] == "1");
            CHECK(rows[k][5] == "0");
        }
    }
    SUBCASE("Burgers writes the final state") {
        const auto bdir = tmp.sub("burgers");
        REQUIRE(run({"integrate", "--problem", "burgers-diss", "--method", "SSPRK(3,3)", "--dt", "0.008", "--t-end",
                     "0.1", "--n", "50", "--out", bdir})
                    .code == 0);
        rows = read_csv(fs::path(bdir) / "state.csv");
        CHECK(rows[0] == std::vector<std::string>{"x", "u"});
        CHECK(rows.size() == 51);
        CHECK(rows[1][0] == "-1");
        const auto traj = read_csv(fs::path(bdir) / "trajectory.csv");
        for (std::size_t k = 2; k < traj.size(); ++k) CHECK(std::stod(traj[k][3]) <= std::stod(traj[k - 1][3]));
        check_replay(tmp, bdir);
    }
}

TEST_CASE("convergence and gamma-study") {
    TempDir tmp;
    const auto dir = tmp.sub("conv");
    auto r = run({"convergence", "--method", "SSPRK(3,3)", "--mode", "idt", "--dt", "0.25", "--levels", "4",
                  "--t-end", "5", "--out", dir});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(fs::path(dir) / "convergence.csv");
    CHECK(rows[0] == std::vector<std::string>{"method", "mode", "dt", "error", "achieved_t", "slope"});
    REQUIRE(rows.size() == 5);
    CHECK(rows[1][1] == "idt");
    CHECK(std::stod(rows[1][5]) == doctest::Approx(2.0).epsilon(0.1));
    check_replay(tmp, dir);

    const auto bdir = tmp.sub("conv_burgers");
    r = run({"convergence", "--method", "SSPRK(3,3)", "--problem", "burgers-cons", "--dt", "0.00375", "--levels", "3",
             "--t-end", "0.03", "--ref-dt", "1e-4", "--out", bdir});
    REQUIRE(r.code == 0);
    CHECK(std::stod(read_csv(fs::path(bdir) / "convergence.csv")[1][5]) > 2.5);

    const auto gdir = tmp.sub("gamma");
    r = run({"gamma-study", "--method", "RK(4,4)", "--dt", "0.5", "--levels", "7", "--out", gdir});
    REQUIRE(r.code == 0);
    const auto g = read_csv(fs::path(gdir) / "gamma.csv");
    CHECK(g[0] == std::vector<std::string>{"method", "dt", "gamma_error", "slope"});
    CHECK(g.size() == 8);
    CHECK(std::stod(g[1][3]) >= 2.75);
    check_replay(tmp, gdir);
}

TEST_CASE("stability-region") {
    TempDir tmp;
    const auto dir = tmp.sub("region");
    const auto r = run({"stability-region", "--method", "SSPRK(3,3)", "--gamma", "0.7", "1", "1.3", "--resolution",
                        "41", "--out", dir});
    REQUIRE(r.code == 0);
    std::vector<std::vector<std::vector<std::string>>> grids;
    for (const char* tag : {"0.7", "1", "1.3"}) {
        grids.push_back(read_csv(fs::path(dir) / (std::string("region_gamma_") + tag + ".csv")));
        const auto b = read_csv(fs::path(dir) / (std::string("boundary_gamma_") + tag + ".csv"));
        CHECK(b[0] == std::vector<std::string>{"re", "im"});
        CHECK(b.size() > 10);
    }
    REQUIRE(grids[0].size() == 1 + 41 * 41);
    CHECK(grids[0][0] == std::vector<std::string>{"re", "im", "stable"});
    for (std::size_t k = 1; k < grids[0].size(); ++k) {
        if (grids[2][k][2] == "1") CHECK(grids[1][k][2] == "1");
        if (grids[1][k][2] == "1") CHECK(grids[0][k][2] == "1");
    }
    check_replay(tmp, dir);
    CHECK(run({"stability-region", "--re", "1", "1", "--out", dir}).code == 1);
}

TEST_CASE("modes") {
    TempDir tmp;
    const auto dir = tmp.sub("modes");
    const auto r = run({"modes", "--problem", "advection", "--m", "32", "--mu", "0.99", "--seed", "42", "--t-end", "1",
                        "--out", dir});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(fs::path(dir) / "modes.csv");
    CHECK(rows[0] == std::vector<std::string>{"xi", "rel_change"});
    CHECK(rows.size() == 17);
    CHECK(r.out.find("energy_rel_change") != std::string::npos);
    check_replay(tmp, dir);
    CHECK(run({"modes", "--problem", "oscillator", "--dt", "0.1", "--out", dir}).code == 1);
}

TEST_CASE("configuration errors and numerical aborts") {
    TempDir tmp;
    const auto dir = tmp.sub("err");
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"integrate", "--problem", "oscillator", "--out", dir}).code == 1);               // no dt
    CHECK(run({"integrate", "--problem", "advection", "--dt", "0.1", "--out", dir}).code == 1); // dt for advection
    CHECK(run({"integrate", "--problem", "oscillator", "--mu", "0.5", "--out", dir}).code == 1);
    CHECK(run({"integrate", "--problem", "oscillator", "--dt", "-1", "--out", dir}).code == 1);
    CHECK(run({"integrate", "--mode", "fast", "--dt", "0.1", "--out", dir}).code == 1);
    CHECK(run({"integrate", "--problem", "nowhere", "--dt", "0.1", "--out", dir}).code == 1);
    CHECK(run({"--manifest", tmp.sub("missing.json")}).code == 1);
    CHECK(run({"--help"}).code == 0);

    const auto r = run({"integrate", "--method", "SSPRK(2,2)", "--problem", "sunshu", "--dt", "5", "--t-end", "20",
                        "--out", dir});
    CHECK(r.code == 2);
    CHECK(r.err.find("step 1") != std::string::npos);
}
