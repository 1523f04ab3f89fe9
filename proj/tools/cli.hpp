#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rrk::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything needed to reproduce one run. Serialized as manifest.json next
/// to the outputs and accepted back by --manifest.
struct RunConfig {
    std::string subcommand;
    std::string method = "RK(4,4)";
    std::string tableau_file;
    std::string mode = "rrk";
    std::string problem = "oscillator";
    std::optional<double> dt;
    std::optional<double> mu;  // advection only
    double t_end = 1.0;
    std::size_t m = 128;
    std::size_t n = 50;
    double eps = 0.01;
    std::uint64_t seed = 42;
    std::string ic = "noise";  // advection: noise | sech2
    int levels = 5;
    double ref_dt = 2e-5;      // Burgers reference solution step
    std::vector<double> gammas{1.0};
    std::vector<double> re_range{-5.0, 1.0};
    std::vector<double> im_range{-5.0, 5.0};
    std::size_t resolution = 201;
    bool dump_state = false;
    std::string out;
    std::vector<std::string> outputs;  // file names written, filled by the run
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& j);

/// Runs the command line `args` (without the program name). Returns the
/// process exit status: 0 ok, 1 usage or configuration error, 2 numerical
/// abort.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Executes an already-parsed configuration; same exit codes as run().
int execute(RunConfig cfg, std::ostream& out, std::ostream& err);

}  // namespace rrk::cli
