#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpgeom::cli {

enum ExitCode : int { ok = 0, input_error = 2, domain_error = 3, numerical_failure = 4 };

/// Fully resolved parameters of one invocation. Reports embed this so that a
/// run can be repeated from its own output.
struct RunConfig {
    std::string command;
    std::string body;
    std::string workload;
    std::string db;
    double eps = 1.0;
    double delta = 1e-6;
    double alpha = 0.1;
    double bound = 1.0;
    long n = 100;
    std::string n_grid;
    long trials = 1;
    long samples = 100000;
    std::optional<std::uint64_t> seed;
    double tol = 1e-10;
    std::string mech = "gaussian";
    std::string inner = "gaussian";
    std::string adversary = "single-vertex";
    int gelfand_k = 0;
    int subspaces = 16;
    std::string out;
    std::string format = "json";
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Parses "a:b:step" into {a, a + step, ..., <= b}.
std::vector<long> parse_grid(const std::string& spec);

/// Executes a resolved configuration and returns the report text.
std::string execute(const RunConfig& config);

/// Command-line entry point. Diagnostics go to `err`; the report goes to
/// --out or, without it, to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpgeom::cli
