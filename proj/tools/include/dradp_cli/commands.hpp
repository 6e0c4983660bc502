#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dradp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

/// Bad flags, unreadable or malformed input files, empty batches.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SolveArgs {
    std::string mdp_path;
    std::string features = "tabular";
    std::string method = "dradp";
    std::optional<double> gamma_override;
    double time_limit_ms = 60000.0;
    std::string out;
};

struct ChainBenchArgs {
    long instances = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> methods{"dradp", "alp", "api", "exact"};
    double time_limit_ms = 60000.0;
    std::string out;
};

struct PendulumBenchArgs {
    long episodes = 100;
    long max_len = 3000;
    long runs = 5;
    std::vector<std::string> methods{"dradp", "api"};
    double time_limit_ms = 60000.0;
    std::uint64_t seed = 0;
    long eval_episodes = 20;
    bool expand_actions = true;
    std::string out;
};

/// One CSV row of the chain study. Optional fields are empty when the
/// method failed or the quantity does not apply.
struct ChainRow {
    std::uint64_t seed = 0;
    std::string method;
    std::optional<double> expected_return;
    std::optional<double> lower_bound;
    std::optional<double> bound_simple;
    std::optional<double> bound_direct;
    std::optional<double> gap;
    double runtime_ms = 0.0;
    /// "ok", "violation" (a DRADP return outside [lower bound, optimum]) or
    /// "error:<reason>".
    std::string status = "ok";
};

struct PendulumRow {
    long run = 0;
    std::string method;
    long n_samples = 0;
    std::optional<double> mean_balance_steps;
    double runtime_ms = 0.0;
    std::string status = "ok";
};

/// Parses "tabular" or "chebyshev:<k>"; throws InputError otherwise.
struct FeatureSpec {
    bool tabular = true;
    long degree = 0;
};
FeatureSpec parse_features(const std::string& text);

/// Splits a comma-separated list and validates every entry against `allowed`.
std::vector<std::string> parse_methods(const std::string& text, const std::vector<std::string>& allowed);

/// Writes the solution JSON to args.out. Throws InputError or a solver error.
std::string run_solve(const SolveArgs& args);

std::vector<ChainRow> run_chain_bench(const ChainBenchArgs& args);
void write_chain_csv(std::ostream& os, const std::vector<ChainRow>& rows);
/// Mean and standard error of the return per method.
void write_chain_summary(std::ostream& os, const std::vector<ChainRow>& rows);

std::vector<PendulumRow> run_pendulum_bench(const PendulumBenchArgs& args);
void write_pendulum_csv(std::ostream& os, const std::vector<PendulumRow>& rows);
void write_pendulum_summary(std::ostream& os, const std::vector<PendulumRow>& rows);

/// Entry point shared by the executable and the tests; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dradp::cli
