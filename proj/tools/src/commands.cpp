#include "dradp_cli/commands.hpp"

#include "dradp/baselines/alp.hpp"
#include "dradp/baselines/api.hpp"
#include "dradp/bounds.hpp"
#include "dradp/domains/chain.hpp"
#include "dradp/domains/pendulum.hpp"
#include "dradp/errors.hpp"
#include "dradp/lower_bound.hpp"
#include "dradp/mdp_json.hpp"
#include "dradp/solver.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace dradp::cli {

namespace {

using nlohmann::ordered_json;

std::vector<double> to_vector(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

ordered_json policy_json(const DeterministicPolicy& policy) {
    ordered_json out = ordered_json::array();
    for (Index s = 0; s < policy.size(); ++s)
        out.push_back({{"state", s}, {"action", policy[s]}});
    return out;
}

FeatureBasis make_basis(const FeatureSpec& spec, Index n_states) {
    if (spec.tabular)
        return tabular_basis(n_states);
    if (spec.degree > n_states)
        throw InputError("chebyshev degree exceeds the number of states");
    return chebyshev_basis(n_states, spec.degree);
}

/// Greedy value of a linear Q-function, max_a phi(s)' w_a per state.
ValueFunction q_value(const QWeights& q, const FeatureBasis& basis) {
    return (basis.matrix() * q.w).rowwise().maxCoeff();
}

double value_iteration_work_ms(const TabularMdp& mdp, const OptimalSolution& opt) {
    const double n = static_cast<double>(mdp.n_states());
    return static_cast<double>(opt.iterations) * static_cast<double>(mdp.n_actions()) * n * n /
           optim::WorkBudget::kUnitsPerMs;
}

std::string error_tag(const std::exception& e) {
    if (dynamic_cast<const TimeLimitError*>(&e))
        return "error:time_limit";
    if (dynamic_cast<const TauEscalationError*>(&e))
        return "error:tau_escalation";
    if (dynamic_cast<const InfeasibleError*>(&e))
        return "error:infeasible";
    if (dynamic_cast<const NumericalError*>(&e))
        return "error:numerical";
    return "error:solver";
}

std::string format_optional(const std::optional<double>& v) {
    return v ? fmt::format("{:.10g}", *v) : std::string();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw InputError("cannot write output file: " + path);
    return os;
}

struct Stats {
    long n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : std::nan(""); }
    double stderr_of_mean() const {
        if (n < 2)
            return 0.0;
        const double m = mean();
        const double var = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    }
};

template <typename Row, typename Value>
void write_summary(std::ostream& os, const std::vector<Row>& rows, Value value, const char* label) {
    std::vector<std::string> order;
    std::map<std::string, Stats> stats;
    std::map<std::string, long> failures;
    for (const Row& r : rows) {
        if (!stats.count(r.method) && !failures.count(r.method))
            order.push_back(r.method);
        const std::optional<double> v = value(r);
        if (v)
            stats[r.method].add(*v);
        else
            ++failures[r.method];
    }
    os << fmt::format("{:<14}{:>8}{:>16}{:>14}{:>10}\n", "method", "n", std::string("mean ") + label, "stderr",
                      "failed");
    for (const std::string& m : order) {
        const Stats& s = stats[m];
        os << fmt::format("{:<14}{:>8}{:>16.6f}{:>14.6f}{:>10}\n", m, s.n, s.mean(), s.stderr_of_mean(), failures[m]);
    }
}

void configure_logging() {
    auto logger = spdlog::get("dradp");
    if (!logger) {
        logger = spdlog::stderr_logger_st("dradp");
        logger->set_pattern("[%l] %v");
        spdlog::set_default_logger(logger);
    }
    const char* env = std::getenv("DRADP_LOG");
    const std::string level = env ? env : "info";
    if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else if (level == "quiet")
        spdlog::set_level(spdlog::level::off);
    else
        spdlog::set_level(spdlog::level::info);
}

} // namespace

FeatureSpec parse_features(const std::string& text) {
    if (text == "tabular")
        return {true, 0};
    const std::string prefix = "chebyshev:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            const long k = std::stol(text.substr(prefix.size()), &used);
            if (used == text.size() - prefix.size() && k >= 1)
                return {false, k};
        } catch (const std::exception&) {
        }
    }
    throw InputError("features must be 'tabular' or 'chebyshev:<k>' with k >= 1, got '" + text + "'");
}

std::vector<std::string> parse_methods(const std::string& text, const std::vector<std::string>& allowed) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (std::find(allowed.begin(), allowed.end(), item) == allowed.end())
            throw InputError("unknown method '" + item + "'");
        out.push_back(item);
    }
    if (out.empty())
        throw InputError("no methods given");
    return out;
}

std::string run_solve(const SolveArgs& args) {
    TabularMdp mdp = [&] {
        try {
            return load_mdp(args.mdp_path);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }();
    if (args.gamma_override) {
        try {
            mdp = mdp.with_gamma(*args.gamma_override);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    const FeatureBasis basis = make_basis(parse_features(args.features), mdp.n_states());
    const DradpProblem problem = make_tabular_problem(mdp, basis);
    spdlog::info("solving {} states x {} actions with method {}", mdp.n_states(), mdp.n_actions(), args.method);

    ordered_json out;
    out["method"] = args.method;
    if (args.method == "dradp" || args.method == "dradp-smooth") {
        DradpOptions opt;
        opt.time_limit_ms = args.time_limit_ms;
        DradpProblem p = problem;
        if (args.method == "dradp-smooth") {
            const Concentration c = concentration_coefficient(mdp);
            p = build_smooth_problem(problem, c.C, c.mu);
        }
        const DradpSolution sol = solve(p, opt);
        const ordered_json exported = ordered_json::parse(solution_to_json(sol));
        for (const auto& [key, value] : exported.items())
            out[key] = value;
        out["status"] = optim::to_string(sol.status);
        out["return"] = expected_return(mdp, RandomizedPolicy(sol.policy, mdp.n_actions()));
    } else if (args.method == "alp") {
        const AlpResult r = alp_solve(problem);
        out["policy"] = policy_json(r.policy);
        out["weights"] = to_vector(r.weights);
        out["return"] = expected_return(mdp, RandomizedPolicy(r.policy, mdp.n_actions()));
    } else if (args.method == "api") {
        const ApiResult r = api_solve(model_batch(mdp, basis), mdp.n_actions(), mdp.gamma(), {}, 0);
        const DeterministicPolicy policy = r.q.greedy(basis);
        out["policy"] = policy_json(policy);
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["return"] = expected_return(mdp, RandomizedPolicy(policy, mdp.n_actions()));
    } else if (args.method == "exact") {
        const OptimalSolution opt = value_iteration(mdp);
        out["policy"] = policy_json(opt.policy);
        out["value"] = to_vector(opt.value);
        out["return"] = opt.rho;
    } else {
        throw InputError("unknown method '" + args.method + "'");
    }
    const std::string text = out.dump(2) + "\n";
    if (!args.out.empty()) {
        std::ofstream os = open_output(args.out);
        os << text;
    }
    return text;
}

std::vector<ChainRow> run_chain_bench(const ChainBenchArgs& args) {
    if (args.instances < 1)
        throw InputError("--instances must be positive");
    std::vector<ChainRow> rows;
    for (long i = 0; i < args.instances; ++i) {
        const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
        const chain::Instance inst = chain::generate(seed);
        const TabularMdp& mdp = inst.mdp;
        const DradpProblem problem = make_tabular_problem(mdp, inst.basis);
        const OptimalSolution opt = value_iteration(mdp);
        for (const std::string& method : args.methods) {
            ChainRow row;
            row.seed = seed;
            row.method = method;
            try {
                if (method == "dradp") {
                    DradpOptions o;
                    o.time_limit_ms = args.time_limit_ms;
                    const DradpSolution sol = solve(problem, o);
                    const RandomizedPolicy pi(sol.policy, mdp.n_actions());
                    row.expected_return = expected_return(mdp, pi);
                    row.lower_bound = sol.objective;
                    row.bound_simple = bound_simple(mdp, sol.value);
                    row.bound_direct = bound_direct(mdp, inst.basis, opt.value);
                    row.gap = sol.gap;
                    row.runtime_ms = sol.runtime_ms;
                    if (*row.expected_return < sol.objective - 1e-6 || *row.expected_return > opt.rho + 1e-6)
                        row.status = "violation";
                } else if (method == "alp") {
                    const AlpResult r = alp_solve(problem);
                    const RandomizedPolicy pi(r.policy, mdp.n_actions());
                    row.expected_return = expected_return(mdp, pi);
                    row.lower_bound = evaluate_lower_bound(problem, pi);
                    row.bound_simple = bound_simple(mdp, r.value);
                    row.runtime_ms = r.work_ms;
                } else if (method == "api") {
                    const ApiResult r =
                        api_solve(model_batch(mdp, inst.basis), mdp.n_actions(), mdp.gamma(), {}, seed);
                    const RandomizedPolicy pi(r.q.greedy(inst.basis), mdp.n_actions());
                    row.expected_return = expected_return(mdp, pi);
                    row.lower_bound = evaluate_lower_bound(problem, pi);
                    row.bound_simple = bound_simple(mdp, q_value(r.q, inst.basis));
                    row.runtime_ms = r.work_ms;
                } else if (method == "exact") {
                    row.expected_return = opt.rho;
                    row.runtime_ms = value_iteration_work_ms(mdp, opt);
                } else {
                    throw InputError("unknown method '" + method + "'");
                }
            } catch (const InputError&) {
                throw;
            } catch (const std::exception& e) {
                spdlog::warn("seed {} method {}: {}", seed, method, e.what());
                row = ChainRow{seed, method, {}, {}, {}, {}, {}, 0.0, error_tag(e)};
            }
            spdlog::debug("seed {} method {} return {}", seed, method, format_optional(row.expected_return));
            rows.push_back(std::move(row));
        }
        spdlog::info("chain instance {}/{} done", i + 1, args.instances);
    }
    return rows;
}

void write_chain_csv(std::ostream& os, const std::vector<ChainRow>& rows) {
    os << "seed,method,return,lower_bound,bound_simple,bound_direct,gap,runtime_ms,status\n";
    for (const ChainRow& r : rows)
        os << fmt::format("{},{},{},{},{},{},{},{:.3f},{}\n", r.seed, r.method, format_optional(r.expected_return),
                          format_optional(r.lower_bound), format_optional(r.bound_simple),
                          format_optional(r.bound_direct), format_optional(r.gap), r.runtime_ms, r.status);
}

void write_chain_summary(std::ostream& os, const std::vector<ChainRow>& rows) {
    write_summary(os, rows, [](const ChainRow& r) { return r.expected_return; }, "return");
    long violations = 0;
    for (const ChainRow& r : rows)
        violations += r.status == "violation" ? 1 : 0;
    os << "dradp bound violations: " << violations << "\n";
}

std::vector<PendulumRow> run_pendulum_bench(const PendulumBenchArgs& args) {
    if (args.episodes < 1)
        throw InputError("--episodes must be positive: an empty batch cannot be solved");
    if (args.max_len < 1 || args.runs < 1 || args.eval_episodes < 1)
        throw InputError("--max-len, --runs and --eval-episodes must be positive");
    std::vector<PendulumRow> rows;
    for (long run = 0; run < args.runs; ++run) {
        const std::uint64_t sample_seed = args.seed + static_cast<std::uint64_t>(run);
        const std::uint64_t eval_seed = args.seed + 1000003 + static_cast<std::uint64_t>(run);
        pendulum::CollectOptions collect;
        collect.n_episodes = args.episodes;
        collect.max_len = args.max_len;
        collect.expand_actions = args.expand_actions;
        const SampleSet samples = pendulum::collect_samples(collect, sample_seed);
        spdlog::info("run {}: {} transitions", run, samples.transitions.size());
        for (const std::string& method : args.methods) {
            PendulumRow row;
            row.run = run;
            row.method = method;
            row.n_samples = static_cast<long>(samples.transitions.size());
            try {
                if (method == "dradp") {
                    const DradpProblem problem = build_sampled_problem(samples, pendulum::kDefaultGamma);
                    DradpOptions o;
                    o.time_limit_ms = args.time_limit_ms;
                    const DradpSolution sol = solve(problem, o);
                    const VectorXd w = sol.lambda1;
                    row.mean_balance_steps = pendulum::mean_balancing_steps(
                        [&](const pendulum::State& s) { return pendulum::greedy_action(s, w, pendulum::kDefaultGamma); },
                        args.eval_episodes, eval_seed);
                    row.runtime_ms = sol.runtime_ms;
                } else if (method == "api") {
                    const ApiResult r = api_solve(samples, pendulum::kDefaultGamma, {}, sample_seed);
                    row.mean_balance_steps = pendulum::mean_balancing_steps(
                        [&](const pendulum::State& s) { return r.q.act(pendulum::features(s)); }, args.eval_episodes,
                        eval_seed);
                    row.runtime_ms = r.work_ms;
                } else if (method == "random") {
                    Rng rng(sample_seed);
                    row.mean_balance_steps = pendulum::mean_balancing_steps(
                        [&](const pendulum::State&) { return static_cast<Index>(rng.index(pendulum::kActions)); },
                        args.eval_episodes, eval_seed);
                } else {
                    throw InputError("unknown method '" + method + "'");
                }
            } catch (const InputError&) {
                throw;
            } catch (const std::exception& e) {
                spdlog::warn("run {} method {}: {}", run, method, e.what());
                row.mean_balance_steps.reset();
                row.status = error_tag(e);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_pendulum_csv(std::ostream& os, const std::vector<PendulumRow>& rows) {
    os << "run,method,n_samples,mean_balance_steps,runtime_ms,status\n";
    for (const PendulumRow& r : rows)
        os << fmt::format("{},{},{},{},{:.3f},{}\n", r.run, r.method, r.n_samples,
                          format_optional(r.mean_balance_steps), r.runtime_ms, r.status);
}

void write_pendulum_summary(std::ostream& os, const std::vector<PendulumRow>& rows) {
    write_summary(os, rows, [](const PendulumRow& r) { return r.mean_balance_steps; }, "steps");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_logging();
    CLI::App app{"Distributionally robust approximate dynamic programming"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    double gamma_override = 0.0;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one MDP and write the solution JSON");
    solve_cmd->add_option("--mdp", solve_args.mdp_path, "MDP JSON file")->required();
    solve_cmd->add_option("--features", solve_args.features, "tabular | chebyshev:<k>");
    solve_cmd->add_option("--method", solve_args.method, "dradp | dradp-smooth | alp | api | exact");
    auto* gamma_opt = solve_cmd->add_option("--gamma-override", gamma_override, "Replace the discount factor");
    solve_cmd->add_option("--time-limit-ms", solve_args.time_limit_ms, "Work limit per solve");
    solve_cmd->add_option("--out", solve_args.out, "Output JSON path (default: standard output)");

    ChainBenchArgs chain_args;
    std::string chain_methods = "dradp,alp,api,exact";
    auto* chain_cmd = app.add_subcommand("chain-bench", "Random chain study");
    chain_cmd->add_option("--instances", chain_args.instances, "Number of seeded instances");
    chain_cmd->add_option("--seed", chain_args.seed, "First instance seed");
    chain_cmd->add_option("--methods", chain_methods, "Comma list of dradp, alp, api, exact");
    chain_cmd->add_option("--time-limit-ms", chain_args.time_limit_ms, "Work limit per solve");
    chain_cmd->add_option("--out", chain_args.out, "Output CSV path")->required();

    PendulumBenchArgs pend_args;
    std::string pend_methods = "dradp,api";
    bool no_expand = false;
    auto* pend_cmd = app.add_subcommand("pendulum-bench", "Inverted pendulum study");
    pend_cmd->add_option("--episodes", pend_args.episodes, "Training episodes per run");
    pend_cmd->add_option("--max-len", pend_args.max_len, "Maximum training episode length");
    pend_cmd->add_option("--runs", pend_args.runs, "Independent runs");
    pend_cmd->add_option("--methods", pend_methods, "Comma list of dradp, api, random");
    pend_cmd->add_option("--time-limit-ms", pend_args.time_limit_ms, "Work limit per solve");
    pend_cmd->add_option("--seed", pend_args.seed, "Base seed");
    pend_cmd->add_option("--eval-episodes", pend_args.eval_episodes, "Evaluation episodes per policy");
    pend_cmd->add_flag("--no-expand-actions", no_expand, "Record only the behavior action at each visited state");
    pend_cmd->add_option("--out", pend_args.out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (solve_cmd->parsed()) {
            if (gamma_opt->count() > 0)
                solve_args.gamma_override = gamma_override;
            const std::string text = run_solve(solve_args);
            if (solve_args.out.empty())
                out << text;
        } else if (chain_cmd->parsed()) {
            chain_args.methods = parse_methods(chain_methods, {"dradp", "alp", "api", "exact"});
            std::ofstream os = open_output(chain_args.out);
            const std::vector<ChainRow> rows = run_chain_bench(chain_args);
            write_chain_csv(os, rows);
            write_chain_summary(out, rows);
        } else if (pend_cmd->parsed()) {
            pend_args.methods = parse_methods(pend_methods, {"dradp", "api", "random"});
            pend_args.expand_actions = !no_expand;
            std::ofstream os = open_output(pend_args.out);
            const std::vector<PendulumRow> rows = run_pendulum_bench(pend_args);
            write_pendulum_csv(os, rows);
            write_pendulum_summary(out, rows);
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

} // namespace dradp::cli
