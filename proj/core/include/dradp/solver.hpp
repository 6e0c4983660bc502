#pragma once

#include "dradp/lower_bound.hpp"
#include "dradp/optim/milp.hpp"
#include "dradp/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dradp {

struct DradpOptions {
    double time_limit_ms = 60000.0;
    double gap_tol = 1e-6;
    /// Stop branching once the incumbent reaches the optimal return of the
    /// underlying MDP, which bounds every lower bound (tabular mode only).
    bool use_optimal_return_bound = true;
    int max_tau_escalations = 5;
    bool record_log = false;
};

struct DradpSolution {
    /// Action per represented state.
    DeterministicPolicy policy;
    /// Selected pair per represented state.
    std::vector<Index> selected_pairs;
    VectorXd lambda1;
    VectorXd lambda2;
    VectorXd lambda3;
    VectorXd z;
    /// Lower bound of the returned policy with the returned multipliers.
    double objective = 0.0;
    /// Objective of the branch-and-bound incumbent.
    double milp_objective = 0.0;
    double best_bound = 0.0;
    double gap = 0.0;
    /// Phi lambda1 on the represented states.
    VectorXd value;
    double tau_used = 0.0;
    long node_count = 0;
    /// Deterministic work spent, in reference milliseconds.
    double runtime_ms = 0.0;
    optim::MilpStatus status = optim::MilpStatus::infeasible;
    std::vector<double> incumbent_history;
    std::vector<optim::NodeLogEntry> log;
};

/**
 * Maximizes the robust lower bound over deterministic policies by branch and
 * bound on the MILP, seeded with the greedy policy of the LP relaxation.
 *
 * Every candidate policy is polished: its fixed-policy lower bound is
 * solved, the greedy policy of the resulting value function is tried, and the
 * switch is kept while it helps. The returned multipliers satisfy
 * pi' lambda2 = 0 after shifting Phi lambda1 along the constant feature.
 *
 * Throws TimeLimitError when no incumbent exists at the time limit and
 * TauEscalationError when the big-M bound cannot be certified.
 */
DradpSolution solve(const DradpProblem& problem, const DradpOptions& options = {});

/// `{objective, gap, lambda1, policy: [{state, action}], tau_used,
/// node_count, runtime_ms}`
std::string solution_to_json(const DradpSolution& solution);

} // namespace dradp
