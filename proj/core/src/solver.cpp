#include "dradp/solver.hpp"

#include "dradp/errors.hpp"
#include "dradp/milp_formulation.hpp"
#include "dradp/optim/simplex.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>

namespace dradp {

namespace {

using namespace optim;

struct Polished {
    std::vector<Index> selected;
    DualLowerBound bound;
};

/// Repeats fixed-policy evaluation and greedy switching while the switch
/// strictly improves the bound. The final selection is greedy with respect
/// to the returned lambda1 and that lambda1 is optimal for it.
Polished polish(const DradpProblem& problem, std::vector<Index> selected, bool boxed, WorkBudget* budget) {
    DualLowerBound current = lower_bound_dual(problem, selection_weights(problem, selected), boxed, budget);
    for (int round = 0; round < 1000; ++round) {
        std::vector<Index> greedy = greedy_pairs(problem, current.lambda1);
        if (greedy == selected)
            break;
        DualLowerBound next = lower_bound_dual(problem, selection_weights(problem, greedy), boxed, budget);
        const bool better = next.value > current.value + 1e-9 * (1.0 + std::abs(current.value));
        selected = std::move(greedy);
        if (!better) {
            // the current multipliers cost no more under the greedy selection,
            // so they remain optimal for it
            break;
        }
        current = std::move(next);
    }
    return {std::move(selected), std::move(current)};
}

double selected_slack(const VectorXd& lambda2, const std::vector<Index>& selected) {
    double worst = 0.0;
    for (Index i : selected)
        worst = std::max(worst, lambda2(i));
    return worst;
}

std::vector<Index> selection_from_milp(const DradpProblem& problem, const MilpLayout& layout, const VectorXd& x) {
    const auto groups = problem.pairs_by_state();
    std::vector<Index> selected(groups.size(), -1);
    for (std::size_t s = 0; s < groups.size(); ++s) {
        double best = -1.0;
        for (Index i : groups[s])
            if (x(layout.pi + i) > best) {
                best = x(layout.pi + i);
                selected[s] = i;
            }
    }
    return selected;
}

VectorXd uniform_weights(const DradpProblem& problem) {
    VectorXd w(problem.n_pairs());
    for (const auto& group : problem.pairs_by_state())
        for (Index i : group)
            w(i) = 1.0 / static_cast<double>(group.size());
    return w;
}

} // namespace

DradpSolution solve(const DradpProblem& input, const DradpOptions& options) {
    input.validate();
    DradpProblem problem = input;
    WorkBudget budget = WorkBudget::from_time_limit_ms(options.time_limit_ms);
    std::optional<double> external_bound;
    if (options.use_optimal_return_bound && problem.tabular())
        external_bound = optimal_return(*problem.mdp);

    double last_norm = 0.0;
    for (int escalation = 0; escalation <= options.max_tau_escalations; ++escalation) {
        const MilpProgram milp = build_milp(problem);
        const MilpLayout layout = milp_layout(problem);

        MilpOptions mopt;
        mopt.budget = &budget;
        mopt.gap_tol = options.gap_tol;
        mopt.objective_bound = external_bound;
        mopt.record_log = options.record_log;

        // cheap incumbent before any relaxation: polish the greedy policy of
        // the uniformly randomized policy's bound
        try {
            const DualLowerBound start = lower_bound_dual(problem, uniform_weights(problem), true, &budget);
            const Polished seed = polish(problem, greedy_pairs(problem, start.lambda1), true, &budget);
            mopt.incumbent_seed = milp_point(problem, seed.selected, seed.bound.lambda1, seed.bound.lambda3);
        } catch (const TimeLimitError&) {
        }

        std::set<std::vector<Index>> tried;
        mopt.heuristic = [&](const VectorXd& x) -> std::optional<VectorXd> {
            std::vector<Index> greedy = greedy_pairs(problem, x.head(layout.k));
            if (!tried.insert(greedy).second)
                return std::nullopt;
            try {
                const Polished p = polish(problem, std::move(greedy), true, &budget);
                return milp_point(problem, p.selected, p.bound.lambda1, p.bound.lambda3);
            } catch (const TimeLimitError&) {
                return std::nullopt;
            }
        };

        const MilpSolution result = branch_and_bound(milp, mopt);
        if (!result.has_incumbent()) {
            if (result.status == MilpStatus::time_limit_no_incumbent)
                throw TimeLimitError("time limit reached before any feasible policy was found");
            throw NumericalError("the DRADP MILP reported infeasible");
        }

        const VectorXd& x = result.incumbent;
        VectorXd lambda3 = problem.smooth() ? VectorXd(x.segment(layout.lambda3, layout.n)) : VectorXd();
        const VectorXd milp_lambda2 = slack_multipliers(problem, x.head(layout.k), lambda3);
        const double lambda2_norm = milp_lambda2.size() ? milp_lambda2.maxCoeff() : 0.0;
        last_norm = lambda2_norm;
        if (lambda2_norm > problem.tau * (1.0 - 1e-6)) {
            problem.tau *= 2.0;
            continue;
        }

        // final multipliers: the exact fixed-policy bound, unboxed when the
        // model is known and boxed like the MILP otherwise
        WorkBudget unlimited;
        Polished final_pick = polish(problem, selection_from_milp(problem, layout, x), !problem.tabular(), &unlimited);
        DualLowerBound& bound = final_pick.bound;
        if (!problem.smooth()) {
            const double shift = selected_slack(bound.lambda2, final_pick.selected);
            if (shift > 0.0) {
                bound.lambda1(problem.basis.constant_column()) -= shift;
                bound.lambda2 = slack_multipliers(problem, bound.lambda1, bound.lambda3);
            }
        }

        DradpSolution sol;
        sol.selected_pairs = final_pick.selected;
        sol.policy = pairs_to_policy(problem, final_pick.selected);
        sol.lambda1 = bound.lambda1;
        sol.lambda2 = bound.lambda2;
        sol.lambda3 = bound.lambda3;
        sol.z = selection_weights(problem, final_pick.selected).cwiseProduct(bound.lambda2);
        const double penalty = problem.smooth() ? problem.state_mass_cap->dot(bound.lambda3) : 0.0;
        sol.objective = problem.alpha_features.dot(bound.lambda1) - sol.z.sum() - penalty;
        sol.milp_objective = result.objective;
        sol.best_bound = std::max(result.best_bound, sol.objective);
        sol.gap = relative_gap(sol.best_bound, sol.objective);
        sol.value = problem.basis.values(bound.lambda1);
        sol.tau_used = problem.tau;
        sol.node_count = result.nodes;
        sol.runtime_ms = budget.used_ms();
        sol.status = result.status;
        sol.incumbent_history = result.incumbent_history;
        sol.log = result.log;
        return sol;
    }
    throw TauEscalationError("tau could not be certified after " + std::to_string(options.max_tau_escalations) +
                                 " doublings; final ||lambda2||_inf = " + std::to_string(last_norm),
                             last_norm);
}

std::string solution_to_json(const DradpSolution& solution) {
    nlohmann::ordered_json j;
    j["objective"] = solution.objective;
    j["gap"] = solution.gap;
    j["lambda1"] = std::vector<double>(solution.lambda1.data(), solution.lambda1.data() + solution.lambda1.size());
    nlohmann::ordered_json policy = nlohmann::ordered_json::array();
    for (Index s = 0; s < solution.policy.size(); ++s)
        policy.push_back({{"state", s}, {"action", solution.policy[s]}});
    j["policy"] = policy;
    j["tau_used"] = solution.tau_used;
    j["node_count"] = solution.node_count;
    j["runtime_ms"] = solution.runtime_ms;
    return j.dump(2);
}

} // namespace dradp
