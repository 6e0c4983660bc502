#include "dradp/lower_bound.hpp"

#include "dradp/errors.hpp"
#include "dradp/optim/simplex.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dradp {

using namespace optim;

Index represented_actions(const DradpProblem& problem) {
    Index na = 0;
    for (const StatePair& p : problem.pairs)
        na = std::max(na, p.action + 1);
    return na;
}

VectorXd pair_weights(const DradpProblem& problem, const RandomizedPolicy& policy) {
    if (policy.n_states() != problem.n_states())
        throw std::invalid_argument("policy has " + std::to_string(policy.n_states()) + " states, problem has " +
                                    std::to_string(problem.n_states()));
    VectorXd w(problem.n_pairs());
    for (Index i = 0; i < problem.n_pairs(); ++i) {
        const StatePair& p = problem.pairs[static_cast<std::size_t>(i)];
        w(i) = p.action < policy.n_actions() ? policy(p.state, p.action) : 0.0;
    }
    return w;
}

PrimalLowerBound lower_bound_primal(const DradpProblem& problem, const RandomizedPolicy& policy) {
    const VectorXd w = pair_weights(problem, policy);
    const Index m = problem.n_pairs();
    const Index k = problem.n_features();
    const double g = problem.gamma;

    LinearProgram lp(0, Sense::minimize);
    for (Index i = 0; i < m; ++i)
        lp.add_variable(problem.pair_rewards(i) / (1.0 - g), 0.0, w(i));
    for (Index j = 0; j < k; ++j) {
        std::vector<std::pair<Index, double>> terms;
        for (Index i = 0; i < m; ++i)
            if (problem.pair_features(i, j) != 0.0)
                terms.emplace_back(i, problem.pair_features(i, j));
        lp.add_row(std::move(terms), RowType::equal, (1.0 - g) * problem.alpha_features(j));
    }
    if (problem.smooth()) {
        const auto groups = problem.pairs_by_state();
        for (Index s = 0; s < problem.n_states(); ++s) {
            std::vector<std::pair<Index, double>> terms;
            for (Index i : groups[static_cast<std::size_t>(s)])
                terms.emplace_back(i, 1.0);
            lp.add_row(std::move(terms), RowType::less_equal, (*problem.state_mass_cap)(s));
        }
    }
    const LpSolution sol = simplex_solve(lp);
    if (sol.status == LpStatus::infeasible) {
        if (problem.tabular())
            throw NumericalError("inner occupancy LP reported infeasible on a tabular problem");
        throw InfeasibleError("no relaxed occupancy measure is consistent with the samples for this policy; "
                              "collect more samples");
    }
    if (sol.status != LpStatus::optimal)
        throw NumericalError("inner occupancy LP failed: " + to_string(sol.status));
    return {sol.objective, sol.x};
}

double evaluate_lower_bound(const DradpProblem& problem, const RandomizedPolicy& policy) {
    return lower_bound_primal(problem, policy).value;
}

VectorXd slack_multipliers(const DradpProblem& problem, const VectorXd& lambda1, const VectorXd& lambda3) {
    VectorXd residual = (problem.pair_features * lambda1 - problem.pair_rewards) / (1.0 - problem.gamma);
    if (lambda3.size() > 0)
        for (Index i = 0; i < problem.n_pairs(); ++i)
            residual(i) -= lambda3(problem.pairs[static_cast<std::size_t>(i)].state);
    return residual.cwiseMax(0.0);
}

DualLowerBound lower_bound_dual(const DradpProblem& problem, const VectorXd& weights, bool boxed,
                                WorkBudget* budget) {
    if (weights.size() != problem.n_pairs())
        throw std::invalid_argument("pair weights have the wrong length");
    const Index k = problem.n_features();
    const Index m = problem.n_pairs();
    const double g = problem.gamma;
    const MatrixXd& phi = problem.basis.matrix();

    // Solved through its LP dual, which has only k equality rows (plus the
    // mass caps): min b'u/(1-g) + V/(1-g) 1'(p+q) subject to
    // (A Phi)'u + Phi'(p - q) = (1-g) Phi' alpha, 0 <= u <= weights.
    // The box columns p, q are present only when boxed.
    LinearProgram lp(0, Sense::minimize);
    std::vector<std::vector<std::pair<Index, double>>> rows(static_cast<std::size_t>(k));
    auto add_column = [&](double cost, double hi, auto features) {
        const Index col = lp.add_variable(cost, 0.0, hi);
        for (Index j = 0; j < k; ++j)
            if (features(j) != 0.0)
                rows[static_cast<std::size_t>(j)].emplace_back(col, features(j));
        return col;
    };
    for (Index i = 0; i < m; ++i)
        add_column(problem.pair_rewards(i) / (1.0 - g), std::max(0.0, weights(i)), problem.pair_features.row(i));
    if (boxed)
        for (Index s = 0; s < problem.n_states(); ++s) {
            add_column(problem.value_box / (1.0 - g), kInfinity, phi.row(s));
            add_column(problem.value_box / (1.0 - g), kInfinity, -phi.row(s));
        }
    for (Index j = 0; j < k; ++j)
        lp.add_row(std::move(rows[static_cast<std::size_t>(j)]), RowType::equal, (1.0 - g) * problem.alpha_features(j));
    if (problem.smooth()) {
        const auto groups = problem.pairs_by_state();
        for (Index s = 0; s < problem.n_states(); ++s) {
            std::vector<std::pair<Index, double>> terms;
            for (Index i : groups[static_cast<std::size_t>(s)])
                terms.emplace_back(i, 1.0);
            lp.add_row(std::move(terms), RowType::less_equal, (*problem.state_mass_cap)(s));
        }
    }
    SimplexOptions opt;
    opt.budget = budget;
    const LpSolution sol = simplex_solve(lp, opt);
    if (sol.status == LpStatus::work_limit)
        throw TimeLimitError("work limit reached while evaluating a fixed policy");
    if (sol.status == LpStatus::infeasible)
        throw InfeasibleError("the lower bound is unbounded for this policy: no relaxed occupancy measure is "
                              "consistent with the samples; collect more samples");
    if (sol.status != LpStatus::optimal)
        throw NumericalError("fixed-policy LP failed: " + to_string(sol.status));

    DualLowerBound out;
    out.lambda1 = (1.0 - g) * sol.duals.head(k);
    if (problem.smooth())
        out.lambda3 = (-sol.duals.tail(problem.n_states())).cwiseMax(0.0);
    out.lambda2 = slack_multipliers(problem, out.lambda1, out.lambda3);
    out.value = sol.objective;
    return out;
}

double evaluate_lower_bound_saddle(const DradpProblem& problem, const RandomizedPolicy& policy) {
    // objective of the max-min form at the recovered multipliers, not the LP value
    const VectorXd w = pair_weights(problem, policy);
    const DualLowerBound d = lower_bound_dual(problem, w);
    double value = problem.alpha_features.dot(d.lambda1) - w.dot(d.lambda2);
    if (problem.smooth())
        value -= problem.state_mass_cap->dot(d.lambda3);
    return value;
}

std::vector<Index> greedy_pairs(const DradpProblem& problem, const VectorXd& lambda1) {
    const VectorXd residual = problem.pair_features * lambda1 - problem.pair_rewards;
    const double scale = 1e-12 * (1.0 + residual.cwiseAbs().maxCoeff());
    std::vector<Index> best(static_cast<std::size_t>(problem.n_states()), -1);
    for (Index i = 0; i < problem.n_pairs(); ++i) {
        const auto s = static_cast<std::size_t>(problem.pairs[static_cast<std::size_t>(i)].state);
        const Index current = best[s];
        if (current < 0) {
            best[s] = i;
            continue;
        }
        const double d = residual(i) - residual(current);
        const bool lower_action =
            problem.pairs[static_cast<std::size_t>(i)].action < problem.pairs[static_cast<std::size_t>(current)].action;
        if (d < -scale || (d <= scale && lower_action))
            best[s] = i;
    }
    return best;
}

std::vector<Index> policy_pairs(const DradpProblem& problem, const DeterministicPolicy& policy) {
    if (policy.size() != problem.n_states())
        throw std::invalid_argument("policy does not cover the represented states");
    std::vector<Index> selected(static_cast<std::size_t>(problem.n_states()), -1);
    for (Index i = 0; i < problem.n_pairs(); ++i) {
        const StatePair& p = problem.pairs[static_cast<std::size_t>(i)];
        if (policy[p.state] == p.action)
            selected[static_cast<std::size_t>(p.state)] = i;
    }
    for (Index s = 0; s < problem.n_states(); ++s)
        if (selected[static_cast<std::size_t>(s)] < 0)
            throw std::invalid_argument("policy picks an action that was not sampled in state " + std::to_string(s));
    return selected;
}

DeterministicPolicy pairs_to_policy(const DradpProblem& problem, const std::vector<Index>& selected) {
    std::vector<Index> actions(selected.size());
    for (std::size_t s = 0; s < selected.size(); ++s)
        actions[s] = problem.pairs[static_cast<std::size_t>(selected[s])].action;
    return DeterministicPolicy(std::move(actions));
}

VectorXd selection_weights(const DradpProblem& problem, const std::vector<Index>& selected) {
    VectorXd w = VectorXd::Zero(problem.n_pairs());
    for (Index i : selected)
        w(i) = 1.0;
    return w;
}

} // namespace dradp
