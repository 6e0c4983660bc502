#pragma once

#include "dradp/optim/linear_program.hpp"
#include "dradp/problem.hpp"

#include <optional>

namespace dradp {

/// Policy probability of every represented pair, pi(s_i, a_i). The policy
/// has one row per represented state; actions that were never sampled are
/// ignored.
VectorXd pair_weights(const DradpProblem& problem, const RandomizedPolicy& policy);

struct PrimalLowerBound {
    double value = 0.0;
    /// Minimizing relaxed occupancy, one entry per pair.
    VectorXd u;
};

/**
 * min b'u / (1 - gamma) subject to (A Phi)'u = (1 - gamma) Phi' alpha,
 * 0 <= u <= pi, plus the per-state mass caps when present.
 *
 * Throws InfeasibleError when the relaxed occupancy set is empty, which can
 * only happen with sampled data.
 */
PrimalLowerBound lower_bound_primal(const DradpProblem& problem, const RandomizedPolicy& policy);

double evaluate_lower_bound(const DradpProblem& problem, const RandomizedPolicy& policy);

/// Multipliers of the fixed-policy dual problem.
struct DualLowerBound {
    double value = 0.0;
    VectorXd lambda1;
    /// [ (A Phi lambda1 - b)_i / (1 - gamma) - lambda3(s_i) ]_+ for every pair.
    VectorXd lambda2;
    /// Per-state multipliers of the mass caps (empty without caps).
    VectorXd lambda3;
};

/**
 * max alpha' Phi lambda1 - pi' lambda2 - (C sigma)' lambda3 subject to
 * (1 - gamma)(lambda2 + lambda3(s)) >= A Phi lambda1 - b, lambda2, lambda3 >= 0.
 *
 * With `boxed`, |(Phi lambda1)(s)| <= value_box is added for every state.
 * Throws InfeasibleError when the unboxed problem is unbounded (the primal
 * side is then empty).
 */
DualLowerBound lower_bound_dual(const DradpProblem& problem, const VectorXd& weights, bool boxed = false,
                                optim::WorkBudget* budget = nullptr);

double evaluate_lower_bound_saddle(const DradpProblem& problem, const RandomizedPolicy& policy);

/// Minimal slack multipliers for given lambda1 (and lambda3 if present).
VectorXd slack_multipliers(const DradpProblem& problem, const VectorXd& lambda1, const VectorXd& lambda3);

/// Greedy choice per state: the pair with the smallest (A Phi lambda1 - b)_i,
/// which maximizes the one-step backup of Phi lambda1. Ties go to the lowest
/// action. Returns one pair index per state.
std::vector<Index> greedy_pairs(const DradpProblem& problem, const VectorXd& lambda1);

/// Pair indices of a deterministic policy over the represented states.
std::vector<Index> policy_pairs(const DradpProblem& problem, const DeterministicPolicy& policy);
DeterministicPolicy pairs_to_policy(const DradpProblem& problem, const std::vector<Index>& selected);
VectorXd selection_weights(const DradpProblem& problem, const std::vector<Index>& selected);

/// Number of actions needed to index every represented pair.
Index represented_actions(const DradpProblem& problem);

} // namespace dradp
