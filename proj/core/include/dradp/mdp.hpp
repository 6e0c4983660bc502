#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace dradp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Value per state.
using ValueFunction = VectorXd;

/**
 * Finite discounted MDP with dense transition matrices.
 *
 * Transitions are stored per action as n x n row-stochastic matrices.
 * Rewards are stored as an n x |A| matrix, so column a is the reward vector
 * r_a of the policy that always takes a.
 *
 * State-action pairs are enumerated action-major: pair (s, a) has index
 * a * n_states + s. Every stacked vector over pairs in this library uses
 * that order.
 */
class TabularMdp {
public:
    /// Validates every invariant; throws std::invalid_argument on violation.
    TabularMdp(std::vector<MatrixXd> transitions, MatrixXd reward, double gamma, VectorXd alpha);

    Index n_states() const { return reward_.rows(); }
    Index n_actions() const { return reward_.cols(); }
    Index n_pairs() const { return n_states() * n_actions(); }
    Index pair_index(Index state, Index action) const { return action * n_states() + state; }

    const MatrixXd& transition(Index action) const { return transitions_[static_cast<std::size_t>(action)]; }
    double transition(Index action, Index state, Index next) const { return transition(action)(state, next); }
    const std::vector<MatrixXd>& transitions() const { return transitions_; }

    const MatrixXd& reward() const { return reward_; }
    double reward(Index state, Index action) const { return reward_(state, action); }

    double gamma() const { return gamma_; }
    const VectorXd& alpha() const { return alpha_; }

    TabularMdp with_gamma(double gamma) const;
    TabularMdp with_alpha(VectorXd alpha) const;

private:
    std::vector<MatrixXd> transitions_;
    MatrixXd reward_;
    double gamma_;
    VectorXd alpha_;
};

/// One action per state.
struct DeterministicPolicy {
    std::vector<Index> actions;

    DeterministicPolicy() = default;
    explicit DeterministicPolicy(std::vector<Index> a) : actions(std::move(a)) {}
    static DeterministicPolicy constant(Index n_states, Index action);

    Index size() const { return static_cast<Index>(actions.size()); }
    Index operator[](Index state) const { return actions[static_cast<std::size_t>(state)]; }
    bool operator==(const DeterministicPolicy&) const = default;
};

/// Action probabilities, one row per state.
class RandomizedPolicy {
public:
    /// Throws std::invalid_argument when a row is not a distribution.
    explicit RandomizedPolicy(MatrixXd probabilities);
    RandomizedPolicy(const DeterministicPolicy& policy, Index n_actions);

    static RandomizedPolicy uniform(Index n_states, Index n_actions);

    Index n_states() const { return probs_.rows(); }
    Index n_actions() const { return probs_.cols(); }
    double operator()(Index state, Index action) const { return probs_(state, action); }
    const MatrixXd& probabilities() const { return probs_; }

    /// Probabilities as a vector over state-action pairs (action-major).
    VectorXd stacked() const;

private:
    MatrixXd probs_;
};

/// Discounted state-action visitation frequencies, one row per state.
struct OccupancyMeasure {
    MatrixXd frequencies;

    VectorXd stacked() const;
    /// d(s) = sum_a u(s, a)
    VectorXd state_frequencies() const { return frequencies.rowwise().sum(); }
    static OccupancyMeasure from_stacked(const VectorXd& u, Index n_states, Index n_actions);
};

/// The stacked system of the MDP linear program: rows a*n..(a+1)*n-1 of
/// `A` hold I - gamma * P_a and the matching entries of `b` hold r_a.
struct LpMatrices {
    MatrixXd A;
    VectorXd b;
};

/// Transition matrix and reward vector induced by a fixed policy.
struct PolicyModel {
    MatrixXd P;
    VectorXd r;
};

struct OptimalSolution {
    ValueFunction value;
    DeterministicPolicy policy;
    double rho = 0.0;
    long iterations = 0;
    double residual = 0.0;
};

PolicyModel policy_transition(const TabularMdp& mdp, const RandomizedPolicy& policy);

/// One-step backups r(s,a) + gamma * P_a v, as an n x |A| matrix.
MatrixXd q_backup(const TabularMdp& mdp, const ValueFunction& v);

ValueFunction bellman_apply(const TabularMdp& mdp, const ValueFunction& v);
ValueFunction bellman_policy_apply(const TabularMdp& mdp, const RandomizedPolicy& policy, const ValueFunction& v);

/// Argmax of the one-step backup in every state; ties go to the lowest action.
DeterministicPolicy greedy_policy(const TabularMdp& mdp, const ValueFunction& v);

/// Exact v_pi = (I - gamma P_pi)^{-1} r_pi by a dense LU solve.
ValueFunction policy_value(const TabularMdp& mdp, const RandomizedPolicy& policy);

/// rho(pi) = alpha' v_pi.
double expected_return(const TabularMdp& mdp, const RandomizedPolicy& policy);

/// rho(pi) computed from the occupancy side, r' u_pi / (1 - gamma).
double expected_return_from_occupancy(const TabularMdp& mdp, const RandomizedPolicy& policy);

OccupancyMeasure occupancy(const TabularMdp& mdp, const RandomizedPolicy& policy);

LpMatrices build_lp_matrices(const TabularMdp& mdp);

/// Normalizes every state's row of u. A state with no mass gets action 0.
RandomizedPolicy policy_from_occupancy(const TabularMdp& mdp, const OccupancyMeasure& u);

/// Fixed-point iteration v <- Bv until ||Bv - v||_inf <= tol. Throws
/// ConvergenceError (carrying the last residual) when max_iters runs out.
OptimalSolution value_iteration(const TabularMdp& mdp, double tol = 1e-10, long max_iters = 100000);

/// rho* - rho(pi), with rho* taken from the exact value of the greedy
/// policy of value iteration.
double policy_loss(const TabularMdp& mdp, const RandomizedPolicy& policy);
double policy_loss(const TabularMdp& mdp, const RandomizedPolicy& policy, double rho_star);

/// Exact optimal return: value iteration followed by an exact evaluation of
/// its greedy policy.
double optimal_return(const TabularMdp& mdp);

} // namespace dradp
