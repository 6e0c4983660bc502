#include "dradp/mdp.hpp"

#include "dradp/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dradp {

namespace {

constexpr double kDistributionTol = 1e-9;

void check_distribution(const VectorXd& p, const std::string& what) {
    for (Index i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p(i)) || p(i) < 0.0)
            throw std::invalid_argument(what + " has a negative or non-finite entry at " + std::to_string(i));
    }
    if (std::abs(p.sum() - 1.0) > kDistributionTol) {
        std::ostringstream os;
        os.precision(17);
        os << what << " sums to " << p.sum() << ", expected 1";
        throw std::invalid_argument(os.str());
    }
}

void check_policy_shape(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions())
        throw std::invalid_argument("policy shape does not match the MDP");
}

void check_value_shape(const TabularMdp& mdp, const ValueFunction& v) {
    if (v.size() != mdp.n_states())
        throw std::invalid_argument("value function has " + std::to_string(v.size()) + " entries, expected " +
                                    std::to_string(mdp.n_states()));
}

VectorXd solve_discounted_system(const MatrixXd& system, const VectorXd& rhs) {
    Eigen::PartialPivLU<MatrixXd> lu(system);
    VectorXd x = lu.solve(rhs);
    // one round of iterative refinement keeps the residual at the 1e-12 level
    x += lu.solve(rhs - system * x);
    const double residual = (system * x - rhs).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) || residual > 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
        throw NumericalError("linear solve of I - gamma P failed; residual " + std::to_string(residual));
    return x;
}

} // namespace

TabularMdp::TabularMdp(std::vector<MatrixXd> transitions, MatrixXd reward, double gamma, VectorXd alpha)
    : transitions_(std::move(transitions)), reward_(std::move(reward)), gamma_(gamma), alpha_(std::move(alpha)) {
    const Index n = reward_.rows();
    const Index na = reward_.cols();
    if (n <= 0 || na <= 0)
        throw std::invalid_argument("MDP needs at least one state and one action");
    if (static_cast<Index>(transitions_.size()) != na)
        throw std::invalid_argument("transition has " + std::to_string(transitions_.size()) +
                                    " action blocks but reward has " + std::to_string(na) + " actions");
    if (!(gamma_ >= 0.0 && gamma_ < 1.0))
        throw std::invalid_argument("discount must lie in [0, 1)");
    if (alpha_.size() != n)
        throw std::invalid_argument("alpha has the wrong length");
    if (!reward_.allFinite())
        throw std::invalid_argument("reward has non-finite entries");
    for (Index a = 0; a < na; ++a) {
        const MatrixXd& P = transitions_[static_cast<std::size_t>(a)];
        if (P.rows() != n || P.cols() != n)
            throw std::invalid_argument("transition block " + std::to_string(a) + " is not n x n");
        for (Index s = 0; s < n; ++s)
            check_distribution(P.row(s).transpose(),
                               "transition row (action " + std::to_string(a) + ", state " + std::to_string(s) + ")");
    }
    check_distribution(alpha_, "alpha");
}

TabularMdp TabularMdp::with_gamma(double gamma) const { return TabularMdp(transitions_, reward_, gamma, alpha_); }

TabularMdp TabularMdp::with_alpha(VectorXd alpha) const {
    return TabularMdp(transitions_, reward_, gamma_, std::move(alpha));
}

DeterministicPolicy DeterministicPolicy::constant(Index n_states, Index action) {
    return DeterministicPolicy(std::vector<Index>(static_cast<std::size_t>(n_states), action));
}

RandomizedPolicy::RandomizedPolicy(MatrixXd probabilities) : probs_(std::move(probabilities)) {
    if (probs_.rows() <= 0 || probs_.cols() <= 0)
        throw std::invalid_argument("policy must be non-empty");
    for (Index s = 0; s < probs_.rows(); ++s)
        check_distribution(probs_.row(s).transpose(), "policy row " + std::to_string(s));
}

RandomizedPolicy::RandomizedPolicy(const DeterministicPolicy& policy, Index n_actions)
    : probs_(MatrixXd::Zero(policy.size(), n_actions)) {
    if (policy.size() == 0)
        throw std::invalid_argument("policy must be non-empty");
    for (Index s = 0; s < policy.size(); ++s) {
        if (policy[s] < 0 || policy[s] >= n_actions)
            throw std::invalid_argument("action index out of range in state " + std::to_string(s));
        probs_(s, policy[s]) = 1.0;
    }
}

RandomizedPolicy RandomizedPolicy::uniform(Index n_states, Index n_actions) {
    return RandomizedPolicy(MatrixXd::Constant(n_states, n_actions, 1.0 / static_cast<double>(n_actions)));
}

VectorXd RandomizedPolicy::stacked() const { return probs_.reshaped(); }

VectorXd OccupancyMeasure::stacked() const { return frequencies.reshaped(); }

OccupancyMeasure OccupancyMeasure::from_stacked(const VectorXd& u, Index n_states, Index n_actions) {
    if (u.size() != n_states * n_actions)
        throw std::invalid_argument("stacked occupancy has the wrong length");
    return OccupancyMeasure{u.reshaped(n_states, n_actions)};
}

PolicyModel policy_transition(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    check_policy_shape(mdp, policy);
    const Index n = mdp.n_states();
    PolicyModel model{MatrixXd::Zero(n, n), VectorXd::Zero(n)};
    for (Index a = 0; a < mdp.n_actions(); ++a) {
        const VectorXd w = policy.probabilities().col(a);
        model.P.noalias() += w.asDiagonal() * mdp.transition(a);
        model.r += w.cwiseProduct(mdp.reward().col(a));
    }
    return model;
}

MatrixXd q_backup(const TabularMdp& mdp, const ValueFunction& v) {
    check_value_shape(mdp, v);
    MatrixXd q(mdp.n_states(), mdp.n_actions());
    for (Index a = 0; a < mdp.n_actions(); ++a)
        q.col(a) = mdp.reward().col(a) + mdp.gamma() * (mdp.transition(a) * v);
    return q;
}

ValueFunction bellman_apply(const TabularMdp& mdp, const ValueFunction& v) {
    return q_backup(mdp, v).rowwise().maxCoeff();
}

ValueFunction bellman_policy_apply(const TabularMdp& mdp, const RandomizedPolicy& policy, const ValueFunction& v) {
    check_value_shape(mdp, v);
    const PolicyModel model = policy_transition(mdp, policy);
    return mdp.gamma() * (model.P * v) + model.r;
}

DeterministicPolicy greedy_policy(const TabularMdp& mdp, const ValueFunction& v) {
    const MatrixXd q = q_backup(mdp, v);
    std::vector<Index> actions(static_cast<std::size_t>(mdp.n_states()));
    for (Index s = 0; s < mdp.n_states(); ++s) {
        Index best = 0;
        for (Index a = 1; a < mdp.n_actions(); ++a)
            if (q(s, a) > q(s, best))
                best = a;
        actions[static_cast<std::size_t>(s)] = best;
    }
    return DeterministicPolicy(std::move(actions));
}

ValueFunction policy_value(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    const PolicyModel model = policy_transition(mdp, policy);
    const Index n = mdp.n_states();
    const MatrixXd system = MatrixXd::Identity(n, n) - mdp.gamma() * model.P;
    return solve_discounted_system(system, model.r);
}

double expected_return(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    return mdp.alpha().dot(policy_value(mdp, policy));
}

double expected_return_from_occupancy(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    const OccupancyMeasure u = occupancy(mdp, policy);
    return u.frequencies.cwiseProduct(mdp.reward()).sum() / (1.0 - mdp.gamma());
}

OccupancyMeasure occupancy(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    const PolicyModel model = policy_transition(mdp, policy);
    const Index n = mdp.n_states();
    const MatrixXd system = MatrixXd::Identity(n, n) - mdp.gamma() * model.P.transpose();
    VectorXd d = solve_discounted_system(system, (1.0 - mdp.gamma()) * mdp.alpha());
    // clip round-off negatives; true frequencies are nonnegative
    d = d.cwiseMax(0.0);
    return OccupancyMeasure{d.asDiagonal() * policy.probabilities()};
}

LpMatrices build_lp_matrices(const TabularMdp& mdp) {
    const Index n = mdp.n_states();
    const Index na = mdp.n_actions();
    LpMatrices lp{MatrixXd(n * na, n), VectorXd(n * na)};
    for (Index a = 0; a < na; ++a) {
        lp.A.middleRows(a * n, n) = MatrixXd::Identity(n, n) - mdp.gamma() * mdp.transition(a);
        lp.b.segment(a * n, n) = mdp.reward().col(a);
    }
    return lp;
}

RandomizedPolicy policy_from_occupancy(const TabularMdp& mdp, const OccupancyMeasure& u) {
    if (u.frequencies.rows() != mdp.n_states() || u.frequencies.cols() != mdp.n_actions())
        throw std::invalid_argument("occupancy shape does not match the MDP");
    if ((u.frequencies.array() < 0.0).any())
        throw std::invalid_argument("occupancy has negative entries");
    MatrixXd probs = MatrixXd::Zero(mdp.n_states(), mdp.n_actions());
    for (Index s = 0; s < mdp.n_states(); ++s) {
        const double mass = u.frequencies.row(s).sum();
        if (mass > 0.0)
            probs.row(s) = u.frequencies.row(s) / mass;
        else
            probs(s, 0) = 1.0;
    }
    return RandomizedPolicy(std::move(probs));
}

OptimalSolution value_iteration(const TabularMdp& mdp, double tol, long max_iters) {
    if (!(tol > 0.0))
        throw std::invalid_argument("value iteration tolerance must be positive");
    OptimalSolution out;
    ValueFunction v = ValueFunction::Zero(mdp.n_states());
    double residual = 0.0;
    for (long it = 0; it <= max_iters; ++it) {
        ValueFunction bv = bellman_apply(mdp, v);
        residual = (bv - v).lpNorm<Eigen::Infinity>();
        if (residual <= tol) {
            out.value = std::move(v);
            out.iterations = it;
            out.residual = residual;
            out.policy = greedy_policy(mdp, out.value);
            out.rho = mdp.alpha().dot(out.value);
            return out;
        }
        v = std::move(bv);
    }
    throw ConvergenceError("value iteration did not reach tolerance within " + std::to_string(max_iters) +
                               " iterations",
                           residual);
}

double optimal_return(const TabularMdp& mdp) {
    const OptimalSolution opt = value_iteration(mdp);
    return expected_return(mdp, RandomizedPolicy(opt.policy, mdp.n_actions()));
}

double policy_loss(const TabularMdp& mdp, const RandomizedPolicy& policy, double rho_star) {
    return rho_star - expected_return(mdp, policy);
}

double policy_loss(const TabularMdp& mdp, const RandomizedPolicy& policy) {
    return policy_loss(mdp, policy, optimal_return(mdp));
}

} // namespace dradp
