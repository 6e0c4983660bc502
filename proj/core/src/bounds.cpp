#include "dradp/bounds.hpp"

#include "dradp/errors.hpp"
#include "dradp/optim/simplex.hpp"

#include <stdexcept>

namespace dradp {

Concentration concentration_coefficient(const TabularMdp& mdp) {
    VectorXd m = VectorXd::Zero(mdp.n_states());
    for (Index a = 0; a < mdp.n_actions(); ++a)
        m = m.cwiseMax(mdp.transition(a).colwise().maxCoeff().transpose());
    Concentration c;
    c.C = m.sum();
    c.mu = m / c.C;
    return c;
}

VectorXd sigma_vector(const TabularMdp& mdp, const VectorXd& mu) {
    if (mu.size() != mdp.n_states())
        throw std::invalid_argument("mu has the wrong number of states");
    return mdp.gamma() * mu + (1.0 - mdp.gamma()) * mdp.alpha();
}

ResidualNorms bellman_residual_norms(const TabularMdp& mdp, const ValueFunction& v, const VectorXd& sigma) {
    if (sigma.size() != mdp.n_states())
        throw std::invalid_argument("sigma has the wrong number of states");
    if (sigma.minCoeff() < 0.0)
        throw std::invalid_argument("sigma must be nonnegative");
    const VectorXd residual = (v - bellman_apply(mdp, v)).cwiseAbs();
    return {residual.maxCoeff(), sigma.dot(residual)};
}

double bound_simple(const TabularMdp& mdp, const ValueFunction& v) {
    const VectorXd residual = v - bellman_apply(mdp, v);
    return 2.0 / (1.0 - mdp.gamma()) * residual.cwiseAbs().maxCoeff();
}

double bound_direct(const TabularMdp& mdp, const FeatureBasis& basis) {
    const OptimalSolution opt = value_iteration(mdp);
    return bound_direct(mdp, basis, policy_value(mdp, RandomizedPolicy(opt.policy, mdp.n_actions())));
}

double bound_direct(const TabularMdp& mdp, const FeatureBasis& basis, const ValueFunction& v_star) {
    if (basis.n_states() != mdp.n_states() || v_star.size() != mdp.n_states())
        throw std::invalid_argument("basis or value function does not match the MDP");
    using namespace optim;
    const MatrixXd& phi = basis.matrix();
    // maximize alpha' Phi x subject to Phi x <= v*
    LinearProgram lp(0, Sense::maximize);
    const VectorXd weights = phi.transpose() * mdp.alpha();
    for (Index j = 0; j < phi.cols(); ++j)
        lp.add_variable(weights(j), -kInfinity, kInfinity);
    for (Index s = 0; s < phi.rows(); ++s)
        lp.add_dense_row(phi.row(s).transpose(), RowType::less_equal, v_star(s));
    const LpSolution sol = simplex_solve(lp);
    if (sol.status != LpStatus::optimal)
        throw NumericalError("direct bound LP did not reach optimality: " + to_string(sol.status));
    return std::max(0.0, mdp.alpha().dot(v_star) - sol.objective);
}

double bound_direct_certified(const TabularMdp& mdp, const FeatureBasis& basis) {
    if (basis.n_states() != mdp.n_states())
        throw std::invalid_argument("basis does not match the MDP");
    using namespace optim;
    const OptimalSolution opt = value_iteration(mdp);
    const RandomizedPolicy pi(opt.policy, mdp.n_actions());
    const PolicyModel model = policy_transition(mdp, pi);
    const ValueFunction v_star = policy_value(mdp, pi);
    const MatrixXd& phi = basis.matrix();
    const MatrixXd rows = phi - mdp.gamma() * model.P * phi;
    // maximize alpha' Phi x subject to (I - gamma P*) Phi x <= r*
    LinearProgram lp(0, Sense::maximize);
    const VectorXd weights = phi.transpose() * mdp.alpha();
    for (Index j = 0; j < phi.cols(); ++j)
        lp.add_variable(weights(j), -kInfinity, kInfinity);
    for (Index s = 0; s < phi.rows(); ++s)
        lp.add_dense_row(rows.row(s).transpose(), RowType::less_equal, model.r(s));
    const LpSolution sol = simplex_solve(lp);
    if (sol.status != LpStatus::optimal)
        throw NumericalError("certified direct bound LP did not reach optimality: " + to_string(sol.status));
    return std::max(0.0, mdp.alpha().dot(v_star) - sol.objective);
}

double bound_smooth(const TabularMdp& mdp, const ValueFunction& v) {
    const Concentration c = concentration_coefficient(mdp);
    const ResidualNorms norms = bellman_residual_norms(mdp, v, sigma_vector(mdp, c.mu));
    return 2.0 * c.C / (1.0 - mdp.gamma()) * norms.l1_sigma;
}

} // namespace dradp
