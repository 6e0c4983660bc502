#include "dradp/baselines/alp.hpp"

#include "dradp/errors.hpp"
#include "dradp/lower_bound.hpp"
#include "dradp/optim/simplex.hpp"

#include <stdexcept>

namespace dradp {

AlpResult alp_solve(const DradpProblem& problem, const std::optional<VectorXd>& state_weights) {
    problem.validate();
    using namespace optim;
    const MatrixXd& phi = problem.basis.matrix();
    VectorXd objective = problem.alpha_features;
    if (state_weights) {
        if (state_weights->size() != problem.n_states() || state_weights->minCoeff() < 0.0)
            throw std::invalid_argument("state weights must be nonnegative, one per represented state");
        objective = phi.transpose() * *state_weights;
    }
    LinearProgram lp(0, Sense::minimize);
    for (Index j = 0; j < problem.n_features(); ++j)
        lp.add_variable(objective(j), -kInfinity, kInfinity);
    for (Index i = 0; i < problem.n_pairs(); ++i)
        lp.add_dense_row(problem.pair_features.row(i).transpose(), RowType::greater_equal, problem.pair_rewards(i));
    const LpSolution sol = simplex_solve(lp);
    if (sol.status == LpStatus::unbounded)
        throw std::invalid_argument("ALP is unbounded for these state weights");
    if (sol.status != LpStatus::optimal)
        throw NumericalError("ALP failed: " + to_string(sol.status));
    AlpResult out;
    out.weights = sol.x;
    out.value = phi * sol.x;
    out.policy = pairs_to_policy(problem, greedy_pairs(problem, sol.x));
    out.work_ms = sol.work / WorkBudget::kUnitsPerMs;
    return out;
}

} // namespace dradp
