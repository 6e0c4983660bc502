#include "dradp/milp_formulation.hpp"

#include "dradp/lower_bound.hpp"

namespace dradp {

using namespace optim;

MilpLayout milp_layout(const DradpProblem& problem) {
    MilpLayout l;
    l.k = problem.n_features();
    l.m = problem.n_pairs();
    l.n = problem.n_states();
    l.lambda1 = 0;
    l.lambda2 = l.k;
    l.z = l.lambda2 + l.m;
    l.pi = l.z + l.m;
    l.n_vars = l.pi + l.m;
    if (problem.smooth()) {
        l.lambda3 = l.n_vars;
        l.n_vars += l.n;
    }
    l.mccormick_rows = 0;
    l.dual_rows = l.m;
    l.policy_rows = 2 * l.m;
    l.box_rows = 2 * l.m + l.n;
    l.n_rows = l.box_rows + 2 * l.n;
    return l;
}

MilpProgram build_milp(const DradpProblem& problem) {
    problem.validate();
    const MilpLayout l = milp_layout(problem);
    const double g = problem.gamma;
    const double tau = problem.tau;
    const MatrixXd& phi = problem.basis.matrix();

    MilpProgram milp;
    LinearProgram& lp = milp.lp;
    lp = LinearProgram(0, Sense::maximize);
    for (Index j = 0; j < l.k; ++j)
        lp.add_variable(problem.alpha_features(j), -kInfinity, kInfinity);
    for (Index i = 0; i < l.m; ++i)
        lp.add_variable(0.0);
    for (Index i = 0; i < l.m; ++i)
        lp.add_variable(-1.0);
    for (Index i = 0; i < l.m; ++i)
        milp.binaries.push_back(lp.add_variable(0.0, 0.0, 1.0));
    if (problem.smooth())
        for (Index s = 0; s < l.n; ++s)
            lp.add_variable(-(*problem.state_mass_cap)(s));

    // z_i - lambda2_i - tau pi_i >= -tau
    for (Index i = 0; i < l.m; ++i)
        lp.add_row({{l.z + i, 1.0}, {l.lambda2 + i, -1.0}, {l.pi + i, -tau}}, RowType::greater_equal, -tau);
    // (1 - gamma)(lambda2_i + lambda3(s_i)) - (A Phi)_i lambda1 >= -b_i
    for (Index i = 0; i < l.m; ++i) {
        std::vector<std::pair<Index, double>> terms;
        for (Index j = 0; j < l.k; ++j)
            if (problem.pair_features(i, j) != 0.0)
                terms.emplace_back(l.lambda1 + j, -problem.pair_features(i, j));
        terms.emplace_back(l.lambda2 + i, 1.0 - g);
        if (problem.smooth())
            terms.emplace_back(l.lambda3 + problem.pairs[static_cast<std::size_t>(i)].state, 1.0 - g);
        lp.add_row(std::move(terms), RowType::greater_equal, -problem.pair_rewards(i));
    }
    const auto groups = problem.pairs_by_state();
    for (Index s = 0; s < l.n; ++s) {
        std::vector<std::pair<Index, double>> terms;
        for (Index i : groups[static_cast<std::size_t>(s)])
            terms.emplace_back(l.pi + i, 1.0);
        lp.add_row(std::move(terms), RowType::equal, 1.0);
    }
    for (Index s = 0; s < l.n; ++s) {
        lp.add_dense_row(phi.row(s).transpose(), RowType::less_equal, problem.value_box);
        lp.add_dense_row(phi.row(s).transpose(), RowType::greater_equal, -problem.value_box);
    }
    return milp;
}

VectorXd milp_point(const DradpProblem& problem, const std::vector<Index>& selected, const VectorXd& lambda1,
                    const VectorXd& lambda3) {
    const MilpLayout l = milp_layout(problem);
    VectorXd x = VectorXd::Zero(l.n_vars);
    x.segment(l.lambda1, l.k) = lambda1;
    const VectorXd lambda2 = slack_multipliers(problem, lambda1, lambda3);
    x.segment(l.lambda2, l.m) = lambda2;
    VectorXd pi = selection_weights(problem, selected);
    x.segment(l.pi, l.m) = pi;
    for (Index i = 0; i < l.m; ++i)
        x(l.z + i) = std::max(0.0, lambda2(i) - problem.tau * (1.0 - pi(i)));
    if (problem.smooth())
        x.segment(l.lambda3, l.n) = lambda3;
    return x;
}

} // namespace dradp
