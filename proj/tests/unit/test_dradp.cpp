#include "dradp/bounds.hpp"
#include "dradp/errors.hpp"
#include "dradp/lower_bound.hpp"
#include "dradp/milp_formulation.hpp"
#include "dradp/problem.hpp"
#include "dradp/solver.hpp"
#include "dradp/domains/chain.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

using namespace dradp;
using dradp::oracle::swap_mdp;

namespace {

constexpr Index kStay = 0;
constexpr Index kGo = 1;

RandomizedPolicy det(const std::vector<Index>& actions, Index n_actions = 2) {
    return RandomizedPolicy(DeterministicPolicy(actions), n_actions);
}

} // namespace

TEST(FeatureBasis, RequiresConstantColumn) {
    MatrixXd phi(2, 2);
    phi << 1, 0, 0.5, 1;
    EXPECT_THROW(FeatureBasis{phi}, std::invalid_argument);
    phi(1, 0) = 1.0;
    EXPECT_EQ(FeatureBasis(phi).constant_column(), 0);
    EXPECT_EQ(chebyshev_basis(30, 10).n_features(), 10);
    EXPECT_EQ(tabular_basis(4).matrix().fullPivLu().rank(), 4);
}

TEST(ChebyshevBasis, MatchesCosineDefinition) {
    const FeatureBasis b = chebyshev_basis(7, 5);
    for (Index s = 0; s < 7; ++s) {
        const double x = 2.0 * static_cast<double>(s) / 6.0 - 1.0;
        for (Index j = 0; j < 5; ++j)
            EXPECT_NEAR(b.matrix()(s, j), std::cos(static_cast<double>(j) * std::acos(x)), 1e-12);
    }
}

TEST(LowerBound, SwapTabularEqualsPolicyReturn) {
    const TabularMdp mdp = swap_mdp();
    const DradpProblem p = make_tabular_problem(mdp, tabular_basis(2));
    for (const auto& actions : std::vector<std::vector<Index>>{{kGo, kStay}, {kStay, kStay}, {kGo, kGo}}) {
        const RandomizedPolicy pi = det(actions);
        EXPECT_NEAR(evaluate_lower_bound(p, pi), expected_return(mdp, pi), 1e-9);
        EXPECT_NEAR(evaluate_lower_bound_saddle(p, pi), expected_return(mdp, pi), 1e-9);
    }
}

TEST(LowerBound, ConstantBasisIsPessimistic) {
    const TabularMdp mdp = swap_mdp();
    const DradpProblem p = make_tabular_problem(mdp, constant_basis(2));
    EXPECT_NEAR(evaluate_lower_bound(p, det({kGo, kStay})), 0.0, 1e-9);
    EXPECT_NEAR(evaluate_lower_bound_saddle(p, det({kGo, kStay})), 0.0, 1e-9);
}

TEST(LowerBound, SoundOnRandomInstances) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 4 + static_cast<Index>(rng.index(6));
        const TabularMdp mdp = oracle::random_mdp(rng, n, 2, 0.9);
        const DradpProblem p =
            make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, n, 1 + static_cast<Index>(rng.index(3)))));
        const RandomizedPolicy pi = oracle::random_randomized_policy(rng, n, 2);
        const double primal = evaluate_lower_bound(p, pi);
        EXPECT_LE(primal, expected_return(mdp, pi) + 1e-7);
        EXPECT_NEAR(primal, evaluate_lower_bound_saddle(p, pi), 1e-6);
    }
}

TEST(LowerBound, SlackMultipliersAreMinimal) {
    const DradpProblem p = make_tabular_problem(swap_mdp(), tabular_basis(2));
    const VectorXd lambda1 = Eigen::Vector2d(1.0, 0.5);
    const VectorXd l2 = slack_multipliers(p, lambda1, VectorXd());
    const VectorXd residual = p.pair_features * lambda1 - p.pair_rewards;
    for (Index i = 0; i < p.n_pairs(); ++i)
        EXPECT_NEAR(l2(i), std::max(0.0, residual(i) / (1.0 - p.gamma)), 1e-12);
}

TEST(Problem, ValidatesAndBuildsSmooth) {
    const TabularMdp mdp = swap_mdp();
    DradpProblem p = make_tabular_problem(mdp, tabular_basis(2));
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.n_pairs(), 4);
    EXPECT_EQ(p.pairs[1].state, 1);
    EXPECT_EQ(p.pairs[1].action, 0);
    EXPECT_THROW(build_smooth_problem(p, 0.5, Eigen::Vector2d(0.5, 0.5)), std::invalid_argument);
    const DradpProblem s = build_smooth_problem(p, 2.0, Eigen::Vector2d(0.5, 0.5));
    ASSERT_TRUE(s.smooth());
    // C * sigma with sigma = 0.5 * mu + 0.5 * alpha
    EXPECT_NEAR((*s.state_mass_cap)(0), 2.0 * (0.25 + 0.5), 1e-12);
    p.tau = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Problem, SampledMatchesTabularWithExpectedSamples) {
    Rng rng(5);
    const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
    const FeatureBasis basis = tabular_basis(6);
    const DradpProblem tab = make_tabular_problem(mdp, basis);
    const DradpProblem smp = build_sampled_problem(expected_samples(mdp, basis), 0.9);
    ASSERT_EQ(smp.n_pairs(), tab.n_pairs());
    EXPECT_LT((smp.alpha_features - tab.alpha_features).norm(), 1e-12);
    for (Index i = 0; i < tab.n_pairs(); ++i) {
        EXPECT_EQ(smp.pairs[static_cast<std::size_t>(i)].state, tab.pairs[static_cast<std::size_t>(i)].state);
        EXPECT_LT((smp.pair_features.row(i) - tab.pair_features.row(i)).norm(), 1e-12);
    }
}

TEST(Problem, GroupsDuplicateFeatureVectors) {
    const auto [distinct, index] = group_states({Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 0)});
    EXPECT_EQ(distinct.size(), 2u);
    EXPECT_EQ(index, (std::vector<Index>{0, 1, 0}));
}

TEST(MilpFormulation, PointIsFeasibleWithMatchingObjective) {
    Rng rng(3);
    const TabularMdp mdp = oracle::random_mdp(rng, 5, 2, 0.8);
    const DradpProblem p = make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, 5, 3)));
    const optim::MilpProgram milp = build_milp(p);
    const DualLowerBound d = lower_bound_dual(p, VectorXd::Ones(p.n_pairs()) * 0.5, true);
    const std::vector<Index> selected = greedy_pairs(p, d.lambda1);
    const double bound = evaluate_lower_bound(p, RandomizedPolicy(pairs_to_policy(p, selected), 2));
    // any multipliers give a feasible point whose value is at most the bound
    const VectorXd x = milp_point(p, selected, d.lambda1, VectorXd());
    EXPECT_TRUE(optim::milp_feasible(milp, x, 1e-7));
    EXPECT_LE(milp.lp.objective(x), bound + 1e-6);
    // the boxed fixed-policy optimum attains its own value
    const DualLowerBound fixed = lower_bound_dual(p, selection_weights(p, selected), true);
    const VectorXd y = milp_point(p, selected, fixed.lambda1, VectorXd());
    EXPECT_TRUE(optim::milp_feasible(milp, y, 1e-7));
    EXPECT_NEAR(milp.lp.objective(y), fixed.value, 1e-6);
    EXPECT_LE(fixed.value, bound + 1e-6);
}

TEST(Solver, SwapTabular) {
    const TabularMdp mdp = swap_mdp();
    const DradpSolution sol = solve(make_tabular_problem(mdp, tabular_basis(2)));
    EXPECT_NEAR(sol.objective, 1.0, 1e-6);
    EXPECT_EQ(sol.policy.actions, (std::vector<Index>{kGo, kStay}));
    EXPECT_LE(sol.lambda2.dot(selection_weights(make_tabular_problem(mdp, tabular_basis(2)), sol.selected_pairs)),
              1e-6);
    EXPECT_EQ(sol.status, optim::MilpStatus::optimal);
}

TEST(Solver, SwapConstantBasis) {
    const DradpSolution sol = solve(make_tabular_problem(swap_mdp(), constant_basis(2)));
    EXPECT_NEAR(sol.objective, 0.0, 1e-6);
}

TEST(Solver, ObjectiveMatchesEvaluationAndDominatesPolicies) {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 5 + static_cast<Index>(rng.index(4));
        const Index A = 2 + static_cast<Index>(rng.index(2));
        const TabularMdp mdp = oracle::random_mdp(rng, n, A, 0.9);
        const DradpProblem p = make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, n, 3)));
        const DradpSolution sol = solve(p);
        const RandomizedPolicy pi(sol.policy, A);
        EXPECT_NEAR(sol.objective, evaluate_lower_bound(p, pi), 1e-5);
        EXPECT_LE(sol.lambda2.dot(pair_weights(p, pi)), 1e-6);
        EXPECT_LE(sol.objective, optimal_return(mdp) + 1e-6);
        if (sol.status == optim::MilpStatus::optimal)
            for (int k = 0; k < 5; ++k) {
                const RandomizedPolicy other(oracle::random_deterministic_policy(rng, n, A), A);
                EXPECT_LE(evaluate_lower_bound(p, other), sol.objective + 1e-6);
            }
    }
}

TEST(Solver, TabularReachesOptimalReturn) {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
        const DradpSolution sol = solve(make_tabular_problem(mdp, tabular_basis(6)));
        EXPECT_NEAR(sol.objective, optimal_return(mdp), 1e-6);
        EXPECT_NEAR(expected_return(mdp, RandomizedPolicy(sol.policy, 2)), optimal_return(mdp), 1e-6);
    }
}

TEST(Solver, SmoothVariantIsSoundAndTighter) {
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
        const DradpProblem p = make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, 6, 3)));
        const Concentration c = concentration_coefficient(mdp);
        const DradpProblem s = build_smooth_problem(p, c.C, c.mu);
        const DradpSolution plain = solve(p);
        const DradpSolution smooth = solve(s);
        const RandomizedPolicy pi(smooth.policy, 2);
        // the caps only remove occupancies that no policy can produce
        EXPECT_GE(smooth.objective, plain.objective - 1e-6);
        EXPECT_NEAR(smooth.objective, evaluate_lower_bound(s, pi), 1e-5);
        EXPECT_LE(smooth.objective, expected_return(mdp, pi) + 1e-6);
    }
}

TEST(Solver, JsonHasDocumentedFields) {
    const DradpSolution sol = solve(make_tabular_problem(swap_mdp(), tabular_basis(2)));
    const auto j = nlohmann::json::parse(solution_to_json(sol));
    for (const char* key : {"objective", "gap", "lambda1", "policy", "tau_used", "node_count", "runtime_ms"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["policy"].size(), 2u);
}

TEST(Solver, ZeroTimeLimitWithoutIncumbentThrows) {
    Rng rng(4);
    const TabularMdp mdp = oracle::random_mdp(rng, 8, 3, 0.9);
    DradpOptions opt;
    opt.time_limit_ms = 0.0;
    EXPECT_THROW(solve(make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, 8, 3))), opt), TimeLimitError);
}
