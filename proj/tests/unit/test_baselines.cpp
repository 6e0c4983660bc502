#include "dradp/baselines/alp.hpp"
#include "dradp/baselines/api.hpp"
#include "dradp/domains/chain.hpp"
#include "dradp/errors.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dradp;

TEST(Alp, TabularBasisRecoversOptimalValue) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
        const AlpResult r = alp_solve(make_tabular_problem(mdp, tabular_basis(6)));
        const ValueFunction v = value_iteration(mdp).value;
        EXPECT_LT((r.value - v).lpNorm<Eigen::Infinity>(), 1e-6);
        EXPECT_NEAR(expected_return(mdp, RandomizedPolicy(r.policy, 2)), optimal_return(mdp), 1e-6);
    }
}

TEST(Alp, ValueUpperBoundsOptimal) {
    Rng rng(2);
    const TabularMdp mdp = oracle::random_mdp(rng, 8, 2, 0.9);
    const AlpResult r = alp_solve(make_tabular_problem(mdp, FeatureBasis(oracle::random_basis(rng, 8, 3))));
    const ValueFunction v = value_iteration(mdp).value;
    for (Index s = 0; s < 8; ++s)
        EXPECT_GE(r.value(s), v(s) - 1e-7);
}

TEST(Api, SwapReachesOptimalPolicy) {
    const TabularMdp mdp = oracle::swap_mdp();
    const FeatureBasis basis = tabular_basis(2);
    const ApiResult r = api_solve(model_batch(mdp, basis), 2, mdp.gamma(), {}, 7);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.q.greedy(basis).actions, (std::vector<Index>{1, 0}));
}

TEST(Api, TabularModelBatchIsPolicyIteration) {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 3, 0.9);
        const FeatureBasis basis = tabular_basis(6);
        const ApiResult r = api_solve(model_batch(mdp, basis), 3, mdp.gamma(), {}, 11);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(expected_return(mdp, RandomizedPolicy(r.q.greedy(basis), 3)), optimal_return(mdp), 1e-6);
    }
}

TEST(Api, ZeroRewardsConvergeImmediately) {
    const TabularMdp base = oracle::swap_mdp();
    const TabularMdp mdp(base.transitions(), MatrixXd::Zero(2, 2), 0.5, base.alpha());
    const ApiResult r = api_solve(model_batch(mdp, tabular_basis(2)), 2, 0.5, {}, 3);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2);
    EXPECT_LT(r.q.w.norm(), 1e-9);
}

TEST(Api, RejectsBadConfig) {
    ApiConfig c;
    c.ridge = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Api, DeterministicForSeed) {
    const chain::Instance inst = chain::generate(4);
    const SampleSet samples = chain::collect_samples(inst, 20, 30, 9);
    const ApiResult a = api_solve(samples, inst.mdp.gamma(), {}, 5);
    const ApiResult b = api_solve(samples, inst.mdp.gamma(), {}, 5);
    EXPECT_EQ(a.q.w, b.q.w);
}
