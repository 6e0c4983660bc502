#include "dradp/bounds.hpp"
#include "dradp/solver.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dradp;

TEST(Concentration, DominatesEveryTransitionRow) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 7, 3, 0.9);
        const Concentration c = concentration_coefficient(mdp);
        EXPECT_NEAR(c.mu.sum(), 1.0, 1e-12);
        EXPECT_GE(c.C, 1.0 - 1e-12);
        for (Index a = 0; a < 3; ++a)
            for (Index s = 0; s < 7; ++s)
                for (Index t = 0; t < 7; ++t)
                    EXPECT_LE(mdp.transition(a, s, t), c.C * c.mu(t) + 1e-12);
    }
}

TEST(Concentration, OccupancyBelowScaledSigma) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.8);
        const Concentration c = concentration_coefficient(mdp);
        const VectorXd sigma = sigma_vector(mdp, c.mu);
        const RandomizedPolicy pi = oracle::random_randomized_policy(rng, 6, 2);
        const VectorXd d = occupancy(mdp, pi).state_frequencies();
        for (Index s = 0; s < 6; ++s)
            EXPECT_LE(d(s), c.C * sigma(s) + 1e-9);
    }
}

TEST(Bounds, ZeroAtOptimalValue) {
    Rng rng(3);
    const TabularMdp mdp = oracle::random_mdp(rng, 5, 2, 0.9);
    const ValueFunction v = value_iteration(mdp).value;
    EXPECT_NEAR(bound_simple(mdp, v), 0.0, 1e-7);
    EXPECT_NEAR(bound_smooth(mdp, v), 0.0, 1e-7);
    EXPECT_NEAR(bound_direct(mdp, tabular_basis(5)), 0.0, 1e-7);
}

TEST(Bounds, DirectMatchesBruteForceOnConstantBasis) {
    // with only the constant feature the best under-approximation is min v*
    Rng rng(4);
    const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
    const ValueFunction v = value_iteration(mdp).value;
    EXPECT_NEAR(bound_direct(mdp, constant_basis(6)), mdp.alpha().dot(v) - v.minCoeff(), 1e-7);
}

TEST(Bounds, ResidualNormsByHand) {
    const TabularMdp mdp = oracle::swap_mdp();
    const VectorXd v = VectorXd::Zero(2);
    // Bv = max_a r = (0, 1)
    const ResidualNorms r = bellman_residual_norms(mdp, v, Eigen::Vector2d(0.25, 0.75));
    EXPECT_NEAR(r.linf, 1.0, 1e-12);
    EXPECT_NEAR(r.l1_sigma, 0.75, 1e-12);
    EXPECT_NEAR(bound_simple(mdp, v), 4.0, 1e-12);
}

TEST(Bounds, CoverPolicyLossOfSolverPolicy) {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
        const FeatureBasis basis(oracle::random_basis(rng, 6, 3));
        const DradpSolution sol = solve(make_tabular_problem(mdp, basis));
        const double loss = policy_loss(mdp, RandomizedPolicy(sol.policy, 2));
        EXPECT_LE(loss, bound_simple(mdp, sol.value) + 1e-6);
        EXPECT_LE(loss, bound_direct_certified(mdp, basis) + 1e-6);
        EXPECT_GE(bound_direct_certified(mdp, basis), bound_direct(mdp, basis) - 1e-9);
    }
}

TEST(Bounds, RelaxedDirectBoundCanUnderstateLoss) {
    // Values below v* need not be Bellman-dominated under the optimal policy,
    // so the relaxed bound can fall below the loss of an exact maximizer.
    Rng rng(5);
    bool violated = false;
    for (int trial = 0; trial < 10 && !violated; ++trial) {
        const TabularMdp mdp = oracle::random_mdp(rng, 6, 2, 0.9);
        const FeatureBasis basis(oracle::random_basis(rng, 6, 3));
        const DradpSolution sol = solve(make_tabular_problem(mdp, basis));
        violated = policy_loss(mdp, RandomizedPolicy(sol.policy, 2)) > bound_direct(mdp, basis) + 1e-6;
    }
    EXPECT_TRUE(violated);
}

TEST(Bounds, CertifiedDirectZeroForTabularBasis) {
    Rng rng(6);
    const TabularMdp mdp = oracle::random_mdp(rng, 5, 3, 0.9);
    EXPECT_NEAR(bound_direct_certified(mdp, tabular_basis(5)), 0.0, 1e-7);
}
