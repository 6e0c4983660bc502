#include "dradp/domains/chain.hpp"
#include "dradp/domains/pendulum.hpp"
#include "dradp/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace dradp;

TEST(Chain, DynamicsAndRewards) {
    const chain::Instance inst = chain::generate(1);
    const TabularMdp& mdp = inst.mdp;
    EXPECT_EQ(mdp.n_states(), 30);
    EXPECT_DOUBLE_EQ(mdp.transition(chain::kRight, 5, 6), 0.9);
    EXPECT_DOUBLE_EQ(mdp.transition(chain::kRight, 5, 4), 0.1);
    EXPECT_DOUBLE_EQ(mdp.transition(chain::kLeft, 0, 0), 0.9);
    EXPECT_DOUBLE_EQ(mdp.transition(chain::kLeft, 0, 1), 0.1);
    EXPECT_DOUBLE_EQ(mdp.transition(chain::kRight, 29, 29), 0.9);
    EXPECT_DOUBLE_EQ(mdp.reward(1, 0), -50.0);
    EXPECT_DOUBLE_EQ(mdp.reward(2, 1), 4.0);
    EXPECT_DOUBLE_EQ(mdp.reward(3, 1), -50.0);
    EXPECT_DOUBLE_EQ(mdp.reward(19, 0), 10.0);
    EXPECT_DOUBLE_EQ(mdp.reward(0, 0), 0.0);
    EXPECT_NEAR(mdp.alpha().sum(), 1.0, 1e-12);
    EXPECT_EQ(inst.basis.n_features(), 10);
}

TEST(Chain, SeedDeterminesInstance) {
    EXPECT_EQ(chain::generate(3).mdp.alpha(), chain::generate(3).mdp.alpha());
    EXPECT_NE(chain::generate(3).mdp.alpha(), chain::generate(4).mdp.alpha());
}

TEST(Chain, SamplesFollowTheModel) {
    const chain::Instance inst = chain::generate(2);
    const SampleSet s = chain::collect_samples(inst, 5, 10, 3);
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.transitions.size(), 50u);
    EXPECT_EQ(s.initial_features.size(), 5u);
    std::ostringstream os;
    write_samples_csv(os, s);
    EXPECT_EQ(os.str().rfind("ep,step,", 0), 0u);
}

TEST(Pendulum, RestIsEquilibrium) {
    const pendulum::StepResult r = pendulum::step({0.0, 0.0}, 1, 0.0);
    EXPECT_DOUBLE_EQ(r.next.theta, 0.0);
    EXPECT_DOUBLE_EQ(r.next.omega, 0.0);
    EXPECT_FALSE(r.terminal);
    EXPECT_DOUBLE_EQ(r.reward, 0.0);
}

TEST(Pendulum, StepMatchesDynamicsByHand) {
    // theta = 0.1, omega = 0.2, push +50 with +5 noise
    const double a = 1.0 / 10.0;
    const double th = 0.1, w = 0.2, u = 55.0;
    const double acc = (9.8 * std::sin(th) - a * 2.0 * 0.5 * w * w * std::sin(2 * th) / 2 - a * std::cos(th) * u) /
                       (4.0 * 0.5 / 3.0 - a * 2.0 * 0.5 * std::cos(th) * std::cos(th));
    const pendulum::StepResult r = pendulum::step({th, w}, 2, 5.0);
    EXPECT_NEAR(r.next.theta, th + 0.1 * w, 1e-15);
    EXPECT_NEAR(r.next.omega, w + 0.1 * acc, 1e-12);
    EXPECT_LT(acc, 0.0);
}

TEST(Pendulum, FallingIsTerminal) {
    const pendulum::StepResult r = pendulum::step({1.5, 2.0}, 1, 0.0);
    EXPECT_TRUE(r.terminal);
    EXPECT_DOUBLE_EQ(r.reward, -1.0);
}

TEST(Pendulum, FeaturesAtCenters) {
    const VectorXd phi = pendulum::features({0.0, 0.0});
    ASSERT_EQ(phi.size(), 10);
    EXPECT_DOUBLE_EQ(phi(0), 1.0);
    EXPECT_DOUBLE_EQ(phi(5), 1.0);  // center (0, 0)
    EXPECT_NEAR(phi(1), std::exp(-(M_PI * M_PI / 16.0 + 1.0) / 2.0), 1e-15);
}

TEST(Pendulum, CollectionIsDeterministicAndExpands) {
    pendulum::CollectOptions opt;
    opt.n_episodes = 10;
    opt.expand_actions = true;
    const SampleSet a = pendulum::collect_samples(opt, 5);
    const SampleSet b = pendulum::collect_samples(opt, 5);
    ASSERT_EQ(a.transitions.size(), b.transitions.size());
    EXPECT_EQ(a.transitions.size() % 3, 0u);
    EXPECT_EQ(a.transitions.back().next_features, b.transitions.back().next_features);
    const DradpProblem p = build_sampled_problem(a, 0.95);
    EXPECT_EQ(p.n_pairs(), 3 * p.n_states());
}

TEST(Pendulum, RandomPolicyFallsQuickly) {
    Rng rng(1);
    const double steps =
        pendulum::mean_balancing_steps([&](const pendulum::State&) { return Index(rng.index(3)); }, 20, 2);
    EXPECT_GT(steps, 0.0);
    EXPECT_LT(steps, 100.0);
}
