#pragma once

#include "dradp/domains/samples.hpp"
#include "dradp/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>

namespace dradp::pendulum {

inline constexpr double kPoleMass = 2.0;
inline constexpr double kCartMass = 8.0;
inline constexpr double kLength = 0.5;
inline constexpr double kGravity = 9.8;
inline constexpr double kDt = 0.1;
inline constexpr double kNoise = 10.0;
inline constexpr double kInitialSpread = 0.2;
inline constexpr double kDefaultGamma = 0.95;
inline constexpr Index kActions = 3;
inline constexpr Index kFeatures = 10;
inline constexpr long kEvaluationCap = 3000;

struct State {
    double theta = 0.0;  ///< radians from upright
    double omega = 0.0;  ///< radians per second
};

struct StepResult {
    State next;
    double reward = 0.0;
    bool terminal = false;
};

/// Force of action 0, 1, 2: -50, 0, +50 newtons.
double action_force(Index action);

/// One Euler step with the given force noise added to the action's force.
/// Leaving |theta| <= pi/2 yields reward -1 and ends the episode.
StepResult step(const State& state, Index action, double noise);

/// One step with noise drawn uniformly from [-10, 10].
StepResult step(const State& state, Index action, Rng& rng);

/// Both coordinates uniform in [-0.2, 0.2].
State initial_state(Rng& rng);

/// [1, exp(-||s - c_i||^2 / 2)] for the centers {-pi/4, 0, pi/4} x {-1, 0, 1},
/// angle in the outer loop.
VectorXd features(const State& state);

struct CollectOptions {
    long n_episodes = 100;
    long max_len = 3000;
    /// Record a simulated step for every action at each visited state
    /// rather than only the behavior action.
    bool expand_actions = false;
};

/// Episodes under the uniformly random behavior policy.
SampleSet collect_samples(const CollectOptions& options, std::uint64_t seed);

using Controller = std::function<Index(const State&)>;

/// Mean number of steps balanced over the episodes, each capped at 3000.
double mean_balancing_steps(const Controller& controller, long episodes, std::uint64_t seed);

/// Greedy one-step lookahead on v(s) = phi(s)' weights: expected reward plus
/// discounted value of the successor, averaging over a four-point rule for
/// the force noise. Terminal successors are worth their reward only.
Index greedy_action(const State& state, const VectorXd& weights, double gamma);

} // namespace dradp::pendulum
