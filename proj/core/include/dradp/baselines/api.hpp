#pragma once

#include "dradp/domains/samples.hpp"
#include "dradp/feature_basis.hpp"
#include "dradp/mdp.hpp"

#include <cstdint>

namespace dradp {

struct ApiConfig {
    long max_iterations = 50;
    /// Stop when successive weight vectors differ by at most this (inf-norm).
    double tolerance = 1e-8;
    double ridge = 1e-6;

    void validate() const;
};

/// Linear Q-function with one block of state-feature weights per action.
struct QWeights {
    /// k x |A|; column a holds the weights of action a.
    MatrixXd w;

    /// Greedy action for a state with the given features; ties to the lowest
    /// action.
    Index act(const VectorXd& features) const;
    DeterministicPolicy greedy(const FeatureBasis& basis) const;
};

struct ApiResult {
    QWeights q;
    long iterations = 0;
    /// False when the iteration cap was reached without repetition.
    bool converged = false;
    /// Deterministic operation count in reference milliseconds.
    double work_ms = 0.0;
};

/// Successor of a sample: probability and features (ignored when terminal).
struct Successor {
    double probability = 1.0;
    VectorXd features;
    bool terminal = false;
};

struct LstdqSample {
    VectorXd features;
    Index action = 0;
    double reward = 0.0;
    std::vector<Successor> successors;
};

/**
 * Approximate policy iteration: LSTDQ evaluation of the current greedy
 * policy on a fixed batch, then greedy improvement. Starts from random
 * weights drawn from the seed. Stops when the greedy actions on the batch
 * repeat or the weights stop moving.
 *
 * Throws NumericalError when a regularized LSTDQ system is still singular.
 */
ApiResult api_solve(const std::vector<LstdqSample>& batch, Index n_actions, double gamma, const ApiConfig& config,
                    std::uint64_t seed);

ApiResult api_solve(const SampleSet& samples, double gamma, const ApiConfig& config, std::uint64_t seed);

/// Exact-model batch: every (s, a) of the MDP once, with its full successor
/// distribution.
std::vector<LstdqSample> model_batch(const TabularMdp& mdp, const FeatureBasis& basis);

} // namespace dradp
