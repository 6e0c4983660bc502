#pragma once

#include "dradp/domains/samples.hpp"
#include "dradp/feature_basis.hpp"
#include "dradp/mdp.hpp"

#include <cstdint>

namespace dradp::chain {

inline constexpr Index kStates = 30;
inline constexpr Index kFeatures = 10;
inline constexpr Index kLeft = 0;
inline constexpr Index kRight = 1;
inline constexpr double kSlip = 0.1;
inline constexpr double kDefaultGamma = 0.95;

struct Instance {
    TabularMdp mdp;
    FeatureBasis basis;
    std::uint64_t seed = 0;
};

/**
 * 30-state chain: "left" and "right" move one state in the intended
 * direction with probability 0.9 and the opposite way with probability 0.1;
 * moves past either end stay in place. Rewards (0-based states) are -50 at
 * 1 and 3, 4 at 2 and 10 at 19, for both actions. The initial distribution
 * is drawn uniformly from the simplex using the seed.
 */
Instance generate(std::uint64_t seed, double gamma = kDefaultGamma);

/// Chebyshev polynomials T_0 .. T_9 on the mapped state index.
FeatureBasis features();

/// Episodes under the uniformly random policy, starting from alpha.
SampleSet collect_samples(const Instance& instance, long n_episodes, long max_len, std::uint64_t seed);

} // namespace dradp::chain

namespace dradp {

/// Every (s, a) of the MDP once, with the expected successor features as
/// next features, and the initial distribution as weighted initial draws.
SampleSet expected_samples(const TabularMdp& mdp, const FeatureBasis& basis);

} // namespace dradp
