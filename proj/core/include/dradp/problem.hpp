#pragma once

#include "dradp/domains/samples.hpp"
#include "dradp/feature_basis.hpp"
#include "dradp/mdp.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dradp {

/// A represented state-action pair.
struct StatePair {
    Index state = 0;
    Index action = 0;
};

/**
 * Data of the robust lower-bound optimization over a set of represented
 * state-action pairs. In tabular mode the pairs are all (s, a) of an MDP in
 * its pair order; in sampled mode they are the distinct sampled pairs.
 *
 * For pair i, row i of `pair_features` is the Bellman row (A Phi)_i and
 * `pair_rewards(i)` is b_i. `alpha_features` is Phi' alpha.
 */
struct DradpProblem {
    double gamma = 0.0;
    FeatureBasis basis{MatrixXd::Ones(1, 1)};
    std::vector<StatePair> pairs;
    MatrixXd pair_features;
    VectorXd pair_rewards;
    VectorXd alpha_features;
    /// Bound on |(Phi lambda1)(s)| imposed in the MILP.
    double value_box = 0.0;
    /// Big-M bound on the slack multipliers lambda2.
    double tau = 0.0;
    /// Per-state cap on occupancy mass, C * sigma(s), when the smoothness
    /// restriction is active.
    std::optional<VectorXd> state_mass_cap;
    /// Present in tabular mode.
    std::optional<TabularMdp> mdp;

    Index n_states() const { return basis.n_states(); }
    Index n_pairs() const { return static_cast<Index>(pairs.size()); }
    Index n_features() const { return basis.n_features(); }
    bool tabular() const { return mdp.has_value(); }
    bool smooth() const { return state_mass_cap.has_value(); }

    /// Indices of the pairs of each state, in pair order.
    std::vector<std::vector<Index>> pairs_by_state() const;

    /// Throws std::invalid_argument on inconsistent shapes, a state without
    /// pairs, tau <= 0 or a value box below ||b||_inf / (1 - gamma).
    void validate() const;
};

/// V_box = 2 ||b||_inf / (1 - gamma).
double default_value_box(const VectorXd& rewards, double gamma);
/// tau = ((1 + gamma) V_box + ||b||_inf) / (1 - gamma).
double default_tau(const VectorXd& rewards, double gamma, double value_box);

DradpProblem make_tabular_problem(const TabularMdp& mdp, const FeatureBasis& basis);

/**
 * Adds the per-state caps sum_a u(s, a) <= C * sigma(s) with
 * sigma = gamma * mu + (1 - gamma) * alpha. Requires tabular mode and
 * (C, mu) dominating every transition row (P(s, a, .) <= C mu).
 */
DradpProblem build_smooth_problem(const DradpProblem& problem, double C, const VectorXd& mu);

/// Either the analytic default or a fixed value.
struct TauPolicy {
    std::optional<double> fixed;
    static TauPolicy automatic() { return {}; }
    static TauPolicy value(double tau) { return {tau}; }
};

/**
 * Builds the problem from samples. Distinct feature vectors define the
 * represented states; transitions of the same (state, action) are averaged
 * into one Bellman row phi(s) - gamma * phi(s') (just phi(s) for terminal
 * transitions) and one mean reward. Phi' alpha is the weighted mean of the
 * initial-state features. The constant column is located in the features.
 */
DradpProblem build_sampled_problem(const SampleSet& samples, double gamma, TauPolicy tau = TauPolicy::automatic());

/// Groups identical feature vectors; returns the distinct vectors in order of
/// first appearance and the group index of every input.
std::pair<std::vector<VectorXd>, std::vector<Index>> group_states(const std::vector<VectorXd>& features);

} // namespace dradp
