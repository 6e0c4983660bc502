#include "dradp/problem.hpp"

#include "dradp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace dradp {

std::vector<std::vector<Index>> DradpProblem::pairs_by_state() const {
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(n_states()));
    for (Index i = 0; i < n_pairs(); ++i)
        groups[static_cast<std::size_t>(pairs[static_cast<std::size_t>(i)].state)].push_back(i);
    return groups;
}

void DradpProblem::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount must lie in [0, 1)");
    const Index k = n_features();
    if (pairs.empty())
        throw std::invalid_argument("problem has no state-action pairs");
    if (pair_features.rows() != n_pairs() || pair_features.cols() != k || pair_rewards.size() != n_pairs() ||
        alpha_features.size() != k)
        throw std::invalid_argument("problem data have inconsistent dimensions");
    std::vector<char> covered(static_cast<std::size_t>(n_states()), 0);
    for (const StatePair& p : pairs) {
        if (p.state < 0 || p.state >= n_states() || p.action < 0)
            throw std::invalid_argument("pair refers to an unknown state");
        covered[static_cast<std::size_t>(p.state)] = 1;
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end())
        throw std::invalid_argument("every represented state needs at least one action");
    if (!(tau > 0.0))
        throw std::invalid_argument("tau must be positive");
    const double bmax = pair_rewards.cwiseAbs().maxCoeff();
    if (value_box < bmax / (1.0 - gamma) - 1e-12)
        throw std::invalid_argument("value box is smaller than ||b||_inf / (1 - gamma)");
    if (state_mass_cap && (state_mass_cap->size() != n_states() || state_mass_cap->minCoeff() < 0.0))
        throw std::invalid_argument("state mass caps must be nonnegative, one per state");
}

double default_value_box(const VectorXd& rewards, double gamma) {
    return 2.0 * rewards.cwiseAbs().maxCoeff() / (1.0 - gamma);
}

double default_tau(const VectorXd& rewards, double gamma, double value_box) {
    const double tau = ((1.0 + gamma) * value_box + rewards.cwiseAbs().maxCoeff()) / (1.0 - gamma);
    // all-zero rewards still need a positive big-M
    return tau > 0.0 ? tau : 1.0;
}

DradpProblem make_tabular_problem(const TabularMdp& mdp, const FeatureBasis& basis) {
    if (basis.n_states() != mdp.n_states())
        throw std::invalid_argument("feature basis has " + std::to_string(basis.n_states()) +
                                    " rows but the MDP has " + std::to_string(mdp.n_states()) + " states");
    const LpMatrices lp = build_lp_matrices(mdp);
    DradpProblem p;
    p.gamma = mdp.gamma();
    p.basis = basis;
    for (Index a = 0; a < mdp.n_actions(); ++a)
        for (Index s = 0; s < mdp.n_states(); ++s)
            p.pairs.push_back({s, a});
    p.pair_features = lp.A * basis.matrix();
    p.pair_rewards = lp.b;
    p.alpha_features = basis.matrix().transpose() * mdp.alpha();
    p.value_box = default_value_box(p.pair_rewards, p.gamma);
    p.tau = default_tau(p.pair_rewards, p.gamma, p.value_box);
    p.mdp = mdp;
    return p;
}

DradpProblem build_smooth_problem(const DradpProblem& problem, double C, const VectorXd& mu) {
    if (!problem.tabular())
        throw std::invalid_argument("the smoothness restriction needs a tabular problem");
    const TabularMdp& mdp = *problem.mdp;
    if (!(C >= 1.0))
        throw std::invalid_argument("concentration coefficient must be at least 1");
    if (mu.size() != mdp.n_states() || mu.minCoeff() < 0.0 || std::abs(mu.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("mu must be a distribution over the states");
    for (Index a = 0; a < mdp.n_actions(); ++a)
        for (Index s = 0; s < mdp.n_states(); ++s)
            for (Index t = 0; t < mdp.n_states(); ++t)
                if (mdp.transition(a, s, t) > C * mu(t) + 1e-12)
                    throw std::invalid_argument("(C, mu) does not dominate the transition probabilities");
    DradpProblem p = problem;
    p.state_mass_cap = C * sigma_vector(mdp, mu);
    return p;
}

std::pair<std::vector<VectorXd>, std::vector<Index>> group_states(const std::vector<VectorXd>& features) {
    auto less = [](const VectorXd& a, const VectorXd& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    };
    std::map<VectorXd, Index, decltype(less)> index(less);
    std::vector<VectorXd> distinct;
    std::vector<Index> group;
    group.reserve(features.size());
    for (const VectorXd& f : features) {
        auto [it, inserted] = index.emplace(f, static_cast<Index>(distinct.size()));
        if (inserted)
            distinct.push_back(f);
        group.push_back(it->second);
    }
    return {std::move(distinct), std::move(group)};
}

DradpProblem build_sampled_problem(const SampleSet& samples, double gamma, TauPolicy tau) {
    samples.validate();
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount must lie in [0, 1)");
    const Index k = samples.n_features;

    std::vector<VectorXd> state_features;
    state_features.reserve(samples.transitions.size());
    for (const Transition& t : samples.transitions)
        state_features.push_back(t.features);
    auto [distinct, state_of] = group_states(state_features);
    const Index n = static_cast<Index>(distinct.size());
    MatrixXd phi(n, k);
    for (Index s = 0; s < n; ++s)
        phi.row(s) = distinct[static_cast<std::size_t>(s)].transpose();

    // average duplicate (state, action) observations, pairs ordered by first appearance
    std::map<std::pair<Index, Index>, Index> pair_index;
    std::vector<StatePair> pairs;
    std::vector<VectorXd> row_sum;
    std::vector<double> reward_sum;
    std::vector<double> count;
    for (std::size_t i = 0; i < samples.transitions.size(); ++i) {
        const Transition& t = samples.transitions[i];
        const Index s = state_of[i];
        auto [it, inserted] = pair_index.emplace(std::make_pair(s, t.action), static_cast<Index>(pairs.size()));
        if (inserted) {
            pairs.push_back({s, t.action});
            row_sum.push_back(VectorXd::Zero(k));
            reward_sum.push_back(0.0);
            count.push_back(0.0);
        }
        const auto j = static_cast<std::size_t>(it->second);
        row_sum[j] += t.terminal ? t.features : VectorXd(t.features - gamma * t.next_features);
        reward_sum[j] += t.reward;
        count[j] += 1.0;
    }

    DradpProblem p;
    p.gamma = gamma;
    try {
        p.basis = FeatureBasis(phi);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("sampled state features must contain a component that is always 1");
    }
    p.pairs = std::move(pairs);
    const Index m = static_cast<Index>(p.pairs.size());
    p.pair_features.resize(m, k);
    p.pair_rewards.resize(m);
    for (Index i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(i);
        p.pair_features.row(i) = (row_sum[j] / count[j]).transpose();
        p.pair_rewards(i) = reward_sum[j] / count[j];
    }
    p.alpha_features = samples.mean_initial_features();
    p.value_box = default_value_box(p.pair_rewards, gamma);
    p.tau = tau.fixed ? *tau.fixed : default_tau(p.pair_rewards, gamma, p.value_box);
    p.validate();
    return p;
}

} // namespace dradp
