#include "dradp/domains/chain.hpp"

#include "dradp/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace dradp::chain {

Instance generate(std::uint64_t seed, double gamma) {
    std::vector<MatrixXd> P(2, MatrixXd::Zero(kStates, kStates));
    for (Index s = 0; s < kStates; ++s) {
        const Index left = std::max<Index>(s - 1, 0);
        const Index right = std::min<Index>(s + 1, kStates - 1);
        P[kLeft](s, left) += 1.0 - kSlip;
        P[kLeft](s, right) += kSlip;
        P[kRight](s, right) += 1.0 - kSlip;
        P[kRight](s, left) += kSlip;
    }
    MatrixXd reward = MatrixXd::Zero(kStates, 2);
    reward.row(1).setConstant(-50.0);
    reward.row(2).setConstant(4.0);
    reward.row(3).setConstant(-50.0);
    reward.row(19).setConstant(10.0);

    // normalized exponentials are uniform on the simplex
    Rng rng(seed);
    VectorXd alpha(kStates);
    for (Index s = 0; s < kStates; ++s)
        alpha(s) = rng.exponential();
    alpha /= alpha.sum();
    return {TabularMdp(std::move(P), std::move(reward), gamma, std::move(alpha)), features(), seed};
}

FeatureBasis features() { return chebyshev_basis(kStates, kFeatures); }

namespace {

Index draw(Rng& rng, const VectorXd& distribution) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (Index i = 0; i < distribution.size(); ++i) {
        acc += distribution(i);
        if (u < acc)
            return i;
    }
    return distribution.size() - 1;
}

} // namespace

SampleSet collect_samples(const Instance& instance, long n_episodes, long max_len, std::uint64_t seed) {
    if (n_episodes < 0 || max_len < 0)
        throw std::invalid_argument("episode count and length must be nonnegative");
    const TabularMdp& mdp = instance.mdp;
    Rng rng(seed);
    SampleSet out;
    out.n_actions = mdp.n_actions();
    out.n_features = instance.basis.n_features();
    out.seed = seed;
    for (long ep = 0; ep < n_episodes; ++ep) {
        Index s = draw(rng, mdp.alpha());
        out.initial_features.push_back(instance.basis.row(s).transpose());
        for (long step = 0; step < max_len; ++step) {
            const auto a = static_cast<Index>(rng.index(static_cast<std::uint64_t>(mdp.n_actions())));
            const Index next = draw(rng, mdp.transition(a).row(s).transpose());
            out.transitions.push_back({ep, step, instance.basis.row(s).transpose(), a, mdp.reward(s, a),
                                       instance.basis.row(next).transpose(), false});
            s = next;
        }
    }
    return out;
}

} // namespace dradp::chain

namespace dradp {

SampleSet expected_samples(const TabularMdp& mdp, const FeatureBasis& basis) {
    if (basis.n_states() != mdp.n_states())
        throw std::invalid_argument("basis does not match the MDP");
    SampleSet out;
    out.n_actions = mdp.n_actions();
    out.n_features = basis.n_features();
    const MatrixXd& phi = basis.matrix();
    long step = 0;
    for (Index a = 0; a < mdp.n_actions(); ++a)
        for (Index s = 0; s < mdp.n_states(); ++s)
            out.transitions.push_back({0, step++, phi.row(s).transpose(), a, mdp.reward(s, a),
                                       (mdp.transition(a).row(s) * phi).transpose(), false});
    for (Index s = 0; s < mdp.n_states(); ++s) {
        out.initial_features.push_back(phi.row(s).transpose());
        out.initial_weights.push_back(mdp.alpha()(s));
    }
    return out;
}

} // namespace dradp
