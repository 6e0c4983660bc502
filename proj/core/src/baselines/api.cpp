#include "dradp/baselines/api.hpp"

#include "dradp/errors.hpp"
#include "dradp/optim/linear_program.hpp"
#include "dradp/rng.hpp"

#include <Eigen/LU>

#include <stdexcept>

namespace dradp {

void ApiConfig::validate() const {
    if (max_iterations < 1 || !(tolerance > 0.0) || ridge < 0.0)
        throw std::invalid_argument("API needs a positive iteration cap and tolerance and a nonnegative ridge");
}

Index QWeights::act(const VectorXd& features) const {
    const VectorXd q = w.transpose() * features;
    Index best = 0;
    for (Index a = 1; a < q.size(); ++a)
        if (q(a) > q(best))
            best = a;
    return best;
}

DeterministicPolicy QWeights::greedy(const FeatureBasis& basis) const {
    std::vector<Index> actions(static_cast<std::size_t>(basis.n_states()));
    for (Index s = 0; s < basis.n_states(); ++s)
        actions[static_cast<std::size_t>(s)] = act(basis.row(s).transpose());
    return DeterministicPolicy(std::move(actions));
}

namespace {

std::vector<Index> batch_actions(const std::vector<LstdqSample>& batch, const QWeights& q) {
    std::vector<Index> actions;
    for (const LstdqSample& s : batch)
        for (const Successor& next : s.successors)
            actions.push_back(next.terminal ? -1 : q.act(next.features));
    return actions;
}

} // namespace

ApiResult api_solve(const std::vector<LstdqSample>& batch, Index n_actions, double gamma, const ApiConfig& config,
                    std::uint64_t seed) {
    config.validate();
    if (batch.empty())
        throw std::invalid_argument("API needs a nonempty sample batch");
    if (n_actions < 1)
        throw std::invalid_argument("API needs at least one action");
    const Index k = batch.front().features.size();
    const Index dim = k * n_actions;

    Rng rng(seed);
    ApiResult result;
    result.q.w.resize(k, n_actions);
    for (Index a = 0; a < n_actions; ++a)
        for (Index j = 0; j < k; ++j)
            result.q.w(j, a) = rng.uniform(-1.0, 1.0);

    std::vector<Index> previous = batch_actions(batch, result.q);
    // operation count, converted to reference milliseconds at the end
    double work = 0.0;
    for (long it = 1; it <= config.max_iterations; ++it) {
        MatrixXd A = config.ridge * MatrixXd::Identity(dim, dim);
        VectorXd b = VectorXd::Zero(dim);
        for (const LstdqSample& s : batch) {
            VectorXd psi = VectorXd::Zero(dim);
            psi.segment(s.action * k, k) = s.features;
            VectorXd next = VectorXd::Zero(dim);
            for (const Successor& succ : s.successors) {
                if (succ.terminal)
                    continue;
                const Index a = result.q.act(succ.features);
                next.segment(a * k, k) += succ.probability * succ.features;
            }
            A.noalias() += psi * (psi - gamma * next).transpose();
            b += s.reward * psi;
            work += static_cast<double>(dim) * dim + static_cast<double>(s.successors.size()) * dim * 2;
        }
        work += static_cast<double>(dim) * dim * dim;
        Eigen::PartialPivLU<MatrixXd> lu(A);
        const VectorXd w = lu.solve(b);
        if (!w.allFinite() || (A * w - b).cwiseAbs().maxCoeff() > 1e-6 * (1.0 + b.cwiseAbs().maxCoeff()))
            throw NumericalError("LSTDQ system is singular even with the ridge term");
        QWeights next_q;
        next_q.w = Eigen::Map<const MatrixXd>(w.data(), k, n_actions);
        const double change = (next_q.w - result.q.w).cwiseAbs().maxCoeff();
        result.q = next_q;
        result.iterations = it;
        std::vector<Index> actions = batch_actions(batch, result.q);
        if (actions == previous || change <= config.tolerance) {
            result.converged = true;
            break;
        }
        previous = std::move(actions);
    }
    result.work_ms = work / optim::WorkBudget::kUnitsPerMs;
    return result;
}

ApiResult api_solve(const SampleSet& samples, double gamma, const ApiConfig& config, std::uint64_t seed) {
    samples.validate();
    std::vector<LstdqSample> batch;
    batch.reserve(samples.transitions.size());
    for (const Transition& t : samples.transitions)
        batch.push_back({t.features, t.action, t.reward, {{1.0, t.next_features, t.terminal}}});
    return api_solve(batch, samples.n_actions, gamma, config, seed);
}

std::vector<LstdqSample> model_batch(const TabularMdp& mdp, const FeatureBasis& basis) {
    if (basis.n_states() != mdp.n_states())
        throw std::invalid_argument("basis does not match the MDP");
    std::vector<LstdqSample> batch;
    for (Index a = 0; a < mdp.n_actions(); ++a) {
        for (Index s = 0; s < mdp.n_states(); ++s) {
            LstdqSample sample{basis.row(s).transpose(), a, mdp.reward(s, a), {}};
            for (Index t = 0; t < mdp.n_states(); ++t)
                if (mdp.transition(a, s, t) > 0.0)
                    sample.successors.push_back({mdp.transition(a, s, t), basis.row(t).transpose(), false});
            batch.push_back(std::move(sample));
        }
    }
    return batch;
}

} // namespace dradp
