#include "dradp/domains/samples.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dradp {

void SampleSet::validate() const {
    if (transitions.empty())
        throw std::invalid_argument("sample set is empty; collect at least one transition");
    if (n_actions < 1 || n_features < 1)
        throw std::invalid_argument("sample set needs positive action and feature counts");
    if (initial_features.empty())
        throw std::invalid_argument("sample set has no initial-state draws");
    if (!initial_weights.empty() && initial_weights.size() != initial_features.size())
        throw std::invalid_argument("initial weights do not match the initial-state draws");
    for (const auto& f : initial_features)
        if (f.size() != n_features || !f.allFinite())
            throw std::invalid_argument("initial-state features have the wrong dimension");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const Transition& t = transitions[i];
        if (t.features.size() != n_features || !t.features.allFinite() || !std::isfinite(t.reward) ||
            (!t.terminal && (t.next_features.size() != n_features || !t.next_features.allFinite())))
            throw std::invalid_argument("transition " + std::to_string(i) + " has malformed features or reward");
        if (t.action < 0 || t.action >= n_actions)
            throw std::invalid_argument("transition " + std::to_string(i) + " has an invalid action");
    }
}

VectorXd SampleSet::mean_initial_features() const {
    VectorXd mean = VectorXd::Zero(n_features);
    double total = 0.0;
    for (std::size_t i = 0; i < initial_features.size(); ++i) {
        const double w = initial_weights.empty() ? 1.0 : initial_weights[i];
        mean += w * initial_features[i];
        total += w;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("initial-state weights must have a positive sum");
    return mean / total;
}

void write_samples_csv(std::ostream& os, const SampleSet& samples) {
    const Index k = samples.n_features;
    os << "ep,step";
    for (Index j = 0; j < k; ++j)
        os << ",s_feat" << j;
    os << ",a,r";
    for (Index j = 0; j < k; ++j)
        os << ",sp_feat" << j;
    os << ",terminal\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < samples.initial_features.size(); ++i) {
        const double w = samples.initial_weights.empty() ? 1.0 : samples.initial_weights[i];
        os << static_cast<long>(i) << ",-1";
        for (Index j = 0; j < k; ++j)
            os << ',' << samples.initial_features[i](j);
        os << ",-1," << w;
        for (Index j = 0; j < k; ++j)
            os << ",0";
        os << ",0\n";
    }
    for (const Transition& t : samples.transitions) {
        os << t.episode << ',' << t.step;
        for (Index j = 0; j < k; ++j)
            os << ',' << t.features(j);
        os << ',' << t.action << ',' << t.reward;
        for (Index j = 0; j < k; ++j)
            os << ',' << (t.terminal ? 0.0 : t.next_features(j));
        os << ',' << (t.terminal ? 1 : 0) << '\n';
    }
}

} // namespace dradp
