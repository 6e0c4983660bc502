#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dradp {

using Eigen::Index;
using Eigen::VectorXd;

/// One observed (s, a, r, s') step, with states given by their features.
struct Transition {
    long episode = 0;
    long step = 0;
    VectorXd features;
    Index action = 0;
    double reward = 0.0;
    /// Features of the successor; ignored when terminal.
    VectorXd next_features;
    bool terminal = false;
};

/// Offline batch of transitions plus draws from the initial distribution.
struct SampleSet {
    Index n_actions = 0;
    Index n_features = 0;
    std::vector<Transition> transitions;
    std::vector<VectorXd> initial_features;
    /// Weight of each initial draw; empty means equal weights.
    std::vector<double> initial_weights;
    std::uint64_t seed = 0;

    bool empty() const { return transitions.empty(); }

    /// Throws std::invalid_argument when empty, when a feature vector has the
    /// wrong length, or when an action is out of range.
    void validate() const;

    /// Weighted mean of the initial-state features.
    VectorXd mean_initial_features() const;
};

/// CSV with header `ep,step,s_feat...,a,r,sp_feat...,terminal`. Initial-state
/// draws are written first as rows with step -1, action -1 and their weight
/// in the reward column.
void write_samples_csv(std::ostream& os, const SampleSet& samples);

} // namespace dradp
