#pragma once

#include "dradp/problem.hpp"

#include <optional>

namespace dradp {

struct AlpResult {
    VectorXd weights;
    /// Phi x on the represented states.
    ValueFunction value;
    /// Greedy policy of Phi x over the represented states.
    DeterministicPolicy policy;
    /// Simplex work in reference milliseconds.
    double work_ms = 0.0;
};

/**
 * Approximate linear program: min w' Phi x subject to (A Phi) x >= b over
 * the problem's pairs. The state weights default to the initial
 * distribution (Phi' alpha); in tabular mode other weights may be given.
 *
 * Throws std::invalid_argument when the weights make the LP unbounded.
 */
AlpResult alp_solve(const DradpProblem& problem, const std::optional<VectorXd>& state_weights = std::nullopt);

} // namespace dradp
