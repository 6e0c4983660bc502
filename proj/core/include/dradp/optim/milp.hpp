#pragma once

#include "dradp/optim/linear_program.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dradp::optim {

/// Linear program in which some variables must take the values 0 or 1.
struct MilpProgram {
    LinearProgram lp;
    std::vector<Index> binaries;

    /// Throws std::invalid_argument when an index is out of range, repeated,
    /// or its bounds are not within [0, 1].
    void validate() const;
};

enum class MilpStatus { optimal, feasible_incumbent, infeasible, time_limit_no_incumbent };

std::string to_string(MilpStatus status);

struct NodeLogEntry {
    long node = 0;
    double best_bound = 0.0;
    /// NaN until an incumbent exists.
    double incumbent = 0.0;
};

struct MilpOptions {
    double time_limit_ms = 60000.0;
    /// Stop once |bound - incumbent| / (1 + |incumbent|) <= gap_tol.
    double gap_tol = 1e-6;
    /// Tolerance for accepting a vector as integer feasible.
    double integrality_tol = 1e-6;
    /// Feasible starting point; rejected silently when infeasible.
    std::optional<VectorXd> incumbent_seed;
    /// Called with every fractional node solution; may return a candidate
    /// solution, which is checked before use.
    std::function<std::optional<VectorXd>(const VectorXd&)> heuristic;
    /// Externally known bound on the optimum (an upper bound when
    /// maximizing), used to tighten the reported bound and stop early.
    std::optional<double> objective_bound;
    bool record_log = false;
    /// Shared work meter. When null, one is created from time_limit_ms.
    WorkBudget* budget = nullptr;
};

struct MilpSolution {
    MilpStatus status = MilpStatus::infeasible;
    VectorXd incumbent;
    double objective = 0.0;
    double best_bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    double work_ms = 0.0;
    std::vector<NodeLogEntry> log;
    /// Objective of each accepted incumbent, in acceptance order.
    std::vector<double> incumbent_history;

    bool has_incumbent() const {
        return status == MilpStatus::optimal || status == MilpStatus::feasible_incumbent;
    }
};

/// Relative gap |bound - incumbent| / (1 + |incumbent|).
double relative_gap(double bound, double incumbent);

/**
 * Best-bound-first branch and bound over the binary variables, branching on
 * the most fractional binary (ties to the lowest index). Children reuse the
 * parent's optimal basis. Results are deterministic for identical inputs,
 * since the time limit is measured in work units rather than wall time.
 *
 * Throws UnboundedError when a node relaxation is unbounded.
 */
MilpSolution branch_and_bound(const MilpProgram& milp, const MilpOptions& options = {});

/// True when x satisfies every row and bound within tol and every binary is
/// within tol of 0 or 1.
bool milp_feasible(const MilpProgram& milp, const VectorXd& x, double tol);

} // namespace dradp::optim
