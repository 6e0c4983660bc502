#pragma once

#include "dradp/optim/linear_program.hpp"

namespace dradp::optim {

struct SimplexOptions {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    /// Iteration cap; non-positive selects a size-dependent default.
    long max_iterations = 0;
    /// Pivots between refactorizations; non-positive selects a default.
    long refactor_interval = 0;
    /// Equilibrate rows and columns by powers of two before solving.
    bool scale = true;
    /// Starting basis, typically from a solve of the same problem with other
    /// bounds. Ignored when its shape does not match.
    const Basis* warm_start = nullptr;
    /// Shared work meter; the solve stops with status work_limit once it runs
    /// out.
    WorkBudget* budget = nullptr;
};

/**
 * Bounded-variable primal simplex on an explicit basis inverse.
 *
 * Phase 1 minimizes the sum of bound violations of the basic variables, so
 * any basis can serve as a starting point. Pricing is Dantzig's rule with a
 * Harris ratio test; after a run of 5 * (rows + cols) degenerate pivots the
 * solver switches to Bland's rule until progress resumes. Rows and columns
 * are equilibrated first; pivots are tightened if phase 2 loses feasibility.
 *
 * Throws NumericalError when pivoting stalls or the basis degenerates.
 */
LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

} // namespace dradp::optim
