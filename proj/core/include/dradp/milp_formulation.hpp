#pragma once

#include "dradp/optim/milp.hpp"
#include "dradp/problem.hpp"

namespace dradp {

/// Column and row offsets of the DRADP MILP.
///
/// Columns: lambda1 (k, free), lambda2 (m, >= 0), z (m, >= 0), pi (m,
/// binary), then lambda3 (n, >= 0) when mass caps are present.
/// Rows: McCormick z >= lambda2 - tau (1 - pi) (m), dual feasibility (m),
/// policy rows B pi = 1 (n), value box upper then lower per state (2n).
struct MilpLayout {
    Index k = 0, m = 0, n = 0;
    Index lambda1 = 0, lambda2 = 0, z = 0, pi = 0, lambda3 = -1;
    Index mccormick_rows = 0, dual_rows = 0, policy_rows = 0, box_rows = 0;
    Index n_vars = 0, n_rows = 0;
};

MilpLayout milp_layout(const DradpProblem& problem);

/// Maximize alpha' Phi lambda1 - 1'z (- (C sigma)' lambda3) over the
/// McCormick linearization of the bilinear program, with the value box
/// -V_box <= (Phi lambda1)(s) <= V_box on every represented state.
optim::MilpProgram build_milp(const DradpProblem& problem);

/// Feasible MILP point for a deterministic selection and multipliers:
/// lambda2 takes its minimal value and z its McCormick minimum.
VectorXd milp_point(const DradpProblem& problem, const std::vector<Index>& selected, const VectorXd& lambda1,
                    const VectorXd& lambda3);

} // namespace dradp
