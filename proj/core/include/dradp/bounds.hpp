#pragma once

#include "dradp/feature_basis.hpp"
#include "dradp/mdp.hpp"

namespace dradp {

/// Smallest C with a distribution mu such that P(s, a, s') <= C mu(s').
struct Concentration {
    double C = 1.0;
    VectorXd mu;
};

/// m(s') = max_{s,a} P(s, a, s'), C = sum m, mu = m / C.
Concentration concentration_coefficient(const TabularMdp& mdp);

/// sigma = gamma * mu + (1 - gamma) * alpha.
VectorXd sigma_vector(const TabularMdp& mdp, const VectorXd& mu);

struct ResidualNorms {
    double linf = 0.0;
    double l1_sigma = 0.0;
};

/// ||v - Bv||_inf and the sigma-weighted L1 norm of v - Bv.
ResidualNorms bellman_residual_norms(const TabularMdp& mdp, const ValueFunction& v, const VectorXd& sigma);

/// (2 / (1 - gamma)) ||v - Bv||_inf at the given candidate.
double bound_simple(const TabularMdp& mdp, const ValueFunction& v);

/// min alpha'(v* - Phi x) subject to Phi x <= v*, solved exactly.
double bound_direct(const TabularMdp& mdp, const FeatureBasis& basis);
double bound_direct(const TabularMdp& mdp, const FeatureBasis& basis, const ValueFunction& v_star);

/**
 * min alpha'(v* - Phi x) subject to (I - gamma P*) Phi x <= r* for an
 * optimal policy. Its feasible set lies inside that of bound_direct
 * (Bellman-dominated values are below v*), so it is never smaller. It bounds
 * the loss of any maximizer of the lower bound: the optimal policy with
 * multipliers lambda1 = x and lambda2 = 0 on its own pairs is dual feasible.
 */
double bound_direct_certified(const TabularMdp& mdp, const FeatureBasis& basis);
/// (2 C / (1 - gamma)) ||v - Bv||_{1,sigma} with (C, mu) from
/// concentration_coefficient.
double bound_smooth(const TabularMdp& mdp, const ValueFunction& v);

} // namespace dradp
