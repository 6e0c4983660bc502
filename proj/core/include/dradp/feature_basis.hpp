#pragma once

#include <Eigen/Dense>

namespace dradp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/**
 * State features, one row per (represented) state. One column must be
 * exactly all ones: value functions can then be shifted by constants, which
 * several post-processing steps rely on.
 */
class FeatureBasis {
public:
    /// Throws std::invalid_argument for empty or non-finite matrices and when
    /// no column is identically one.
    explicit FeatureBasis(MatrixXd features);

    Index n_states() const { return phi_.rows(); }
    Index n_features() const { return phi_.cols(); }
    Index constant_column() const { return constant_; }
    const MatrixXd& matrix() const { return phi_; }
    auto row(Index s) const { return phi_.row(s); }

    /// Values Phi * weights.
    VectorXd values(const VectorXd& weights) const { return phi_ * weights; }

private:
    MatrixXd phi_;
    Index constant_ = 0;
};

/// The basis [1 | e_1 ... e_{n-1}]: invertible, so every value function is
/// representable, and its first column is constant.
FeatureBasis tabular_basis(Index n_states);

/// Only the constant column.
FeatureBasis constant_basis(Index n_states);

/// Chebyshev polynomials of the first kind T_0 .. T_{k-1} evaluated at the
/// state indices mapped affinely onto [-1, 1].
FeatureBasis chebyshev_basis(Index n_states, Index k);

} // namespace dradp
