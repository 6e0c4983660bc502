#include "dradp/feature_basis.hpp"

#include <stdexcept>
#include <string>

namespace dradp {

FeatureBasis::FeatureBasis(MatrixXd features) : phi_(std::move(features)) {
    if (phi_.rows() == 0 || phi_.cols() == 0)
        throw std::invalid_argument("feature basis must have at least one state and one feature");
    if (!phi_.allFinite())
        throw std::invalid_argument("feature basis has non-finite entries");
    for (Index j = 0; j < phi_.cols(); ++j) {
        if ((phi_.col(j).array() == 1.0).all()) {
            constant_ = j;
            return;
        }
    }
    throw std::invalid_argument("feature basis must contain a column of ones");
}

FeatureBasis tabular_basis(Index n_states) {
    if (n_states < 1)
        throw std::invalid_argument("tabular basis needs at least one state");
    MatrixXd phi = MatrixXd::Zero(n_states, n_states);
    phi.col(0).setOnes();
    for (Index s = 1; s < n_states; ++s)
        phi(s, s) = 1.0;
    return FeatureBasis(std::move(phi));
}

FeatureBasis constant_basis(Index n_states) {
    if (n_states < 1)
        throw std::invalid_argument("constant basis needs at least one state");
    return FeatureBasis(MatrixXd::Ones(n_states, 1));
}

FeatureBasis chebyshev_basis(Index n_states, Index k) {
    if (n_states < 2 || k < 1)
        throw std::invalid_argument("Chebyshev basis needs at least two states and one feature");
    MatrixXd phi(n_states, k);
    for (Index s = 0; s < n_states; ++s) {
        const double x = 2.0 * static_cast<double>(s) / static_cast<double>(n_states - 1) - 1.0;
        phi(s, 0) = 1.0;
        if (k > 1)
            phi(s, 1) = x;
        for (Index j = 2; j < k; ++j)
            phi(s, j) = 2.0 * x * phi(s, j - 1) - phi(s, j - 2);
    }
    return FeatureBasis(std::move(phi));
}

} // namespace dradp
