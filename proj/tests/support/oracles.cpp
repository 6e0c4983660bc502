#include "oracles.hpp"

#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <vector>

namespace dradp::oracle {

using optim::LinearProgram;
using optim::RowType;
using optim::Sense;

TabularMdp swap_mdp() {
    MatrixXd stay = MatrixXd::Identity(2, 2);
    MatrixXd go(2, 2);
    go << 0, 1, 1, 0;
    MatrixXd reward(2, 2);
    reward << 0, 0, 1, 1;
    return TabularMdp({stay, go}, reward, 0.5, Eigen::Vector2d(1, 0));
}

TabularMdp random_mdp(Rng& rng, Index n_states, Index n_actions, double gamma) {
    std::vector<MatrixXd> P;
    for (Index a = 0; a < n_actions; ++a) {
        MatrixXd Pa = MatrixXd::Zero(n_states, n_states);
        for (Index s = 0; s < n_states; ++s) {
            // a few successors per row keeps the dynamics varied
            const Index k = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(std::min<Index>(n_states, 4))));
            for (Index t = 0; t < k; ++t)
                Pa(s, static_cast<Index>(rng.index(static_cast<std::uint64_t>(n_states)))) += rng.exponential();
            Pa.row(s) /= Pa.row(s).sum();
        }
        P.push_back(Pa);
    }
    MatrixXd reward(n_states, n_actions);
    for (Index s = 0; s < n_states; ++s)
        for (Index a = 0; a < n_actions; ++a)
            reward(s, a) = rng.uniform(-1.0, 1.0);
    VectorXd alpha(n_states);
    for (Index s = 0; s < n_states; ++s)
        alpha(s) = rng.exponential();
    alpha /= alpha.sum();
    return TabularMdp(P, reward, gamma, alpha);
}

MatrixXd random_basis(Rng& rng, Index n_states, Index k) {
    MatrixXd phi(n_states, k);
    for (Index s = 0; s < n_states; ++s) {
        phi(s, 0) = 1.0;
        for (Index j = 1; j < k; ++j)
            phi(s, j) = rng.uniform(-1.0, 1.0);
    }
    return phi;
}

RandomizedPolicy random_randomized_policy(Rng& rng, Index n_states, Index n_actions) {
    MatrixXd p(n_states, n_actions);
    for (Index s = 0; s < n_states; ++s) {
        for (Index a = 0; a < n_actions; ++a)
            p(s, a) = rng.exponential();
        p.row(s) /= p.row(s).sum();
    }
    return RandomizedPolicy(p);
}

DeterministicPolicy random_deterministic_policy(Rng& rng, Index n_states, Index n_actions) {
    std::vector<Index> actions(static_cast<std::size_t>(n_states));
    for (auto& a : actions)
        a = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n_actions)));
    return DeterministicPolicy(actions);
}

LinearProgram random_bounded_lp(Rng& rng, Index max_vars, Index max_rows) {
    const Index n = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(max_vars)));
    const Index m = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(max_rows)));
    LinearProgram lp(0, rng.uniform() < 0.5 ? Sense::minimize : Sense::maximize);
    VectorXd x0(n);
    for (Index j = 0; j < n; ++j) {
        const double lo = rng.uniform() < 0.5 ? 0.0 : rng.uniform(-5.0, 0.0);
        const double hi = lo + rng.uniform(0.5, 6.0);
        lp.add_variable(std::round(rng.uniform(-5.0, 5.0) * 4.0) / 4.0, lo, hi);
        x0(j) = rng.uniform(lo, hi);
    }
    for (Index i = 0; i < m; ++i) {
        VectorXd a(n);
        for (Index j = 0; j < n; ++j)
            a(j) = rng.uniform() < 0.25 ? 0.0 : std::round(rng.uniform(-4.0, 4.0) * 2.0) / 2.0;
        const double act = a.dot(x0);
        const double pick = rng.uniform();
        if (pick < 0.45)
            lp.add_dense_row(a, RowType::less_equal, act + rng.uniform(0.0, 2.0));
        else if (pick < 0.9)
            lp.add_dense_row(a, RowType::greater_equal, act - rng.uniform(0.0, 2.0));
        else
            lp.add_dense_row(a, RowType::equal, act);
    }
    return lp;
}

std::optional<double> vertex_enumeration(const LinearProgram& lp, double tol) {
    const Index n = lp.n_vars();
    // every constraint as g'x <= h
    std::vector<VectorXd> G;
    std::vector<double> h;
    auto add = [&](const VectorXd& g, double rhs) {
        G.push_back(g);
        h.push_back(rhs);
    };
    const MatrixXd A = lp.constraint_matrix();
    for (Index i = 0; i < lp.n_rows(); ++i) {
        const VectorXd a = A.row(i).transpose();
        const double r = lp.row(i).rhs;
        if (lp.row(i).type != RowType::greater_equal)
            add(a, r);
        if (lp.row(i).type != RowType::less_equal)
            add(-a, -r);
    }
    for (Index j = 0; j < n; ++j) {
        VectorXd e = VectorXd::Zero(n);
        e(j) = 1.0;
        if (std::isfinite(lp.upper()(j)))
            add(e, lp.upper()(j));
        if (std::isfinite(lp.lower()(j)))
            add(-e, -lp.lower()(j));
    }
    const Index K = static_cast<Index>(G.size());
    const double sign = lp.sense() == Sense::maximize ? 1.0 : -1.0;
    std::optional<double> best;
    if (n == 0) {
        for (Index i = 0; i < K; ++i)
            if (h[static_cast<std::size_t>(i)] < -tol)
                return std::nullopt;
        return 0.0;
    }
    std::vector<Index> pick(static_cast<std::size_t>(n));
    std::function<void(Index, Index)> rec = [&](Index depth, Index start) {
        if (depth == n) {
            MatrixXd M(n, n);
            VectorXd rhs(n);
            for (Index r = 0; r < n; ++r) {
                M.row(r) = G[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])].transpose();
                rhs(r) = h[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
            }
            Eigen::FullPivLU<MatrixXd> lu(M);
            if (lu.rank() < n)
                return;
            const VectorXd x = lu.solve(rhs);
            for (Index i = 0; i < K; ++i)
                if (G[static_cast<std::size_t>(i)].dot(x) > h[static_cast<std::size_t>(i)] + tol * (1.0 + std::abs(h[static_cast<std::size_t>(i)])))
                    return;
            const double value = lp.cost().dot(x);
            if (!best || sign * value > sign * *best)
                best = value;
            return;
        }
        for (Index i = start; i <= K - (n - depth); ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return best;
}

optim::MilpProgram random_milp(Rng& rng, Index max_binaries) {
    const Index nb = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(max_binaries)));
    const Index nc = static_cast<Index>(rng.index(3));
    optim::MilpProgram milp;
    milp.lp = LinearProgram(0, rng.uniform() < 0.5 ? Sense::maximize : Sense::minimize);
    for (Index j = 0; j < nb; ++j)
        milp.binaries.push_back(milp.lp.add_variable(std::round(rng.uniform(-10.0, 10.0)), 0.0, 1.0));
    for (Index j = 0; j < nc; ++j)
        milp.lp.add_variable(std::round(rng.uniform(-5.0, 5.0) * 4.0) / 4.0, rng.uniform(-3.0, 0.0), rng.uniform(0.5, 3.0));
    const Index n = nb + nc;
    const Index m = 1 + static_cast<Index>(rng.index(5));
    for (Index i = 0; i < m; ++i) {
        VectorXd a(n);
        for (Index j = 0; j < n; ++j)
            a(j) = rng.uniform() < 0.3 ? 0.0 : std::round(rng.uniform(-6.0, 9.0));
        const double total = a.cwiseAbs().sum();
        if (rng.uniform() < 0.7)
            milp.lp.add_dense_row(a, RowType::less_equal, std::round(rng.uniform(0.2, 0.6) * total));
        else
            milp.lp.add_dense_row(a, RowType::greater_equal, -std::round(rng.uniform(0.0, 0.4) * total));
    }
    return milp;
}

std::optional<double> exhaustive_milp(const optim::MilpProgram& milp) {
    const Index nb = static_cast<Index>(milp.binaries.size());
    const Index n = milp.lp.n_vars();
    const double sign = milp.lp.sense() == Sense::maximize ? 1.0 : -1.0;
    std::vector<char> is_binary(static_cast<std::size_t>(n), 0);
    for (Index j : milp.binaries)
        is_binary[static_cast<std::size_t>(j)] = 1;
    std::vector<Index> continuous;
    for (Index j = 0; j < n; ++j)
        if (!is_binary[static_cast<std::size_t>(j)])
            continuous.push_back(j);
    const MatrixXd A = milp.lp.constraint_matrix();

    std::optional<double> best;
    for (long mask = 0; mask < (1L << nb); ++mask) {
        VectorXd fixed = VectorXd::Zero(n);
        for (Index k = 0; k < nb; ++k)
            fixed(milp.binaries[static_cast<std::size_t>(k)]) = (mask >> k) & 1L ? 1.0 : 0.0;
        // the binaries become constants of an LP over the continuous variables
        LinearProgram reduced(0, milp.lp.sense());
        for (Index j : continuous)
            reduced.add_variable(milp.lp.cost()(j), milp.lp.lower()(j), milp.lp.upper()(j));
        for (Index i = 0; i < milp.lp.n_rows(); ++i) {
            VectorXd a(static_cast<Index>(continuous.size()));
            for (std::size_t c = 0; c < continuous.size(); ++c)
                a(static_cast<Index>(c)) = A(i, continuous[c]);
            reduced.add_dense_row(a, milp.lp.row(i).type, milp.lp.row(i).rhs - A.row(i).dot(fixed));
        }
        const auto value = vertex_enumeration(reduced);
        if (!value)
            continue;
        const double total = *value + milp.lp.cost().dot(fixed);
        if (!best || sign * total > sign * *best)
            best = total;
    }
    return best;
}

} // namespace dradp::oracle
