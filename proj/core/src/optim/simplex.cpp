#include "dradp/optim/simplex.hpp"

#include "dradp/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dradp::optim {

namespace {

using VarState = Basis::VarState;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SimplexOptions& opt)
        : opt_(opt), n_(lp.n_vars()), m_(lp.n_rows()), total_(n_ + m_), sense_(lp.sense()) {
        std::vector<Eigen::Triplet<double>> triplets;
        b_.resize(m_);
        lo_.resize(total_);
        up_.resize(total_);
        cost_ = VectorXd::Zero(total_);
        for (Index i = 0; i < m_; ++i) {
            const Row& row = lp.row(i);
            for (const auto& [j, v] : row.terms)
                triplets.emplace_back(i, j, v);
            b_(i) = row.rhs;
            // logical s_i with a_i x + s_i = rhs_i
            switch (row.type) {
            case RowType::less_equal: lo_(n_ + i) = 0.0; up_(n_ + i) = kInfinity; break;
            case RowType::greater_equal: lo_(n_ + i) = -kInfinity; up_(n_ + i) = 0.0; break;
            case RowType::equal: lo_(n_ + i) = 0.0; up_(n_ + i) = 0.0; break;
            }
        }
        A_.resize(m_, n_);
        A_.setFromTriplets(triplets.begin(), triplets.end());
        A_.makeCompressed();
        lo_.head(n_) = lp.lower();
        up_.head(n_) = lp.upper();
        cost_.head(n_) = sense_ == Sense::maximize ? VectorXd(-lp.cost()) : lp.cost();
        row_scale_ = VectorXd::Ones(m_);
        col_scale_ = VectorXd::Ones(n_);
        if (opt.scale)
            equilibrate();

        max_iter_ = opt.max_iterations > 0 ? opt.max_iterations : 100 * (m_ + total_) + 10000;
        refactor_interval_ = opt.refactor_interval > 0 ? opt.refactor_interval : std::max<long>(100, m_ / 2);
        x_ = VectorXd::Zero(total_);
        pos_.assign(static_cast<std::size_t>(total_), -1);
        state_.assign(static_cast<std::size_t>(total_), VarState::at_lower);
    }

    LpSolution run() {
        if (!(opt_.warm_start && try_warm_start(*opt_.warm_start)))
            slack_start();

        long degenerate_run = 0;
        bool fresh_factor = true;
        for (;;) {
            if (opt_.budget && opt_.budget->exhausted())
                return finish(LpStatus::work_limit);
            if (iterations_ >= max_iter_)
                stall("iteration cap reached");

            const bool phase1 = set_phase_costs();
            if (phase1 && was_feasible_) {
                // phase 2 keeps feasibility in exact arithmetic, so losing it
                // means the updated inverse drifted: pivot more conservatively
                pivot_rel_ = std::min(1e-3, pivot_rel_ * 100.0);
                refactor_interval_ = std::max<long>(20, refactor_interval_ / 2);
            }
            was_feasible_ = !phase1;
            // bound flips leave the basis alone; skip the solve when the
            // phase costs did not change either
            if (!y_valid_ || cb_ != cb_used_) {
                y_ = Binv_.transpose() * cb_;
                cb_used_ = cb_;
                y_valid_ = true;
                charge(btran_cost() * static_cast<double>(m_) * m_);
            }
            const VectorXd& y = y_;
            charge(static_cast<double>(A_.nonZeros()) + total_ + m_);
            const bool bland = degenerate_run > 5 * (m_ + total_);
            const Index q = price(y, phase1, bland);
            if (q < 0) {
                if (!fresh_factor) {
                    refactor();
                    fresh_factor = true;
                    continue;
                }
                if (phase1)
                    return finish(LpStatus::infeasible);
                return finish(LpStatus::optimal);
            }

            const double dq = reduced_cost(q, y, phase1);
            const double dir = dq < 0.0 ? 1.0 : -1.0;
            const VectorXd alpha = column(q);
            charge(0.5 * static_cast<double>(m_) * std::max<Index>(1, column_nnz(q)));

            Index r = -1;
            double theta = kInfinity;
            bool leave_upper = false;
            ratio_test(alpha, dir, bland, r, theta, leave_upper);

            const double range = up_(q) - lo_(q);
            if (std::isfinite(range) && range <= theta) {
                // entering variable reaches its other bound first
                step(q, alpha, dir, range);
                state_[static_cast<std::size_t>(q)] = dir > 0.0 ? VarState::at_upper : VarState::at_lower;
                x_(q) = dir > 0.0 ? up_(q) : lo_(q);
                ++iterations_;
                degenerate_run = range < 1e-12 ? degenerate_run + 1 : 0;
                continue;
            }
            if (r < 0) {
                if (!phase1)
                    return finish(LpStatus::unbounded);
                if (!fresh_factor) {
                    refactor();
                    fresh_factor = true;
                    continue;
                }
                stall("phase 1 direction without a blocking variable");
            }

            step(q, alpha, dir, theta);
            pivot(r, q, alpha, leave_upper);
            ++iterations_;
            ++since_refactor_;
            fresh_factor = false;
            degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;
            if (since_refactor_ >= refactor_interval_) {
                refactor();
                fresh_factor = true;
            }
        }
    }

private:
    /// Geometric scaling passes rounded to powers of two, so the scaled data
    /// is exact. Logicals keep coefficient 1 and their 0 / infinite bounds.
    void equilibrate() {
        if (A_.nonZeros() == 0)
            return;
        auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
        for (int pass = 0; pass < 4; ++pass) {
            VectorXd rmin = VectorXd::Constant(m_, kInfinity), rmax = VectorXd::Zero(m_);
            for (Index j = 0; j < n_; ++j)
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it) {
                    const double a = std::abs(it.value());
                    rmin(it.row()) = std::min(rmin(it.row()), a);
                    rmax(it.row()) = std::max(rmax(it.row()), a);
                }
            VectorXd r = VectorXd::Ones(m_);
            for (Index i = 0; i < m_; ++i)
                if (rmax(i) > 0.0)
                    r(i) = pow2(1.0 / std::sqrt(rmin(i) * rmax(i)));
            VectorXd c = VectorXd::Ones(n_);
            for (Index j = 0; j < n_; ++j) {
                double lo = kInfinity, hi = 0.0;
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it) {
                    const double a = std::abs(it.value()) * r(it.row());
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
                if (hi > 0.0)
                    c(j) = pow2(1.0 / std::sqrt(lo * hi));
            }
            if ((r.array() == 1.0).all() && (c.array() == 1.0).all())
                break;
            for (Index j = 0; j < n_; ++j)
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
                    it.valueRef() *= r(it.row()) * c(j);
            b_.array() *= r.array();
            row_scale_.array() *= r.array();
            col_scale_.array() *= c.array();
        }
        lo_.head(n_).array() /= col_scale_.array();
        up_.head(n_).array() /= col_scale_.array();
        cost_.head(n_).array() *= col_scale_.array();
        charge(8.0 * static_cast<double>(A_.nonZeros()));
    }

    /// Units per entry of a dense product with the inverse; memory bound
    /// once the inverse leaves cache.
    double btran_cost() const {
        return 0.5 + 0.75 * std::clamp((static_cast<double>(m_) - 1000.0) / 2000.0, 0.0, 1.0);
    }

    void charge(double units) {
        work_ += units;
        if (opt_.budget)
            opt_.budget->charge(units);
    }

    Index column_nnz(Index j) const {
        if (j >= n_)
            return 1;
        return A_.outerIndexPtr()[j + 1] - A_.outerIndexPtr()[j];
    }

    double initial_value(Index j) const {
        if (std::isfinite(lo_(j)))
            return lo_(j);
        if (std::isfinite(up_(j)))
            return up_(j);
        return 0.0;
    }

    void place_nonbasic(Index j, VarState hint) {
        const auto sj = static_cast<std::size_t>(j);
        pos_[sj] = -1;
        if (hint == VarState::at_upper && std::isfinite(up_(j))) {
            state_[sj] = VarState::at_upper;
            x_(j) = up_(j);
        } else if (std::isfinite(lo_(j))) {
            state_[sj] = VarState::at_lower;
            x_(j) = lo_(j);
        } else if (std::isfinite(up_(j))) {
            state_[sj] = VarState::at_upper;
            x_(j) = up_(j);
        } else {
            state_[sj] = VarState::free_zero;
            x_(j) = 0.0;
        }
    }

    void slack_start() {
        head_.resize(static_cast<std::size_t>(m_));
        for (Index j = 0; j < n_; ++j)
            place_nonbasic(j, VarState::at_lower);
        for (Index i = 0; i < m_; ++i) {
            const Index j = n_ + i;
            head_[static_cast<std::size_t>(i)] = j;
            pos_[static_cast<std::size_t>(j)] = i;
            state_[static_cast<std::size_t>(j)] = VarState::basic;
        }
        Binv_ = MatrixXd::Identity(m_, m_);
        y_valid_ = false;
        recompute_basics();
    }

    bool try_warm_start(const Basis& basis) {
        if (static_cast<Index>(basis.head.size()) != m_ || static_cast<Index>(basis.state.size()) != total_)
            return false;
        std::vector<char> seen(static_cast<std::size_t>(total_), 0);
        for (Index j : basis.head) {
            if (j < 0 || j >= total_ || seen[static_cast<std::size_t>(j)])
                return false;
            seen[static_cast<std::size_t>(j)] = 1;
        }
        head_ = basis.head;
        for (Index j = 0; j < total_; ++j) {
            if (seen[static_cast<std::size_t>(j)])
                continue;
            place_nonbasic(j, basis.state[static_cast<std::size_t>(j)]);
        }
        for (Index i = 0; i < m_; ++i) {
            const Index j = head_[static_cast<std::size_t>(i)];
            pos_[static_cast<std::size_t>(j)] = i;
            state_[static_cast<std::size_t>(j)] = VarState::basic;
        }
        if (!factor())
            return false;
        recompute_basics();
        return true;
    }

    /// Rebuilds the inverse of the basis matrix; false when singular.
    bool factor() {
        MatrixXd B = MatrixXd::Zero(m_, m_);
        for (Index i = 0; i < m_; ++i) {
            const Index j = head_[static_cast<std::size_t>(i)];
            if (j >= n_)
                B(j - n_, i) = 1.0;
            else
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
                    B(it.row(), i) = it.value();
        }
        charge(0.8 * static_cast<double>(m_) * m_ * m_);
        if (m_ == 0) {
            Binv_.resize(0, 0);
            return true;
        }
        Eigen::PartialPivLU<MatrixXd> lu(B);
        if (!(lu.rcond() > 1e-13))
            return false;
        Binv_ = lu.inverse();
        y_valid_ = false;
        return Binv_.allFinite();
    }

    void refactor() {
        if (!factor()) {
            repair_basis();
            if (!factor())
                stall("basis matrix became singular");
        }
        recompute_basics();
        since_refactor_ = 0;
    }

    /// Replaces dependent basic columns by logicals of the rows they leave
    /// uncovered. Keeping the pivot rows of the independent columns makes the
    /// repaired basis block triangular, hence nonsingular.
    void repair_basis() {
        MatrixXd B = MatrixXd::Zero(m_, m_);
        for (Index i = 0; i < m_; ++i) {
            const Index j = head_[static_cast<std::size_t>(i)];
            if (j >= n_)
                B(j - n_, i) = 1.0;
            else
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
                    B(it.row(), i) = it.value();
        }
        charge(1.5 * static_cast<double>(m_) * m_ * m_);
        Eigen::FullPivLU<MatrixXd> lu(B);
        lu.setThreshold(1e-9);
        const Index rank = lu.rank();
        const auto& cols = lu.permutationQ().indices();
        const auto& rows = lu.permutationP().indices();
        std::vector<char> keep(static_cast<std::size_t>(m_), 0);
        for (Index t = 0; t < rank; ++t)
            keep[static_cast<std::size_t>(cols(t))] = 1;
        // P * B * Q = L U: row t of the permuted system is original row inverse(P)(t)
        std::vector<Index> row_at(static_cast<std::size_t>(m_));
        for (Index i = 0; i < m_; ++i)
            row_at[static_cast<std::size_t>(rows(i))] = i;
        std::vector<char> uncovered(static_cast<std::size_t>(m_), 0);
        for (Index t = rank; t < m_; ++t)
            uncovered[static_cast<std::size_t>(row_at[static_cast<std::size_t>(t)])] = 1;
        // a logical of an uncovered row can only sit in a dependent position
        for (Index i = 0; i < m_; ++i) {
            const Index j = head_[static_cast<std::size_t>(i)];
            if (!keep[static_cast<std::size_t>(i)] && j >= n_ && uncovered[static_cast<std::size_t>(j - n_)]) {
                keep[static_cast<std::size_t>(i)] = 1;
                uncovered[static_cast<std::size_t>(j - n_)] = 0;
            }
        }
        Index row = 0;
        for (Index i = 0; i < m_; ++i) {
            if (keep[static_cast<std::size_t>(i)])
                continue;
            while (!uncovered[static_cast<std::size_t>(row)])
                ++row;
            uncovered[static_cast<std::size_t>(row)] = 0;
            const Index out = head_[static_cast<std::size_t>(i)];
            const Index in = n_ + row;
            place_nonbasic(out, x_(out) >= up_(out) ? VarState::at_upper : VarState::at_lower);
            head_[static_cast<std::size_t>(i)] = in;
            pos_[static_cast<std::size_t>(in)] = i;
            state_[static_cast<std::size_t>(in)] = VarState::basic;
        }
    }

    void recompute_basics() {
        VectorXd rhs = b_;
        for (Index j = 0; j < total_; ++j) {
            if (pos_[static_cast<std::size_t>(j)] >= 0 || x_(j) == 0.0)
                continue;
            if (j >= n_)
                rhs(j - n_) -= x_(j);
            else
                for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
                    rhs(it.row()) -= it.value() * x_(j);
        }
        const VectorXd xb = Binv_ * rhs;
        for (Index i = 0; i < m_; ++i)
            x_(head_[static_cast<std::size_t>(i)]) = xb(i);
    }

    /// Fills cb_ for the current phase and reports whether phase 1 is active.
    bool set_phase_costs() {
        cb_.resize(m_);
        bool infeasible = false;
        for (Index i = 0; i < m_; ++i) {
            const Index j = head_[static_cast<std::size_t>(i)];
            if (x_(j) < lo_(j) - opt_.feasibility_tol) {
                cb_(i) = -1.0;
                infeasible = true;
            } else if (x_(j) > up_(j) + opt_.feasibility_tol) {
                cb_(i) = 1.0;
                infeasible = true;
            } else {
                cb_(i) = 0.0;
            }
        }
        if (!infeasible)
            for (Index i = 0; i < m_; ++i)
                cb_(i) = cost_(head_[static_cast<std::size_t>(i)]);
        return infeasible;
    }

    double reduced_cost(Index j, const VectorXd& y, bool phase1) const {
        const double c = phase1 ? 0.0 : cost_(j);
        if (j >= n_)
            return c - y(j - n_);
        double dot = 0.0;
        for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
            dot += it.value() * y(it.row());
        return c - dot;
    }

    Index price(const VectorXd& y, bool phase1, bool bland) const {
        const double tol = opt_.optimality_tol;
        Index best = -1;
        double best_score = 0.0;
        for (Index j = 0; j < total_; ++j) {
            const VarState s = state_[static_cast<std::size_t>(j)];
            if (s == VarState::basic || lo_(j) == up_(j))
                continue;
            const double d = reduced_cost(j, y, phase1);
            bool eligible = false;
            if (s == VarState::at_lower)
                eligible = d < -tol;
            else if (s == VarState::at_upper)
                eligible = d > tol;
            else
                eligible = std::abs(d) > tol;
            if (!eligible)
                continue;
            if (bland)
                return j;
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
            }
        }
        return best;
    }

    VectorXd column(Index j) const {
        if (j >= n_)
            return Binv_.col(j - n_);
        VectorXd alpha = VectorXd::Zero(m_);
        for (SparseMatrix::InnerIterator it(A_, j); it; ++it)
            alpha.noalias() += it.value() * Binv_.col(it.row());
        return alpha;
    }

    /// Bound a basic variable is heading for when its value moves with the
    /// given sign, or NaN when the move never blocks. Infeasible basics stop
    /// at the violated bound they reach first.
    double blocking_bound(Index j, double rate, bool& is_upper) const {
        const double ftol = opt_.feasibility_tol;
        const double x = x_(j);
        if (rate < 0.0) {
            if (x < lo_(j) - ftol)
                return std::nan("");
            if (x > up_(j) + ftol) {
                is_upper = true;
                return up_(j);
            }
            is_upper = false;
            return std::isfinite(lo_(j)) ? lo_(j) : std::nan("");
        }
        if (x > up_(j) + ftol)
            return std::nan("");
        if (x < lo_(j) - ftol) {
            is_upper = false;
            return lo_(j);
        }
        is_upper = true;
        return std::isfinite(up_(j)) ? up_(j) : std::nan("");
    }

    void ratio_test(const VectorXd& alpha, double dir, bool bland, Index& r, double& theta, bool& leave_upper) const {
        const double ftol = opt_.feasibility_tol;
        const double ptol = std::max(opt_.pivot_tol, pivot_rel_ * (m_ > 0 ? alpha.cwiseAbs().maxCoeff() : 0.0));
        r = -1;
        theta = kInfinity;
        if (bland) {
            for (Index i = 0; i < m_; ++i) {
                const double a = dir * alpha(i);
                if (std::abs(a) <= ptol)
                    continue;
                const Index j = head_[static_cast<std::size_t>(i)];
                bool upper = false;
                const double bound = blocking_bound(j, -a, upper);
                if (std::isnan(bound))
                    continue;
                const double ratio = std::max(0.0, (x_(j) - bound) / a);
                if (ratio < theta - 1e-12 ||
                    (ratio <= theta + 1e-12 && r >= 0 && j < head_[static_cast<std::size_t>(r)])) {
                    theta = ratio;
                    r = i;
                    leave_upper = upper;
                }
            }
            return;
        }
        // Harris: find the largest step allowed by bounds relaxed by the
        // feasibility tolerance, then take the largest pivot within it.
        double relaxed = kInfinity;
        for (Index i = 0; i < m_; ++i) {
            const double a = dir * alpha(i);
            if (std::abs(a) <= ptol)
                continue;
            bool upper = false;
            const Index j = head_[static_cast<std::size_t>(i)];
            const double bound = blocking_bound(j, -a, upper);
            if (std::isnan(bound))
                continue;
            const double slack = a > 0.0 ? x_(j) - bound + ftol : bound - x_(j) + ftol;
            relaxed = std::min(relaxed, slack / std::abs(a));
        }
        if (!std::isfinite(relaxed))
            return;
        double best_pivot = 0.0;
        for (Index i = 0; i < m_; ++i) {
            const double a = dir * alpha(i);
            if (std::abs(a) <= ptol)
                continue;
            bool upper = false;
            const Index j = head_[static_cast<std::size_t>(i)];
            const double bound = blocking_bound(j, -a, upper);
            if (std::isnan(bound))
                continue;
            const double ratio = (x_(j) - bound) / a;
            if (ratio <= relaxed && std::abs(a) > best_pivot) {
                best_pivot = std::abs(a);
                r = i;
                theta = std::max(0.0, ratio);
                leave_upper = upper;
            }
        }
    }

    void step(Index q, const VectorXd& alpha, double dir, double t) {
        if (t == 0.0)
            return;
        x_(q) += dir * t;
        for (Index i = 0; i < m_; ++i)
            x_(head_[static_cast<std::size_t>(i)]) -= dir * t * alpha(i);
    }

    void pivot(Index r, Index q, const VectorXd& alpha, bool leave_upper) {
        const Index leaving = head_[static_cast<std::size_t>(r)];
        const auto sl = static_cast<std::size_t>(leaving);
        pos_[sl] = -1;
        if (lo_(leaving) == up_(leaving) || !leave_upper) {
            state_[sl] = VarState::at_lower;
            x_(leaving) = lo_(leaving);
        } else {
            state_[sl] = VarState::at_upper;
            x_(leaving) = up_(leaving);
        }
        head_[static_cast<std::size_t>(r)] = q;
        pos_[static_cast<std::size_t>(q)] = r;
        state_[static_cast<std::size_t>(q)] = VarState::basic;

        const Eigen::RowVectorXd pivot_row = Binv_.row(r) / alpha(r);
        Binv_.noalias() -= alpha * pivot_row;
        Binv_.row(r) = pivot_row;
        y_valid_ = false;
        // the rank-one update becomes memory bound once the inverse leaves cache
        const double per_entry = 2.0 + 8.0 * std::clamp((static_cast<double>(m_) - 1000.0) / 2000.0, 0.0, 1.0);
        charge(per_entry * static_cast<double>(m_) * m_);
    }

    [[noreturn]] void stall(const std::string& reason) const {
        std::ostringstream os;
        os << "simplex stalled: " << reason << " (rows " << m_ << ", columns " << n_ << ", iterations "
           << iterations_ << ")";
        throw NumericalError(os.str());
    }

    LpSolution finish(LpStatus status) {
        LpSolution sol;
        sol.status = status;
        sol.iterations = iterations_;
        sol.work = work_;
        const double sign = sense_ == Sense::maximize ? -1.0 : 1.0;
        sol.objective = sign * cost_.head(n_).dot(x_.head(n_));
        sol.x = x_.head(n_).cwiseProduct(col_scale_);
        VectorXd cb(m_);
        for (Index i = 0; i < m_; ++i)
            cb(i) = cost_(head_[static_cast<std::size_t>(i)]);
        const VectorXd y = Binv_.transpose() * cb;
        sol.duals = sign * y.cwiseProduct(row_scale_);
        sol.reduced_costs = sign * (cost_.head(n_) - A_.transpose() * y).cwiseQuotient(col_scale_);
        sol.basis.head = head_;
        sol.basis.state = state_;
        return sol;
    }

    const SimplexOptions& opt_;
    Index n_, m_, total_;
    Sense sense_;
    SparseMatrix A_;
    VectorXd b_, lo_, up_, cost_, x_, cb_;
    /// Scaled data is R A C, R b, C^{-1} bounds and C c.
    VectorXd row_scale_, col_scale_;
    MatrixXd Binv_;
    std::vector<Index> head_;
    std::vector<Index> pos_;
    std::vector<VarState> state_;
    long max_iter_ = 0;
    VectorXd y_;
    VectorXd cb_used_;
    bool y_valid_ = false;
    long refactor_interval_ = 0;
    /// Pivot tolerance relative to the largest entry of the entering column.
    double pivot_rel_ = 1e-9;
    bool was_feasible_ = false;
    long since_refactor_ = 0;
    long iterations_ = 0;
    double work_ = 0.0;
};

} // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
    lp.validate();
    Simplex solver(lp, options);
    return solver.run();
}

} // namespace dradp::optim
