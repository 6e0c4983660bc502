#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dradp::optim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class RowType { less_equal, equal, greater_equal };

/// One constraint row, stored sparsely.
struct Row {
    std::vector<std::pair<Index, double>> terms;
    RowType type = RowType::less_equal;
    double rhs = 0.0;
};

/**
 * Linear program in general form:
 *
 *   min/max c'x  s.t.  row_i(x) {<=, =, >=} rhs_i,  lower <= x <= upper.
 *
 * Bounds may be infinite. Variables default to [0, +inf) with zero cost.
 */
class LinearProgram {
public:
    explicit LinearProgram(Index n_vars = 0, Sense sense = Sense::minimize);

    Index n_vars() const { return cost_.size(); }
    Index n_rows() const { return static_cast<Index>(rows_.size()); }

    Sense sense() const { return sense_; }
    void set_sense(Sense s) { sense_ = s; }

    /// Appends a variable and returns its index.
    Index add_variable(double cost, double lower = 0.0, double upper = kInfinity);
    /// Appends a row and returns its index. Duplicate column indices are summed.
    Index add_row(std::vector<std::pair<Index, double>> terms, RowType type, double rhs);
    Index add_dense_row(const VectorXd& coeffs, RowType type, double rhs);

    void set_cost(Index j, double c) { cost_(j) = c; }
    void set_bounds(Index j, double lo, double hi) {
        lower_(j) = lo;
        upper_(j) = hi;
    }

    const VectorXd& cost() const { return cost_; }
    const VectorXd& lower() const { return lower_; }
    const VectorXd& upper() const { return upper_; }
    VectorXd& lower() { return lower_; }
    VectorXd& upper() { return upper_; }
    const std::vector<Row>& rows() const { return rows_; }
    const Row& row(Index i) const { return rows_[static_cast<std::size_t>(i)]; }

    MatrixXd constraint_matrix() const;
    VectorXd rhs() const;

    /// Row activities A x.
    VectorXd activities(const VectorXd& x) const;
    double objective(const VectorXd& x) const { return cost_.dot(x); }

    /// Largest violation of rows and bounds at x (0 when feasible).
    double max_violation(const VectorXd& x) const;

    /// Throws std::invalid_argument on out-of-range columns, non-finite
    /// data, or crossed bounds.
    void validate() const;

private:
    Sense sense_;
    VectorXd cost_;
    VectorXd lower_;
    VectorXd upper_;
    std::vector<Row> rows_;
};

/// Plain-text dump of the problem, one row per line.
void write_lp(std::ostream& os, const LinearProgram& lp);

/**
 * Deterministic work accounting. Solvers charge roughly one unit per
 * floating-point multiply-add of dense tableau work, so a budget expressed in
 * units makes time limits reproducible across runs and machines.
 */
class WorkBudget {
public:
    /// Units charged per millisecond of the reference machine.
    static constexpr double kUnitsPerMs = 1.5e6;

    explicit WorkBudget(double limit_units = kInfinity) : limit_(limit_units) {}
    static WorkBudget from_time_limit_ms(double ms) { return WorkBudget(ms * kUnitsPerMs); }

    void charge(double units) { used_ += units; }
    bool exhausted() const { return used_ >= limit_; }
    double used() const { return used_; }
    double limit() const { return limit_; }
    /// Work done, in reference milliseconds.
    double used_ms() const { return used_ / kUnitsPerMs; }

private:
    double limit_;
    double used_ = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded, work_limit };

std::string to_string(LpStatus status);

/// Basis snapshot used to warm-start a re-solve after bound changes.
struct Basis {
    enum class VarState : signed char { basic, at_lower, at_upper, free_zero };
    std::vector<Index> head;           ///< basic variable of each row
    std::vector<VarState> state;       ///< per structural + logical variable
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    VectorXd x;               ///< structural values
    double objective = 0.0;   ///< in the problem's own sense
    /// Row duals y with c - A'y = reduced_costs, in the problem's own sense.
    VectorXd duals;
    VectorXd reduced_costs;
    Basis basis;
    long iterations = 0;
    double work = 0.0;
};

} // namespace dradp::optim
