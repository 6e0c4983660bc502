#include "dradp/optim/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace dradp::optim {

LinearProgram::LinearProgram(Index n_vars, Sense sense)
    : sense_(sense), cost_(VectorXd::Zero(n_vars)), lower_(VectorXd::Zero(n_vars)),
      upper_(VectorXd::Constant(n_vars, kInfinity)) {}

Index LinearProgram::add_variable(double cost, double lower, double upper) {
    const Index j = n_vars();
    cost_.conservativeResize(j + 1);
    lower_.conservativeResize(j + 1);
    upper_.conservativeResize(j + 1);
    cost_(j) = cost;
    lower_(j) = lower;
    upper_(j) = upper;
    return j;
}

Index LinearProgram::add_row(std::vector<std::pair<Index, double>> terms, RowType type, double rhs) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Row row;
    row.type = type;
    row.rhs = rhs;
    for (const auto& [j, v] : terms) {
        if (!row.terms.empty() && row.terms.back().first == j)
            row.terms.back().second += v;
        else
            row.terms.emplace_back(j, v);
    }
    std::erase_if(row.terms, [](const auto& t) { return t.second == 0.0; });
    rows_.push_back(std::move(row));
    return n_rows() - 1;
}

Index LinearProgram::add_dense_row(const VectorXd& coeffs, RowType type, double rhs) {
    std::vector<std::pair<Index, double>> terms;
    for (Index j = 0; j < coeffs.size(); ++j)
        if (coeffs(j) != 0.0)
            terms.emplace_back(j, coeffs(j));
    return add_row(std::move(terms), type, rhs);
}

MatrixXd LinearProgram::constraint_matrix() const {
    MatrixXd A = MatrixXd::Zero(n_rows(), n_vars());
    for (Index i = 0; i < n_rows(); ++i)
        for (const auto& [j, v] : row(i).terms)
            A(i, j) = v;
    return A;
}

VectorXd LinearProgram::rhs() const {
    VectorXd b(n_rows());
    for (Index i = 0; i < n_rows(); ++i)
        b(i) = row(i).rhs;
    return b;
}

VectorXd LinearProgram::activities(const VectorXd& x) const {
    VectorXd act = VectorXd::Zero(n_rows());
    for (Index i = 0; i < n_rows(); ++i)
        for (const auto& [j, v] : row(i).terms)
            act(i) += v * x(j);
    return act;
}

double LinearProgram::max_violation(const VectorXd& x) const {
    if (x.size() != n_vars())
        throw std::invalid_argument("point has the wrong dimension");
    double worst = 0.0;
    for (Index j = 0; j < n_vars(); ++j) {
        worst = std::max(worst, lower_(j) - x(j));
        worst = std::max(worst, x(j) - upper_(j));
    }
    const VectorXd act = activities(x);
    for (Index i = 0; i < n_rows(); ++i) {
        const double r = row(i).rhs;
        switch (row(i).type) {
        case RowType::less_equal: worst = std::max(worst, act(i) - r); break;
        case RowType::greater_equal: worst = std::max(worst, r - act(i)); break;
        case RowType::equal: worst = std::max(worst, std::abs(act(i) - r)); break;
        }
    }
    return worst;
}

void LinearProgram::validate() const {
    if (!cost_.allFinite())
        throw std::invalid_argument("cost vector has non-finite entries");
    for (Index j = 0; j < n_vars(); ++j) {
        if (std::isnan(lower_(j)) || std::isnan(upper_(j)) || lower_(j) > upper_(j) || lower_(j) == kInfinity ||
            upper_(j) == -kInfinity)
            throw std::invalid_argument("invalid bounds on variable " + std::to_string(j));
    }
    for (Index i = 0; i < n_rows(); ++i) {
        if (!std::isfinite(row(i).rhs))
            throw std::invalid_argument("row " + std::to_string(i) + " has a non-finite right-hand side");
        for (const auto& [j, v] : row(i).terms) {
            if (j < 0 || j >= n_vars())
                throw std::invalid_argument("row " + std::to_string(i) + " references column " + std::to_string(j) +
                                            " outside the variable range");
            if (!std::isfinite(v))
                throw std::invalid_argument("row " + std::to_string(i) + " has a non-finite coefficient");
        }
    }
}

void write_lp(std::ostream& os, const LinearProgram& lp) {
    os << (lp.sense() == Sense::minimize ? "minimize" : "maximize");
    for (Index j = 0; j < lp.n_vars(); ++j)
        if (lp.cost()(j) != 0.0)
            os << ' ' << std::showpos << lp.cost()(j) << std::noshowpos << "*x" << j;
    os << "\nsubject to\n";
    for (Index i = 0; i < lp.n_rows(); ++i) {
        const Row& r = lp.row(i);
        os << "  r" << i << ':';
        for (const auto& [j, v] : r.terms)
            os << ' ' << std::showpos << v << std::noshowpos << "*x" << j;
        os << (r.type == RowType::less_equal ? " <= " : r.type == RowType::equal ? " = " : " >= ") << r.rhs << '\n';
    }
    os << "bounds\n";
    for (Index j = 0; j < lp.n_vars(); ++j)
        os << "  " << lp.lower()(j) << " <= x" << j << " <= " << lp.upper()(j) << '\n';
}

std::string to_string(LpStatus status) {
    switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::work_limit: return "work_limit";
    }
    return "unknown";
}

} // namespace dradp::optim
