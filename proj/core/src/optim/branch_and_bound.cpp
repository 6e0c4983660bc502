#include "dradp/optim/milp.hpp"

#include "dradp/errors.hpp"
#include "dradp/optim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace dradp::optim {

void MilpProgram::validate() const {
    lp.validate();
    std::vector<char> seen(static_cast<std::size_t>(lp.n_vars()), 0);
    for (Index j : binaries) {
        if (j < 0 || j >= lp.n_vars())
            throw std::invalid_argument("binary index " + std::to_string(j) + " is out of range");
        if (seen[static_cast<std::size_t>(j)])
            throw std::invalid_argument("binary index " + std::to_string(j) + " is repeated");
        seen[static_cast<std::size_t>(j)] = 1;
        if (lp.lower()(j) < 0.0 || lp.upper()(j) > 1.0)
            throw std::invalid_argument("binary variable " + std::to_string(j) + " has bounds outside [0, 1]");
    }
}

std::string to_string(MilpStatus status) {
    switch (status) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::feasible_incumbent: return "feasible_incumbent";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::time_limit_no_incumbent: return "time_limit_no_incumbent";
    }
    return "unknown";
}

double relative_gap(double bound, double incumbent) {
    return std::abs(bound - incumbent) / (1.0 + std::abs(incumbent));
}

bool milp_feasible(const MilpProgram& milp, const VectorXd& x, double tol) {
    if (x.size() != milp.lp.n_vars() || !x.allFinite())
        return false;
    for (Index j : milp.binaries)
        if (std::min(std::abs(x(j)), std::abs(x(j) - 1.0)) > tol)
            return false;
    return milp.lp.max_violation(x) <= tol;
}

namespace {

struct Node {
    long id = 0;
    /// Bound in maximization terms (larger is better).
    double bound = 0.0;
    /// Per binary: -1 free, otherwise the fixed value.
    std::vector<signed char> fixed;
    std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound)
            return a.bound < b.bound;
        return a.id > b.id;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const MilpProgram& milp, const MilpOptions& options)
        : milp_(milp), opt_(options), sign_(milp.lp.sense() == Sense::maximize ? 1.0 : -1.0),
          own_budget_(WorkBudget::from_time_limit_ms(options.time_limit_ms)),
          budget_(options.budget ? options.budget : &own_budget_), work_start_(budget_->used()) {}

    MilpSolution run() {
        if (opt_.incumbent_seed)
            offer(*opt_.incumbent_seed);

        const double external = opt_.objective_bound ? sign_ * *opt_.objective_bound : kInfinity;
        std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
        Node root;
        root.id = next_id_++;
        root.bound = external;
        root.fixed.assign(milp_.binaries.size(), -1);
        open.push(std::move(root));

        LinearProgram relaxation = milp_.lp;
        bool out_of_work = false;
        double reported_bound = external;

        while (!open.empty()) {
            const double global = std::min(open.top().bound, external);
            reported_bound = std::min(reported_bound, global);
            if (has_incumbent_ && (global <= best_ + prune_tol() ||
                                   relative_gap(reported_bound, best_) <= opt_.gap_tol))
                break;
            if (budget_->exhausted()) {
                out_of_work = true;
                break;
            }

            Node node = open.top();
            open.pop();
            if (has_incumbent_ && node.bound <= best_ + prune_tol())
                continue;

            for (std::size_t k = 0; k < milp_.binaries.size(); ++k) {
                const Index j = milp_.binaries[k];
                if (node.fixed[k] < 0) {
                    relaxation.set_bounds(j, milp_.lp.lower()(j), milp_.lp.upper()(j));
                } else {
                    relaxation.set_bounds(j, node.fixed[k], node.fixed[k]);
                }
            }
            SimplexOptions sopt;
            sopt.budget = budget_;
            sopt.warm_start = node.basis.get();
            LpSolution lp;
            try {
                lp = simplex_solve(relaxation, sopt);
            } catch (const NumericalError&) {
                if (!sopt.warm_start)
                    throw;
                // an inherited basis can be badly conditioned for this node
                sopt.warm_start = nullptr;
                lp = simplex_solve(relaxation, sopt);
            }
            ++nodes_;

            if (lp.status == LpStatus::work_limit) {
                open.push(std::move(node));
                out_of_work = true;
                break;
            }
            if (lp.status == LpStatus::unbounded)
                throw UnboundedError("the MILP relaxation is unbounded");

            if (lp.status == LpStatus::optimal) {
                const double value = std::min(sign_ * lp.objective, node.bound);
                if (!has_incumbent_ || value > best_ + prune_tol())
                    expand(node, lp, value, open);
            }
            double current = open.empty() ? -kInfinity : std::min(open.top().bound, external);
            if (has_incumbent_)
                current = std::max(current, best_);
            reported_bound = std::min(reported_bound, current);
            if (opt_.record_log)
                log_.push_back({nodes_, sign_ * reported_bound, has_incumbent_ ? sign_ * best_ : std::nan("")});
        }

        MilpSolution sol;
        sol.nodes = nodes_;
        sol.work_ms = (budget_->used() - work_start_) / WorkBudget::kUnitsPerMs;
        sol.log = std::move(log_);
        sol.incumbent_history = std::move(history_);
        double bound;
        if (open.empty())
            bound = has_incumbent_ ? best_ : -kInfinity;
        else
            bound = std::min(std::min(open.top().bound, external), reported_bound);
        if (has_incumbent_)
            bound = std::max(bound, best_);
        sol.best_bound = sign_ * bound;
        if (!has_incumbent_) {
            sol.status = out_of_work ? MilpStatus::time_limit_no_incumbent : MilpStatus::infeasible;
            sol.gap = kInfinity;
            return sol;
        }
        sol.incumbent = incumbent_;
        sol.objective = sign_ * best_;
        sol.gap = relative_gap(bound, best_);
        sol.status = (open.empty() || sol.gap <= opt_.gap_tol || bound <= best_ + prune_tol())
                         ? MilpStatus::optimal
                         : MilpStatus::feasible_incumbent;
        return sol;
    }

private:
    double prune_tol() const { return 1e-9 * (1.0 + std::abs(best_)); }

    void offer(const VectorXd& x) {
        if (!milp_feasible(milp_, x, opt_.integrality_tol))
            return;
        const double value = sign_ * milp_.lp.objective(x);
        if (has_incumbent_ && value <= best_)
            return;
        has_incumbent_ = true;
        best_ = value;
        incumbent_ = x;
        history_.push_back(sign_ * value);
    }

    void expand(const Node& node, const LpSolution& lp, double value,
                std::priority_queue<Node, std::vector<Node>, NodeOrder>& open) {
        std::size_t branch = milp_.binaries.size();
        double most = -1.0;
        for (std::size_t k = 0; k < milp_.binaries.size(); ++k) {
            const double v = lp.x(milp_.binaries[k]);
            const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
            if (frac > opt_.integrality_tol && frac > most + 1e-12) {
                most = frac;
                branch = k;
            }
        }
        if (branch == milp_.binaries.size()) {
            offer(lp.x);
            return;
        }
        if (opt_.heuristic)
            if (auto candidate = opt_.heuristic(lp.x))
                offer(*candidate);
        if (has_incumbent_ && value <= best_ + prune_tol())
            return;

        auto basis = std::make_shared<const Basis>(lp.basis);
        for (signed char side : {0, 1}) {
            Node child;
            child.id = next_id_++;
            child.bound = value;
            child.fixed = node.fixed;
            child.fixed[branch] = side;
            child.basis = basis;
            open.push(std::move(child));
        }
    }

    const MilpProgram& milp_;
    const MilpOptions& opt_;
    double sign_;
    WorkBudget own_budget_;
    WorkBudget* budget_;
    double work_start_;
    bool has_incumbent_ = false;
    double best_ = -kInfinity;
    VectorXd incumbent_;
    long nodes_ = 0;
    long next_id_ = 0;
    std::vector<NodeLogEntry> log_;
    std::vector<double> history_;
};

} // namespace

MilpSolution branch_and_bound(const MilpProgram& milp, const MilpOptions& options) {
    milp.validate();
    BranchAndBound solver(milp, options);
    return solver.run();
}

} // namespace dradp::optim
