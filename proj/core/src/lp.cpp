#include "structsel/lp.hpp"

#include <stdexcept>

#include "structsel/errors.hpp"

namespace structsel {

int LinearProgram::add_variable(Rational cost, Rational lo, std::optional<Rational> hi) {
  objective.push_back(std::move(cost));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return num_vars++;
}

void LinearProgram::add_row(std::vector<std::pair<int, Rational>> coeffs, RowSense sense, Rational rhs) {
  rows.push_back(Row{std::move(coeffs), sense, std::move(rhs)});
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

thread_local SolveObserver g_observer;

void validate(const LinearProgram& lp) {
  const auto n = static_cast<std::size_t>(lp.num_vars);
  if (lp.objective.size() != n || lp.lower.size() != n || lp.upper.size() != n) {
    throw std::invalid_argument("linear program: objective/bound vectors do not match num_vars");
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto& hi = lp.upper[static_cast<std::size_t>(j)];
    if (hi && *hi < lp.lower[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("linear program: empty bound interval for variable " + std::to_string(j));
    }
  }
  for (const auto& row : lp.rows) {
    std::vector<char> seen(n, 0);
    for (const auto& [j, a] : row.coeffs) {
      if (j < 0 || j >= lp.num_vars) throw std::invalid_argument("linear program: coefficient on unknown variable");
      if (seen[static_cast<std::size_t>(j)]) throw std::invalid_argument("linear program: duplicate coefficient in row");
      seen[static_cast<std::size_t>(j)] = 1;
    }
  }
}

// Dense tableau for the bounded primal simplex. All columns are shifted so
// that their lower bound is zero; `ub` holds the shifted upper bound.
//
// Column layout: structural 0..n-1, logical n..n+m-1 (one per row),
// artificial n+m..n+2m-1 (unit column of each row). The artificial columns
// stay in the tableau after phase 1 so that B^{-1} can be read off them.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        t_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)),
        beta_(static_cast<std::size_t>(rows)),
        d_(static_cast<std::size_t>(cols)),
        cost_(static_cast<std::size_t>(cols)),
        ub_(static_cast<std::size_t>(cols)),
        basis_(static_cast<std::size_t>(rows), -1),
        pos_(static_cast<std::size_t>(cols), -1),
        at_upper_(static_cast<std::size_t>(cols), 0) {}

  Rational& at(int i, int j) { return t_[idx(i, j)]; }
  const Rational& at(int i, int j) const { return t_[idx(i, j)]; }
  Rational& beta(int i) { return beta_[static_cast<std::size_t>(i)]; }
  std::optional<Rational>& ub(int j) { return ub_[static_cast<std::size_t>(j)]; }
  const Rational& reduced(int j) const { return d_[static_cast<std::size_t>(j)]; }
  int basic(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  int row_of(int j) const { return pos_[static_cast<std::size_t>(j)]; }
  bool at_upper(int j) const { return at_upper_[static_cast<std::size_t>(j)] != 0; }

  void set_basic(int i, int j) {
    const int old = basis_[static_cast<std::size_t>(i)];
    if (old >= 0) pos_[static_cast<std::size_t>(old)] = -1;
    basis_[static_cast<std::size_t>(i)] = j;
    pos_[static_cast<std::size_t>(j)] = i;
    at_upper_[static_cast<std::size_t>(j)] = 0;
  }

  bool fixed(int j) const {
    const auto& u = ub_[static_cast<std::size_t>(j)];
    return u && sgn(*u) == 0;
  }

  // Current value of column j in shifted coordinates.
  Rational value(int j) const {
    const int r = pos_[static_cast<std::size_t>(j)];
    if (r >= 0) return beta_[static_cast<std::size_t>(r)];
    if (at_upper_[static_cast<std::size_t>(j)]) return *ub_[static_cast<std::size_t>(j)];
    return 0;
  }

  void set_costs(std::vector<Rational> costs) {
    cost_ = std::move(costs);
    for (int j = 0; j < cols_; ++j) {
      Rational dj = cost_[static_cast<std::size_t>(j)];
      for (int i = 0; i < rows_; ++i) {
        const Rational& a = at(i, j);
        if (sgn(a) != 0) dj -= cost_[static_cast<std::size_t>(basic(i))] * a;
      }
      d_[static_cast<std::size_t>(j)] = dj;
    }
  }

  // Pivots column j into the basis at row r and updates the reduced costs.
  // Basic values are maintained by the caller.
  void pivot(int r, int j) {
    const Rational p = at(r, j);
    std::vector<int> nz;
    for (int k = 0; k < cols_; ++k) {
      Rational& a = at(r, k);
      if (sgn(a) != 0) {
        a /= p;
        nz.push_back(k);
      }
    }
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const Rational f = at(i, j);
      if (sgn(f) == 0) continue;
      for (int k : nz) at(i, k) -= f * at(r, k);
    }
    const Rational f = d_[static_cast<std::size_t>(j)];
    if (sgn(f) != 0) {
      for (int k : nz) d_[static_cast<std::size_t>(k)] -= f * at(r, k);
    }
    set_basic(r, j);
  }

  // Runs Bland-rule iterations with the current costs until optimality,
  // unboundedness or the pivot cap.
  LpStatus run(long& pivots, long cap) {
    for (;;) {
      int enter = -1;
      int dir = 0;
      for (int j = 0; j < cols_; ++j) {
        if (row_of(j) >= 0 || fixed(j)) continue;
        const int s = sgn(d_[static_cast<std::size_t>(j)]);
        if (!at_upper(j) && s < 0) {
          enter = j;
          dir = 1;
          break;
        }
        if (at_upper(j) && s > 0) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      // Ratio test. A bound flip of the entering column wins ties; among
      // leaving rows the smallest basic column index wins (Bland).
      std::optional<Rational> best = ub(enter);
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < rows_; ++i) {
        const Rational& a = at(i, enter);
        const int s = sgn(a);
        if (s == 0) continue;
        const bool decreasing = dir * s > 0;
        Rational theta;
        if (decreasing) {
          theta = beta(i) / abs(a);
        } else {
          const auto& u = ub(basic(i));
          if (!u) continue;
          theta = (*u - beta(i)) / abs(a);
        }
        const bool better = !best || theta < *best ||
                            (theta == *best && leave >= 0 && basic(i) < basic(leave));
        if (better) {
          best = theta;
          leave = i;
          leave_to_upper = !decreasing;
        }
      }
      if (!best) return LpStatus::kUnbounded;
      if (pivots >= cap) return LpStatus::kIterationLimit;
      ++pivots;

      const Rational theta = *best;
      if (sgn(theta) != 0) {
        for (int i = 0; i < rows_; ++i) {
          const Rational& a = at(i, enter);
          if (sgn(a) != 0) beta(i) -= dir * theta * a;
        }
      }
      if (leave < 0) {
        at_upper_[static_cast<std::size_t>(enter)] ^= 1;
        continue;
      }
      const Rational entering_value = dir > 0 ? theta : *ub(enter) - theta;
      const int leaving = basic(leave);
      pivot(leave, enter);
      at_upper_[static_cast<std::size_t>(leaving)] = leave_to_upper ? 1 : 0;
      beta(leave) = entering_value;
    }
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_;
  int cols_;
  std::vector<Rational> t_;
  std::vector<Rational> beta_;
  std::vector<Rational> d_;
  std::vector<Rational> cost_;
  std::vector<std::optional<Rational>> ub_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<char> at_upper_;
};

LpSolution solve_impl(const LinearProgram& lp, const SimplexOptions& options) {
  validate(lp);
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  const int logical0 = n;
  const int artificial0 = n + m;
  Tableau tb(m, n + 2 * m);

  for (int j = 0; j < n; ++j) {
    const auto& hi = lp.upper[static_cast<std::size_t>(j)];
    if (hi) tb.ub(j) = *hi - lp.lower[static_cast<std::size_t>(j)];
  }

  std::vector<int> flip(static_cast<std::size_t>(m), 1);
  std::vector<Rational> phase1(static_cast<std::size_t>(n + 2 * m));
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[static_cast<std::size_t>(i)];
    Rational rhs = row.rhs;
    for (const auto& [j, a] : row.coeffs) rhs -= a * lp.lower[static_cast<std::size_t>(j)];
    const int f = sgn(rhs) < 0 ? -1 : 1;
    flip[static_cast<std::size_t>(i)] = f;
    for (const auto& [j, a] : row.coeffs) tb.at(i, j) = f * a;
    tb.beta(i) = f * rhs;

    int logical_coeff = 1;
    if (row.sense == RowSense::kGreaterEqual) logical_coeff = -1;
    logical_coeff *= f;
    tb.at(i, logical0 + i) = logical_coeff;
    if (row.sense == RowSense::kEqual) tb.ub(logical0 + i) = Rational(0);
    tb.at(i, artificial0 + i) = 1;

    if (row.sense != RowSense::kEqual && logical_coeff == 1) {
      tb.set_basic(i, logical0 + i);
      tb.ub(artificial0 + i) = Rational(0);
    } else {
      tb.set_basic(i, artificial0 + i);
      phase1[static_cast<std::size_t>(artificial0 + i)] = 1;
    }
  }

  LpSolution sol;
  tb.set_costs(phase1);
  LpStatus st = tb.run(sol.pivots, options.max_pivots);
  if (st == LpStatus::kIterationLimit) {
    sol.status = st;
    return sol;
  }
  Rational infeasibility;
  for (int i = 0; i < m; ++i) {
    if (tb.basic(i) >= artificial0) infeasibility += tb.beta(i);
  }
  if (sgn(infeasibility) > 0) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }

  // Drive zero-valued artificials out of the basis. A row whose
  // non-artificial part is entirely zero is redundant; its artificial stays
  // basic at zero.
  for (int i = 0; i < m; ++i) {
    if (tb.basic(i) < artificial0) continue;
    for (int j = 0; j < artificial0; ++j) {
      if (tb.row_of(j) >= 0 || sgn(tb.at(i, j)) == 0) continue;
      const Rational v = tb.value(j);
      tb.pivot(i, j);
      tb.beta(i) = v;
      ++sol.pivots;
      break;
    }
  }
  for (int i = 0; i < m; ++i) tb.ub(artificial0 + i) = Rational(0);

  std::vector<Rational> phase2(static_cast<std::size_t>(n + 2 * m));
  for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];
  tb.set_costs(std::move(phase2));
  st = tb.run(sol.pivots, options.max_pivots);
  sol.status = st;
  if (st != LpStatus::kOptimal) return sol;

  sol.x.resize(static_cast<std::size_t>(n));
  sol.reduced_costs.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    sol.x[static_cast<std::size_t>(j)] = lp.lower[static_cast<std::size_t>(j)] + tb.value(j);
    sol.reduced_costs[static_cast<std::size_t>(j)] = tb.reduced(j);
    sol.objective += lp.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  }
  sol.duals.resize(static_cast<std::size_t>(m));
  sol.basis.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    sol.duals[static_cast<std::size_t>(i)] = -tb.reduced(artificial0 + i) * flip[static_cast<std::size_t>(i)];
    sol.basis[static_cast<std::size_t>(i)] = tb.basic(i);
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  LpSolution sol = solve_impl(lp, options);
  if (g_observer) g_observer(lp, sol);
  return sol;
}

IntegralityReport assert_integral(const LpSolution& sol) {
  if (sol.status != LpStatus::kOptimal) {
    throw PreconditionError(std::string("integrality check on a non-optimal solution (status ") +
                            to_string(sol.status) + ")");
  }
  IntegralityReport report;
  for (std::size_t j = 0; j < sol.x.size(); ++j) {
    if (!is_integral(sol.x[j])) {
      report.integral = false;
      report.first_fractional = static_cast<int>(j);
      report.value = sol.x[j];
      break;
    }
  }
  return report;
}

std::optional<std::string> verify_optimality(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::kOptimal) return std::string("solution is not optimal");
  const auto n = static_cast<std::size_t>(lp.num_vars);
  if (sol.x.size() != n || sol.duals.size() != lp.rows.size()) return std::string("solution vectors have wrong size");

  for (std::size_t j = 0; j < n; ++j) {
    if (sol.x[j] < lp.lower[j] || (lp.upper[j] && sol.x[j] > *lp.upper[j])) {
      return "variable " + std::to_string(j) + " violates its bounds";
    }
  }

  // Reduced costs recomputed from the duals, independent of the tableau.
  std::vector<Rational> d(lp.objective);
  Rational dual_objective;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    const Rational& y = sol.duals[i];
    Rational activity;
    for (const auto& [j, a] : row.coeffs) {
      activity += a * sol.x[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(j)] -= y * a;
    }
    const std::string label = "row " + std::to_string(i);
    switch (row.sense) {
      case RowSense::kLessEqual:
        if (activity > row.rhs) return label + " is violated";
        if (sgn(y) > 0) return label + " (<=) has a positive dual";
        break;
      case RowSense::kGreaterEqual:
        if (activity < row.rhs) return label + " is violated";
        if (sgn(y) < 0) return label + " (>=) has a negative dual";
        break;
      case RowSense::kEqual:
        if (activity != row.rhs) return label + " is violated";
        break;
    }
    if (sgn(y) != 0 && activity != row.rhs) return label + " has a nonzero dual but is slack";
    dual_objective += y * row.rhs;
  }

  for (std::size_t j = 0; j < n; ++j) {
    const int s = sgn(d[j]);
    if (s == 0) continue;
    const std::string label = "variable " + std::to_string(j);
    if (s > 0) {
      if (sol.x[j] != lp.lower[j]) return label + " has a positive reduced cost off its lower bound";
      dual_objective += d[j] * lp.lower[j];
    } else {
      if (!lp.upper[j]) return label + " has a negative reduced cost and no upper bound";
      if (sol.x[j] != *lp.upper[j]) return label + " has a negative reduced cost off its upper bound";
      dual_objective += d[j] * *lp.upper[j];
    }
  }

  Rational primal_objective;
  for (std::size_t j = 0; j < n; ++j) primal_objective += lp.objective[j] * sol.x[j];
  if (primal_objective != sol.objective) return std::string("reported objective differs from c^T x");
  if (primal_objective != dual_objective) {
    return "primal objective " + to_string(primal_objective) + " differs from dual objective " +
           to_string(dual_objective);
  }
  return std::nullopt;
}

ScopedSolveObserver::ScopedSolveObserver(SolveObserver observer) : previous_(std::move(g_observer)) {
  g_observer = std::move(observer);
}

ScopedSolveObserver::~ScopedSolveObserver() { g_observer = std::move(previous_); }

}  // namespace structsel
