#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structsel/rational.hpp"

namespace structsel {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

/// A linear program in the form
///
///   minimize c^T x  subject to  a_i^T x (<=, >=, =) b_i,  l <= x <= u
///
/// with exact rational data. Lower bounds are finite; an absent upper bound
/// means +infinity.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, Rational>> coeffs;  // (variable, coefficient), no duplicates
    RowSense sense = RowSense::kLessEqual;
    Rational rhs;
  };

  int num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;
  std::vector<Rational> lower;
  std::vector<std::optional<Rational>> upper;

  /// Adds a variable with the given cost and bounds; returns its index.
  int add_variable(Rational cost, Rational lo = 0, std::optional<Rational> hi = std::nullopt);
  void add_row(std::vector<std::pair<int, Rational>> coeffs, RowSense sense, Rational rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> x;
  Rational objective;
  /// Row duals y with reduced costs d = c - A^T y. Sign convention for a
  /// minimisation: y_i >= 0 on >= rows, y_i <= 0 on <= rows, free on = rows.
  std::vector<Rational> duals;
  std::vector<Rational> reduced_costs;
  /// Basic variable of each tableau row. Indices below num_vars are
  /// structural; num_vars + i is the logical (slack) of row i; values from
  /// num_vars + num_rows on mark a redundant row kept basic on its artificial.
  std::vector<int> basis;
  long pivots = 0;
};

struct SimplexOptions {
  long max_pivots = 200000;
};

/// Two-phase bounded primal simplex over exact rationals with Bland's rule.
/// Deterministic: the same program always yields the same vertex. Every
/// solve is reported to the active solve observer, if any.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

struct IntegralityReport {
  bool integral = true;
  int first_fractional = -1;  // variable index, or -1
  Rational value;
};

/// Throws PreconditionError unless `sol` is optimal.
IntegralityReport assert_integral(const LpSolution& sol);

/// Checks an optimal solution from first principles: primal feasibility,
/// dual sign conditions, reduced-cost/bound consistency, complementary
/// slackness and exact equality of primal and dual objectives. Returns an
/// explanation of the first violation, or nullopt when all hold.
std::optional<std::string> verify_optimality(const LinearProgram& lp, const LpSolution& sol);

using SolveObserver = std::function<void(const LinearProgram&, const LpSolution&)>;

/// Installs `observer` for solves on the current thread while in scope.
/// Scopes nest; the innermost observer receives the callbacks.
class ScopedSolveObserver {
 public:
  explicit ScopedSolveObserver(SolveObserver observer);
  ~ScopedSolveObserver();
  ScopedSolveObserver(const ScopedSolveObserver&) = delete;
  ScopedSolveObserver& operator=(const ScopedSolveObserver&) = delete;

 private:
  SolveObserver previous_;
};

}  // namespace structsel
