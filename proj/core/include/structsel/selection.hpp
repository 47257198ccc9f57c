#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structsel/controllability.hpp"
#include "structsel/ilp.hpp"
#include "structsel/incidence.hpp"
#include "structsel/lp.hpp"
#include "structsel/model.hpp"

namespace structsel {

enum class Provenance { kExactLp, kExactOracle, kRoundedFeasible };
const char* to_string(Provenance p);

enum class SelectionStatus {
  kOptimal,     // certified optimum
  kFeasible,    // feasible selection without an optimality claim
  kInfeasible,  // no selection satisfies the constraints
  kRefused,     // the exact LP route could not be certified
};
const char* to_string(SelectionStatus s);

struct SelectionResult {
  SelectionStatus status = SelectionStatus::kInfeasible;
  Problem problem = Problem::kP1;
  std::optional<int> k;
  Provenance provenance = Provenance::kExactLp;

  /// Selected inputs, ascending. For switched systems these are flat
  /// (mode-major) indices; for the fixed-input problems they index the
  /// shared input matrix.
  std::vector<int> selected;
  /// The same selection split by mode, still in flat indices (one entry for
  /// fixed systems).
  std::vector<std::vector<int>> per_mode;
  /// Sum of the input costs of `selected`.
  Rational cost;
  /// Objective value of the solved program (includes the P3 penalty).
  Rational objective;
  /// Matching saturating the states, from y* or the controllability check.
  std::vector<MatchedEdge> matching;

  Verdict restricted_tu = Verdict::kUndecided;
  long pivots = 0;

  // Rounding certificate.
  std::optional<int> f;
  std::optional<Rational> lp_bound;   // c*_LP
  std::optional<Rational> f_bound;    // f * c*_LP, when the guarantee applies
  bool perfect_matching_in_a = false;

  std::string message;
};

struct SelectionOptions {
  ClassifyOptions classify;
  SimplexOptions simplex;
  /// Largest input count the brute-force oracle accepts.
  int oracle_max_inputs = 22;
};

/// P1, P2(k) or P3 through the LP relaxation. Refuses unless w is certified
/// restricted TU. Throws PreconditionError for k < 1 on P2.
SelectionResult solve_exact(const StructuredSystem& sys, Problem problem, std::optional<int> k = std::nullopt,
                            const SelectionOptions& options = {});

/// P4, P5(k), P4fix or P5fix through the LP relaxation.
SelectionResult solve_exact_switched(const SwitchedStructuredSystem& sw, Problem problem,
                                     std::optional<int> k = std::nullopt, const SelectionOptions& options = {});

struct BoundsReport {
  Rational c_mat;
  Rational c_lp;
  bool ordered = false;  // c_mat <= c_lp
  int f = 0;
  bool perfect_matching_in_a = false;
  /// Inputs matched in the minimum-cost matching behind c_mat.
  std::vector<int> matching_inputs;
  std::vector<int> lp_support;  // inputs with t* > 0
  bool lp_integral = false;
};

/// Lower bounds on the P1 optimum. Throws PreconditionError when the system
/// is not structurally controllable with all inputs.
BoundsReport bounds(const StructuredSystem& sys, const SelectionOptions& options = {});

/// Support rounding of the P1 relaxation, repaired by re-solving with t
/// fixed to the rounded values. Throws PreconditionError when the system
/// is not structurally controllable with all inputs.
SelectionResult lp_round(const StructuredSystem& sys, const SelectionOptions& options = {});

/// Exhaustive oracle for P1, P2(k) and P3 (P3 orders by c_i + gamma).
/// Subsets are scanned by cost, then lexicographically by sorted index
/// list. Throws CapExceeded above the input cap.
SelectionResult brute_force(const StructuredSystem& sys, Problem problem = Problem::kP1,
                            std::optional<int> k = std::nullopt, const SelectionOptions& options = {});

/// Exhaustive oracle for P4, P5(k), P4fix and P5fix.
SelectionResult brute_force_switched(const SwitchedStructuredSystem& sw, Problem problem,
                                     std::optional<int> k = std::nullopt, const SelectionOptions& options = {});

}  // namespace structsel
