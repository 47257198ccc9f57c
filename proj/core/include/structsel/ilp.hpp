#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structsel/graph.hpp"
#include "structsel/incidence.hpp"
#include "structsel/lp.hpp"
#include "structsel/model.hpp"

namespace structsel {

enum class Problem { kP1, kP2, kP3, kP4, kP5, kP4Fix, kP5Fix };

const char* to_string(Problem p);
/// Accepts "p1".."p5", "p4fix", "p5fix" (case-insensitive).
std::optional<Problem> parse_problem(std::string_view name);
bool is_switched_problem(Problem p);
bool needs_cardinality(Problem p);

/// Constraint groups, in the order rows are emitted.
enum class RowGroup {
  kStateEquality,  // each state x_i^L matched exactly once
  kCapacity,       // each input / state column matched at most once
  kCoverage,       // every source SCC actuated: -w t <= -1
  kLinking,        // sum of y over E_{u_j} minus t_j <= 0
  kCardinality,    // sum of t <= k
};

const char* to_string(RowGroup g);

/// Variables: one y per edge of the system bipartite graph (input edges
/// grouped by input, then state edges row-major), followed by one t per
/// input (mode-major for switched systems).
struct VariableMap {
  SystemBipartite bipartite;
  /// (mode, local index) of each input.
  std::vector<std::pair<int, int>> inputs;
  /// States per mode (the state columns of mode k are k*n .. k*n+n-1).
  int n = 0;

  int num_edges() const { return static_cast<int>(bipartite.edges.size()); }
  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int num_vars() const { return num_edges() + num_inputs(); }
  int y(int edge) const { return edge; }
  int t(int input) const { return num_edges() + input; }
  std::string name(int var) const;
};

struct IlpModel {
  Problem problem = Problem::kP1;
  VariableMap vars;
  /// Relaxation with 0 <= x <= 1; every variable is integer in the ILP.
  LinearProgram lp;
  std::vector<RowGroup> row_groups;
  std::vector<std::string> row_names;
  IncidenceMatrix incidence;
  std::optional<int> k;
  /// Cardinality penalty added to every input cost (P3 only).
  Rational gamma;
  std::vector<std::string> warnings;

  int num_rows() const { return static_cast<int>(lp.rows.size()); }
  std::vector<int> rows_in(RowGroup g) const;
  /// Dense constraint matrix as stored (entries in {0, +1, -1}).
  IntMatrix constraint_matrix() const;
};

// Fixed systems. Each builder checks that the system is structurally
// controllable with all inputs and throws PreconditionError otherwise.
IlpModel build_p1(const StructuredSystem& sys);
/// Throws PreconditionError when k < 1.
IlpModel build_p2(const StructuredSystem& sys, int k);
/// Objective c_i + gamma with gamma = m * max c; gamma = 1 (with a
/// warning) when every cost is zero.
IlpModel build_p3(const StructuredSystem& sys);

// Switched systems; the switched controllability of the full input set is
// the precondition.
IlpModel build_p4(const SwitchedStructuredSystem& sw);
IlpModel build_p5(const SwitchedStructuredSystem& sw, int k);

/// Fixed input structure: every mode carries the same B. Throws
/// PreconditionError otherwise.
SwitchedStructuredSystem fixed_input_transform(const SwitchedStructuredSystem& sw);
IlpModel build_p4fix(const SwitchedStructuredSystem& sw);
IlpModel build_p5fix(const SwitchedStructuredSystem& sw, int k);

}  // namespace structsel
