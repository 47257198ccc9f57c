#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structsel/graph.hpp"
#include "structsel/model.hpp"

namespace structsel {

/// Dense integer matrix, row-major.
using IntMatrix = std::vector<std::vector<int>>;

/// Source-SCC/input incidence matrix: w[i][j] = 1 iff input j actuates a
/// state of source SCC i.
struct IncidenceMatrix {
  IntMatrix w;
  /// States of each source SCC (row labels), in deterministic SCC order.
  std::vector<std::vector<int>> row_sccs;
  /// (mode, local input) of each column; mode is 0 for fixed systems.
  std::vector<std::pair<int, int>> column_inputs;

  int rows() const { return static_cast<int>(w.size()); }
  int cols() const { return static_cast<int>(column_inputs.size()); }
  /// Largest number of inputs actuating one source SCC (max row sum).
  int max_row_sum() const;
};

IncidenceMatrix build_incidence(const StructuredSystem& sys, const SccDecomposition& scc);
IncidenceMatrix build_incidence(const StructuredSystem& sys);
/// Rows are the source SCCs of the union digraph; columns run over all
/// modes' inputs, mode-major.
IncidenceMatrix build_switched_incidence(const SwitchedStructuredSystem& sw);

/// Every column has at most one nonzero.
bool is_sssi(const IntMatrix& w);

enum class Verdict { kFalse, kTrue, kUndecided };
const char* to_string(Verdict v);

/// A square submatrix whose determinant lies outside {0, +1, -1}.
struct SubmatrixWitness {
  std::vector<int> rows;
  std::vector<int> cols;
  mpz_class determinant;
};

struct TuOptions {
  /// Exhaustive search is attempted only when the smaller matrix dimension
  /// is at most this.
  int max_dimension = 20;
};

struct TuResult {
  Verdict verdict = Verdict::kUndecided;
  /// Filled for kFalse.
  std::optional<SubmatrixWitness> witness;
};

/// Exhaustive Ghouila-Houri test: every row subset must admit a +/-1
/// signing with column sums in {-1, 0, 1}. Rows are signed in index order,
/// +1 before -1. The smaller of M and M^T is searched.
TuResult is_totally_unimodular(const IntMatrix& m, const TuOptions& options = {});

/// Bareiss determinant of a square integer matrix.
mpz_class determinant(const IntMatrix& m);

/// Restricted TU via total unimodularity of w stacked over an all-ones row.
TuResult is_restricted_tu(const IntMatrix& w, const TuOptions& options = {});

/// Restricted TU via row partitions of w alone: every row subset R has one
/// signing with column sums in {-1,0,1} and another with sums in {0,1,2}.
Verdict restricted_tu_by_partition(const IntMatrix& w, const TuOptions& options = {});

struct ClassifyOptions {
  TuOptions tu;
  /// Require all rows monotone in the same direction for row-monotone.
  bool uniform_row_monotone = false;
  /// Node budget for the permutable-monotone searches.
  long max_search_nodes = 2'000'000;
};

struct ConstraintClass {
  Verdict sssi = Verdict::kFalse;
  Verdict extended_sssi = Verdict::kFalse;
  Verdict row_monotone = Verdict::kFalse;
  Verdict column_monotone = Verdict::kFalse;
  Verdict permutable_row_monotone = Verdict::kFalse;
  Verdict permutable_column_monotone = Verdict::kFalse;
  Verdict block_diagonal_monotone = Verdict::kFalse;
  Verdict restricted_tu = Verdict::kUndecided;
  /// Violating submatrix of [w; 1] (the ones row has index w.size()).
  std::optional<SubmatrixWitness> witness;
  /// True when restricted_tu was settled by one of the sufficient classes
  /// because the exhaustive test exceeded its cap.
  bool restricted_tu_from_class = false;
};

ConstraintClass classify(const IntMatrix& w, const ClassifyOptions& options = {});

// Individual recognisers, exposed for testing.
bool is_extended_sssi(const IntMatrix& w);
bool is_row_monotone(const IntMatrix& w, bool uniform);
bool is_column_monotone(const IntMatrix& w);
Verdict is_permutable_row_monotone(const IntMatrix& w, bool uniform, long max_nodes);
bool is_permutable_column_monotone(const IntMatrix& w);
Verdict is_block_diagonal_monotone(const IntMatrix& w, bool uniform, long max_nodes);

}  // namespace structsel
