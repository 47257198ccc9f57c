#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "structsel/rational.hpp"

namespace structsel {

/// A (row, col) position of a free parameter, 0-based.
struct Entry {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Zero/free-parameter pattern of a structured matrix. Entries are kept
/// sorted row-major and unique.
class SparsityPattern {
 public:
  SparsityPattern() = default;
  /// Throws std::invalid_argument on an out-of-range or duplicate entry.
  SparsityPattern(int rows, int cols, std::vector<Entry> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool contains(int row, int col) const;

  /// Rows with a free parameter in column `col`, ascending.
  std::vector<int> column_support(int col) const;
  bool column_is_zero(int col) const { return column_support(col).empty(); }

  /// Pattern made of the given columns, in the given order.
  SparsityPattern select_columns(std::span<const int> cols) const;

  friend bool operator==(const SparsityPattern&, const SparsityPattern&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Entry> entries_;
};

/// Entrywise OR of equally sized patterns.
SparsityPattern pattern_or(std::span<const SparsityPattern> patterns);
/// Horizontal concatenation of patterns with equal row counts.
SparsityPattern hconcat(std::span<const SparsityPattern> patterns);

/// Fixed structured system (A, B) with one nonnegative cost per input column.
class StructuredSystem {
 public:
  /// Throws std::invalid_argument when A is not square, B has the wrong
  /// row count, or the costs are negative or of the wrong length.
  StructuredSystem(SparsityPattern a, SparsityPattern b, std::vector<Rational> costs);

  int n() const { return a_.rows(); }
  int m() const { return b_.cols(); }
  const SparsityPattern& a() const { return a_; }
  const SparsityPattern& b() const { return b_; }
  std::span<const Rational> costs() const { return costs_; }

  /// Same structure, different costs.
  StructuredSystem with_costs(std::vector<Rational> costs) const;

  friend bool operator==(const StructuredSystem&, const StructuredSystem&) = default;

 private:
  SparsityPattern a_;
  SparsityPattern b_;
  std::vector<Rational> costs_;
};

/// One subsystem (A_k, B_k) of a switched structured system.
struct Mode {
  SparsityPattern a;
  SparsityPattern b;
  std::vector<Rational> costs;
  /// Column of the document's B_k that each effective column came from.
  std::vector<int> source_columns;

  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Switched structured system. Every B_k holds only effective (nonzero)
/// input columns; inputs are numbered mode-major across modes.
class SwitchedStructuredSystem {
 public:
  /// Throws std::invalid_argument on an empty mode list, mismatched state
  /// dimensions, a zero input column, or invalid costs.
  SwitchedStructuredSystem(int n, std::vector<Mode> modes);

  int n() const { return n_; }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  const Mode& mode(int k) const { return modes_.at(static_cast<std::size_t>(k)); }
  std::span<const Mode> modes() const { return modes_; }

  /// Sum of m_k over all modes.
  int total_inputs() const { return offsets_.back(); }
  /// Flattened index of the first input of mode k.
  int input_offset(int k) const { return offsets_.at(static_cast<std::size_t>(k)); }
  int flat_input(int mode, int local) const { return input_offset(mode) + local; }
  /// (mode, local index) of a flattened input.
  std::pair<int, int> split_input(int flat) const;
  /// All costs in flattened order.
  std::vector<Rational> flat_costs() const;

  friend bool operator==(const SwitchedStructuredSystem&, const SwitchedStructuredSystem&) = default;

 private:
  int n_ = 0;
  std::vector<Mode> modes_;
  std::vector<int> offsets_;
};

/// Builds a mode with zero columns of B removed. Indices of removed columns
/// (0-based, in the original numbering) are appended to `stripped`.
Mode make_effective_mode(SparsityPattern a, const SparsityPattern& b, std::vector<Rational> costs,
                         std::vector<int>* stripped = nullptr);

/// The union system of a switched system: A_hat = A_1 v ... v A_p,
/// B_hat = [B_1 ... B_p], A_stacked = [A_1 ... A_p].
struct UnionSystem {
  SparsityPattern a_hat;
  SparsityPattern b_hat;
  SparsityPattern a_stacked;
};

UnionSystem union_system(const SwitchedStructuredSystem& sw);

/// The p = 1 switched view of a fixed system. Zero input columns are
/// stripped, as for any switched mode.
SwitchedStructuredSystem as_switched(const StructuredSystem& sys);

}  // namespace structsel
