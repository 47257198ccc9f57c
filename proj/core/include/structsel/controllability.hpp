#pragma once

#include <span>
#include <vector>

#include "structsel/graph.hpp"
#include "structsel/model.hpp"

namespace structsel {

/// Maximum rank over all realizations of the pattern, computed as the size
/// of a maximum row/column matching.
int generic_rank(const SparsityPattern& p);

/// One edge of the matching witness, from state x_i^L to either an input or
/// a state column (x_j^R, or the copy of x_j in mode `mode`).
struct MatchedEdge {
  int state = 0;
  bool by_input = false;
  int index = 0;  // input index (flat for switched systems) or state j
  int mode = 0;   // mode of the state copy; 0 for fixed systems

  friend bool operator==(const MatchedEdge&, const MatchedEdge&) = default;
};

struct ControllabilityCertificate {
  bool controllable = false;

  // Input reachability.
  bool all_reachable = false;
  /// Source SCCs of the state digraph, as sorted state lists.
  std::vector<std::vector<int>> source_sccs;
  /// For every source SCC, the smallest selected input that actuates one of
  /// its states, or -1.
  std::vector<int> actuator;
  /// First source SCC without an actuator, or -1.
  int failing_scc = -1;
  std::vector<int> unreachable_states;

  // Matching condition.
  bool matching_saturates = false;
  int matching_size = 0;
  /// A matching of maximum size; saturating when matching_saturates.
  std::vector<MatchedEdge> matching;
  /// Hall violator (states whose joint neighbourhood is too small).
  std::vector<int> deficient_states;
};

/// Structural controllability of (A, B restricted to `selected`): every
/// state input-reachable, and the states matchable in B(A, B(selected)).
/// Throws std::out_of_range on an unknown input index.
ControllabilityCertificate is_structurally_controllable(const StructuredSystem& sys,
                                                        std::span<const int> selected);

/// Switched variant: the states must be matchable into the state copies of
/// [A_1 ... A_p] plus the selected inputs, and input-reachable in the union
/// digraph. `selected` holds flat (mode-major) input indices.
ControllabilityCertificate is_switched_structurally_controllable(const SwitchedStructuredSystem& sw,
                                                                 std::span<const int> selected);

/// Convenience: all inputs selected.
std::vector<int> all_inputs(int m);

}  // namespace structsel
