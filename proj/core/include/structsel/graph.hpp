#pragma once

#include <span>
#include <vector>

#include "structsel/model.hpp"
#include "structsel/rational.hpp"

namespace structsel {

/// Directed graph on vertices 0..n-1 with sorted, duplicate-free adjacency.
struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> out;
};

/// State digraph G(A): edge x_j -> x_i for every free entry A_ij.
Digraph state_digraph(const SparsityPattern& a);

struct SccDecomposition {
  /// Components, each sorted ascending; ordered by smallest member.
  std::vector<std::vector<int>> components;
  std::vector<int> component_of;
  /// Condensation edges between components, sorted and unique.
  std::vector<std::vector<int>> condensation;
  std::vector<bool> is_source;

  int size() const { return static_cast<int>(components.size()); }
  /// Indices of source components, ascending.
  std::vector<int> sources() const;
};

/// Tarjan's algorithm (iterative), with components renumbered by their
/// smallest state so the result does not depend on traversal order.
SccDecomposition scc_decompose(const Digraph& g);

/// States reachable by a directed path in G(A, B) from one of the selected
/// input columns of B. Returned ascending.
std::vector<int> input_reachable_states(const SparsityPattern& a, const SparsityPattern& b,
                                        std::span<const int> selected);

/// Bipartite graph with left vertices 0..left-1, right vertices
/// 0..right-1 and sorted adjacency from the left.
struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::vector<int>> adj;
};

struct Matching {
  int size = 0;
  std::vector<int> left_to_right;  // -1 when unmatched
  std::vector<int> right_to_left;  // -1 when unmatched
};

/// Hopcroft-Karp. Vertices and neighbours are scanned in increasing index
/// order, so the matching returned for a given graph is always the same.
Matching max_matching(const BipartiteGraph& g);

/// Given a maximum matching that leaves some left vertex free, returns a
/// left vertex set S with |N(S)| < |S| (ascending). Empty if the matching
/// saturates the left side.
std::vector<int> hall_violator(const BipartiteGraph& g, const Matching& matching);

/// Bipartite graph associated with a structured system. Left vertices are
/// the states x^L. Right vertices are the inputs followed by the columns of
/// the state pattern (x^R, or mode-major state copies for a switched
/// system). Edges are listed inputs first, grouped by input and then by
/// state, followed by the state pattern in row-major order.
struct SystemBipartite {
  struct Edge {
    int left = 0;   // state x_i^L
    int right = 0;  // input j when right < num_inputs, else state column right - num_inputs
  };

  int num_states = 0;
  int num_inputs = 0;
  int num_state_columns = 0;
  std::vector<Edge> edges;
  /// E_{u_j}: indices into `edges` of the edges at input j.
  std::vector<std::vector<int>> input_edges;

  int num_right() const { return num_inputs + num_state_columns; }
  bool is_input_edge(int e) const { return edges[static_cast<std::size_t>(e)].right < num_inputs; }
  BipartiteGraph graph() const;
};

/// `state_part` has num_states rows: A for a fixed system, [A_1 ... A_p]
/// for a switched one. `inputs` is B (or B_hat) with num_states rows.
SystemBipartite system_bipartite(const SparsityPattern& state_part, const SparsityPattern& inputs);

struct MinCostMatching {
  bool saturating = false;
  /// Edge indices of the matching (into SystemBipartite::edges), ascending.
  std::vector<int> edges;
  /// Sum of costs of inputs matched in `edges`.
  Rational cost;
  /// Hall violator when the left side cannot be saturated.
  std::vector<int> deficient_states;
};

/// Among the matchings that saturate the states, one minimising the total
/// cost of the matched inputs, found by solving the matching LP exactly.
MinCostMatching min_cost_max_matching_inputs(const SystemBipartite& bip, std::span<const Rational> costs);

}  // namespace structsel
