#pragma once

// Reference implementations used as ground truth by the tests. They share
// no algorithmic code with the library: matchings come from a bitmask
// search, ranks from floating-point LU on random realizations, and
// controllability from the classical reachability + rank characterization.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "structsel/incidence.hpp"
#include "structsel/lp.hpp"
#include "structsel/model.hpp"

namespace oracle {

using structsel::IntMatrix;
using structsel::Rational;

/// Maximum matching size by memoized search over used right vertices.
/// Intended for right sides of at most ~24 vertices.
int matching_size(int left, int right, const std::vector<std::vector<int>>& adj);

/// Numerical rank of a random realization of the pattern(s) placed side by
/// side, with entries drawn uniformly from [1, 2]. The median over three
/// seeded draws is returned.
int numeric_generic_rank(const std::vector<const structsel::SparsityPattern*>& blocks, int rows,
                         std::uint64_t seed = 7);

/// States reachable from the selected columns of b in the digraph of a, by
/// breadth-first search.
std::vector<bool> bfs_reachable(const structsel::SparsityPattern& a, const structsel::SparsityPattern& b,
                                const std::vector<int>& selected);

/// Reachability plus full generic rank of [A, B_S].
bool controllable(const structsel::StructuredSystem& sys, const std::vector<int>& selected);

/// Union-digraph reachability plus full generic rank of [A_1 .. A_p, B_hat_S]
/// (flat mode-major indices).
bool switched_controllable(const structsel::SwitchedStructuredSystem& sw, const std::vector<int>& selected);

/// Full generic rank of [A, B_S] alone.
bool rank_condition(const structsel::StructuredSystem& sys, const std::vector<int>& selected);

struct Optimum {
  Rational cost;
  std::vector<int> selection;  // first optimal subset in (size, lex) order
};

/// Exhaustive minimum over all input subsets (with |S| <= k when given) of
/// cost(S) + penalty * |S|.
std::optional<Optimum> min_cost_selection(const structsel::StructuredSystem& sys, std::optional<int> k = std::nullopt,
                                          const Rational& penalty = 0);
std::optional<Optimum> min_cost_switched_selection(const structsel::SwitchedStructuredSystem& sw,
                                                   std::optional<int> k = std::nullopt);

/// Minimum cost of an input subset satisfying the rank condition only.
std::optional<Rational> min_cost_rank_only(const structsel::StructuredSystem& sys);

/// Laplace expansion.
long long det(const IntMatrix& m);

/// Every square submatrix has determinant in {-1, 0, 1}.
bool totally_unimodular(const IntMatrix& m);

/// w with an all-ones row appended.
IntMatrix with_ones_row(const IntMatrix& w);

/// Every column has at most one nonzero.
bool sssi(const IntMatrix& w);

/// Minimum of a bounded LP by enumerating basic solutions (every variable
/// must have a finite upper bound). nullopt when infeasible.
std::optional<Rational> lp_vertex_minimum(const structsel::LinearProgram& lp);

/// First-principles check of strong duality and complementary slackness
/// for an optimal solution; recomputes reduced costs from the duals.
/// Returns a description of the first violation.
std::optional<std::string> duality_violation(const structsel::LinearProgram& lp, const structsel::LpSolution& sol);

}  // namespace oracle
