#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace oracle {

using structsel::SparsityPattern;

namespace {

struct MatchingSearch {
  int left;
  const std::vector<std::vector<int>>& adj;
  std::unordered_map<std::uint64_t, int> memo;

  // Best matching of left vertices i.. given the used right set.
  int best(int i, std::uint32_t used) {
    if (i == left) return 0;
    const std::uint64_t key = (static_cast<std::uint64_t>(used) << 6) | static_cast<std::uint64_t>(i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int result = best(i + 1, used);
    for (int r : adj[static_cast<std::size_t>(i)]) {
      if (used & (1u << r)) continue;
      result = std::max(result, 1 + best(i + 1, used | (1u << r)));
      if (result == left - i) break;
    }
    memo.emplace(key, result);
    return result;
  }
};

}  // namespace

int matching_size(int left, int right, const std::vector<std::vector<int>>& adj) {
  if (right > 32 || left > 63) throw std::invalid_argument("oracle::matching_size: graph too large");
  MatchingSearch search{left, adj, {}};
  return search.best(0, 0);
}

int numeric_generic_rank(const std::vector<const SparsityPattern*>& blocks, int rows, std::uint64_t seed) {
  int cols = 0;
  for (const auto* b : blocks) cols += b->cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<int> ranks;
  for (int draw = 0; draw < 3; ++draw) {
    std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(draw));
    std::uniform_real_distribution<double> value(1.0, 2.0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    int offset = 0;
    for (const auto* b : blocks) {
      for (const auto& e : b->entries()) m(e.row, offset + e.col) = value(rng);
      offset += b->cols();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-8);
    ranks.push_back(static_cast<int>(lu.rank()));
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks[1];
}

std::vector<bool> bfs_reachable(const SparsityPattern& a, const SparsityPattern& b, const std::vector<int>& selected) {
  const int n = a.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> queue;
  for (int u : selected) {
    for (const auto& e : b.entries()) {
      if (e.col == u && !seen[static_cast<std::size_t>(e.row)]) {
        seen[static_cast<std::size_t>(e.row)] = true;
        queue.push_back(e.row);
      }
    }
  }
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (const auto& e : a.entries()) {
      if (e.col == x && !seen[static_cast<std::size_t>(e.row)]) {
        seen[static_cast<std::size_t>(e.row)] = true;
        queue.push_back(e.row);
      }
    }
  }
  return seen;
}

bool rank_condition(const structsel::StructuredSystem& sys, const std::vector<int>& selected) {
  const SparsityPattern bs = sys.b().select_columns(selected);
  return numeric_generic_rank({&sys.a(), &bs}, sys.n()) == sys.n();
}

bool controllable(const structsel::StructuredSystem& sys, const std::vector<int>& selected) {
  const auto seen = bfs_reachable(sys.a(), sys.b(), selected);
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  return rank_condition(sys, selected);
}

bool switched_controllable(const structsel::SwitchedStructuredSystem& sw, const std::vector<int>& selected) {
  const int n = sw.n();
  // Union digraph and B_hat, assembled here from the modes directly.
  std::vector<structsel::Entry> a_entries;
  std::vector<structsel::Entry> b_entries;
  for (int k = 0; k < sw.num_modes(); ++k) {
    const auto& md = sw.mode(k);
    for (const auto& e : md.a.entries()) a_entries.push_back(e);
    for (const auto& e : md.b.entries()) b_entries.push_back({e.row, sw.input_offset(k) + e.col});
  }
  std::sort(a_entries.begin(), a_entries.end());
  a_entries.erase(std::unique(a_entries.begin(), a_entries.end()), a_entries.end());
  const SparsityPattern a_hat(n, n, a_entries);
  const SparsityPattern b_hat(n, sw.total_inputs(), b_entries);
  const auto seen = bfs_reachable(a_hat, b_hat, selected);
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;

  std::vector<const SparsityPattern*> blocks;
  for (const auto& md : sw.modes()) blocks.push_back(&md.a);
  const SparsityPattern bs = b_hat.select_columns(selected);
  blocks.push_back(&bs);
  return numeric_generic_rank(blocks, n) == n;
}

namespace {

template <typename Feasible>
std::optional<Optimum> enumerate(int m, const std::vector<Rational>& costs, std::optional<int> k,
                                 const Rational& penalty, Feasible feasible) {
  if (m > 20) throw std::invalid_argument("oracle: too many inputs to enumerate");
  std::optional<Optimum> best;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int size = __builtin_popcount(mask);
    if (k && size > *k) continue;
    std::vector<int> s;
    Rational cost = penalty * size;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        s.push_back(j);
        cost += costs[static_cast<std::size_t>(j)];
      }
    }
    if (best && cost > best->cost) continue;
    if (best && cost == best->cost &&
        (s.size() > best->selection.size() || (s.size() == best->selection.size() && s >= best->selection))) {
      continue;
    }
    if (!feasible(s)) continue;
    best = Optimum{cost, s};
  }
  return best;
}

}  // namespace

std::optional<Optimum> min_cost_selection(const structsel::StructuredSystem& sys, std::optional<int> k,
                                          const Rational& penalty) {
  const std::vector<Rational> costs(sys.costs().begin(), sys.costs().end());
  return enumerate(sys.m(), costs, k, penalty, [&](const std::vector<int>& s) { return controllable(sys, s); });
}

std::optional<Optimum> min_cost_switched_selection(const structsel::SwitchedStructuredSystem& sw,
                                                   std::optional<int> k) {
  return enumerate(sw.total_inputs(), sw.flat_costs(), k, 0,
                   [&](const std::vector<int>& s) { return switched_controllable(sw, s); });
}

std::optional<Rational> min_cost_rank_only(const structsel::StructuredSystem& sys) {
  const std::vector<Rational> costs(sys.costs().begin(), sys.costs().end());
  auto best = enumerate(sys.m(), costs, std::nullopt, 0, [&](const std::vector<int>& s) { return rank_condition(sys, s); });
  if (!best) return std::nullopt;
  return best->cost;
}

long long det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long long total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    IntMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<int> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(m[r][j]);
      }
      minor.push_back(row);
    }
    const long long term = m[0][c] * det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

bool totally_unimodular(const IntMatrix& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (std::uint32_t rmask = 1; rmask < (1u << rows); ++rmask) {
    const int size = __builtin_popcount(rmask);
    if (size > cols) continue;
    for (std::uint32_t cmask = 1; cmask < (1u << cols); ++cmask) {
      if (__builtin_popcount(cmask) != size) continue;
      IntMatrix sub;
      for (int r = 0; r < rows; ++r) {
        if (!(rmask & (1u << r))) continue;
        std::vector<int> row;
        for (int c = 0; c < cols; ++c) {
          if (cmask & (1u << c)) row.push_back(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
        sub.push_back(row);
      }
      const long long d = det(sub);
      if (d < -1 || d > 1) return false;
    }
  }
  return true;
}

IntMatrix with_ones_row(const IntMatrix& w) {
  IntMatrix out = w;
  const std::size_t cols = w.empty() ? 0 : w[0].size();
  out.emplace_back(cols, 1);
  return out;
}

bool sssi(const IntMatrix& w) {
  if (w.empty()) return true;
  for (std::size_t j = 0; j < w[0].size(); ++j) {
    int ones = 0;
    for (const auto& row : w) ones += row[j] != 0;
    if (ones > 1) return false;
  }
  return true;
}

namespace {

// Solves the square system exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

std::optional<Rational> lp_vertex_minimum(const structsel::LinearProgram& lp) {
  const int n = lp.num_vars;
  // Candidate hyperplanes: every row, every lower bound, every upper bound.
  std::vector<std::vector<Rational>> planes;
  std::vector<Rational> rhs;
  for (const auto& row : lp.rows) {
    std::vector<Rational> coeffs(static_cast<std::size_t>(n));
    for (const auto& [j, v] : row.coeffs) coeffs[static_cast<std::size_t>(j)] = v;
    planes.push_back(coeffs);
    rhs.push_back(row.rhs);
  }
  for (int j = 0; j < n; ++j) {
    if (!lp.upper[static_cast<std::size_t>(j)]) throw std::invalid_argument("lp_vertex_minimum: unbounded variable");
    std::vector<Rational> e(static_cast<std::size_t>(n));
    e[static_cast<std::size_t>(j)] = 1;
    planes.push_back(e);
    rhs.push_back(lp.lower[static_cast<std::size_t>(j)]);
    planes.push_back(e);
    rhs.push_back(*lp.upper[static_cast<std::size_t>(j)]);
  }
  const int total = static_cast<int>(planes.size());
  auto feasible = [&](const std::vector<Rational>& x) {
    for (int j = 0; j < n; ++j) {
      const auto js = static_cast<std::size_t>(j);
      if (x[js] < lp.lower[js] || x[js] > *lp.upper[js]) return false;
    }
    for (const auto& row : lp.rows) {
      Rational s = 0;
      for (const auto& [j, v] : row.coeffs) s += v * x[static_cast<std::size_t>(j)];
      if (row.sense == structsel::RowSense::kLessEqual && s > row.rhs) return false;
      if (row.sense == structsel::RowSense::kGreaterEqual && s < row.rhs) return false;
      if (row.sense == structsel::RowSense::kEqual && s != row.rhs) return false;
    }
    return true;
  };

  std::optional<Rational> best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  // Enumerate n-subsets of the hyperplanes in lexicographic order.
  for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
  if (n > total) return std::nullopt;
  while (true) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (int p : pick) {
      a.push_back(planes[static_cast<std::size_t>(p)]);
      b.push_back(rhs[static_cast<std::size_t>(p)]);
    }
    if (auto x = solve_square(a, b); x && feasible(*x)) {
      Rational obj = 0;
      for (int j = 0; j < n; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * (*x)[static_cast<std::size_t>(j)];
      if (!best || obj < *best) best = obj;
    }
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

std::optional<std::string> duality_violation(const structsel::LinearProgram& lp, const structsel::LpSolution& sol) {
  using structsel::RowSense;
  const auto n = static_cast<std::size_t>(lp.num_vars);
  if (sol.x.size() != n || sol.duals.size() != lp.rows.size()) return "solution has the wrong shape";

  Rational primal = 0;
  for (std::size_t j = 0; j < n; ++j) primal += lp.objective[j] * sol.x[j];
  if (primal != sol.objective) return "reported objective differs from c^T x";

  std::vector<Rational> d(lp.objective.begin(), lp.objective.end());
  Rational dual = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    const Rational& y = sol.duals[i];
    Rational activity = 0;
    for (const auto& [j, v] : row.coeffs) {
      activity += v * sol.x[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(j)] -= v * y;
    }
    if (row.sense == RowSense::kLessEqual && (activity > row.rhs || y > 0)) return "row " + std::to_string(i) + ": <= row violated or y > 0";
    if (row.sense == RowSense::kGreaterEqual && (activity < row.rhs || y < 0)) return "row " + std::to_string(i) + ": >= row violated or y < 0";
    if (row.sense == RowSense::kEqual && activity != row.rhs) return "row " + std::to_string(i) + ": equality violated";
    if (y != 0 && activity != row.rhs) return "row " + std::to_string(i) + ": complementary slackness fails";
    dual += y * row.rhs;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& x = sol.x[j];
    if (x < lp.lower[j] || (lp.upper[j] && x > *lp.upper[j])) return "x" + std::to_string(j) + " outside its bounds";
    if (d[j] > 0) {
      if (x != lp.lower[j]) return "x" + std::to_string(j) + ": positive reduced cost off the lower bound";
      dual += d[j] * lp.lower[j];
    } else if (d[j] < 0) {
      if (!lp.upper[j] || x != *lp.upper[j]) return "x" + std::to_string(j) + ": negative reduced cost off the upper bound";
      dual += d[j] * *lp.upper[j];
    }
  }
  if (dual != primal) return "primal " + structsel::to_string(primal) + " != dual " + structsel::to_string(dual);
  return std::nullopt;
}

}  // namespace oracle
