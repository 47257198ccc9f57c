#include "structsel/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "structsel/errors.hpp"
#include "structsel/lp.hpp"

namespace structsel {

Digraph state_digraph(const SparsityPattern& a) {
  Digraph g{a.rows(), std::vector<std::vector<int>>(static_cast<std::size_t>(a.rows()))};
  for (const Entry& e : a.entries()) g.out[static_cast<std::size_t>(e.col)].push_back(e.row);
  for (auto& adj : g.out) std::sort(adj.begin(), adj.end());
  return g;
}

std::vector<int> SccDecomposition::sources() const {
  std::vector<int> out;
  for (int c = 0; c < size(); ++c) {
    if (is_source[static_cast<std::size_t>(c)]) out.push_back(c);
  }
  return out;
}

SccDecomposition scc_decompose(const Digraph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  constexpr int kUnvisited = -1;
  std::vector<int> index(n, kUnvisited);
  std::vector<int> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<int> raw_comp(n, -1);
  int counter = 0;
  int num_comp = 0;

  // Explicit DFS frames: (vertex, next neighbour position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < g.n; ++root) {
    if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& adj = g.out[static_cast<std::size_t>(v)];
      if (pos < adj.size()) {
        const int w = adj[pos++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] == kUnvisited) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[wi]) {
          low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], index[wi]);
        }
        continue;
      }
      const int done = v;
      frames.pop_back();
      if (low[static_cast<std::size_t>(done)] == index[static_cast<std::size_t>(done)]) {
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          raw_comp[static_cast<std::size_t>(w)] = num_comp;
          if (w == done) break;
        }
        ++num_comp;
      }
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[static_cast<std::size_t>(parent)] =
            std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(done)]);
      }
    }
  }

  // Renumber components by smallest member: scanning states in order visits
  // each component first at its minimum.
  std::vector<int> renumber(static_cast<std::size_t>(num_comp), -1);
  SccDecomposition out;
  out.component_of.assign(n, -1);
  for (int v = 0; v < g.n; ++v) {
    int& c = renumber[static_cast<std::size_t>(raw_comp[static_cast<std::size_t>(v)])];
    if (c < 0) {
      c = static_cast<int>(out.components.size());
      out.components.emplace_back();
    }
    out.components[static_cast<std::size_t>(c)].push_back(v);
    out.component_of[static_cast<std::size_t>(v)] = c;
  }
  out.condensation.resize(out.components.size());
  out.is_source.assign(out.components.size(), true);
  for (int v = 0; v < g.n; ++v) {
    const int cv = out.component_of[static_cast<std::size_t>(v)];
    for (int w : g.out[static_cast<std::size_t>(v)]) {
      const int cw = out.component_of[static_cast<std::size_t>(w)];
      if (cv == cw) continue;
      out.condensation[static_cast<std::size_t>(cv)].push_back(cw);
      out.is_source[static_cast<std::size_t>(cw)] = false;
    }
  }
  for (auto& adj : out.condensation) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return out;
}

std::vector<int> input_reachable_states(const SparsityPattern& a, const SparsityPattern& b,
                                        std::span<const int> selected) {
  const Digraph g = state_digraph(a);
  std::vector<char> seen(static_cast<std::size_t>(a.rows()), 0);
  std::deque<int> queue;
  for (int u : selected) {
    if (u < 0 || u >= b.cols()) throw std::out_of_range("selected input out of range");
    for (int x : b.column_support(u)) {
      if (!seen[static_cast<std::size_t>(x)]) {
        seen[static_cast<std::size_t>(x)] = 1;
        queue.push_back(x);
      }
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.out[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < a.rows(); ++v) {
    if (seen[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

namespace {

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : g_(g),
        dist_(static_cast<std::size_t>(g.left)),
        next_(static_cast<std::size_t>(g.left)) {
    m_.left_to_right.assign(static_cast<std::size_t>(g.left), -1);
    m_.right_to_left.assign(static_cast<std::size_t>(g.right), -1);
  }

  Matching run() {
    while (bfs()) {
      std::fill(next_.begin(), next_.end(), 0);
      for (int u = 0; u < g_.left; ++u) {
        if (m_.left_to_right[static_cast<std::size_t>(u)] < 0 && dfs(u)) ++m_.size;
      }
    }
    return m_;
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max();

  bool bfs() {
    std::deque<int> queue;
    for (int u = 0; u < g_.left; ++u) {
      if (m_.left_to_right[static_cast<std::size_t>(u)] < 0) {
        dist_[static_cast<std::size_t>(u)] = 0;
        queue.push_back(u);
      } else {
        dist_[static_cast<std::size_t>(u)] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : g_.adj[static_cast<std::size_t>(u)]) {
        const int w = m_.right_to_left[static_cast<std::size_t>(v)];
        if (w < 0) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
          dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  }

  // Iterative layered DFS for an augmenting path from free left vertex `root`.
  bool dfs(int root) {
    std::vector<int> path{root};
    while (!path.empty()) {
      const int u = path.back();
      const auto ui = static_cast<std::size_t>(u);
      const auto& adj = g_.adj[ui];
      bool advanced = false;
      while (next_[ui] < adj.size()) {
        const int v = adj[next_[ui]];
        const int w = m_.right_to_left[static_cast<std::size_t>(v)];
        if (w < 0) {
          // Augment along the path; each left vertex takes its current arc.
          for (std::size_t k = path.size(); k-- > 0;) {
            const int pu = path[k];
            const int pv = g_.adj[static_cast<std::size_t>(pu)][next_[static_cast<std::size_t>(pu)]];
            m_.left_to_right[static_cast<std::size_t>(pu)] = pv;
            m_.right_to_left[static_cast<std::size_t>(pv)] = pu;
          }
          return true;
        }
        if (dist_[static_cast<std::size_t>(w)] == dist_[ui] + 1) {
          path.push_back(w);
          advanced = true;
          break;
        }
        ++next_[ui];
      }
      if (advanced) continue;
      dist_[ui] = kInf;
      path.pop_back();
      if (!path.empty()) ++next_[static_cast<std::size_t>(path.back())];
    }
    return false;
  }

  const BipartiteGraph& g_;
  Matching m_;
  std::vector<int> dist_;
  std::vector<std::size_t> next_;
};

}  // namespace

Matching max_matching(const BipartiteGraph& g) { return HopcroftKarp(g).run(); }

std::vector<int> hall_violator(const BipartiteGraph& g, const Matching& matching) {
  int free_left = -1;
  for (int u = 0; u < g.left; ++u) {
    if (matching.left_to_right[static_cast<std::size_t>(u)] < 0) {
      free_left = u;
      break;
    }
  }
  if (free_left < 0) return {};
  // Left vertices reachable from the free vertex by alternating paths. For
  // a maximum matching all their neighbours are matched back into the set,
  // so |N(S)| = |S| - 1.
  std::vector<char> in_set(static_cast<std::size_t>(g.left), 0);
  std::deque<int> queue{free_left};
  in_set[static_cast<std::size_t>(free_left)] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      const int w = matching.right_to_left[static_cast<std::size_t>(v)];
      if (w >= 0 && !in_set[static_cast<std::size_t>(w)]) {
        in_set[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> out;
  for (int u = 0; u < g.left; ++u) {
    if (in_set[static_cast<std::size_t>(u)]) out.push_back(u);
  }
  return out;
}

BipartiteGraph SystemBipartite::graph() const {
  BipartiteGraph g{num_states, num_right(), std::vector<std::vector<int>>(static_cast<std::size_t>(num_states))};
  for (const Edge& e : edges) g.adj[static_cast<std::size_t>(e.left)].push_back(e.right);
  for (auto& adj : g.adj) std::sort(adj.begin(), adj.end());
  return g;
}

SystemBipartite system_bipartite(const SparsityPattern& state_part, const SparsityPattern& inputs) {
  if (state_part.rows() != inputs.rows()) throw std::invalid_argument("system_bipartite: row count mismatch");
  SystemBipartite bip;
  bip.num_states = state_part.rows();
  bip.num_inputs = inputs.cols();
  bip.num_state_columns = state_part.cols();
  bip.input_edges.resize(static_cast<std::size_t>(inputs.cols()));
  for (int j = 0; j < inputs.cols(); ++j) {
    for (int i : inputs.column_support(j)) {
      bip.input_edges[static_cast<std::size_t>(j)].push_back(static_cast<int>(bip.edges.size()));
      bip.edges.push_back({i, j});
    }
  }
  for (const Entry& e : state_part.entries()) bip.edges.push_back({e.row, bip.num_inputs + e.col});
  return bip;
}

MinCostMatching min_cost_max_matching_inputs(const SystemBipartite& bip, std::span<const Rational> costs) {
  if (static_cast<int>(costs.size()) != bip.num_inputs) {
    throw std::invalid_argument("min_cost_max_matching_inputs: one cost per input required");
  }
  MinCostMatching out;
  const BipartiteGraph g = bip.graph();
  const Matching mm = max_matching(g);
  if (mm.size < bip.num_states) {
    out.deficient_states = hall_violator(g, mm);
    return out;
  }

  LinearProgram lp;
  std::vector<std::vector<std::pair<int, Rational>>> left_rows(static_cast<std::size_t>(bip.num_states));
  std::vector<std::vector<std::pair<int, Rational>>> right_rows(static_cast<std::size_t>(bip.num_right()));
  for (std::size_t e = 0; e < bip.edges.size(); ++e) {
    const auto& edge = bip.edges[e];
    const Rational cost = edge.right < bip.num_inputs ? costs[static_cast<std::size_t>(edge.right)] : Rational(0);
    const int var = lp.add_variable(cost, 0, Rational(1));
    left_rows[static_cast<std::size_t>(edge.left)].emplace_back(var, 1);
    right_rows[static_cast<std::size_t>(edge.right)].emplace_back(var, 1);
  }
  for (auto& row : left_rows) lp.add_row(std::move(row), RowSense::kEqual, 1);
  for (auto& row : right_rows) {
    if (!row.empty()) lp.add_row(std::move(row), RowSense::kLessEqual, 1);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error(std::string("matching LP not optimal despite a saturating matching: ") +
                           to_string(sol.status));
  }
  const IntegralityReport integral = assert_integral(sol);
  if (!integral.integral) throw std::logic_error("matching LP returned a fractional vertex");
  out.saturating = true;
  out.cost = sol.objective;
  for (std::size_t e = 0; e < sol.x.size(); ++e) {
    if (sgn(sol.x[e]) != 0) out.edges.push_back(static_cast<int>(e));
  }
  return out;
}

}  // namespace structsel
