#include "structsel/controllability.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace structsel {

int generic_rank(const SparsityPattern& p) {
  BipartiteGraph g{p.rows(), p.cols(), std::vector<std::vector<int>>(static_cast<std::size_t>(p.rows()))};
  for (const Entry& e : p.entries()) g.adj[static_cast<std::size_t>(e.row)].push_back(e.col);
  return max_matching(g).size;
}

std::vector<int> all_inputs(int m) {
  std::vector<int> out(static_cast<std::size_t>(m));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

namespace {

std::vector<int> normalise_selection(std::span<const int> selected, int m) {
  std::vector<int> sel(selected.begin(), selected.end());
  for (int u : sel) {
    if (u < 0 || u >= m) throw std::out_of_range("input index " + std::to_string(u + 1) + " out of range");
  }
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  return sel;
}

// Shared check. `reach_a` drives reachability, `state_part` the matching
// condition (A itself, or [A_1 ... A_p]); `n` divides its column count.
ControllabilityCertificate check(const SparsityPattern& reach_a, const SparsityPattern& state_part,
                                 const SparsityPattern& b, std::span<const int> selected) {
  const int n = reach_a.rows();
  const std::vector<int> sel = normalise_selection(selected, b.cols());
  ControllabilityCertificate cert;

  const SccDecomposition scc = scc_decompose(state_digraph(reach_a));
  for (int c : scc.sources()) {
    cert.source_sccs.push_back(scc.components[static_cast<std::size_t>(c)]);
    int hit = -1;
    for (int u : sel) {
      for (int x : b.column_support(u)) {
        if (scc.component_of[static_cast<std::size_t>(x)] == c) {
          hit = u;
          break;
        }
      }
      if (hit >= 0) break;
    }
    cert.actuator.push_back(hit);
    if (hit < 0 && cert.failing_scc < 0) cert.failing_scc = static_cast<int>(cert.source_sccs.size()) - 1;
  }
  const std::vector<int> reached = input_reachable_states(reach_a, b, sel);
  for (int v = 0, k = 0; v < n; ++v) {
    if (k < static_cast<int>(reached.size()) && reached[static_cast<std::size_t>(k)] == v) {
      ++k;
    } else {
      cert.unreachable_states.push_back(v);
    }
  }
  cert.all_reachable = cert.unreachable_states.empty();

  const SystemBipartite bip = system_bipartite(state_part, b.select_columns(sel));
  const BipartiteGraph g = bip.graph();
  const Matching mm = max_matching(g);
  cert.matching_size = mm.size;
  cert.matching_saturates = mm.size == n;
  for (int i = 0; i < n; ++i) {
    const int r = mm.left_to_right[static_cast<std::size_t>(i)];
    if (r < 0) continue;
    MatchedEdge e;
    e.state = i;
    if (r < bip.num_inputs) {
      e.by_input = true;
      e.index = sel[static_cast<std::size_t>(r)];
    } else {
      const int col = r - bip.num_inputs;
      e.index = n > 0 ? col % n : 0;
      e.mode = n > 0 ? col / n : 0;
    }
    cert.matching.push_back(e);
  }
  if (!cert.matching_saturates) cert.deficient_states = hall_violator(g, mm);

  cert.controllable = cert.all_reachable && cert.matching_saturates;
  return cert;
}

}  // namespace

ControllabilityCertificate is_structurally_controllable(const StructuredSystem& sys, std::span<const int> selected) {
  return check(sys.a(), sys.a(), sys.b(), selected);
}

ControllabilityCertificate is_switched_structurally_controllable(const SwitchedStructuredSystem& sw,
                                                                 std::span<const int> selected) {
  const UnionSystem u = union_system(sw);
  return check(u.a_hat, u.a_stacked, u.b_hat, selected);
}

}  // namespace structsel
