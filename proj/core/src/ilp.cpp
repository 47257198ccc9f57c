#include "structsel/ilp.hpp"

#include <algorithm>
#include <cctype>

#include "structsel/controllability.hpp"
#include "structsel/errors.hpp"

namespace structsel {

const char* to_string(Problem p) {
  switch (p) {
    case Problem::kP1:
      return "p1";
    case Problem::kP2:
      return "p2";
    case Problem::kP3:
      return "p3";
    case Problem::kP4:
      return "p4";
    case Problem::kP5:
      return "p5";
    case Problem::kP4Fix:
      return "p4fix";
    case Problem::kP5Fix:
      return "p5fix";
  }
  return "unknown";
}

std::optional<Problem> parse_problem(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Problem p : {Problem::kP1, Problem::kP2, Problem::kP3, Problem::kP4, Problem::kP5, Problem::kP4Fix,
                    Problem::kP5Fix}) {
    if (lower == to_string(p)) return p;
  }
  return std::nullopt;
}

bool is_switched_problem(Problem p) {
  return p == Problem::kP4 || p == Problem::kP5 || p == Problem::kP4Fix || p == Problem::kP5Fix;
}

bool needs_cardinality(Problem p) { return p == Problem::kP2 || p == Problem::kP5 || p == Problem::kP5Fix; }

const char* to_string(RowGroup g) {
  switch (g) {
    case RowGroup::kStateEquality:
      return "state-equality";
    case RowGroup::kCapacity:
      return "capacity";
    case RowGroup::kCoverage:
      return "coverage";
    case RowGroup::kLinking:
      return "linking";
    case RowGroup::kCardinality:
      return "cardinality";
  }
  return "unknown";
}

std::string VariableMap::name(int var) const {
  const bool switched = bipartite.num_state_columns > n;
  if (var < num_edges()) {
    const auto& e = bipartite.edges[static_cast<std::size_t>(var)];
    const std::string head = "y_";
    const std::string tail = "_x" + std::to_string(e.left + 1);
    if (e.right < bipartite.num_inputs) return head + "u" + std::to_string(e.right + 1) + tail;
    const int col = e.right - bipartite.num_inputs;
    if (switched) return head + "m" + std::to_string(col / n + 1) + "x" + std::to_string(col % n + 1) + tail;
    return head + "x" + std::to_string(col + 1) + tail;
  }
  return "t" + std::to_string(var - num_edges() + 1);
}

std::vector<int> IlpModel::rows_in(RowGroup g) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < row_groups.size(); ++i) {
    if (row_groups[i] == g) out.push_back(static_cast<int>(i));
  }
  return out;
}

IntMatrix IlpModel::constraint_matrix() const {
  IntMatrix m(lp.rows.size(), std::vector<int>(static_cast<std::size_t>(lp.num_vars), 0));
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    for (const auto& [j, a] : lp.rows[i].coeffs) m[i][static_cast<std::size_t>(j)] = static_cast<int>(a.get_num().get_si());
  }
  return m;
}

namespace {

struct CoreInput {
  int n = 0;
  const SparsityPattern* state_part = nullptr;  // A or [A_1 ... A_p]
  const SparsityPattern* inputs = nullptr;      // B or B_hat
  std::vector<Rational> costs;
  std::vector<std::pair<int, int>> labels;
  IncidenceMatrix incidence;
};

IlpModel build_core(Problem problem, CoreInput in, std::optional<int> k, std::optional<Rational> gamma) {
  IlpModel model;
  model.problem = problem;
  model.k = k;
  model.vars.bipartite = system_bipartite(*in.state_part, *in.inputs);
  model.vars.inputs = std::move(in.labels);
  model.vars.n = in.n;
  model.incidence = std::move(in.incidence);
  const VariableMap& vars = model.vars;
  const SystemBipartite& bip = vars.bipartite;
  const int m = vars.num_inputs();

  LinearProgram& lp = model.lp;
  for (int e = 0; e < vars.num_edges(); ++e) lp.add_variable(0, 0, Rational(1));
  const Rational g = gamma.value_or(0);
  model.gamma = g;
  for (int j = 0; j < m; ++j) lp.add_variable(in.costs[static_cast<std::size_t>(j)] + g, 0, Rational(1));

  const auto add = [&](std::vector<std::pair<int, Rational>> coeffs, RowSense sense, Rational rhs, RowGroup group,
                       std::string name) {
    lp.add_row(std::move(coeffs), sense, std::move(rhs));
    model.row_groups.push_back(group);
    model.row_names.push_back(std::move(name));
  };

  std::vector<std::vector<std::pair<int, Rational>>> left(static_cast<std::size_t>(bip.num_states));
  std::vector<std::vector<std::pair<int, Rational>>> right(static_cast<std::size_t>(bip.num_right()));
  for (int e = 0; e < vars.num_edges(); ++e) {
    const auto& edge = bip.edges[static_cast<std::size_t>(e)];
    left[static_cast<std::size_t>(edge.left)].emplace_back(vars.y(e), 1);
    right[static_cast<std::size_t>(edge.right)].emplace_back(vars.y(e), 1);
  }
  for (int i = 0; i < bip.num_states; ++i) {
    add(std::move(left[static_cast<std::size_t>(i)]), RowSense::kEqual, 1, RowGroup::kStateEquality,
        "match_x" + std::to_string(i + 1));
  }
  for (int r = 0; r < bip.num_right(); ++r) {
    std::string name;
    if (r < m) {
      name = "cap_u" + std::to_string(r + 1);
    } else if (bip.num_state_columns > in.n) {
      const int col = r - m;
      name = "cap_m" + std::to_string(col / in.n + 1) + "x" + std::to_string(col % in.n + 1);
    } else {
      name = "cap_x" + std::to_string(r - m + 1);
    }
    add(std::move(right[static_cast<std::size_t>(r)]), RowSense::kLessEqual, 1, RowGroup::kCapacity, std::move(name));
  }
  for (int s = 0; s < model.incidence.rows(); ++s) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int j = 0; j < m; ++j) {
      if (model.incidence.w[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] != 0) {
        coeffs.emplace_back(vars.t(j), -1);
      }
    }
    add(std::move(coeffs), RowSense::kLessEqual, -1, RowGroup::kCoverage, "cover_s" + std::to_string(s + 1));
  }
  for (int j = 0; j < m; ++j) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int e : bip.input_edges[static_cast<std::size_t>(j)]) coeffs.emplace_back(vars.y(e), 1);
    coeffs.emplace_back(vars.t(j), -1);
    add(std::move(coeffs), RowSense::kLessEqual, 0, RowGroup::kLinking, "link_u" + std::to_string(j + 1));
  }
  if (k) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int j = 0; j < m; ++j) coeffs.emplace_back(vars.t(j), 1);
    add(std::move(coeffs), RowSense::kLessEqual, *k, RowGroup::kCardinality, "card");
  }
  return model;
}

void require_controllable(const StructuredSystem& sys) {
  const auto cert = is_structurally_controllable(sys, all_inputs(sys.m()));
  if (!cert.controllable) {
    throw PreconditionError("the system is not structurally controllable even with all inputs");
  }
}

void require_controllable(const SwitchedStructuredSystem& sw) {
  const auto cert = is_switched_structurally_controllable(sw, all_inputs(sw.total_inputs()));
  if (!cert.controllable) {
    throw PreconditionError("the switched system is not structurally controllable even with all inputs");
  }
}

void require_k(int k) {
  if (k < 1) throw PreconditionError("cardinality bound k must be at least 1");
}

CoreInput fixed_input(const StructuredSystem& sys) {
  CoreInput in;
  in.n = sys.n();
  in.state_part = &sys.a();
  in.inputs = &sys.b();
  in.costs.assign(sys.costs().begin(), sys.costs().end());
  for (int j = 0; j < sys.m(); ++j) in.labels.emplace_back(0, j);
  in.incidence = build_incidence(sys);
  return in;
}

IlpModel build_switched(Problem problem, const SwitchedStructuredSystem& sw, std::optional<int> k) {
  require_controllable(sw);
  const UnionSystem u = union_system(sw);
  CoreInput in;
  in.n = sw.n();
  in.state_part = &u.a_stacked;
  in.inputs = &u.b_hat;
  in.costs = sw.flat_costs();
  for (int j = 0; j < sw.total_inputs(); ++j) in.labels.push_back(sw.split_input(j));
  in.incidence = build_switched_incidence(sw);
  return build_core(problem, std::move(in), k, std::nullopt);
}

}  // namespace

IlpModel build_p1(const StructuredSystem& sys) {
  require_controllable(sys);
  return build_core(Problem::kP1, fixed_input(sys), std::nullopt, std::nullopt);
}

IlpModel build_p2(const StructuredSystem& sys, int k) {
  require_k(k);
  require_controllable(sys);
  return build_core(Problem::kP2, fixed_input(sys), k, std::nullopt);
}

IlpModel build_p3(const StructuredSystem& sys) {
  require_controllable(sys);
  Rational c_max = 0;
  for (const Rational& c : sys.costs()) c_max = std::max(c_max, c);
  Rational gamma = sys.m() * c_max;
  std::vector<std::string> warnings;
  if (sgn(gamma) == 0) {
    gamma = 1;
    warnings.push_back("all input costs are zero; using cardinality penalty 1");
  }
  IlpModel model = build_core(Problem::kP3, fixed_input(sys), std::nullopt, gamma);
  model.warnings = std::move(warnings);
  return model;
}

IlpModel build_p4(const SwitchedStructuredSystem& sw) { return build_switched(Problem::kP4, sw, std::nullopt); }

IlpModel build_p5(const SwitchedStructuredSystem& sw, int k) {
  require_k(k);
  return build_switched(Problem::kP5, sw, k);
}

SwitchedStructuredSystem fixed_input_transform(const SwitchedStructuredSystem& sw) {
  const Mode& first = sw.mode(0);
  for (int k = 1; k < sw.num_modes(); ++k) {
    if (!(sw.mode(k).b == first.b)) {
      throw PreconditionError("mode " + std::to_string(k + 1) + " has a different input matrix than mode 1");
    }
  }
  std::vector<Mode> modes;
  modes.push_back(first);
  for (int k = 1; k < sw.num_modes(); ++k) {
    modes.push_back(Mode{sw.mode(k).a, SparsityPattern(sw.n(), 0, {}), {}, {}});
  }
  return SwitchedStructuredSystem(sw.n(), std::move(modes));
}

IlpModel build_p4fix(const SwitchedStructuredSystem& sw) {
  return build_switched(Problem::kP4Fix, fixed_input_transform(sw), std::nullopt);
}

IlpModel build_p5fix(const SwitchedStructuredSystem& sw, int k) {
  require_k(k);
  return build_switched(Problem::kP5Fix, fixed_input_transform(sw), k);
}

}  // namespace structsel
