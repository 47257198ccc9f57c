#include "structsel/selection.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "structsel/errors.hpp"

namespace structsel {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kExactLp:
      return "exact-LP";
    case Provenance::kExactOracle:
      return "exact-oracle";
    case Provenance::kRoundedFeasible:
      return "rounded-feasible";
  }
  return "unknown";
}

const char* to_string(SelectionStatus s) {
  switch (s) {
    case SelectionStatus::kOptimal:
      return "optimal";
    case SelectionStatus::kFeasible:
      return "feasible";
    case SelectionStatus::kInfeasible:
      return "infeasible";
    case SelectionStatus::kRefused:
      return "refused";
  }
  return "unknown";
}

namespace {

// What the solvers need to know about a fixed or switched instance.
struct Instance {
  int n = 0;
  std::vector<Rational> costs;  // flat
  std::vector<int> mode_offsets;  // size p + 1
  IncidenceMatrix incidence;
  int deficiency = 0;  // n minus the generic rank of the state part
  std::function<ControllabilityCertificate(std::span<const int>)> check;

  int num_inputs() const { return static_cast<int>(costs.size()); }

  std::vector<std::vector<int>> split(const std::vector<int>& selected) const {
    std::vector<std::vector<int>> out(mode_offsets.size() - 1);
    for (int u : selected) {
      const auto it = std::upper_bound(mode_offsets.begin(), mode_offsets.end(), u);
      out[static_cast<std::size_t>(it - mode_offsets.begin() - 1)].push_back(u);
    }
    return out;
  }

  Rational cost_of(const std::vector<int>& selected) const {
    Rational c;
    for (int u : selected) c += costs[static_cast<std::size_t>(u)];
    return c;
  }
};

Instance make_instance(const StructuredSystem& sys) {
  Instance in;
  in.n = sys.n();
  in.costs.assign(sys.costs().begin(), sys.costs().end());
  in.mode_offsets = {0, sys.m()};
  in.incidence = build_incidence(sys);
  in.deficiency = sys.n() - generic_rank(sys.a());
  in.check = [&sys](std::span<const int> sel) { return is_structurally_controllable(sys, sel); };
  return in;
}

// `sw` must outlive the instance.
Instance make_instance(const SwitchedStructuredSystem& sw) {
  Instance in;
  in.n = sw.n();
  in.costs = sw.flat_costs();
  for (int k = 0; k <= sw.num_modes(); ++k) {
    in.mode_offsets.push_back(k < sw.num_modes() ? sw.input_offset(k) : sw.total_inputs());
  }
  in.incidence = build_switched_incidence(sw);
  in.deficiency = sw.n() - generic_rank(union_system(sw).a_stacked);
  in.check = [&sw](std::span<const int> sel) { return is_switched_structurally_controllable(sw, sel); };
  return in;
}

std::vector<MatchedEdge> matching_from_y(const VariableMap& vars, const std::vector<Rational>& x) {
  std::vector<MatchedEdge> out;
  for (int e = 0; e < vars.num_edges(); ++e) {
    if (sgn(x[static_cast<std::size_t>(vars.y(e))]) == 0) continue;
    const auto& edge = vars.bipartite.edges[static_cast<std::size_t>(e)];
    MatchedEdge m;
    m.state = edge.left;
    if (edge.right < vars.bipartite.num_inputs) {
      m.by_input = true;
      m.index = edge.right;
    } else {
      const int col = edge.right - vars.bipartite.num_inputs;
      m.index = col % vars.n;
      m.mode = col / vars.n;
    }
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const MatchedEdge& a, const MatchedEdge& b) { return a.state < b.state; });
  return out;
}

std::vector<int> t_support(const IlpModel& model, const std::vector<Rational>& x) {
  std::vector<int> out;
  for (int j = 0; j < model.vars.num_inputs(); ++j) {
    if (sgn(x[static_cast<std::size_t>(model.vars.t(j))]) > 0) out.push_back(j);
  }
  return out;
}

void reverify(const Instance& in, const std::vector<int>& selected, const char* route) {
  if (!in.check(selected).controllable) {
    throw std::logic_error(std::string(route) + ": selected inputs fail the controllability re-check");
  }
}

SelectionResult base_result(Problem problem, std::optional<int> k, Provenance provenance) {
  SelectionResult r;
  r.problem = problem;
  r.k = k;
  r.provenance = provenance;
  return r;
}

SelectionResult solve_certified(const Instance& in, Problem problem, std::optional<int> k,
                                const std::function<IlpModel()>& build, const SelectionOptions& options) {
  SelectionResult r = base_result(problem, k, Provenance::kExactLp);
  if (needs_cardinality(problem)) {
    if (!k) throw PreconditionError(std::string("problem ") + to_string(problem) + " needs a cardinality bound k");
    if (*k < 1) throw PreconditionError("cardinality bound k must be at least 1");
  }
  if (!in.check(all_inputs(in.num_inputs())).controllable) {
    r.status = SelectionStatus::kInfeasible;
    r.message = "not structurally controllable even with all inputs";
    return r;
  }
  const ConstraintClass cls = classify(in.incidence.w, options.classify);
  r.restricted_tu = cls.restricted_tu;
  if (cls.restricted_tu != Verdict::kTrue) {
    r.status = SelectionStatus::kRefused;
    r.message = std::string("incidence matrix is ") +
                (cls.restricted_tu == Verdict::kFalse ? "not restricted TU" : "undecided for restricted TU") +
                "; an exact LP optimum cannot be certified (use bounds/rounding or the brute-force oracle)";
    return r;
  }

  const IlpModel model = build();
  const LpSolution sol = solve_lp(model.lp, options.simplex);
  r.pivots = sol.pivots;
  if (sol.status == LpStatus::kInfeasible) {
    r.status = SelectionStatus::kInfeasible;
    r.message = "no input selection satisfies the constraints";
    if (k) r.message += " with at most " + std::to_string(*k) + " inputs";
    return r;
  }
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("LP relaxation ended with status ") + to_string(sol.status));
  }
  const IntegralityReport integral = assert_integral(sol);
  if (!integral.integral) {
    throw std::logic_error("restricted-TU instance produced fractional value " + to_string(integral.value) +
                           " for " + model.vars.name(integral.first_fractional));
  }
  r.selected = t_support(model, sol.x);
  reverify(in, r.selected, "exact LP");
  r.status = SelectionStatus::kOptimal;
  r.per_mode = in.split(r.selected);
  r.cost = in.cost_of(r.selected);
  r.objective = sol.objective;
  r.matching = matching_from_y(model.vars, sol.x);
  return r;
}

// Lexicographic order of the sorted index lists of two subsets, with a
// proper prefix counting as smaller.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const std::uint32_t diff = a ^ b;
  const std::uint32_t low = diff & (~diff + 1);
  const std::uint32_t above = ~((low << 1) - 1);
  if (a & low) return (b & above) != 0;
  return (a & above) == 0;
}

template <class Cost>
std::vector<std::uint32_t> ordered_candidates(const std::vector<std::uint32_t>& masks, const std::vector<Cost>& cost) {
  std::vector<std::size_t> order(masks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (cost[x] != cost[y]) return cost[x] < cost[y];
    return lex_less(masks[x], masks[y]);
  });
  std::vector<std::uint32_t> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(masks[i]);
  return out;
}

// Costs scaled to a common denominator, if the total fits in 63 bits.
std::optional<std::vector<long long>> scaled_costs(const std::vector<Rational>& costs) {
  mpz_class lcm = 1;
  for (const Rational& c : costs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  mpz_class total = 0;
  std::vector<long long> out;
  for (const Rational& c : costs) {
    const mpz_class v = c.get_num() * (lcm / c.get_den());
    total += v;
    if (!total.fits_slong_p()) return std::nullopt;
    out.push_back(v.get_si());
  }
  return out;
}

SelectionResult oracle(const Instance& in, Problem problem, std::optional<int> k, const std::vector<Rational>& order_costs,
                       const SelectionOptions& options) {
  SelectionResult r = base_result(problem, k, Provenance::kExactOracle);
  const int m = in.num_inputs();
  if (m > options.oracle_max_inputs || m > 31) {
    throw CapExceeded("brute-force oracle limited to " + std::to_string(std::min(options.oracle_max_inputs, 31)) +
                      " inputs, instance has " + std::to_string(m));
  }
  if (k && *k < 0) throw PreconditionError("cardinality bound k must be non-negative");
  const int limit = k ? std::min(*k, m) : m;

  // Necessary conditions: every source SCC covered, enough inputs to fill
  // the matching deficiency.
  const int r_rows = in.incidence.rows();
  const bool use_cover = r_rows <= 64;
  std::vector<std::uint64_t> cover(static_cast<std::size_t>(m), 0);
  if (use_cover) {
    for (int i = 0; i < r_rows; ++i) {
      for (int j = 0; j < m; ++j) {
        if (in.incidence.w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          cover[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
        }
      }
    }
  }
  const std::uint64_t full = r_rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r_rows) - 1;

  std::vector<std::uint32_t> masks;
  std::function<void(int, std::uint32_t, std::uint64_t, int)> dfs = [&](int j, std::uint32_t mask, std::uint64_t cov,
                                                                       int count) {
    if (j == m) {
      if (count >= in.deficiency && (!use_cover || cov == full)) masks.push_back(mask);
      return;
    }
    dfs(j + 1, mask, cov, count);
    if (count < limit) dfs(j + 1, mask | (std::uint32_t{1} << j), cov | cover[static_cast<std::size_t>(j)], count + 1);
  };
  dfs(0, 0, 0, 0);

  std::vector<std::uint32_t> ordered;
  if (auto scaled = scaled_costs(order_costs)) {
    std::vector<long long> cost;
    cost.reserve(masks.size());
    for (std::uint32_t mask : masks) {
      long long c = 0;
      for (std::uint32_t b = mask; b; b &= b - 1) c += (*scaled)[static_cast<std::size_t>(std::countr_zero(b))];
      cost.push_back(c);
    }
    ordered = ordered_candidates(masks, cost);
  } else {
    std::vector<Rational> cost;
    cost.reserve(masks.size());
    for (std::uint32_t mask : masks) {
      Rational c;
      for (std::uint32_t b = mask; b; b &= b - 1) c += order_costs[static_cast<std::size_t>(std::countr_zero(b))];
      cost.push_back(c);
    }
    ordered = ordered_candidates(masks, cost);
  }

  for (std::uint32_t mask : ordered) {
    std::vector<int> sel;
    for (std::uint32_t b = mask; b; b &= b - 1) sel.push_back(std::countr_zero(b));
    const ControllabilityCertificate cert = in.check(sel);
    if (!cert.controllable) continue;
    r.status = SelectionStatus::kOptimal;
    r.selected = std::move(sel);
    r.per_mode = in.split(r.selected);
    r.cost = in.cost_of(r.selected);
    Rational objective;
    for (int u : r.selected) objective += order_costs[static_cast<std::size_t>(u)];
    r.objective = objective;
    r.matching = cert.matching;
    return r;
  }
  r.status = SelectionStatus::kInfeasible;
  r.message = "no input subset yields structural controllability";
  if (k) r.message += " with at most " + std::to_string(*k) + " inputs";
  return r;
}

void require_fixed_problem(Problem p) {
  if (p != Problem::kP1 && p != Problem::kP2 && p != Problem::kP3) {
    throw PreconditionError(std::string("problem ") + to_string(p) + " needs a switched system");
  }
}

void require_switched_problem(Problem p) {
  if (!is_switched_problem(p)) throw PreconditionError(std::string("problem ") + to_string(p) + " needs a fixed system");
}

}  // namespace

SelectionResult solve_exact(const StructuredSystem& sys, Problem problem, std::optional<int> k,
                            const SelectionOptions& options) {
  require_fixed_problem(problem);
  const Instance in = make_instance(sys);
  const std::optional<int> card = problem == Problem::kP2 ? k : std::nullopt;
  return solve_certified(in, problem, card,
                         [&]() {
                           switch (problem) {
                             case Problem::kP2:
                               return build_p2(sys, *card);
                             case Problem::kP3:
                               return build_p3(sys);
                             default:
                               return build_p1(sys);
                           }
                         },
                         options);
}

SelectionResult solve_exact_switched(const SwitchedStructuredSystem& sw, Problem problem, std::optional<int> k,
                                     const SelectionOptions& options) {
  require_switched_problem(problem);
  const bool fixed_b = problem == Problem::kP4Fix || problem == Problem::kP5Fix;
  const SwitchedStructuredSystem work = fixed_b ? fixed_input_transform(sw) : sw;
  const Instance in = make_instance(work);
  const std::optional<int> card = needs_cardinality(problem) ? k : std::nullopt;
  return solve_certified(in, problem, card,
                         [&]() {
                           switch (problem) {
                             case Problem::kP5:
                             case Problem::kP5Fix:
                               return build_p5(work, *card);
                             default:
                               return build_p4(work);
                           }
                         },
                         options);
}

BoundsReport bounds(const StructuredSystem& sys, const SelectionOptions& options) {
  const IlpModel model = build_p1(sys);
  BoundsReport rep;
  const MinCostMatching mat = min_cost_max_matching_inputs(system_bipartite(sys.a(), sys.b()), sys.costs());
  rep.c_mat = mat.cost;
  const SystemBipartite& bip = model.vars.bipartite;
  for (int e : mat.edges) {
    if (bip.is_input_edge(e)) rep.matching_inputs.push_back(bip.edges[static_cast<std::size_t>(e)].right);
  }
  std::sort(rep.matching_inputs.begin(), rep.matching_inputs.end());

  const LpSolution sol = solve_lp(model.lp, options.simplex);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("P1 relaxation ended with status ") + to_string(sol.status));
  }
  rep.c_lp = sol.objective;
  rep.lp_support = t_support(model, sol.x);
  rep.lp_integral = assert_integral(sol).integral;
  rep.ordered = rep.c_mat <= rep.c_lp;
  rep.f = model.incidence.max_row_sum();
  rep.perfect_matching_in_a = generic_rank(sys.a()) == sys.n();
  return rep;
}

SelectionResult lp_round(const StructuredSystem& sys, const SelectionOptions& options) {
  IlpModel model = build_p1(sys);
  const Instance in = make_instance(sys);
  SelectionResult r = base_result(Problem::kP1, std::nullopt, Provenance::kRoundedFeasible);

  const LpSolution relaxed = solve_lp(model.lp, options.simplex);
  if (relaxed.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("P1 relaxation ended with status ") + to_string(relaxed.status));
  }
  r.selected = t_support(model, relaxed.x);

  // Repair: with t fixed to the rounded support the remaining system is a
  // bipartite matching polytope, so the vertex found is integral.
  LinearProgram& fixed = model.lp;
  for (int j = 0; j < model.vars.num_inputs(); ++j) {
    const auto v = static_cast<std::size_t>(model.vars.t(j));
    const Rational val = std::binary_search(r.selected.begin(), r.selected.end(), j) ? 1 : 0;
    fixed.lower[v] = val;
    fixed.upper[v] = val;
  }
  const LpSolution repaired = solve_lp(fixed, options.simplex);
  if (repaired.status != LpStatus::kOptimal) {
    throw std::logic_error("rounded support admits no matching; the repair step failed");
  }
  if (!assert_integral(repaired).integral) throw std::logic_error("repair step returned a fractional matching");
  reverify(in, r.selected, "LP rounding");

  r.pivots = relaxed.pivots + repaired.pivots;
  r.per_mode = in.split(r.selected);
  r.cost = in.cost_of(r.selected);
  r.objective = r.cost;
  r.matching = matching_from_y(model.vars, repaired.x);
  r.f = model.incidence.max_row_sum();
  r.lp_bound = relaxed.objective;
  r.perfect_matching_in_a = generic_rank(sys.a()) == sys.n();
  if (r.perfect_matching_in_a) r.f_bound = *r.f * relaxed.objective;
  // Meeting the LP lower bound proves optimality.
  r.status = r.cost == relaxed.objective ? SelectionStatus::kOptimal : SelectionStatus::kFeasible;
  return r;
}

SelectionResult brute_force(const StructuredSystem& sys, Problem problem, std::optional<int> k,
                            const SelectionOptions& options) {
  require_fixed_problem(problem);
  const Instance in = make_instance(sys);
  std::vector<Rational> order_costs = in.costs;
  if (problem == Problem::kP3) {
    Rational c_max = 0;
    for (const Rational& c : in.costs) c_max = std::max(c_max, c);
    Rational gamma = sys.m() * c_max;
    if (sgn(gamma) == 0) gamma = 1;
    for (Rational& c : order_costs) c += gamma;
  }
  if (problem == Problem::kP2 && !k) throw PreconditionError("problem p2 needs a cardinality bound k");
  return oracle(in, problem, problem == Problem::kP2 ? k : std::nullopt, order_costs, options);
}

SelectionResult brute_force_switched(const SwitchedStructuredSystem& sw, Problem problem, std::optional<int> k,
                                     const SelectionOptions& options) {
  require_switched_problem(problem);
  if (needs_cardinality(problem) && !k) {
    throw PreconditionError(std::string("problem ") + to_string(problem) + " needs a cardinality bound k");
  }
  const bool fixed_b = problem == Problem::kP4Fix || problem == Problem::kP5Fix;
  const SwitchedStructuredSystem work = fixed_b ? fixed_input_transform(sw) : sw;
  const Instance in = make_instance(work);
  return oracle(in, problem, needs_cardinality(problem) ? k : std::nullopt, in.costs, options);
}

}  // namespace structsel
