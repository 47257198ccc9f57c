#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "structsel/errors.hpp"
#include "structsel/model_io.hpp"
#include "structsel/selection.hpp"

using namespace structsel;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(STRUCTSEL_FIXTURES) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Three self-looped source states; each input touches two of them, so w is
// the 3-cycle incidence matrix.
StructuredSystem odd_cycle_system() {
  return StructuredSystem(SparsityPattern(3, 3, {{0, 0}, {1, 1}, {2, 2}}),
                          SparsityPattern(3, 3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0, 2}, {2, 2}}), {1, 1, 1});
}

using Sel = std::vector<int>;

}  // namespace

TEST(Selection, TenStateOptima) {
  const auto sys = parse_system(read_fixture("ten_state.json"));

  const auto p1 = solve_exact(sys, Problem::kP1);
  ASSERT_EQ(p1.status, SelectionStatus::kOptimal);
  EXPECT_EQ(p1.provenance, Provenance::kExactLp);
  EXPECT_EQ(p1.selected, (Sel{1, 2, 4, 5}));
  EXPECT_EQ(p1.cost, 4);

  const auto p2_3 = solve_exact(sys, Problem::kP2, 3);
  EXPECT_EQ(p2_3.selected, (Sel{1, 3, 4}));
  EXPECT_EQ(p2_3.cost, 12);

  const auto p2_2 = solve_exact(sys, Problem::kP2, 2);
  EXPECT_EQ(p2_2.selected, (Sel{0, 3}));
  EXPECT_EQ(p2_2.cost, 20);

  const auto unit = solve_exact(sys.with_costs(std::vector<Rational>(6, 1)), Problem::kP1);
  EXPECT_EQ(unit.selected, (Sel{0, 3}));
  EXPECT_EQ(unit.cost, 2);

  // P3: fewest inputs first, then cheapest.
  const auto p3 = solve_exact(sys, Problem::kP3);
  EXPECT_EQ(p3.selected.size(), 2u);
  EXPECT_EQ(p3.cost, 20);
  EXPECT_EQ(p3.objective, 20 + 2 * 60);
}

TEST(Selection, TenStateAgreesWithBothOracles) {
  const auto sys = parse_system(read_fixture("ten_state.json"));
  for (std::optional<int> k : {std::optional<int>{}, std::optional<int>{2}, std::optional<int>{3}}) {
    const Problem p = k ? Problem::kP2 : Problem::kP1;
    const auto bf = brute_force(sys, p, k);
    const auto ex = oracle::min_cost_selection(sys, k);
    ASSERT_TRUE(ex.has_value());
    EXPECT_EQ(bf.provenance, Provenance::kExactOracle);
    EXPECT_EQ(bf.cost, ex->cost);
    EXPECT_EQ(solve_exact(sys, p, k).cost, ex->cost);
  }
}

TEST(Selection, SwitchedTenStateOptima) {
  const auto sw = parse_switched_system(read_fixture("ten_state_switched.json"));

  const auto k3 = solve_exact_switched(sw, Problem::kP5, 3);
  ASSERT_EQ(k3.status, SelectionStatus::kOptimal);
  EXPECT_EQ(k3.cost, 3);
  EXPECT_EQ(k3.per_mode, (std::vector<Sel>{{1, 2}, {4}}));
  EXPECT_EQ(k3.selected, (Sel{1, 2, 4}));

  const auto k2 = solve_exact_switched(sw, Problem::kP5, 2);
  EXPECT_EQ(k2.cost, 11);
  EXPECT_EQ(k2.per_mode, (std::vector<Sel>{{1}, {3}}));

  for (std::optional<int> k : {std::optional<int>{}, std::optional<int>{2}, std::optional<int>{3}}) {
    const Problem p = k ? Problem::kP5 : Problem::kP4;
    const auto ex = oracle::min_cost_switched_selection(sw, k);
    ASSERT_TRUE(ex.has_value());
    EXPECT_EQ(solve_exact_switched(sw, p, k).cost, ex->cost);
    EXPECT_EQ(brute_force_switched(sw, p, k).cost, ex->cost);
  }
}

TEST(Selection, FixedInputSwitchedProblems) {
  const auto sys = parse_system(read_fixture("four_state.json"));
  std::vector<Mode> modes{make_effective_mode(sys.a(), sys.b(), {3, 1, 2}),
                          make_effective_mode(SparsityPattern(4, 4, {{1, 0}}), sys.b(), {3, 1, 2})};
  const SwitchedStructuredSystem sw(4, std::move(modes));
  const auto p4 = solve_exact_switched(sw, Problem::kP4Fix);
  const auto bf = brute_force_switched(sw, Problem::kP4Fix);
  ASSERT_EQ(p4.status, SelectionStatus::kOptimal);
  EXPECT_EQ(p4.cost, bf.cost);
  EXPECT_EQ(solve_exact_switched(sw, Problem::kP5Fix, 1).cost, brute_force_switched(sw, Problem::kP5Fix, 1).cost);
}

TEST(Selection, RefusesWithoutRestrictedTu) {
  const auto sys = odd_cycle_system();
  const auto res = solve_exact(sys, Problem::kP1);
  EXPECT_EQ(res.status, SelectionStatus::kRefused);
  EXPECT_EQ(res.restricted_tu, Verdict::kFalse);
  EXPECT_FALSE(res.message.empty());

  const auto bf = brute_force(sys);
  EXPECT_EQ(bf.status, SelectionStatus::kOptimal);
  EXPECT_EQ(bf.cost, 2);

  const auto b = bounds(sys);
  EXPECT_EQ(b.c_lp, Rational(3, 2));
  EXPECT_FALSE(b.lp_integral);
  EXPECT_LE(b.c_mat, b.c_lp);

  const auto rounded = lp_round(sys);
  EXPECT_EQ(rounded.provenance, Provenance::kRoundedFeasible);
  EXPECT_EQ(rounded.status, SelectionStatus::kFeasible);
  EXPECT_TRUE(oracle::controllable(sys, rounded.selected));
  ASSERT_TRUE(rounded.f_bound.has_value());  // A is diagonal, so B(A) has a perfect matching
  EXPECT_EQ(*rounded.f_bound, 3);
  EXPECT_LE(rounded.cost, *rounded.f_bound);
}

TEST(Selection, InfeasibleCases) {
  const auto sys = parse_system(read_fixture("ten_state.json"));
  EXPECT_EQ(solve_exact(sys, Problem::kP2, 1).status, SelectionStatus::kInfeasible);
  EXPECT_EQ(brute_force(sys, Problem::kP2, 1).status, SelectionStatus::kInfeasible);

  const StructuredSystem stuck(SparsityPattern(2, 2, {}), SparsityPattern(2, 1, {{0, 0}}), {1});
  EXPECT_EQ(solve_exact(stuck, Problem::kP1).status, SelectionStatus::kInfeasible);
  EXPECT_EQ(brute_force(stuck).status, SelectionStatus::kInfeasible);
  EXPECT_THROW(bounds(stuck), PreconditionError);
  EXPECT_THROW(solve_exact(sys, Problem::kP2), PreconditionError);
}

TEST(Selection, OracleCapIsEnforced) {
  const StructuredSystem wide(SparsityPattern(1, 1, {}), SparsityPattern(1, 23, {}), std::vector<Rational>(23, 1));
  EXPECT_THROW(brute_force(wide), CapExceeded);
}

TEST(Selection, ExactRouteMatchesOracleOnRestrictedTuFamilies) {
  gen::Rng rng(51);
  int solved = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto family = gen::kStructuredFamilies[static_cast<std::size_t>(trial) % std::size(gen::kStructuredFamilies)];
    const int rows = 1 + static_cast<int>(rng() % 3);
    const int cols = rows + static_cast<int>(rng() % 3);
    const auto sys = gen::realize_w(rng, gen::random_w(rng, family, rows, cols), 7);
    if (!oracle::controllable(sys, all_inputs(sys.m()))) continue;
    ++solved;
    const auto expected = oracle::min_cost_selection(sys);
    const auto res = solve_exact(sys, Problem::kP1);
    ASSERT_EQ(res.status, SelectionStatus::kOptimal) << gen::name(family);
    EXPECT_EQ(res.cost, expected->cost);
    EXPECT_TRUE(oracle::controllable(sys, res.selected));
  }
  EXPECT_GT(solved, 50);
}

TEST(Selection, BoundsAreOrdered) {
  gen::Rng rng(52);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto sys = gen::random_system(rng, 2 + static_cast<int>(rng() % 5), 2 + static_cast<int>(rng() % 4), 0.25, 0.3);
    const auto opt = oracle::min_cost_selection(sys);
    if (!opt) continue;
    ++checked;
    const auto b = bounds(sys);
    EXPECT_TRUE(b.ordered);
    EXPECT_LE(b.c_mat, b.c_lp);
    EXPECT_LE(b.c_lp, opt->cost);
    EXPECT_EQ(b.c_mat, *oracle::min_cost_rank_only(sys));
  }
  EXPECT_GT(checked, 30);
}
