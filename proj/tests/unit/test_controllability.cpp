#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "structsel/controllability.hpp"
#include "structsel/model_io.hpp"

using namespace structsel;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(STRUCTSEL_FIXTURES) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<int> random_subset(gen::Rng& rng, int m) {
  std::vector<int> s;
  for (int j = 0; j < m; ++j) {
    if (rng() % 2) s.push_back(j);
  }
  return s;
}

}  // namespace

TEST(Controllability, ExampleFixtureWithAllInputs) {
  const auto sys = parse_system(read_fixture("ten_state.json"));
  const auto cert = is_structurally_controllable(sys, all_inputs(sys.m()));
  EXPECT_TRUE(cert.controllable);
  EXPECT_TRUE(cert.all_reachable);
  EXPECT_TRUE(cert.matching_saturates);
  EXPECT_EQ(cert.matching_size, 10);
  EXPECT_EQ(cert.source_sccs, (std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}}));
}

TEST(Controllability, EmptyInputSetNamesTheFailingScc) {
  const auto sys = parse_system(read_fixture("ten_state.json"));
  const auto cert = is_structurally_controllable(sys, {});
  EXPECT_FALSE(cert.controllable);
  EXPECT_FALSE(cert.all_reachable);
  ASSERT_EQ(cert.failing_scc, 0);
  EXPECT_EQ(cert.source_sccs[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(cert.unreachable_states.size(), 10u);
}

TEST(Controllability, DeficientMatchingReportsHallViolator) {
  // x1 drives x2 and x3; one input at x1 reaches everything but cannot
  // match both x2 and x3.
  const StructuredSystem sys(SparsityPattern(3, 3, {{1, 0}, {2, 0}}), SparsityPattern(3, 1, {{0, 0}}), {1});
  const auto cert = is_structurally_controllable(sys, all_inputs(1));
  EXPECT_TRUE(cert.all_reachable);
  EXPECT_FALSE(cert.matching_saturates);
  EXPECT_FALSE(cert.controllable);
  EXPECT_EQ(cert.matching_size, 2);
  EXPECT_EQ(cert.deficient_states, (std::vector<int>{1, 2}));
}

TEST(Controllability, UnknownInputIndexThrows) {
  const StructuredSystem sys(SparsityPattern(1, 1, {}), SparsityPattern(1, 1, {{0, 0}}), {1});
  const std::vector<int> bad{1};
  EXPECT_THROW(is_structurally_controllable(sys, bad), std::out_of_range);
}

TEST(Controllability, GenericRankMatchesNumericRank) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 7);
    const int cols = 1 + static_cast<int>(rng() % 7);
    std::vector<Entry> e;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (rng() % 3 == 0) e.push_back({i, j});
      }
    }
    const SparsityPattern p(rows, cols, e);
    EXPECT_EQ(generic_rank(p), oracle::numeric_generic_rank({&p}, rows));
  }
}

TEST(Controllability, FixedVerdictAgreesWithOracle) {
  gen::Rng rng(22);
  int positive = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % 5);
    const auto sys = gen::random_system(rng, n, m, 0.2, 0.3, trial % 3 == 0);
    const auto s = random_subset(rng, m);
    const bool expected = oracle::controllable(sys, s);
    EXPECT_EQ(is_structurally_controllable(sys, s).controllable, expected) << "trial " << trial;
    positive += expected;
  }
  EXPECT_GT(positive, 40);
}

TEST(Controllability, SwitchedVerdictAgreesWithOracle) {
  gen::Rng rng(23);
  int positive = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % 5);
    const auto sw = gen::split_into_modes(rng, gen::random_system(rng, n, m, 0.3, 0.3));
    const auto s = random_subset(rng, sw.total_inputs());
    const bool expected = oracle::switched_controllable(sw, s);
    EXPECT_EQ(is_switched_structurally_controllable(sw, s).controllable, expected) << "trial " << trial;
    positive += expected;
  }
  EXPECT_GT(positive, 30);
}

TEST(Controllability, SingleModeSwitchedViewMatchesFixedCheck) {
  gen::Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const int m = 1 + static_cast<int>(rng() % 4);
    const auto sys = gen::random_system(rng, n, m, 0.2, 0.35);
    const auto sw = as_switched(sys);
    // Flat indices of the switched view skip zero columns.
    std::vector<int> fixed_sel;
    std::vector<int> flat_sel;
    for (int local = 0; local < sw.total_inputs(); ++local) {
      if (rng() % 2) {
        flat_sel.push_back(local);
        fixed_sel.push_back(sw.mode(0).source_columns[static_cast<std::size_t>(local)]);
      }
    }
    EXPECT_EQ(is_switched_structurally_controllable(sw, flat_sel).controllable,
              is_structurally_controllable(sys, fixed_sel).controllable);
  }
}

TEST(Controllability, SwitchingCanBeatEveryMode) {
  // Neither mode alone reaches x3, but x1 -> x2 in mode 1 then x2 -> x3 in
  // mode 2 does.
  std::vector<Mode> modes;
  modes.push_back(make_effective_mode(SparsityPattern(3, 3, {{1, 0}}), SparsityPattern(3, 1, {{0, 0}}), {1}));
  modes.push_back(make_effective_mode(SparsityPattern(3, 3, {{2, 1}}), SparsityPattern(3, 0, {}), {}));
  const SwitchedStructuredSystem sw(3, std::move(modes));
  EXPECT_TRUE(is_switched_structurally_controllable(sw, all_inputs(1)).controllable);
  EXPECT_TRUE(oracle::switched_controllable(sw, {0}));
}
