#include "nrp/oracle.hpp"
#include "nrp/scalarize.hpp"
#include "support/enumeration.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <thread>

using namespace nrp;
using nrp::testing::best_completion;
using nrp::testing::e0;
using nrp::testing::enumerate;

namespace {

auto linear(std::vector<std::int64_t> coeffs, std::int64_t constant = 0) -> Objective {
  return LinearObjective{LinearForm{std::move(coeffs), constant}};
}

// E0 variables: r1 r2 r3 s1 s2
constexpr std::size_t kR1 = 0;
constexpr std::size_t kR2 = 1;
constexpr std::size_t kR3 = 2;
constexpr std::size_t kS1 = 3;

auto e0_graph() -> ImplicationGraph {
  static const auto prob = build_bi_objective(e0());
  return ImplicationGraph(prob.num_vars(), prob.implications);
}

}  // namespace

TEST(Solve, ImplicationOnlyMinimizesToZero) {
  Subproblem sub;
  sub.n_vars = 2;
  sub.implications = {{0, 1}};
  sub.objective = linear({1, 1});
  auto out = solve(sub);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.assignment, (Bits{0, 0}));
  EXPECT_EQ(out.value, 0);
}

TEST(Solve, ContradictoryBoundsAreInfeasible) {
  Subproblem sub;
  sub.n_vars = 1;
  sub.constraints = {{{-1}, -1, "lo"}, {{1}, 0, "hi"}};
  sub.objective = linear({0});
  EXPECT_EQ(solve(sub).status, OracleStatus::infeasible);
}

TEST(Solve, E0WeightedSumInRootBoxHasValueZero) {
  auto prob = build_bi_objective(e0());
  auto sub = weighted_sum_in_box(prob, {{-9, 9}, {0, 0}});
  auto out = solve(sub);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.value, 0);
  EXPECT_EQ(enumerate(sub).best, std::optional<std::int64_t>(0));
  EXPECT_TRUE(satisfies_all(sub, out.assignment));
}

TEST(Solve, RejectsOverflowingCoefficients) {
  Subproblem sub;
  sub.n_vars = 2;
  const auto big = std::numeric_limits<std::int64_t>::max() / 2 + 1;
  sub.objective = linear({big, big});
  try {
    solve(sub);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::arithmetic_overflow);
  }
}

TEST(Solve, RejectsMalformedSubproblems) {
  Subproblem sub;
  sub.n_vars = 2;
  sub.objective = linear({1});
  EXPECT_THROW(solve(sub), Error);
  sub.objective = linear({1, 1});
  sub.implications = {{0, 2}};
  EXPECT_THROW(solve(sub), Error);
  sub.implications.clear();
  sub.scale = 0;
  EXPECT_THROW(solve(sub), Error);
}

TEST(Solve, CancelledTokenReturnsCancelled) {
  std::mt19937_64 rng(7);
  auto sub = nrp::testing::random_subproblem(rng, 12);
  sub.constraints.clear();
  std::stop_source source;
  source.request_stop();
  EXPECT_EQ(solve(sub, source.get_token()).status, OracleStatus::cancelled);
}

TEST(Solve, PastDeadlineAndNodeBudgetExhaust) {
  Subproblem sub;
  sub.n_vars = 3;
  sub.objective = linear({-1, 2, -3});
  SolveOptions past;
  past.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_EQ(solve(sub, {}, past).status, OracleStatus::budget_exhausted);

  // A knapsack-like instance that needs more than one expansion.
  Subproblem knap;
  knap.n_vars = 12;
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> weight;
  for (std::int64_t j = 0; j < 12; ++j) {
    value.push_back(-(7 * j % 11 + 3));
    weight.push_back(5 * j % 13 + 2);
  }
  knap.objective = linear(value);
  knap.constraints = {{weight, 30, "cap"}};
  SolveOptions tight;
  tight.node_budget = 1;
  EXPECT_EQ(solve(knap, {}, tight).status, OracleStatus::budget_exhausted);
  auto full = solve(knap);
  ASSERT_TRUE(full.optimal());
  EXPECT_EQ(full.value, *enumerate(knap).best);
  EXPECT_GT(full.nodes, 1U);
}

TEST(Solve, CancellationFromAnotherThread) {
  // 26 free variables with an objective the bound cannot close quickly.
  Subproblem sub;
  sub.n_vars = 26;
  std::vector<std::int64_t> obj;
  std::vector<std::int64_t> cap;
  for (std::int64_t j = 0; j < 26; ++j) {
    obj.push_back(-(1000 + 37 * j % 101));
    cap.push_back(1000 + 53 * j % 97);
  }
  sub.objective = linear(obj);
  sub.constraints = {{cap, 13 * 1040 + 7, "cap"}};
  std::stop_source source;
  std::thread canceller([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    source.request_stop();
  });
  auto out = solve(sub, source.get_token());
  canceller.join();
  // Either it finished first (exact) or it honoured the token.
  EXPECT_TRUE(out.status == OracleStatus::cancelled || out.optimal());
}

TEST(Propagate, E0Examples) {
  auto graph = e0_graph();
  PartialAssignment x(5, kFree);
  x[kS1] = 1;
  ASSERT_EQ(propagate(graph, x), Propagation::fixpoint);
  EXPECT_EQ(x[kR2], 1);
  EXPECT_EQ(x[kR1], 1);
  EXPECT_EQ(x[kR3], kFree);

  PartialAssignment empty(5, kFree);
  ASSERT_EQ(propagate(graph, empty), Propagation::fixpoint);
  EXPECT_EQ(empty, PartialAssignment(5, kFree));

  PartialAssignment clash(5, kFree);
  clash[kR1] = 0;
  clash[kS1] = 1;
  EXPECT_EQ(propagate(graph, clash), Propagation::conflict);
}

TEST(Propagate, ZeroFlowsDownward) {
  auto graph = e0_graph();
  PartialAssignment x(5, kFree);
  x[kR1] = 0;
  ASSERT_EQ(propagate_from(graph, x, kR1), Propagation::fixpoint);
  EXPECT_EQ(x[kR2], 0);
  EXPECT_EQ(x[kS1], 0);
}

TEST(LowerBound, Examples) {
  Subproblem sub;
  sub.n_vars = 3;
  sub.objective = linear({2, 0, 5}, 4);
  EXPECT_EQ(lower_bound(PartialAssignment(3, kFree), sub), 4);
  PartialAssignment fixed{1, 0, 1};
  EXPECT_EQ(lower_bound(fixed, sub), 11);

  auto prob = build_bi_objective(e0());
  auto spf = weighted_sum_in_box(prob, {{-9, 9}, {0, 0}});
  EXPECT_LE(lower_bound(PartialAssignment(5, kFree), spf), 0);
}

TEST(PruneInfeasible, Examples) {
  Subproblem sub;
  sub.n_vars = 5;
  sub.objective = linear({0, 0, 0, 0, 0});
  EXPECT_FALSE(prune_infeasible(PartialAssignment(5, 1), sub));
  sub.constraints = {{{1, 1, 1, 1, 1}, 4, "sum"}};
  EXPECT_TRUE(prune_infeasible(PartialAssignment(5, 1), sub));

  auto prob = build_bi_objective(e0());
  Subproblem cost;
  cost.n_vars = 5;
  cost.objective = linear(prob.f1);
  cost.constraints = {{prob.f2, 3, "f2_bound"}};
  PartialAssignment x(5, kFree);
  x[kR3] = 1;
  EXPECT_TRUE(prune_infeasible(x, cost));
  EXPECT_FALSE(prune_infeasible(PartialAssignment(5, kFree), cost));
}

TEST(Solve, AgreesWithEnumerationOnRandomSubproblems) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    auto sub = nrp::testing::random_subproblem(rng, 14);
    auto expected = enumerate(sub);
    auto out = solve(sub);
    if (!expected.best) {
      EXPECT_EQ(out.status, OracleStatus::infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(out.optimal()) << "trial " << trial;
    EXPECT_EQ(out.value, *expected.best) << "trial " << trial;
    EXPECT_TRUE(satisfies_all(sub, out.assignment));
    EXPECT_EQ(objective_value(sub.objective, out.assignment), out.value);
    EXPECT_EQ(out.objective(), Rational(out.value, sub.scale));
  }
}

TEST(LowerBound, AdmissibleAtRandomNodes) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto sub = nrp::testing::random_subproblem(rng, 10);
    ImplicationGraph graph(sub.n_vars, sub.implications);
    for (int node = 0; node < 8; ++node) {
      PartialAssignment x(sub.n_vars, kFree);
      for (auto& v : x) {
        auto r = rng() % 3;
        v = r == 0 ? kFree : static_cast<std::int8_t>(r - 1);
      }
      if (propagate(graph, x) == Propagation::conflict) {
        continue;
      }
      auto best = best_completion(sub, x);
      if (prune_infeasible(x, sub)) {
        EXPECT_FALSE(best.has_value()) << "pruned a node with a feasible completion";
        continue;
      }
      if (best) {
        EXPECT_LE(lower_bound(x, sub), *best);
      }
    }
  }
}

TEST(Solve, DeterministicValue) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto sub = nrp::testing::random_subproblem(rng, 12);
    auto a = solve(sub);
    auto b = solve(sub);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.assignment, b.assignment);
  }
}
