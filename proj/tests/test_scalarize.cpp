#include "nrp/formats.hpp"
#include "nrp/metrics.hpp"
#include "nrp/scalarize.hpp"
#include "support/enumeration.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nrp;
using nrp::testing::e0;
using nrp::testing::e0_front;
using nrp::testing::enumerate;
using nrp::testing::enumerate_front;

namespace {

const BoxCorners kE0Root{{-9, 9}, {0, 0}};

auto solve_point(const BiObjectiveProblem& prob, const Subproblem& sub) -> std::optional<Point> {
  auto out = solve(sub);
  if (!out.optimal()) {
    return std::nullopt;
  }
  return prob.point_of(out.assignment);
}

auto dominated_by_any(const Point& p, const std::vector<Point>& front) -> bool {
  return std::any_of(front.begin(), front.end(), [&](const Point& q) { return dominates(q, p); });
}

// Every box spanned by two points of the front, in both orders that form a valid box.
auto boxes_of(const std::vector<Point>& front) -> std::vector<BoxCorners> {
  std::vector<BoxCorners> out;
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = i + 1; j < front.size(); ++j) {
      BoxCorners box{front[i], front[j]};
      if (box.valid() && box.has_interior()) {
        out.push_back(box);
      }
    }
  }
  return out;
}

}  // namespace

TEST(Lexicographic, E0Extremes) {
  auto prob = build_bi_objective(e0());
  auto lex = lexicographic_optima(prob, builtin_oracle());
  ASSERT_EQ(lex.status, OracleStatus::optimal);
  EXPECT_EQ(lex.z1, (Point{-9, 9}));
  EXPECT_EQ(lex.z2, (Point{0, 0}));
  EXPECT_EQ(evaluate(e0(), lex.sol1), lex.z1);
  EXPECT_TRUE(feasible(e0(), lex.sol1));
}

TEST(Lexicographic, SinglePointFront) {
  Instance inst;
  inst.costs = {0};
  inst.stakeholders = {{3, {1}}};
  auto lex = lexicographic_optima(build_bi_objective(inst), builtin_oracle());
  EXPECT_EQ(lex.z1, lex.z2);
  EXPECT_EQ(lex.z1, (Point{-3, 0}));
}

TEST(Lexicographic, MatchesEnumeratedExtremesOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.n = 8;
    gp.m = 5;
    auto inst = generate_instance(gp);
    auto front = enumerate_front(inst);
    auto lex = lexicographic_optima(build_bi_objective(inst), builtin_oracle());
    EXPECT_EQ(lex.z1, front.front()) << seed;
    EXPECT_EQ(lex.z2, front.back()) << seed;
    if (front.size() > 1) {
      EXPECT_GT(lex.z1.f2, lex.z2.f2);
    }
  }
}

TEST(WeightedSumInBox, E0RootArithmetic) {
  auto prob = build_bi_objective(e0());
  auto w = dichotomic_weights(kE0Root);
  EXPECT_EQ(w.lambda1, 9);
  EXPECT_EQ(w.lambda2, 9);
  auto sub = weighted_sum_in_box(prob, kE0Root);
  ASSERT_EQ(sub.constraints.size(), 2U);
  EXPECT_EQ(sub.constraints[0].bound, -1);
  EXPECT_EQ(sub.constraints[1].bound, 8);
  EXPECT_EQ(sub.constraints[0].coeffs, prob.f1);
  EXPECT_EQ(sub.constraints[1].coeffs, prob.f2);
}

TEST(WeightedSumInBox, UnitBoxHasNoInterior) {
  Instance inst;
  inst.costs = {1};
  inst.stakeholders = {{1, {1}}};
  auto prob = build_bi_objective(inst);
  BoxCorners unit{{-1, 1}, {0, 0}};
  EXPECT_FALSE(unit.has_interior());
  auto sub = weighted_sum_in_box(prob, unit);
  EXPECT_EQ(sub.constraints[0].bound, -1);
  EXPECT_EQ(sub.constraints[1].bound, 0);
  EXPECT_EQ(solve(sub).status, OracleStatus::infeasible);
}

TEST(WeightedSumInBox, RejectsInvalidBox) {
  auto prob = build_bi_objective(e0());
  EXPECT_THROW(weighted_sum_in_box(prob, {{0, 0}, {-9, 9}}), Error);
}

TEST(DichotomicWeights, CornersShareALevelLine) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto a = static_cast<std::int64_t>(rng() % 2000) - 1000;
    auto b = static_cast<std::int64_t>(rng() % 2000) - 1000;
    BoxCorners box{{a, b + 1 + static_cast<std::int64_t>(rng() % 500)}, {a + 1 + static_cast<std::int64_t>(rng() % 500), b}};
    auto w = dichotomic_weights(box);
    EXPECT_EQ(w.level(box.z1), w.level(box.z2));
    EXPECT_GT(w.lambda1, 0);
    EXPECT_GT(w.lambda2, 0);
  }
}

TEST(Augmecon, E0Midpoint) {
  auto prob = build_bi_objective(e0());
  EXPECT_EQ(augmecon_epsilon(kE0Root, ObjectiveIndex::first), 4);
  EXPECT_EQ(augmecon_epsilon(kE0Root, ObjectiveIndex::second), -5);
  auto lambda = default_augmecon_lambda(kE0Root, ObjectiveIndex::first);
  EXPECT_EQ(lambda, Rational(1, 10));
  auto sub = augmecon_sub(prob, kE0Root, ObjectiveIndex::first, lambda);
  EXPECT_EQ(sub.scale, 10);
  ASSERT_EQ(sub.constraints.size(), 1U);
  EXPECT_EQ(sub.constraints[0].bound, 4);
  EXPECT_EQ(sub.constraints[0].coeffs, prob.f2);
  auto out = solve(sub);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(prob.point_of(out.assignment), (Point{-4, 4}));
  EXPECT_EQ(out.objective(), Rational(-4 * 10 + 4, 10));
}

TEST(Augmecon, AdjacentButTwoBoxHasSingleLine) {
  BoxCorners box{{0, 7}, {5, 5}};
  EXPECT_EQ(augmecon_epsilon(box, ObjectiveIndex::first), 6);
}

TEST(Augmecon, OptimumIsEfficient) {
  auto check = [](const Instance& inst) {
    auto prob = build_bi_objective(inst);
    auto front = enumerate_front(inst);
    if (front.size() < 2) return;
    BoxCorners root{front.front(), front.back()};
    for (const auto& box : boxes_of(front)) {
      for (auto obj : {ObjectiveIndex::first, ObjectiveIndex::second}) {
        auto sub = augmecon_sub(prob, box, obj, default_augmecon_lambda(root, obj));
        auto z = solve_point(prob, sub);
        ASSERT_TRUE(z.has_value());
        EXPECT_FALSE(dominated_by_any(*z, front)) << *z;
        EXPECT_EQ(solve(sub).value, *enumerate(sub).best);
      }
    }
  };
  check(e0());
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.n = 7;
    gp.m = 4;
    check(generate_instance(gp));
  }
}

TEST(Tchebycheff, E0RootParameters) {
  auto params = tchebycheff_params(kE0Root);
  EXPECT_EQ(params.ideal, (Point{-9, 0}));
  EXPECT_EQ(params.w1, 9);
  EXPECT_EQ(params.w2, 9);
  EXPECT_EQ(params.rho, Rational(9, 38));
  auto prob = build_bi_objective(e0());
  auto sub = tchebycheff_sub(prob, kE0Root);
  EXPECT_EQ(sub.scale, 38);
  ASSERT_EQ(sub.constraints.size(), 2U);
  EXPECT_EQ(sub.constraints[0].bound, 0);
  EXPECT_EQ(sub.constraints[1].bound, 9);
}

TEST(Tchebycheff, SquareBoxHasEqualWeightsAndCornersTie) {
  auto prob = build_bi_objective(e0());
  BoxCorners box{{-9, 9}, {-4, 4}};
  auto params = tchebycheff_params(box);
  EXPECT_EQ(params.w1, params.w2);
  auto mp = std::get<MaxPlusObjective>(tchebycheff_sub(prob, box).objective);
  // Corner images: z1 = (-9,9) from r1 r2 s1 plus r3 s2; z2 = (-4,4) from r3 s2.
  Bits z1{1, 1, 1, 1, 1};
  Bits z2{0, 0, 1, 0, 1};
  EXPECT_EQ(std::max(mp.first.value(z1), mp.second.value(z1)), std::max(mp.first.value(z2), mp.second.value(z2)));
}

TEST(Tchebycheff, OptimaOnE0BoxesAreEfficient) {
  auto prob = build_bi_objective(e0());
  auto front = e0_front();
  for (const auto& box : boxes_of(front)) {
    auto sub = tchebycheff_sub(prob, box);
    auto out = solve(sub);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.value, *enumerate(sub).best);
    auto z = prob.point_of(out.assignment);
    EXPECT_FALSE(dominated_by_any(z, front)) << z;
  }
}

TEST(Tchebycheff, OptimaAreEfficientOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.n = 7;
    gp.m = 4;
    auto inst = generate_instance(gp);
    auto prob = build_bi_objective(inst);
    auto front = enumerate_front(inst);
    for (const auto& box : boxes_of(front)) {
      auto z = solve_point(prob, tchebycheff_sub(prob, box));
      ASSERT_TRUE(z.has_value());
      EXPECT_FALSE(dominated_by_any(*z, front)) << *z;
    }
  }
}

TEST(Epsilon, E0Examples) {
  auto prob = build_bi_objective(e0());
  auto out = solve(epsilon_sub(prob, ObjectiveIndex::first, 8));
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.value, -5);
  auto loose = solve(epsilon_sub(prob, ObjectiveIndex::first, 9));
  EXPECT_EQ(loose.value, solve(single_objective_sub(prob, ObjectiveIndex::first)).value);
  EXPECT_EQ(solve(epsilon_sub(prob, ObjectiveIndex::first, -1)).status, OracleStatus::infeasible);
}

TEST(WeightedSumInBox, ConvexPartAnswersAreSupported) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.n = 8;
    gp.m = 4;
    auto inst = generate_instance(gp);
    auto prob = build_bi_objective(inst);
    auto front = enumerate_front(inst);
    auto supported = nrp::testing::supported_by_weights(front);
    for (const auto& box : boxes_of(front)) {
      auto z = solve_point(prob, weighted_sum_in_box(prob, box));
      if (!z) continue;
      EXPECT_FALSE(dominated_by_any(*z, front));
      // Only boxes between supported corners are meaningful for the convex-part claim.
      bool corners_supported = std::find(supported.begin(), supported.end(), box.z1) != supported.end() &&
                               std::find(supported.begin(), supported.end(), box.z2) != supported.end();
      if (corners_supported && in_convex_part(box, *z)) {
        EXPECT_NE(std::find(supported.begin(), supported.end(), *z), supported.end()) << *z;
      }
    }
  }
}
