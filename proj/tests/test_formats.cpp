#include "nrp/formats.hpp"
#include "nrp/metrics.hpp"

#include <gtest/gtest.h>

using namespace nrp;

namespace {

auto malformed_message(const std::string& text, bool classic = true) -> std::string {
  try {
    if (classic) {
      parse_classic(text);
    } else {
      parse_realistic(text);
    }
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::malformed_format) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return {};
}

}  // namespace

TEST(ParseClassic, Minimal) {
  auto inst = parse_classic("1\n2\n3 4\n0\n1\n5 1 2\n");
  EXPECT_EQ(inst.costs, (std::vector<std::int64_t>{3, 4}));
  ASSERT_EQ(inst.stakeholders.size(), 1U);
  EXPECT_EQ(inst.stakeholders[0].weight, 5);
  EXPECT_EQ(inst.stakeholders[0].requests, (std::vector<int>{2}));
  EXPECT_TRUE(inst.precedence.empty());
}

TEST(ParseClassic, LevelsAreNumberedGlobally) {
  auto inst = parse_classic("2\n2\n1 2\n1\n7\n1\n1 3\n1\n2 2 1 3\n");
  EXPECT_EQ(inst.costs, (std::vector<std::int64_t>{1, 2, 7}));
  EXPECT_EQ(inst.precedence, (std::vector<std::pair<int, int>>{{1, 3}}));
  EXPECT_EQ(inst.stakeholders[0].requests, (std::vector<int>{1, 3}));
}

TEST(ParseClassic, DependenciesAndDuplicates) {
  auto inst = parse_classic("1\n3\n2 3 4\n1\n1 2\n2\n5 1 2\n4 2 3 3\n");
  EXPECT_EQ(inst.precedence, (std::vector<std::pair<int, int>>{{1, 2}}));
  EXPECT_EQ(inst.stakeholders[1].requests, (std::vector<int>{3}));
  EXPECT_EQ(brute_force_front(inst).points(),
            (std::vector<Point>{{-9, 9}, {-5, 5}, {-4, 4}, {0, 0}}));
}

TEST(ParseClassic, Errors) {
  EXPECT_NE(malformed_message("1\n2\n3 4\n1\n0 2\n1\n5 1 2\n").find("line 5, column 1"), std::string::npos);
  EXPECT_NE(malformed_message("1\n2\n3 x\n0\n1\n5 1 2\n").find("line 3, column 3"), std::string::npos);
  EXPECT_NE(malformed_message("1\n2\n3 4\n0\n1\n5 1 9\n").find("not in 1..2"), std::string::npos);
  EXPECT_NE(malformed_message("1\n2\n3 4\n0\n1\n0 1 2\n").find("weight"), std::string::npos);
  EXPECT_NE(malformed_message("1\n2\n3 -4\n0\n1\n5 1 2\n").find("negative"), std::string::npos);
  malformed_message("1\n2\n3 4\n0\n1\n5 0\n");
  malformed_message("1\n2\n3 4\n0\n");
  malformed_message("1\n2\n3 4\n0\n1\n5 1 2\n99\n");
  malformed_message("");
}

TEST(ParseRealistic, NoDependencySection) {
  auto inst = parse_realistic("1\n3\n2 3 4\n2\n5 2 1 2\n4 1 3\n");
  EXPECT_TRUE(inst.precedence.empty());
  EXPECT_EQ(inst.costs.size(), 3U);
  EXPECT_EQ(inst.stakeholders.size(), 2U);
  // A classic file is not a valid realistic file: the trailing tokens are left over.
  malformed_message("1\n2\n3 4\n0\n1\n5 1 2\n", false);
}

TEST(ClassicText, RoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.n = 12;
    gp.m = 7;
    auto inst = generate_instance(gp);
    auto back = parse_classic(to_classic_text(inst), inst.name);
    EXPECT_EQ(back.costs, inst.costs);
    EXPECT_EQ(back.precedence, inst.precedence);
    ASSERT_EQ(back.stakeholders.size(), inst.stakeholders.size());
    for (std::size_t k = 0; k < inst.stakeholders.size(); ++k) {
      EXPECT_EQ(back.stakeholders[k].weight, inst.stakeholders[k].weight);
      EXPECT_EQ(back.stakeholders[k].requests, inst.stakeholders[k].requests);
    }
  }
}

TEST(Generator, DeterministicPerSeed) {
  GeneratorParams gp;
  gp.seed = 42;
  auto a = generate_instance(gp);
  auto b = generate_instance(gp);
  EXPECT_EQ(to_classic_text(a), to_classic_text(b));
  gp.seed = 43;
  EXPECT_NE(to_classic_text(generate_instance(gp)), to_classic_text(a));
}

TEST(Generator, Structure) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorParams gp;
    gp.seed = seed;
    gp.precedence_density = 0.3;
    gp.request_density = 0.05;
    auto inst = generate_instance(gp);
    EXPECT_EQ(inst.costs.size(), gp.n);
    EXPECT_EQ(inst.stakeholders.size(), gp.m);
    for (const auto& [i, j] : inst.precedence) EXPECT_LT(i, j);
    for (const auto& st : inst.stakeholders) {
      EXPECT_GE(st.requests.size(), 1U);
      EXPECT_GE(st.weight, 1);
      EXPECT_LE(st.weight, gp.max_weight);
    }
    for (auto c : inst.costs) {
      EXPECT_GE(c, 1);
      EXPECT_LE(c, gp.max_cost);
    }
  }
}

TEST(Generator, ZeroDensityHasNoPrecedence) {
  GeneratorParams gp;
  gp.precedence_density = 0.0;
  gp.request_density = 0.0;
  auto inst = generate_instance(gp);
  EXPECT_TRUE(inst.precedence.empty());
  for (const auto& st : inst.stakeholders) EXPECT_EQ(st.requests.size(), 1U);
}

TEST(Generator, DefaultSizeFitsBruteForce) {
  auto inst = generate_instance({});
  EXPECT_EQ(inst.costs.size() + inst.stakeholders.size(), 22U);
  EXPECT_NO_THROW(brute_force_front(inst));
}

TEST(Generator, RejectsBadParams) {
  GeneratorParams gp;
  gp.precedence_density = 1.5;
  EXPECT_THROW(generate_instance(gp), Error);
  gp.precedence_density = 0.1;
  gp.n = 0;
  EXPECT_THROW(generate_instance(gp), Error);
}
