#ifndef NRP_TESTS_ENUMERATION_HPP
#define NRP_TESTS_ENUMERATION_HPP

// Exhaustive reference answers used to freeze and cross-check expected values.
// Nothing here calls into the branch-and-bound or the box engine.

#include "nrp/metrics.hpp"
#include "nrp/model.hpp"
#include "nrp/oracle.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace nrp::testing {

struct Enumerated {
  std::optional<std::int64_t> best;
  std::uint64_t feasible_count = 0;
};

inline auto assignment_of(std::uint64_t mask, std::size_t n) -> Bits {
  Bits x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = static_cast<std::uint8_t>((mask >> j) & 1U);
  }
  return x;
}

inline auto enumerate(const Subproblem& sub) -> Enumerated {
  Enumerated out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sub.n_vars); ++mask) {
    auto x = assignment_of(mask, sub.n_vars);
    if (!satisfies_all(sub, x)) {
      continue;
    }
    ++out.feasible_count;
    auto v = objective_value(sub.objective, x);
    if (!out.best || v < *out.best) {
      out.best = v;
    }
  }
  return out;
}

/// Minimum over feasible completions of a partial assignment.
inline auto best_completion(const Subproblem& sub, const PartialAssignment& partial) -> std::optional<std::int64_t> {
  std::optional<std::int64_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sub.n_vars); ++mask) {
    auto x = assignment_of(mask, sub.n_vars);
    bool agrees = true;
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      if (partial[j] != kFree && partial[j] != x[j]) {
        agrees = false;
        break;
      }
    }
    if (!agrees || !satisfies_all(sub, x)) {
      continue;
    }
    auto v = objective_value(sub.objective, x);
    if (!best || v < *best) {
      best = v;
    }
  }
  return best;
}

/// Front from all 2^(n+m) (r, s) assignments checked with `feasible` and `evaluate`.
inline auto enumerate_front(const Instance& inst) -> std::vector<Point> {
  const auto n = inst.num_requirements();
  const auto m = inst.num_stakeholders();
  std::vector<Point> images;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n + m)); ++mask) {
    Solution sol{Bits(n), Bits(m)};
    for (std::size_t i = 0; i < n; ++i) {
      sol.r[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
    }
    for (std::size_t k = 0; k < m; ++k) {
      sol.s[k] = static_cast<std::uint8_t>((mask >> (n + k)) & 1U);
    }
    if (feasible(inst, sol)) {
      images.push_back(evaluate(inst, sol));
    }
  }
  // quadratic filter, independent of pareto_filter
  std::set<Point> front;
  for (const auto& p : images) {
    bool dominated = false;
    for (const auto& q : images) {
      if (dominates(q, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      front.insert(p);
    }
  }
  return {front.begin(), front.end()};
}

/// Supported points by direct definition: p minimizes some strictly positive weighted sum.
/// Every hull vertex or hull-edge point is a (tied) minimizer for the normal of some pair of
/// front points, so trying all pair normals is exhaustive.
inline auto supported_by_weights(const std::vector<Point>& front) -> std::vector<Point> {
  std::set<Point> out;
  std::vector<std::pair<std::int64_t, std::int64_t>> weights;
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = i + 1; j < front.size(); ++j) {
      auto a = front[i].f2 - front[j].f2;
      auto b = front[j].f1 - front[i].f1;
      if (a < 0) {
        a = -a;
        b = -b;
      }
      if (a > 0 && b > 0) {
        weights.emplace_back(a, b);
      }
    }
  }
  weights.emplace_back(1, 1);
  for (const auto& [a, b] : weights) {
    std::optional<std::int64_t> best;
    for (const auto& p : front) {
      auto v = a * p.f1 + b * p.f2;
      if (!best || v < *best) {
        best = v;
      }
    }
    for (const auto& p : front) {
      if (a * p.f1 + b * p.f2 == *best) {
        out.insert(p);
      }
    }
  }
  return {out.begin(), out.end()};
}

inline auto e0() -> Instance {
  Instance inst;
  inst.name = "E0";
  inst.costs = {2, 3, 4};
  inst.stakeholders = {{5, {2}}, {4, {3}}};
  inst.precedence = {{1, 2}};
  return inst;
}

inline auto e0_front() -> std::vector<Point> { return {{-9, 9}, {-5, 5}, {-4, 4}, {0, 0}}; }

/// Random subproblem with implications, up to two constraints and either objective kind.
inline auto random_subproblem(std::mt19937_64& rng, std::size_t max_vars = 16) -> Subproblem {
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  Subproblem sub;
  sub.n_vars = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(max_vars)));
  auto n = static_cast<std::int64_t>(sub.n_vars);
  auto implications = pick(0, n);
  for (std::int64_t i = 0; i < implications && n > 1; ++i) {
    auto a = static_cast<std::size_t>(pick(0, n - 1));
    auto b = static_cast<std::size_t>(pick(0, n - 1));
    if (a != b) {
      sub.implications.push_back({a, b});
    }
  }
  auto form = [&](std::int64_t range) {
    LinearForm f;
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      f.coeffs.push_back(pick(-range, range));
    }
    f.constant = pick(-range, range);
    return f;
  };
  auto constraints = pick(0, 2);
  for (std::int64_t c = 0; c < constraints; ++c) {
    auto f = form(9);
    sub.constraints.push_back({f.coeffs, pick(-10, 20), "c" + std::to_string(c)});
  }
  if (pick(0, 1) == 0) {
    sub.objective = LinearObjective{form(20)};
  } else {
    sub.objective = MaxPlusObjective{form(20), form(20), form(5)};
  }
  sub.scale = pick(1, 5);
  return sub;
}

}  // namespace nrp::testing

#endif  // NRP_TESTS_ENUMERATION_HPP
