#ifndef NRP_MODEL_HPP
#define NRP_MODEL_HPP

// Next Release Problem instances and the bi-objective binary program they induce.
//
// Variable layout used by every other module: requirement i (1-based) is
// variable i-1, stakeholder k (1-based) is variable n+k-1.

#include "core.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nrp {

struct Stakeholder {
  std::int64_t weight = 1;
  std::vector<int> requests;  // 1-based requirement ids

  friend auto operator==(const Stakeholder&, const Stakeholder&) -> bool = default;
};

struct Instance {
  std::string name;
  std::vector<std::int64_t> costs;                 // cost of requirement i at index i-1
  std::vector<Stakeholder> stakeholders;           // stakeholder k at index k-1
  std::vector<std::pair<int, int>> precedence;     // (i, j): i is a prerequisite of j

  [[nodiscard]] auto num_requirements() const -> std::size_t { return costs.size(); }
  [[nodiscard]] auto num_stakeholders() const -> std::size_t { return stakeholders.size(); }

  friend auto operator==(const Instance&, const Instance&) -> bool = default;
};

using Bits = std::vector<std::uint8_t>;

struct Solution {
  Bits r;
  Bits s;

  friend auto operator==(const Solution&, const Solution&) -> bool = default;
};

/// Throws invalid-instance when an invariant is broken.
inline void validate(const Instance& inst) {
  const auto n = static_cast<int>(inst.num_requirements());
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_instance, msg); };
  for (std::size_t i = 0; i < inst.costs.size(); ++i) {
    if (inst.costs[i] < 0) {
      fail("requirement " + std::to_string(i + 1) + " has negative cost");
    }
  }
  for (std::size_t k = 0; k < inst.stakeholders.size(); ++k) {
    const auto& st = inst.stakeholders[k];
    const auto label = "stakeholder " + std::to_string(k + 1);
    if (st.weight < 1) {
      fail(label + " has non-positive weight");
    }
    if (st.requests.empty()) {
      fail(label + " has an empty request set");
    }
    std::set<int> seen;
    for (int id : st.requests) {
      if (id < 1 || id > n) {
        fail(label + " requests unknown requirement " + std::to_string(id));
      }
      if (!seen.insert(id).second) {
        fail(label + " requests requirement " + std::to_string(id) + " twice");
      }
    }
  }
  for (const auto& [i, j] : inst.precedence) {
    if (i < 1 || i > n || j < 1 || j > n) {
      fail("precedence (" + std::to_string(i) + "," + std::to_string(j) + ") references an unknown requirement");
    }
  }
}

/// x[a] >= x[b]
struct Implication {
  std::size_t a = 0;
  std::size_t b = 0;

  friend auto operator==(const Implication&, const Implication&) -> bool = default;
};

struct BiObjectiveProblem {
  std::size_t num_requirements = 0;
  std::size_t num_stakeholders = 0;
  std::vector<Implication> implications;
  std::vector<std::int64_t> f1;  // -w_k on stakeholder variables
  std::vector<std::int64_t> f2;  // c_i on requirement variables

  [[nodiscard]] auto num_vars() const -> std::size_t { return num_requirements + num_stakeholders; }

  [[nodiscard]] auto point_of(std::span<const std::uint8_t> x) const -> Point {
    Point p;
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (x[v] != 0) {
        p.f1 += f1[v];
        p.f2 += f2[v];
      }
    }
    return p;
  }

  [[nodiscard]] auto split(std::span<const std::uint8_t> x) const -> Solution {
    Solution sol;
    sol.r.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(num_requirements));
    sol.s.assign(x.begin() + static_cast<std::ptrdiff_t>(num_requirements), x.end());
    return sol;
  }

  [[nodiscard]] auto join(const Solution& sol) const -> Bits {
    Bits x(sol.r);
    x.insert(x.end(), sol.s.begin(), sol.s.end());
    return x;
  }
};

inline auto build_bi_objective(const Instance& inst) -> BiObjectiveProblem {
  validate(inst);
  BiObjectiveProblem prob;
  prob.num_requirements = inst.num_requirements();
  prob.num_stakeholders = inst.num_stakeholders();
  const auto n = prob.num_requirements;
  prob.f1.assign(prob.num_vars(), 0);
  prob.f2.assign(prob.num_vars(), 0);
  // Totals must fit so that no objective evaluation can overflow later.
  std::int64_t total_cost = 0;
  std::int64_t total_weight = 0;
  for (std::size_t i = 0; i < n; ++i) {
    prob.f2[i] = inst.costs[i];
    total_cost = checked::add(total_cost, inst.costs[i]);
  }
  for (const auto& [i, j] : inst.precedence) {
    prob.implications.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)});
  }
  for (std::size_t k = 0; k < prob.num_stakeholders; ++k) {
    const auto& st = inst.stakeholders[k];
    prob.f1[n + k] = -st.weight;
    total_weight = checked::add(total_weight, st.weight);
    for (int id : st.requests) {
      prob.implications.push_back({static_cast<std::size_t>(id - 1), n + k});
    }
  }
  (void)total_cost;
  (void)total_weight;
  return prob;
}

inline void check_lengths(const Instance& inst, const Solution& sol) {
  if (sol.r.size() != inst.num_requirements() || sol.s.size() != inst.num_stakeholders()) {
    throw Error(ErrorKind::length_mismatch, "solution has " + std::to_string(sol.r.size()) + "+" +
                                                std::to_string(sol.s.size()) + " entries, instance needs " +
                                                std::to_string(inst.num_requirements()) + "+" +
                                                std::to_string(inst.num_stakeholders()));
  }
}

inline auto evaluate(const Instance& inst, const Solution& sol) -> Point {
  check_lengths(inst, sol);
  Point p;
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    if (sol.s[k] != 0) {
      p.f1 = checked::sub(p.f1, inst.stakeholders[k].weight);
    }
  }
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    if (sol.r[i] != 0) {
      p.f2 = checked::add(p.f2, inst.costs[i]);
    }
  }
  return p;
}

inline auto feasible(const Instance& inst, const Solution& sol) -> bool {
  check_lengths(inst, sol);
  for (const auto& [i, j] : inst.precedence) {
    if (sol.r[static_cast<std::size_t>(i - 1)] < sol.r[static_cast<std::size_t>(j - 1)]) {
      return false;
    }
  }
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    if (sol.s[k] == 0) {
      continue;
    }
    for (int id : inst.stakeholders[k].requests) {
      if (sol.r[static_cast<std::size_t>(id - 1)] == 0) {
        return false;
      }
    }
  }
  return true;
}

/// Smallest requirement set that satisfies stakeholder k (1-based), closed under precedence.
inline auto required_closure(const Instance& inst, int stakeholder) -> Bits {
  Bits r(inst.num_requirements(), 0);
  std::vector<int> stack(inst.stakeholders.at(static_cast<std::size_t>(stakeholder - 1)).requests);
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    auto& slot = r[static_cast<std::size_t>(id - 1)];
    if (slot != 0) {
      continue;
    }
    slot = 1;
    for (const auto& [pre, post] : inst.precedence) {
      if (post == id) {
        stack.push_back(pre);
      }
    }
  }
  return r;
}

}  // namespace nrp

#endif  // NRP_MODEL_HPP
