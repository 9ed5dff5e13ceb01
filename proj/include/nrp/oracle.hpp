#ifndef NRP_ORACLE_HPP
#define NRP_ORACLE_HPP

// Exact solver for binary programs of the form
//
//   min  objective(x)
//   s.t. x[a] >= x[b]           for every implication (a, b)
//        sum_j d_j x_j <= e     for every linear constraint
//        x in {0,1}^n
//
// where the objective is either linear or max(A.x + a0, B.x + b0) + G.x + g0.
// All data are integers; rational scalarization parameters are carried as
// integer numerators over a common `scale`.

#include "core.hpp"
#include "model.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stop_token>
#include <string>
#include <variant>
#include <vector>

namespace nrp {

struct LinearForm {
  std::vector<std::int64_t> coeffs;
  std::int64_t constant = 0;

  [[nodiscard]] auto value(std::span<const std::uint8_t> x) const -> std::int64_t {
    auto total = constant;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (x[j] != 0) {
        total += coeffs[j];
      }
    }
    return total;
  }
};

struct LinearObjective {
  LinearForm form;
};

/// max(first, second) + augment
struct MaxPlusObjective {
  LinearForm first;
  LinearForm second;
  LinearForm augment;
};

using Objective = std::variant<LinearObjective, MaxPlusObjective>;

/// sum_j coeffs[j] x_j <= bound
struct LinearConstraint {
  std::vector<std::int64_t> coeffs;
  std::int64_t bound = 0;
  std::string name;

  [[nodiscard]] auto satisfied(std::span<const std::uint8_t> x) const -> bool {
    std::int64_t lhs = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (x[j] != 0) {
        lhs += coeffs[j];
      }
    }
    return lhs <= bound;
  }
};

struct Subproblem {
  std::size_t n_vars = 0;
  std::vector<Implication> implications;
  std::vector<LinearConstraint> constraints;
  Objective objective = LinearObjective{};
  std::int64_t scale = 1;
  std::string label;
};

inline auto objective_value(const Objective& objective, std::span<const std::uint8_t> x) -> std::int64_t {
  if (const auto* lin = std::get_if<LinearObjective>(&objective)) {
    return lin->form.value(x);
  }
  const auto& mp = std::get<MaxPlusObjective>(objective);
  return std::max(mp.first.value(x), mp.second.value(x)) + mp.augment.value(x);
}

inline auto satisfies_all(const Subproblem& sub, std::span<const std::uint8_t> x) -> bool {
  for (const auto& imp : sub.implications) {
    if (x[imp.a] < x[imp.b]) {
      return false;
    }
  }
  return std::all_of(sub.constraints.begin(), sub.constraints.end(),
                     [&](const LinearConstraint& c) { return c.satisfied(x); });
}

namespace detail {

inline void check_form(const std::vector<std::int64_t>& coeffs, std::int64_t constant, std::size_t n,
                       const char* what) {
  if (coeffs.size() != n) {
    throw Error(ErrorKind::invalid_subproblem, std::string(what) + " has " + std::to_string(coeffs.size()) +
                                                   " coefficients, expected " + std::to_string(n));
  }
  auto reach = checked::abs(constant);
  for (auto c : coeffs) {
    reach = checked::add(reach, checked::abs(c));
  }
}

}  // namespace detail

/// Rejects malformed subproblems and any whose partial sums could leave the int64 range.
inline void validate(const Subproblem& sub) {
  if (sub.scale <= 0) {
    throw Error(ErrorKind::invalid_subproblem, "scale must be positive");
  }
  for (const auto& imp : sub.implications) {
    if (imp.a >= sub.n_vars || imp.b >= sub.n_vars) {
      throw Error(ErrorKind::invalid_subproblem, "implication index out of range");
    }
  }
  for (const auto& c : sub.constraints) {
    detail::check_form(c.coeffs, c.bound, sub.n_vars, "constraint");
  }
  if (const auto* lin = std::get_if<LinearObjective>(&sub.objective)) {
    detail::check_form(lin->form.coeffs, lin->form.constant, sub.n_vars, "objective");
  } else {
    const auto& mp = std::get<MaxPlusObjective>(sub.objective);
    detail::check_form(mp.first.coeffs, mp.first.constant, sub.n_vars, "max-plus first form");
    detail::check_form(mp.second.coeffs, mp.second.constant, sub.n_vars, "max-plus second form");
    detail::check_form(mp.augment.coeffs, mp.augment.constant, sub.n_vars, "max-plus augment");
    auto reach = [&](const LinearForm& f) {
      auto r = checked::abs(f.constant);
      for (auto c : f.coeffs) {
        r = checked::add(r, checked::abs(c));
      }
      return r;
    };
    (void)checked::add(std::max(reach(mp.first), reach(mp.second)), reach(mp.augment));
  }
}

// ---------------------------------------------------------------------------
// Partial assignments and implication propagation

using PartialAssignment = std::vector<std::int8_t>;
inline constexpr std::int8_t kFree = -1;

class ImplicationGraph {
 public:
  ImplicationGraph(std::size_t n_vars, std::span<const Implication> implications) : up_(n_vars), down_(n_vars) {
    for (const auto& imp : implications) {
      up_[imp.b].push_back(imp.a);
      down_[imp.a].push_back(imp.b);
    }
  }

  /// Variables forced to 1 when `v` is 1.
  [[nodiscard]] auto up(std::size_t v) const -> const std::vector<std::size_t>& { return up_[v]; }
  /// Variables forced to 0 when `v` is 0.
  [[nodiscard]] auto down(std::size_t v) const -> const std::vector<std::size_t>& { return down_[v]; }
  [[nodiscard]] auto size() const -> std::size_t { return up_.size(); }

 private:
  std::vector<std::vector<std::size_t>> up_;
  std::vector<std::vector<std::size_t>> down_;
};

enum class Propagation { fixpoint, conflict };

namespace detail {

inline auto close(const ImplicationGraph& graph, PartialAssignment& x, std::vector<std::size_t>& work)
    -> Propagation {
  while (!work.empty()) {
    auto v = work.back();
    work.pop_back();
    const auto value = x[v];
    const auto& next = value == 1 ? graph.up(v) : graph.down(v);
    for (auto u : next) {
      if (x[u] == kFree) {
        x[u] = value;
        work.push_back(u);
      } else if (x[u] != value) {
        return Propagation::conflict;
      }
    }
  }
  return Propagation::fixpoint;
}

}  // namespace detail

/// Closes the implications over every fixed variable: x_b = 1 forces x_a = 1, x_a = 0 forces x_b = 0.
inline auto propagate(const ImplicationGraph& graph, PartialAssignment& x) -> Propagation {
  std::vector<std::size_t> work;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] != kFree) {
      work.push_back(v);
    }
  }
  return detail::close(graph, x, work);
}

/// Incremental propagation after `var` has just been fixed.
inline auto propagate_from(const ImplicationGraph& graph, PartialAssignment& x, std::size_t var) -> Propagation {
  std::vector<std::size_t> work{var};
  return detail::close(graph, x, work);
}

// ---------------------------------------------------------------------------
// Bounds

/// Smallest value the form can take over completions of `x`, ignoring all constraints.
inline auto form_lower_bound(const LinearForm& form, const PartialAssignment& x) -> std::int64_t {
  auto total = form.constant;
  for (std::size_t j = 0; j < form.coeffs.size(); ++j) {
    if (x[j] == 1 || (x[j] == kFree && form.coeffs[j] < 0)) {
      total += form.coeffs[j];
    }
  }
  return total;
}

inline auto lower_bound(const PartialAssignment& x, const Subproblem& sub) -> std::int64_t {
  if (const auto* lin = std::get_if<LinearObjective>(&sub.objective)) {
    return form_lower_bound(lin->form, x);
  }
  const auto& mp = std::get<MaxPlusObjective>(sub.objective);
  return std::max(form_lower_bound(mp.first, x), form_lower_bound(mp.second, x)) +
         form_lower_bound(mp.augment, x);
}

/// True when some constraint cannot be met by any completion of `x`.
inline auto prune_infeasible(const PartialAssignment& x, const Subproblem& sub) -> bool {
  return std::any_of(sub.constraints.begin(), sub.constraints.end(), [&](const LinearConstraint& c) {
    return form_lower_bound(LinearForm{c.coeffs, 0}, x) > c.bound;
  });
}

// ---------------------------------------------------------------------------
// Solver

enum class OracleStatus { optimal, infeasible, cancelled, budget_exhausted };

inline auto to_string(OracleStatus status) -> std::string_view {
  switch (status) {
    case OracleStatus::optimal: return "optimal";
    case OracleStatus::infeasible: return "infeasible";
    case OracleStatus::cancelled: return "cancelled";
    case OracleStatus::budget_exhausted: return "budget-exhausted";
  }
  return "unknown";
}

struct OracleOutcome {
  OracleStatus status = OracleStatus::infeasible;
  Bits assignment;          // set when optimal
  std::int64_t value = 0;   // objective value times `scale`, set when optimal
  std::int64_t scale = 1;
  std::uint64_t nodes = 0;  // node expansions performed

  [[nodiscard]] auto optimal() const -> bool { return status == OracleStatus::optimal; }
  [[nodiscard]] auto objective() const -> Rational { return {value, scale}; }
};

struct SolveOptions {
  std::uint64_t node_budget = 10'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

struct Node {
  std::int64_t bound = 0;
  std::size_t depth = 0;
  std::uint64_t seq = 0;
  PartialAssignment x;
};

// priority_queue pops the "largest"; lowest bound, then deepest, then oldest wins.
struct NodeOrder {
  auto operator()(const Node& lhs, const Node& rhs) const -> bool {
    if (lhs.bound != rhs.bound) {
      return lhs.bound > rhs.bound;
    }
    if (lhs.depth != rhs.depth) {
      return lhs.depth < rhs.depth;
    }
    return lhs.seq > rhs.seq;
  }
};

inline auto branching_keys(const Subproblem& sub) -> std::vector<std::int64_t> {
  std::vector<std::int64_t> keys(sub.n_vars, 0);
  auto absorb = [&](const LinearForm& f) {
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      keys[j] = std::max(keys[j], f.coeffs[j] < 0 ? -f.coeffs[j] : f.coeffs[j]);
    }
  };
  if (const auto* lin = std::get_if<LinearObjective>(&sub.objective)) {
    absorb(lin->form);
  } else {
    const auto& mp = std::get<MaxPlusObjective>(sub.objective);
    absorb(mp.first);
    absorb(mp.second);
    absorb(mp.augment);
  }
  return keys;
}

// Per-variable preference used to build a cheap completion for the incumbent.
inline auto preferred_sign(const Subproblem& sub) -> std::vector<std::int64_t> {
  if (const auto* lin = std::get_if<LinearObjective>(&sub.objective)) {
    return lin->form.coeffs;
  }
  const auto& mp = std::get<MaxPlusObjective>(sub.objective);
  auto sign = [](std::int64_t v) -> std::int64_t { return (v > 0) - (v < 0); };
  std::vector<std::int64_t> out(sub.n_vars);
  for (std::size_t j = 0; j < sub.n_vars; ++j) {
    out[j] = sign(mp.first.coeffs[j]) + sign(mp.second.coeffs[j]) + 2 * sign(mp.augment.coeffs[j]);
  }
  return out;
}

}  // namespace detail

/// Best-first branch-and-bound. Optimal results are exact global minima.
inline auto solve(const Subproblem& sub, std::stop_token cancel = {}, SolveOptions options = {}) -> OracleOutcome {
  validate(sub);
  OracleOutcome out;
  out.scale = sub.scale;

  const ImplicationGraph graph(sub.n_vars, sub.implications);
  const auto keys = detail::branching_keys(sub);
  const auto preference = detail::preferred_sign(sub);

  std::optional<std::int64_t> incumbent;
  Bits best;
  Bits candidate(sub.n_vars);

  auto offer = [&](const PartialAssignment& full) {
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      candidate[j] = full[j] == 1 ? 1 : 0;
    }
    if (!satisfies_all(sub, candidate)) {
      return;
    }
    auto v = objective_value(sub.objective, candidate);
    if (!incumbent || v < *incumbent) {
      incumbent = v;
      best = candidate;
    }
  };

  // Two completions: free variables at 0, and favourable variables at 1 closed upward.
  auto try_completions = [&](const PartialAssignment& x) {
    PartialAssignment zero(x);
    std::replace(zero.begin(), zero.end(), kFree, std::int8_t{0});
    offer(zero);
    PartialAssignment greedy(x);
    std::vector<std::size_t> work;
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      if (greedy[j] == kFree && preference[j] < 0) {
        greedy[j] = 1;
        work.push_back(j);
      }
    }
    if (work.empty() || detail::close(graph, greedy, work) == Propagation::conflict) {
      return;
    }
    std::replace(greedy.begin(), greedy.end(), kFree, std::int8_t{0});
    offer(greedy);
  };

  PartialAssignment root(sub.n_vars, kFree);
  if (propagate(graph, root) == Propagation::conflict || prune_infeasible(root, sub)) {
    out.status = OracleStatus::infeasible;
    return out;
  }

  std::priority_queue<detail::Node, std::vector<detail::Node>, detail::NodeOrder> open;
  std::uint64_t seq = 0;
  open.push({lower_bound(root, sub), 0, seq++, std::move(root)});

  while (!open.empty()) {
    if (incumbent && open.top().bound >= *incumbent) {
      break;
    }
    auto node = open.top();
    open.pop();

    ++out.nodes;
    if (cancel.stop_requested()) {
      out.status = OracleStatus::cancelled;
      return out;
    }
    if ((options.deadline && std::chrono::steady_clock::now() >= *options.deadline) ||
        out.nodes > options.node_budget) {
      out.status = OracleStatus::budget_exhausted;
      return out;
    }

    try_completions(node.x);
    if (incumbent && *incumbent <= node.bound) {
      break;
    }

    std::size_t branch = sub.n_vars;
    for (std::size_t j = 0; j < sub.n_vars; ++j) {
      if (node.x[j] == kFree && (branch == sub.n_vars || keys[j] > keys[branch])) {
        branch = j;
      }
    }
    if (branch == sub.n_vars) {
      continue;  // fully fixed; try_completions already offered it
    }

    for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
      PartialAssignment child(node.x);
      child[branch] = value;
      if (propagate_from(graph, child, branch) == Propagation::conflict || prune_infeasible(child, sub)) {
        continue;
      }
      auto bound = lower_bound(child, sub);
      if (incumbent && bound >= *incumbent) {
        continue;
      }
      open.push({bound, node.depth + 1, seq++, std::move(child)});
    }
  }

  if (!incumbent) {
    out.status = OracleStatus::infeasible;
    return out;
  }
  out.status = OracleStatus::optimal;
  out.assignment = std::move(best);
  out.value = *incumbent;
  return out;
}

/// Anything that answers subproblems with the exactness contract of `solve`.
using OracleFn = std::function<OracleOutcome(const Subproblem&, std::stop_token, SolveOptions)>;

inline auto builtin_oracle() -> OracleFn {
  return [](const Subproblem& sub, std::stop_token cancel, SolveOptions options) {
    return solve(sub, std::move(cancel), options);
  };
}

}  // namespace nrp

#endif  // NRP_ORACLE_HPP
