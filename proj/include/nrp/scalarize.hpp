#ifndef NRP_SCALARIZE_HPP
#define NRP_SCALARIZE_HPP

// Builders for the single-objective subproblems the bi-objective algorithms solve.

#include "core.hpp"
#include "model.hpp"
#include "oracle.hpp"

#include <optional>
#include <string>

namespace nrp {

/// Upper-left corner z1 and bottom-right corner z2 of a region in objective space.
struct BoxCorners {
  Point z1;
  Point z2;

  [[nodiscard]] auto width() const -> std::int64_t { return z2.f1 - z1.f1; }
  [[nodiscard]] auto height() const -> std::int64_t { return z1.f2 - z2.f2; }
  [[nodiscard]] auto valid() const -> bool { return z1.f1 < z2.f1 && z1.f2 > z2.f2; }
  /// Integral objectives leave no room strictly inside a box narrower than 2 in either axis.
  [[nodiscard]] auto has_interior() const -> bool { return width() >= 2 && height() >= 2; }
  [[nodiscard]] auto strictly_inside(const Point& p) const -> bool {
    return z1.f1 < p.f1 && p.f1 < z2.f1 && z2.f2 < p.f2 && p.f2 < z1.f2;
  }
  [[nodiscard]] auto is_corner(const Point& p) const -> bool { return p == z1 || p == z2; }

  friend auto operator==(const BoxCorners&, const BoxCorners&) -> bool = default;
};

inline void require_valid(const BoxCorners& box) {
  if (!box.valid()) {
    throw Error(ErrorKind::invalid_config, "box corners must satisfy z1.f1 < z2.f1 and z1.f2 > z2.f2");
  }
}

/// Weights under which both corners lie on one level line.
struct DichotomicWeights {
  std::int64_t lambda1 = 0;  // z1.f2 - z2.f2
  std::int64_t lambda2 = 0;  // z2.f1 - z1.f1

  [[nodiscard]] auto level(const Point& p) const -> std::int64_t {
    return checked::add(checked::mul(lambda1, p.f1), checked::mul(lambda2, p.f2));
  }
};

inline auto dichotomic_weights(const BoxCorners& box) -> DichotomicWeights {
  return {box.height(), box.width()};
}

/// Convex part of a box: on or below the level line through its corners.
inline auto in_convex_part(const BoxCorners& box, const Point& p) -> bool {
  auto w = dichotomic_weights(box);
  return w.level(p) <= w.level(box.z1);
}

enum class ObjectiveIndex { first = 1, second = 2 };

inline auto objective_index(int obj) -> ObjectiveIndex {
  if (obj != 1 && obj != 2) {
    throw Error(ErrorKind::invalid_config, "objective index must be 1 or 2");
  }
  return static_cast<ObjectiveIndex>(obj);
}

inline auto coordinate(const Point& p, ObjectiveIndex which) -> std::int64_t {
  return which == ObjectiveIndex::first ? p.f1 : p.f2;
}

inline auto other(ObjectiveIndex which) -> ObjectiveIndex {
  return which == ObjectiveIndex::first ? ObjectiveIndex::second : ObjectiveIndex::first;
}

inline auto objective_coeffs(const BiObjectiveProblem& prob, ObjectiveIndex which)
    -> const std::vector<std::int64_t>& {
  return which == ObjectiveIndex::first ? prob.f1 : prob.f2;
}

namespace scalarize_detail {

inline auto combine(const BiObjectiveProblem& prob, std::int64_t a1, std::int64_t a2) -> std::vector<std::int64_t> {
  std::vector<std::int64_t> out(prob.num_vars());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = checked::add(checked::mul(a1, prob.f1[j]), checked::mul(a2, prob.f2[j]));
  }
  return out;
}

inline auto base(const BiObjectiveProblem& prob, std::string label) -> Subproblem {
  Subproblem sub;
  sub.n_vars = prob.num_vars();
  sub.implications = prob.implications;
  sub.label = std::move(label);
  return sub;
}

inline auto bound_row(const BiObjectiveProblem& prob, ObjectiveIndex which, std::int64_t bound) -> LinearConstraint {
  return {objective_coeffs(prob, which), bound, which == ObjectiveIndex::first ? "f1_bound" : "f2_bound"};
}

}  // namespace scalarize_detail

/// min f_obj s.t. f_rest <= epsilon
inline auto epsilon_sub(const BiObjectiveProblem& prob, ObjectiveIndex obj, std::int64_t epsilon) -> Subproblem {
  auto sub = scalarize_detail::base(prob, "epsilon-constraint");
  sub.objective = LinearObjective{{objective_coeffs(prob, obj), 0}};
  sub.constraints.push_back(scalarize_detail::bound_row(prob, other(obj), epsilon));
  return sub;
}

/// First lexicographic stage: min f_obj, unconstrained.
inline auto single_objective_sub(const BiObjectiveProblem& prob, ObjectiveIndex obj) -> Subproblem {
  auto sub = scalarize_detail::base(prob, "lexicographic-stage-1");
  sub.objective = LinearObjective{{objective_coeffs(prob, obj), 0}};
  return sub;
}

/// min f_rest s.t. f_obj <= obj_bound (and optionally f_rest <= rest_bound).
inline auto second_stage_sub(const BiObjectiveProblem& prob, ObjectiveIndex obj, std::int64_t obj_bound,
                             std::optional<std::int64_t> rest_bound = std::nullopt) -> Subproblem {
  auto sub = scalarize_detail::base(prob, "lexicographic-stage-2");
  sub.objective = LinearObjective{{objective_coeffs(prob, other(obj)), 0}};
  sub.constraints.push_back(scalarize_detail::bound_row(prob, obj, obj_bound));
  if (rest_bound) {
    sub.constraints.push_back(scalarize_detail::bound_row(prob, other(obj), *rest_bound));
  }
  return sub;
}

/// min lambda1 f1 + lambda2 f2 with no bounds (dichotomic search).
inline auto weighted_sum_sub(const BiObjectiveProblem& prob, const DichotomicWeights& w) -> Subproblem {
  auto sub = scalarize_detail::base(prob, "weighted-sum");
  sub.objective = LinearObjective{{scalarize_detail::combine(prob, w.lambda1, w.lambda2), 0}};
  return sub;
}

/// min lambda1 f1 + lambda2 f2 s.t. f1 <= z2.f1 - 1, f2 <= z1.f2 - 1.
inline auto weighted_sum_in_box(const BiObjectiveProblem& prob, const BoxCorners& box) -> Subproblem {
  require_valid(box);
  auto w = dichotomic_weights(box);
  auto sub = scalarize_detail::base(prob, "weighted-sum-in-box");
  sub.objective = LinearObjective{{scalarize_detail::combine(prob, w.lambda1, w.lambda2), 0}};
  sub.constraints.push_back(scalarize_detail::bound_row(prob, ObjectiveIndex::first, box.z2.f1 - 1));
  sub.constraints.push_back(scalarize_detail::bound_row(prob, ObjectiveIndex::second, box.z1.f2 - 1));
  return sub;
}

/// Midpoint of the rest-coordinates of the corners, floored (exact for integral objectives).
inline auto augmecon_epsilon(const BoxCorners& box, ObjectiveIndex obj) -> std::int64_t {
  auto rest = other(obj);
  return floor_div(checked::add(coordinate(box.z1, rest), coordinate(box.z2, rest)), 2);
}

/// Default augmentation: 1 / (extent of f_rest over the root box + 1).
inline auto default_augmecon_lambda(const BoxCorners& root, ObjectiveIndex obj) -> Rational {
  auto rest = other(obj);
  auto extent = coordinate(root.z1, rest) - coordinate(root.z2, rest);
  return {1, checked::add(extent < 0 ? -extent : extent, 1)};
}

/// min f_obj - lambda t s.t. f_rest + t <= eps, t >= 0, with the slack eliminated:
/// min f_obj + lambda f_rest s.t. f_rest <= floor(eps), scaled by lambda's denominator.
inline auto augmecon_sub(const BiObjectiveProblem& prob, const BoxCorners& box, ObjectiveIndex obj,
                         Rational lambda) -> Subproblem {
  require_valid(box);
  if (lambda.num <= 0) {
    throw Error(ErrorKind::invalid_config, "augmecon lambda must be positive");
  }
  // f_obj gets lambda's denominator, f_rest its numerator
  auto c1 = obj == ObjectiveIndex::first ? lambda.den : lambda.num;
  auto c2 = obj == ObjectiveIndex::first ? lambda.num : lambda.den;
  auto sub = scalarize_detail::base(prob, "augmecon");
  sub.objective = LinearObjective{{scalarize_detail::combine(prob, c1, c2), 0}};
  sub.constraints.push_back(scalarize_detail::bound_row(prob, other(obj), augmecon_epsilon(box, obj)));
  sub.scale = lambda.den;
  return sub;
}

/// Same objective as augmecon_sub with an explicit integer epsilon (classic sweep).
inline auto augmecon_sweep_sub(const BiObjectiveProblem& prob, ObjectiveIndex obj, std::int64_t epsilon,
                               Rational lambda) -> Subproblem {
  // f_obj gets lambda's denominator, f_rest its numerator
  auto c1 = obj == ObjectiveIndex::first ? lambda.den : lambda.num;
  auto c2 = obj == ObjectiveIndex::first ? lambda.num : lambda.den;
  auto sub = scalarize_detail::base(prob, "augmecon-sweep");
  sub.objective = LinearObjective{{scalarize_detail::combine(prob, c1, c2), 0}};
  sub.constraints.push_back(scalarize_detail::bound_row(prob, other(obj), epsilon));
  sub.scale = lambda.den;
  return sub;
}

struct TchebycheffParams {
  Point ideal;            // (z1.f1, z2.f2)
  std::int64_t w1 = 0;    // z1.f2 - z2.f2
  std::int64_t w2 = 0;    // z2.f1 - z1.f1
  Rational rho;           // min(w1, w2) / (2 (width + height + 1))
};

inline auto tchebycheff_params(const BoxCorners& box) -> TchebycheffParams {
  require_valid(box);
  TchebycheffParams p;
  p.ideal = {box.z1.f1, box.z2.f2};
  p.w1 = box.height();
  p.w2 = box.width();
  p.rho = Rational(std::min(p.w1, p.w2), checked::mul(2, checked::add(checked::add(box.width(), box.height()), 1)));
  return p;
}

/// Augmented weighted Tchebycheff distance to the local ideal point, restricted to
/// f1 <= z2.f1 and f2 <= z1.f2. Everything is multiplied by D = 2 (width + height + 1).
inline auto tchebycheff_sub(const BiObjectiveProblem& prob, const BoxCorners& box) -> Subproblem {
  auto params = tchebycheff_params(box);
  const auto scale = checked::mul(2, checked::add(checked::add(box.width(), box.height()), 1));
  const auto rho_num = std::min(params.w1, params.w2);
  auto sub = scalarize_detail::base(prob, "augmented-tchebycheff");
  MaxPlusObjective mp;
  const auto a1 = checked::mul(scale, params.w1);
  const auto a2 = checked::mul(scale, params.w2);
  mp.first = {scalarize_detail::combine(prob, a1, 0), checked::mul(-a1, params.ideal.f1)};
  mp.second = {scalarize_detail::combine(prob, 0, a2), checked::mul(-a2, params.ideal.f2)};
  mp.augment = {scalarize_detail::combine(prob, rho_num, rho_num),
                checked::mul(-rho_num, checked::add(params.ideal.f1, params.ideal.f2))};
  sub.objective = std::move(mp);
  sub.constraints.push_back(scalarize_detail::bound_row(prob, ObjectiveIndex::first, box.z2.f1));
  sub.constraints.push_back(scalarize_detail::bound_row(prob, ObjectiveIndex::second, box.z1.f2));
  sub.scale = scale;
  return sub;
}

struct LexicographicOptima {
  OracleStatus status = OracleStatus::optimal;  // first non-optimal stage status, if any
  Point z1;
  Point z2;
  Solution sol1;
  Solution sol2;
};

/// z1 = lexmin (f1, f2), z2 = lexmin (f2, f1); four oracle calls.
inline auto lexicographic_optima(const BiObjectiveProblem& prob, const OracleFn& oracle, std::stop_token cancel = {},
                                 SolveOptions options = {}) -> LexicographicOptima {
  LexicographicOptima out;
  auto stage = [&](ObjectiveIndex obj, Point& z, Solution& sol) -> bool {
    auto first = oracle(single_objective_sub(prob, obj), cancel, options);
    if (!first.optimal()) {
      out.status = first.status;
      return false;
    }
    auto second = oracle(second_stage_sub(prob, obj, first.value), cancel, options);
    if (!second.optimal()) {
      out.status = second.status;
      return false;
    }
    z = prob.point_of(second.assignment);
    sol = prob.split(second.assignment);
    return true;
  };
  if (stage(ObjectiveIndex::first, out.z1, out.sol1)) {
    stage(ObjectiveIndex::second, out.z2, out.sol2);
  }
  return out;
}

}  // namespace nrp

#endif  // NRP_SCALARIZE_HPP
