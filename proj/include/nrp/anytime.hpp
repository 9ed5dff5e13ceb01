#ifndef NRP_ANYTIME_HPP
#define NRP_ANYTIME_HPP

// Box-queue engine for exact bi-objective enumeration.
//
// Every algorithm seeds with the two lexicographic optima and then refines the
// objective space between known non-dominated points. Anytime variants pick
// the largest-area box next; classic variants sweep (epsilon-constraint family),
// go depth-first (EHybrid, Tchebycheff) or by largest diagonal (dichotomic search).

#include "core.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "scalarize.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <queue>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

namespace nrp {

enum class Algorithm {
  spf,
  any_augmecon,
  any_tchebycheff,
  any_hybrid,
  mix_ht,
  mix_sht,
  econst1,
  econst2,
  augmecon,
  ehybrid_classic,
  tchebycheff_classic,
  ads,
};

/// Algorithms that take an objective index (1 or 2).
inline auto takes_objective(Algorithm a) -> bool {
  return a == Algorithm::any_augmecon || a == Algorithm::econst1 || a == Algorithm::econst2 ||
         a == Algorithm::augmecon;
}

inline auto is_classic(Algorithm a) -> bool {
  switch (a) {
    case Algorithm::econst1:
    case Algorithm::econst2:
    case Algorithm::augmecon:
    case Algorithm::ehybrid_classic:
    case Algorithm::tchebycheff_classic:
    case Algorithm::ads:
      return true;
    default:
      return false;
  }
}

namespace algo_detail {

struct NameEntry {
  Algorithm algorithm;
  const char* name;
};

inline constexpr NameEntry kNames[] = {
    {Algorithm::spf, "SPF"},
    {Algorithm::any_augmecon, "AnyAugmecon"},
    {Algorithm::any_tchebycheff, "AnyTchebycheff"},
    {Algorithm::any_hybrid, "AnyHybrid"},
    {Algorithm::mix_ht, "MixHT"},
    {Algorithm::mix_sht, "MixSHT"},
    {Algorithm::econst1, "Econst1"},
    {Algorithm::econst2, "Econst2"},
    {Algorithm::augmecon, "Augmecon"},
    {Algorithm::ehybrid_classic, "EHybrid"},
    {Algorithm::tchebycheff_classic, "Tchebycheff"},
    {Algorithm::ads, "ADS"},
};

inline auto lower(std::string_view s) -> std::string {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace algo_detail

struct AlgorithmChoice {
  Algorithm algorithm = Algorithm::any_hybrid;
  int objective = 1;

  friend auto operator==(const AlgorithmChoice&, const AlgorithmChoice&) -> bool = default;
};

inline auto to_string(Algorithm a, int objective = 1) -> std::string {
  for (const auto& e : algo_detail::kNames) {
    if (e.algorithm == a) {
      std::string name(e.name);
      if (takes_objective(a)) {
        name += "(" + std::to_string(objective) + ")";
      }
      return name;
    }
  }
  return "unknown";
}

inline auto to_string(const AlgorithmChoice& c) -> std::string { return to_string(c.algorithm, c.objective); }

/// Accepts "AnyHybrid", "AnyAugmecon(2)", "AnyAugmecon2", "EHybridClassic", case-insensitively.
inline auto parse_algorithm(std::string_view text) -> AlgorithmChoice {
  auto name = algo_detail::lower(text);
  int objective = 1;
  bool explicit_objective = false;
  if (!name.empty() && name.back() == ')') {
    auto open = name.find('(');
    if (open == std::string::npos || open + 3 != name.size()) {
      throw Error(ErrorKind::invalid_config, "unknown algorithm '" + std::string(text) + "'");
    }
    objective = name[open + 1] - '0';
    name.resize(open);
    explicit_objective = true;
  } else if (!name.empty() && (name.back() == '1' || name.back() == '2') &&
             name != "econst1" && name != "econst2") {
    objective = name.back() - '0';
    name.pop_back();
    explicit_objective = true;
  }
  if (name.size() > 7 && name.ends_with("classic")) {
    name.resize(name.size() - 7);
  }
  if (name == "augmeconsweep") {
    name = "augmecon";
  }
  for (const auto& e : algo_detail::kNames) {
    if (algo_detail::lower(e.name) == name) {
      if (explicit_objective && !takes_objective(e.algorithm)) {
        throw Error(ErrorKind::invalid_config, std::string(e.name) + " takes no objective index");
      }
      if (objective != 1 && objective != 2) {
        throw Error(ErrorKind::invalid_config, "objective index must be 1 or 2");
      }
      return {e.algorithm, objective};
    }
  }
  throw Error(ErrorKind::invalid_config, "unknown algorithm '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Boxes

enum class MethodTag { hybrid, tchebycheff };

inline auto to_char(MethodTag t) -> char { return t == MethodTag::hybrid ? 'H' : 'T'; }

struct Box {
  BoxCorners corners;
  MethodTag tag = MethodTag::hybrid;
  std::int64_t area = 0;
  std::uint64_t seq = 0;
};

enum class BoxOrder { largest_area, largest_diagonal, depth_first };

inline auto box_area(const BoxCorners& c) -> std::int64_t { return checked::mul(c.width(), c.height()); }

inline auto box_diagonal_sq(const BoxCorners& c) -> std::int64_t {
  return checked::add(checked::mul(c.width(), c.width()), checked::mul(c.height(), c.height()));
}

/// Priority structure over boxes. Ties are served first-in first-out.
class BoxQueue {
 public:
  explicit BoxQueue(BoxOrder order = BoxOrder::largest_area) : order_(order) {}

  /// Boxes without integral interior are dropped; returns whether the box was queued.
  auto push(const BoxCorners& corners, MethodTag tag = MethodTag::hybrid) -> bool {
    if (!corners.valid() || !corners.has_interior()) {
      return false;
    }
    Box box{corners, tag, box_area(corners), next_seq_++};
    if (order_ == BoxOrder::depth_first) {
      stack_.push_back(box);
    } else {
      heap_.push({key(box), box});
    }
    return true;
  }

  auto pop() -> Box {
    if (order_ == BoxOrder::depth_first) {
      auto box = stack_.back();
      stack_.pop_back();
      return box;
    }
    auto box = heap_.top().box;
    heap_.pop();
    return box;
  }

  [[nodiscard]] auto key(const Box& box) const -> std::int64_t {
    switch (order_) {
      case BoxOrder::largest_area: return box.area;
      case BoxOrder::largest_diagonal: return box_diagonal_sq(box.corners);
      case BoxOrder::depth_first: return static_cast<std::int64_t>(box.seq);
    }
    return 0;
  }

  /// Largest key currently queued, if any.
  [[nodiscard]] auto top_key() const -> std::optional<std::int64_t> {
    if (empty()) {
      return std::nullopt;
    }
    if (order_ == BoxOrder::depth_first) {
      return key(stack_.back());
    }
    return heap_.top().key;
  }

  [[nodiscard]] auto empty() const -> bool { return order_ == BoxOrder::depth_first ? stack_.empty() : heap_.empty(); }
  [[nodiscard]] auto size() const -> std::size_t {
    return order_ == BoxOrder::depth_first ? stack_.size() : heap_.size();
  }
  [[nodiscard]] auto order() const -> BoxOrder { return order_; }

 private:
  struct Keyed {
    std::int64_t key;
    Box box;
  };
  struct KeyedOrder {
    auto operator()(const Keyed& lhs, const Keyed& rhs) const -> bool {
      if (lhs.key != rhs.key) {
        return lhs.key < rhs.key;
      }
      return lhs.box.seq > rhs.box.seq;
    }
  };

  BoxOrder order_;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Keyed, std::vector<Keyed>, KeyedOrder> heap_;
  std::vector<Box> stack_;
};

/// For a < c < b: c is close to a when c - a < (b - a)/4, close to b when b - c < (b - a)/4.
inline auto is_close_to(std::int64_t a, std::int64_t b, std::int64_t c, bool to_low_end) -> bool {
  const auto span = b - a;
  return to_low_end ? 4 * (c - a) < span : 4 * (b - c) < span;
}

/// Method tags for the children (z1, z) and (z, z2) of a box explored by a mixed algorithm.
inline auto choose_method(const BoxCorners& box, const Point& z) -> std::pair<MethodTag, MethodTag> {
  if (in_convex_part(box, z)) {
    return {MethodTag::hybrid, MethodTag::hybrid};
  }
  auto near_end = [](std::int64_t a, std::int64_t b, std::int64_t c) {
    return is_close_to(a, b, c, true) || is_close_to(a, b, c, false);
  };
  auto left = near_end(box.z1.f1, box.z2.f1, z.f1) ? MethodTag::tchebycheff : MethodTag::hybrid;
  auto right = near_end(box.z2.f2, box.z1.f2, z.f2) ? MethodTag::tchebycheff : MethodTag::hybrid;
  return {left, right};
}

// ---------------------------------------------------------------------------
// Run configuration, events and control

using Clock = std::chrono::steady_clock;

struct RunConfig {
  Algorithm algorithm = Algorithm::any_hybrid;
  int objective = 1;
  std::optional<std::chrono::nanoseconds> deadline;
  std::optional<Rational> lambda;                 // Augmecon family only
  std::uint64_t node_budget = 10'000'000;         // per oracle call
  std::optional<std::uint64_t> answer_budget;     // oracle calls allowed after the lexicographic seeding
  std::optional<std::int64_t> total_hypervolume;  // enables hv fractions on events
  bool record_boxes = false;
};

inline void validate(const RunConfig& config) {
  if (config.objective != 1 && config.objective != 2) {
    throw Error(ErrorKind::invalid_config, "objective index must be 1 or 2");
  }
  if (config.lambda && (config.lambda->num <= 0 || config.lambda->den <= 0)) {
    throw Error(ErrorKind::invalid_config, "lambda must be positive");
  }
  if (config.deadline && config.deadline->count() < 0) {
    throw Error(ErrorKind::invalid_config, "deadline must be non-negative");
  }
  if (config.node_budget == 0) {
    throw Error(ErrorKind::invalid_config, "node budget must be positive");
  }
}

struct RunEvent {
  std::chrono::nanoseconds elapsed{0};
  Point point;
  Solution solution;
  std::uint64_t oracle_calls = 0;
  std::int64_t hypervolume = 0;  // archive hypervolume after this point
  std::size_t open_boxes = 0;
};

enum class Termination { exhausted, deadline, cancelled, answer_budget, node_budget };

inline auto to_string(Termination t) -> std::string_view {
  switch (t) {
    case Termination::exhausted: return "exhausted";
    case Termination::deadline: return "deadline";
    case Termination::cancelled: return "cancelled";
    case Termination::answer_budget: return "answer-budget";
    case Termination::node_budget: return "node-budget";
  }
  return "unknown";
}

struct RunStats {
  std::uint64_t oracle_calls = 0;
  std::uint64_t exploration_calls = 0;
  std::uint64_t optimal = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t discarded_after_deadline = 0;
  std::uint64_t nodes = 0;
};

/// One box extraction, for checking the queue discipline after a run.
struct BoxRecord {
  BoxCorners box;
  MethodTag tag = MethodTag::hybrid;
  std::int64_t key = 0;
  std::optional<std::int64_t> largest_remaining;
  std::vector<BoxCorners> children;
};

struct RunReport {
  ParetoArchive archive;
  std::vector<RunEvent> events;
  Termination termination = Termination::exhausted;
  RunStats stats;
  std::optional<Point> nadir;
  std::vector<BoxRecord> boxes;
};

using EventSink = std::function<void(const RunEvent&)>;

/// Pause/resume/stop channel shared between a running engine and its controller.
class RunControl {
 public:
  void pause() {
    std::lock_guard lock(mutex_);
    if (!paused_ && !stop_.stop_requested()) {
      paused_ = true;
      paused_since_ = Clock::now();
    }
  }

  void resume() {
    {
      std::lock_guard lock(mutex_);
      if (paused_) {
        paused_ = false;
        paused_total_ += Clock::now() - paused_since_;
      }
    }
    cv_.notify_all();
  }

  void stop() {
    {
      std::lock_guard lock(mutex_);
      stop_.request_stop();
      if (paused_) {
        paused_ = false;
        paused_total_ += Clock::now() - paused_since_;
      }
    }
    cv_.notify_all();
  }

  [[nodiscard]] auto paused() const -> bool {
    std::lock_guard lock(mutex_);
    return paused_;
  }

  [[nodiscard]] auto stopped() const -> bool { return stop_.stop_requested(); }

  /// Blocks while paused. Returns false once a stop has been requested.
  auto checkpoint() -> bool {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return !paused_ || stop_.stop_requested(); });
    return !stop_.stop_requested();
  }

  [[nodiscard]] auto token() const -> std::stop_token { return stop_.get_token(); }

  /// Total time spent paused, including a pause in progress.
  [[nodiscard]] auto paused_total() const -> Clock::duration {
    std::lock_guard lock(mutex_);
    return paused_ ? paused_total_ + (Clock::now() - paused_since_) : paused_total_;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  bool paused_ = false;
  std::stop_source stop_;
  Clock::time_point paused_since_{};
  Clock::duration paused_total_{0};
};

// ---------------------------------------------------------------------------
// Engine

class Engine {
 public:
  Engine(const BiObjectiveProblem& problem, RunConfig config, EventSink sink, RunControl& control, OracleFn oracle)
      : problem_(problem), config_(std::move(config)), sink_(std::move(sink)), control_(control),
        oracle_(std::move(oracle)) {
    validate(config_);
  }

  auto run() -> RunReport {
    start_ = Clock::now();
    paused_base_ = control_.paused_total();
    hv_.total = config_.total_hypervolume;
    if (seed()) {
      dispatch();
    }
    return std::move(report_);
  }

 private:
  using Obj = ObjectiveIndex;

  const BiObjectiveProblem& problem_;
  RunConfig config_;
  EventSink sink_;
  RunControl& control_;
  OracleFn oracle_;
  Clock::time_point start_;
  Clock::duration paused_base_{0};  // pausing that happened before the run started
  RunReport report_;
  HvTracker hv_;
  bool nadir_known_ = false;
  bool stopped_ = false;
  Point z1_;
  Point z2_;
  std::size_t open_boxes_ = 0;
  std::chrono::nanoseconds answered_at_{0};

  [[nodiscard]] auto elapsed() const -> std::chrono::nanoseconds {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_ - (control_.paused_total() - paused_base_));
  }

  void terminate(Termination t) {
    report_.termination = t;
    stopped_ = true;
  }

  // One oracle call with steering, deadline and budget handling. nullopt ends the run.
  auto call(const Subproblem& sub, bool exploration = true) -> std::optional<OracleOutcome> {
    if (stopped_) {
      return std::nullopt;
    }
    if (!control_.checkpoint()) {
      terminate(Termination::cancelled);
      return std::nullopt;
    }
    if (config_.deadline && elapsed() >= *config_.deadline) {
      terminate(Termination::deadline);
      return std::nullopt;
    }
    if (exploration && config_.answer_budget && report_.stats.exploration_calls >= *config_.answer_budget) {
      terminate(Termination::answer_budget);
      return std::nullopt;
    }
    SolveOptions options;
    options.node_budget = config_.node_budget;
    if (config_.deadline) {
      options.deadline = Clock::now() + (*config_.deadline - elapsed());
    }
    auto outcome = oracle_(sub, control_.token(), options);
    auto& stats = report_.stats;
    ++stats.oracle_calls;
    stats.nodes += outcome.nodes;
    switch (outcome.status) {
      case OracleStatus::cancelled:
        terminate(Termination::cancelled);
        return std::nullopt;
      case OracleStatus::budget_exhausted:
        terminate(config_.deadline && elapsed() >= *config_.deadline ? Termination::deadline
                                                                      : Termination::node_budget);
        return std::nullopt;
      case OracleStatus::optimal: {
        ++stats.optimal;
        const auto now = elapsed();
        if (config_.deadline && now > *config_.deadline) {
          ++stats.discarded_after_deadline;
          terminate(Termination::deadline);
          return std::nullopt;
        }
        answered_at_ = now;  // points found by this call carry the acceptance time
        break;
      }
      case OracleStatus::infeasible:
        ++stats.infeasible;
        break;
    }
    if (exploration) {
      ++stats.exploration_calls;
    }
    return outcome;
  }

  auto emit(const Point& p, const Bits& x) -> bool {
    if (!report_.archive.insert(p, problem_.split(x))) {
      return false;
    }
    if (nadir_known_) {
      hv_.update(report_.archive);
    }
    RunEvent event;
    event.elapsed = answered_at_;
    if (!report_.events.empty()) {
      event.elapsed = std::max(event.elapsed, report_.events.back().elapsed);
    }
    event.point = p;
    event.solution = problem_.split(x);
    event.oracle_calls = report_.stats.oracle_calls;
    event.hypervolume = hv_.current;
    event.open_boxes = open_boxes_;
    report_.events.push_back(event);
    if (sink_) {
      sink_(report_.events.back());
    }
    return true;
  }

  // Lexicographic optimum for `obj`, two oracle calls.
  auto lexicographic(Obj obj) -> std::optional<std::pair<Point, Bits>> {
    auto first = call(single_objective_sub(problem_, obj), false);
    if (!first || !first->optimal()) {
      return std::nullopt;
    }
    auto second = call(second_stage_sub(problem_, obj, first->value), false);
    if (!second || !second->optimal()) {
      return std::nullopt;
    }
    return std::pair{problem_.point_of(second->assignment), second->assignment};
  }

  auto seed() -> bool {
    auto a = lexicographic(Obj::first);
    if (!a) {
      return false;
    }
    z1_ = a->first;
    emit(a->first, a->second);
    auto b = lexicographic(Obj::second);
    if (!b) {
      return false;
    }
    z2_ = b->first;
    nadir_known_ = true;
    hv_.nadir = nadir_of(z1_, z2_);
    report_.nadir = hv_.nadir;
    emit(b->first, b->second);
    return z1_ != z2_;
  }

  void dispatch() {
    const auto obj = objective_index(config_.objective);
    switch (config_.algorithm) {
      case Algorithm::spf: run_weighted_boxes(BoxOrder::largest_area, true); break;
      case Algorithm::any_hybrid: run_weighted_boxes(BoxOrder::largest_area, false); break;
      case Algorithm::ehybrid_classic: run_weighted_boxes(BoxOrder::depth_first, false); break;
      case Algorithm::any_tchebycheff: run_tchebycheff(BoxOrder::largest_area); break;
      case Algorithm::tchebycheff_classic: run_tchebycheff(BoxOrder::depth_first); break;
      case Algorithm::any_augmecon: run_any_augmecon(obj); break;
      case Algorithm::mix_ht: run_mix(false); break;
      case Algorithm::mix_sht: run_mix(true); break;
      case Algorithm::ads: run_ads(); break;
      case Algorithm::econst1: run_sweep(obj, SweepKind::plain); break;
      case Algorithm::econst2: run_sweep(obj, SweepKind::two_stage); break;
      case Algorithm::augmecon: run_sweep(obj, SweepKind::augmented); break;
    }
    if (!stopped_) {
      report_.termination = Termination::exhausted;
    }
  }

  [[nodiscard]] auto root() const -> BoxCorners { return {z1_, z2_}; }

  auto extract(BoxQueue& queue) -> Box {
    auto box = queue.pop();
    open_boxes_ = queue.size();
    if (config_.record_boxes) {
      report_.boxes.push_back({box.corners, box.tag, queue.key(box), queue.top_key(), {}});
    }
    return box;
  }

  void push(BoxQueue& queue, const BoxCorners& corners, MethodTag tag = MethodTag::hybrid) {
    if (config_.record_boxes && !report_.boxes.empty()) {
      report_.boxes.back().children.push_back(corners);
    }
    queue.push(corners, tag);
    open_boxes_ = queue.size();
  }

  void split(BoxQueue& queue, const BoxCorners& box, const Point& z, MethodTag left = MethodTag::hybrid,
             MethodTag right = MethodTag::hybrid) {
    push(queue, {box.z1, z}, left);
    push(queue, {z, box.z2}, right);
  }

  // Weighted sum restricted to the box interior. `supported_only` keeps only convex-part points.
  void run_weighted_boxes(BoxOrder order, bool supported_only) {
    BoxQueue queue(order);
    push(queue, root());
    while (!queue.empty() && !stopped_) {
      auto box = extract(queue);
      auto out = call(weighted_sum_in_box(problem_, box.corners));
      if (!out || !out->optimal()) {
        continue;
      }
      auto z = problem_.point_of(out->assignment);
      if (supported_only && !in_convex_part(box.corners, z)) {
        continue;
      }
      if (emit(z, out->assignment)) {
        split(queue, box.corners, z);
      }
    }
  }

  void run_tchebycheff(BoxOrder order) {
    BoxQueue queue(order);
    push(queue, root());
    while (!queue.empty() && !stopped_) {
      auto box = extract(queue);
      auto out = call(tchebycheff_sub(problem_, box.corners));
      if (!out || !out->optimal()) {
        continue;
      }
      auto z = problem_.point_of(out->assignment);
      if (!box.corners.strictly_inside(z)) {
        continue;
      }
      if (emit(z, out->assignment)) {
        split(queue, box.corners, z);
      }
    }
  }

  [[nodiscard]] auto augmecon_lambda(Obj obj) const -> Rational {
    return config_.lambda ? *config_.lambda : default_augmecon_lambda(root(), obj);
  }

  void run_any_augmecon(Obj obj) {
    const auto lambda = augmecon_lambda(obj);
    BoxQueue queue(BoxOrder::largest_area);
    push(queue, root());
    while (!queue.empty() && !stopped_) {
      auto box = extract(queue);
      const auto& c = box.corners;
      auto out = call(augmecon_sub(problem_, c, obj, lambda));
      if (!out || !out->optimal()) {
        continue;
      }
      auto z = problem_.point_of(out->assignment);
      if (c.strictly_inside(z)) {
        if (emit(z, out->assignment)) {
          split(queue, c, z);
        }
        continue;
      }
      // Nothing on the constrained side of epsilon: keep the other half.
      const auto eps = augmecon_epsilon(c, obj);
      if (obj == Obj::first) {
        push(queue, {c.z1, {c.z2.f1, eps}});
      } else {
        push(queue, {{eps, c.z1.f2}, c.z2});
      }
    }
  }

  // Explores a box with the method of its tag; returns the discovered interior point.
  auto explore_tagged(const Box& box) -> std::optional<std::pair<Point, Bits>> {
    auto sub = box.tag == MethodTag::hybrid ? weighted_sum_in_box(problem_, box.corners)
                                            : tchebycheff_sub(problem_, box.corners);
    auto out = call(sub);
    if (!out || !out->optimal()) {
      return std::nullopt;
    }
    auto z = problem_.point_of(out->assignment);
    if (!box.corners.strictly_inside(z)) {
      return std::nullopt;
    }
    return std::pair{z, std::move(out->assignment)};
  }

  void run_mix_queue(BoxQueue& queue) {
    while (!queue.empty() && !stopped_) {
      auto box = extract(queue);
      auto found = explore_tagged(box);
      if (!found) {
        continue;
      }
      if (emit(found->first, found->second)) {
        auto [left, right] = choose_method(box.corners, found->first);
        split(queue, box.corners, found->first, left, right);
      }
    }
  }

  void run_mix(bool supported_first) {
    BoxQueue boxes1(BoxOrder::largest_area);
    push(boxes1, root());
    if (!supported_first) {
      run_mix_queue(boxes1);
      return;
    }
    // Phase 1: hybrid exploration of the convex parts. Concave-part discoveries are
    // held back and their boxes deferred to phase 2.
    BoxQueue boxes2(BoxOrder::largest_area);
    std::vector<std::pair<Point, Bits>> deferred;
    while (!boxes1.empty() && !stopped_) {
      auto box = extract(boxes1);
      auto found = explore_tagged(box);
      if (!found) {
        continue;
      }
      if (in_convex_part(box.corners, found->first)) {
        if (emit(found->first, found->second)) {
          split(boxes1, box.corners, found->first);
        }
      } else {
        split(boxes2, box.corners, found->first);
        deferred.push_back(std::move(*found));
      }
    }
    if (stopped_) {
      return;
    }
    // Held-back points are released when phase 1 ends, which must be within the deadline.
    const auto now = elapsed();
    if (config_.deadline && now > *config_.deadline) {
      terminate(Termination::deadline);
      return;
    }
    answered_at_ = now;
    open_boxes_ = boxes2.size();
    for (const auto& [z, x] : deferred) {
      emit(z, x);
    }
    run_mix_queue(boxes2);
  }

  void run_ads() {
    BoxQueue queue(BoxOrder::largest_diagonal);
    push(queue, root());
    while (!queue.empty() && !stopped_) {
      auto box = extract(queue);
      auto out = call(weighted_sum_sub(problem_, dichotomic_weights(box.corners)));
      if (!out || !out->optimal()) {
        continue;
      }
      auto z = problem_.point_of(out->assignment);
      if (!box.corners.strictly_inside(z)) {
        continue;
      }
      if (emit(z, out->assignment)) {
        split(queue, box.corners, z);
      }
    }
  }

  enum class SweepKind { plain, two_stage, augmented };

  // epsilon-constraint sweep from the obj-extreme towards the other extreme.
  void run_sweep(Obj obj, SweepKind kind) {
    const auto rest = other(obj);
    const auto& start = obj == Obj::first ? z1_ : z2_;
    const auto& finish = obj == Obj::first ? z2_ : z1_;
    const auto lambda = augmecon_lambda(obj);
    auto epsilon = coordinate(start, rest) - 1;
    while (epsilon >= coordinate(finish, rest) && !stopped_) {
      std::optional<OracleOutcome> out;
      switch (kind) {
        case SweepKind::plain:
          out = call(epsilon_sub(problem_, obj, epsilon));
          break;
        case SweepKind::augmented:
          out = call(augmecon_sweep_sub(problem_, obj, epsilon, lambda));
          break;
        case SweepKind::two_stage: {
          auto first = call(epsilon_sub(problem_, obj, epsilon));
          if (!first || !first->optimal()) {
            return;
          }
          out = call(second_stage_sub(problem_, obj, first->value, epsilon));
          break;
        }
      }
      if (!out || !out->optimal()) {
        return;
      }
      auto z = problem_.point_of(out->assignment);
      emit(z, out->assignment);
      epsilon = coordinate(z, rest) - 1;
    }
  }
};

/// Runs the configured algorithm to exhaustion, deadline, budget or stop.
inline auto run(const BiObjectiveProblem& problem, const RunConfig& config, const EventSink& sink,
                RunControl& control, const OracleFn& oracle = builtin_oracle()) -> RunReport {
  Engine engine(problem, config, sink, control, oracle);
  return engine.run();
}

inline auto run(const BiObjectiveProblem& problem, const RunConfig& config, const EventSink& sink = {})
    -> RunReport {
  RunControl control;
  return run(problem, config, sink, control);
}

/// Entry point for the classic baselines; rejects anytime algorithm ids.
inline auto run_classic(const BiObjectiveProblem& problem, Algorithm variant, RunConfig config,
                        const EventSink& sink, RunControl& control, const OracleFn& oracle = builtin_oracle())
    -> RunReport {
  if (!is_classic(variant)) {
    throw Error(ErrorKind::invalid_config, to_string(variant) + " is not a classic algorithm");
  }
  config.algorithm = variant;
  return run(problem, config, sink, control, oracle);
}

}  // namespace nrp

#endif  // NRP_ANYTIME_HPP
