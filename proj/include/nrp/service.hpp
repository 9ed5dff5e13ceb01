#ifndef NRP_SERVICE_HPP
#define NRP_SERVICE_HPP

// In-memory registry of instances and steerable anytime runs.
//
// Each run owns a worker thread. Events are appended under the run's mutex and
// subscribers replay from any index, so a late subscriber sees the same ordered
// list as the final report.

#include "anytime.hpp"
#include "core.hpp"
#include "instance_json.hpp"
#include "metrics.hpp"
#include "model.hpp"

#include <nlohmann/json.hpp>

#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace nrp {

enum class RunStatus { queued, running, paused, done, cancelled };

inline auto to_string(RunStatus s) -> std::string_view {
  switch (s) {
    case RunStatus::queued: return "queued";
    case RunStatus::running: return "running";
    case RunStatus::paused: return "paused";
    case RunStatus::done: return "done";
    case RunStatus::cancelled: return "cancelled";
  }
  return "unknown";
}

inline auto is_terminal(RunStatus s) -> bool { return s == RunStatus::done || s == RunStatus::cancelled; }

enum class ControlAction { pause, resume, stop };

inline auto parse_control_action(std::string_view s) -> ControlAction {
  if (s == "pause") return ControlAction::pause;
  if (s == "resume") return ControlAction::resume;
  if (s == "stop") return ControlAction::stop;
  throw Error(ErrorKind::invalid_config, "unknown control action '" + std::string(s) + "'");
}

/// Cost and weight overrides keyed by 1-based requirement / stakeholder id.
struct WhatIfEdit {
  std::map<int, std::int64_t> costs;
  std::map<int, std::int64_t> weights;
};

inline auto apply_edit(Instance inst, const WhatIfEdit& edit) -> Instance {
  for (const auto& [id, cost] : edit.costs) {
    if (id < 1 || static_cast<std::size_t>(id) > inst.num_requirements()) {
      throw Error(ErrorKind::invalid_edit, "no requirement " + std::to_string(id));
    }
    if (cost < 0) {
      throw Error(ErrorKind::invalid_edit, "cost of requirement " + std::to_string(id) + " must be >= 0");
    }
    inst.costs[static_cast<std::size_t>(id - 1)] = cost;
  }
  for (const auto& [id, weight] : edit.weights) {
    if (id < 1 || static_cast<std::size_t>(id) > inst.num_stakeholders()) {
      throw Error(ErrorKind::invalid_edit, "no stakeholder " + std::to_string(id));
    }
    if (weight < 1) {
      throw Error(ErrorKind::invalid_edit, "weight of stakeholder " + std::to_string(id) + " must be >= 1");
    }
    inst.stakeholders[static_cast<std::size_t>(id - 1)].weight = weight;
  }
  try {
    build_bi_objective(inst);
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_edit, e.what());
  }
  return inst;
}

struct RunInfo {
  std::string id;
  std::string instance_id;
  RunStatus status = RunStatus::queued;
  RunConfig config;
  std::optional<std::string> parent;
  std::vector<std::string> children;
  std::size_t events = 0;
  std::optional<Termination> termination;
  std::optional<std::int64_t> total_hypervolume;
  std::optional<RunStats> stats;
  std::string error;
};

struct ServiceOptions {
  std::size_t max_concurrent_runs = 4;
  std::optional<std::filesystem::path> persist_dir;  // JSON-lines event log per run
  std::size_t total_hv_limit = 20;                   // brute-force totals up to n + m vars
};

inline auto event_to_json(const RunEvent& e, std::size_t index, std::optional<std::int64_t> total) -> nlohmann::json {
  nlohmann::json j;
  j["index"] = index;
  j["elapsed_ms"] = std::chrono::duration<double, std::milli>(e.elapsed).count();
  j["f1"] = e.point.f1;
  j["f2"] = e.point.f2;
  j["hv"] = e.hypervolume;
  if (total) {
    j["hv_fraction"] = *total == 0 ? 1.0 : static_cast<double>(e.hypervolume) / static_cast<double>(*total);
  }
  j["oracle_calls"] = e.oracle_calls;
  j["open_boxes"] = e.open_boxes;
  auto ids = [](const Bits& bits) {
    std::vector<int> out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != 0) out.push_back(static_cast<int>(i + 1));
    }
    return out;
  };
  j["requirements"] = ids(e.solution.r);
  j["stakeholders"] = ids(e.solution.s);
  return j;
}

class RunService {
 public:
  explicit RunService(ServiceOptions options = {}) : options_(std::move(options)) {
    if (options_.max_concurrent_runs == 0) {
      options_.max_concurrent_runs = 1;
    }
    if (options_.persist_dir) {
      std::filesystem::create_directories(*options_.persist_dir);
    }
  }

  RunService(const RunService&) = delete;
  auto operator=(const RunService&) -> RunService& = delete;

  ~RunService() {
    std::vector<std::shared_ptr<Run>> runs;
    {
      std::lock_guard lock(registry_);
      for (auto& [id, run] : runs_) runs.push_back(run);
    }
    for (auto& run : runs) {
      run->control.stop();
    }
    {
      std::lock_guard lock(slots_mutex_);
      shutting_down_ = true;
    }
    slots_cv_.notify_all();
    for (auto& run : runs) {
      if (run->worker.joinable()) run->worker.join();
    }
  }

  auto add_instance(Instance inst) -> std::string {
    build_bi_objective(inst);
    std::lock_guard lock(registry_);
    auto id = "i" + std::to_string(++instance_seq_);
    instances_.emplace(id, std::make_shared<const Instance>(std::move(inst)));
    instance_order_.push_back(id);
    return id;
  }

  [[nodiscard]] auto instances() const -> std::vector<std::pair<std::string, Instance>> {
    std::lock_guard lock(registry_);
    std::vector<std::pair<std::string, Instance>> out;
    for (const auto& id : instance_order_) out.emplace_back(id, *instances_.at(id));
    return out;
  }

  [[nodiscard]] auto instance(const std::string& id) const -> Instance {
    std::lock_guard lock(registry_);
    return *find_instance(id);
  }

  auto create_run(const std::string& instance_id, const RunConfig& config) -> std::string {
    return launch(instance_id, config, std::nullopt);
  }

  [[nodiscard]] auto info(const std::string& id) const -> RunInfo {
    auto run = find_run(id);
    std::lock_guard lock(run->mutex);
    return run->info;
  }

  [[nodiscard]] auto status(const std::string& id) const -> RunStatus { return info(id).status; }

  [[nodiscard]] auto run_ids() const -> std::vector<std::string> {
    std::lock_guard lock(registry_);
    return run_order_;
  }

  /// Replays events from `from`, then follows live events until the run is terminal
  /// or `on_event` returns false.
  void stream_events(const std::string& id, const std::function<bool(const RunEvent&, std::size_t)>& on_event,
                     std::size_t from = 0) const {
    auto run = find_run(id);
    std::unique_lock lock(run->mutex);
    auto index = from;
    for (;;) {
      while (index < run->events.size()) {
        auto event = run->events[index];
        lock.unlock();
        if (!on_event(event, index)) {
          return;
        }
        lock.lock();
        ++index;
      }
      if (is_terminal(run->info.status)) {
        return;
      }
      run->cv.wait(lock, [&] { return index < run->events.size() || is_terminal(run->info.status); });
    }
  }

  [[nodiscard]] auto events(const std::string& id) const -> std::vector<RunEvent> {
    auto run = find_run(id);
    std::lock_guard lock(run->mutex);
    return run->events;
  }

  auto control(const std::string& id, ControlAction action) -> RunStatus {
    auto run = find_run(id);
    std::lock_guard lock(run->mutex);
    auto& status = run->info.status;
    if (is_terminal(status)) {
      return status;
    }
    switch (action) {
      case ControlAction::pause:
        run->control.pause();
        if (status == RunStatus::running) status = RunStatus::paused;
        run->pause_requested = true;
        break;
      case ControlAction::resume:
        run->control.resume();
        if (status == RunStatus::paused) status = RunStatus::running;
        run->pause_requested = false;
        break;
      case ControlAction::stop:
        run->control.stop();
        slots_cv_.notify_all();
        break;
    }
    run->cv.notify_all();
    return status;
  }

  auto whatif_fork(const std::string& run_id, const WhatIfEdit& edit, std::optional<RunConfig> config = {})
      -> std::string {
    auto parent = find_run(run_id);
    RunConfig base;
    std::string base_instance;
    {
      std::lock_guard lock(parent->mutex);
      base = parent->info.config;
      base_instance = parent->info.instance_id;
    }
    auto inst = instance(base_instance);
    auto edited = apply_edit(inst, edit);
    edited.name = inst.name + "-whatif";
    auto child_instance = add_instance(std::move(edited));
    auto child = launch(child_instance, config.value_or(base), run_id);
    std::lock_guard lock(parent->mutex);
    parent->info.children.push_back(child);
    return child;
  }

  /// Current archive snapshot (final once the run is terminal).
  [[nodiscard]] auto archive(const std::string& id) const -> ParetoArchive {
    auto run = find_run(id);
    std::lock_guard lock(run->mutex);
    ParetoArchive out;
    for (const auto& e : run->events) out.insert(e.point, e.solution);
    return out;
  }

  /// Blocks until the run is terminal.
  auto wait(const std::string& id) const -> RunInfo {
    auto run = find_run(id);
    std::unique_lock lock(run->mutex);
    run->cv.wait(lock, [&] { return is_terminal(run->info.status); });
    return run->info;
  }

  /// Waits until the run has at least `count` events or is terminal.
  auto wait_for_events(const std::string& id, std::size_t count) const -> std::size_t {
    auto run = find_run(id);
    std::unique_lock lock(run->mutex);
    run->cv.wait(lock, [&] { return run->events.size() >= count || is_terminal(run->info.status); });
    return run->events.size();
  }

 private:
  struct Run {
    std::mutex mutex;
    std::condition_variable cv;
    RunInfo info;
    std::vector<RunEvent> events;
    RunControl control;
    bool pause_requested = false;
    std::thread worker;
  };

  ServiceOptions options_;
  mutable std::mutex registry_;
  std::map<std::string, std::shared_ptr<const Instance>> instances_;
  std::vector<std::string> instance_order_;
  std::map<std::string, std::shared_ptr<Run>> runs_;
  std::vector<std::string> run_order_;
  std::size_t instance_seq_ = 0;
  std::size_t run_seq_ = 0;

  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  std::size_t active_ = 0;
  bool shutting_down_ = false;

  [[nodiscard]] auto find_instance(const std::string& id) const -> std::shared_ptr<const Instance> {
    auto it = instances_.find(id);
    if (it == instances_.end()) {
      throw Error(ErrorKind::unknown_instance, "unknown instance '" + id + "'");
    }
    return it->second;
  }

  [[nodiscard]] auto find_run(const std::string& id) const -> std::shared_ptr<Run> {
    std::lock_guard lock(registry_);
    auto it = runs_.find(id);
    if (it == runs_.end()) {
      throw Error(ErrorKind::unknown_run, "unknown run '" + id + "'");
    }
    return it->second;
  }

  auto launch(const std::string& instance_id, const RunConfig& config, std::optional<std::string> parent)
      -> std::string {
    validate(config);
    std::shared_ptr<const Instance> inst;
    auto run = std::make_shared<Run>();
    std::string id;
    {
      std::lock_guard lock(registry_);
      inst = find_instance(instance_id);
      id = "r" + std::to_string(++run_seq_);
      run->info.id = id;
      run->info.instance_id = instance_id;
      run->info.config = config;
      run->info.parent = std::move(parent);
      runs_.emplace(id, run);
      run_order_.push_back(id);
    }
    run->worker = std::thread([this, run, inst] { work(*run, *inst); });
    return id;
  }

  void work(Run& run, const Instance& inst) {
    {
      std::unique_lock lock(slots_mutex_);
      slots_cv_.wait(lock, [&] {
        return active_ < options_.max_concurrent_runs || shutting_down_ || run.control.stopped();
      });
      ++active_;
    }
    std::optional<std::ofstream> log;
    if (options_.persist_dir) {
      log.emplace(*options_.persist_dir / (run.info.id + ".jsonl"), std::ios::app);
    }
    RunConfig config;
    {
      std::lock_guard lock(run.mutex);
      if (run.info.status == RunStatus::queued) {
        run.info.status = run.pause_requested ? RunStatus::paused : RunStatus::running;
      }
      config = run.info.config;
    }
    run.cv.notify_all();
    RunReport report;
    std::string error;
    try {
      auto problem = build_bi_objective(inst);
      if (!config.total_hypervolume && inst.num_requirements() + inst.num_stakeholders() <= options_.total_hv_limit) {
        auto front = brute_force_front(inst).points();
        config.total_hypervolume = front.empty() ? 0 : hypervolume(front, {front.back().f1, front.front().f2});
      }
      {
        std::lock_guard lock(run.mutex);
        run.info.total_hypervolume = config.total_hypervolume;
      }
      auto sink = [&](const RunEvent& e) {
        std::size_t index = 0;
        {
          std::lock_guard lock(run.mutex);
          index = run.events.size();
          run.events.push_back(e);
          run.info.events = run.events.size();
        }
        run.cv.notify_all();
        if (log) {
          *log << event_to_json(e, index, config.total_hypervolume).dump() << '\n' << std::flush;
        }
      };
      report = nrp::run(problem, config, sink, run.control);
    } catch (const std::exception& e) {
      error = e.what();
    }
    {
      std::lock_guard lock(run.mutex);
      run.info.termination = error.empty() ? std::optional(report.termination) : std::nullopt;
      run.info.stats = report.stats;
      run.info.error = error;
      run.info.status = error.empty() && report.termination == Termination::cancelled ? RunStatus::cancelled
                                                                                       : RunStatus::done;
    }
    run.cv.notify_all();
    {
      std::lock_guard lock(slots_mutex_);
      --active_;
    }
    slots_cv_.notify_all();
  }

};

}  // namespace nrp

#endif  // NRP_SERVICE_HPP
