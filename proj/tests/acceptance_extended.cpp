// Full-size nrp1 check. Needs NRP_DATA_DIR pointing at the classic benchmark files;
// BIOBJ_ORACLE_CMD selects an external MILP solver (the built-in oracle may take hours).
// Exit code 77 means skipped.

#include "nrp/anytime.hpp"
#include "nrp/bench.hpp"
#include "nrp/formats.hpp"
#include "nrp/lp_format.hpp"
#include "nrp/metrics.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

using namespace nrp;

namespace {

constexpr std::size_t kFrontSize = 465;
constexpr std::size_t kSupportedSize = 28;
constexpr auto kDeadline = std::chrono::seconds(60);

auto configured_oracle() -> OracleFn {
  const char* cmd = std::getenv("BIOBJ_ORACLE_CMD");
  if (cmd == nullptr || *cmd == '\0') {
    return builtin_oracle();
  }
  std::string command(cmd);
  return [command](const Subproblem& sub, std::stop_token, SolveOptions) { return solve_external(sub, command); };
}

auto run_with(const BiObjectiveProblem& prob, const AlgorithmChoice& c, const OracleFn& oracle,
              std::optional<std::chrono::nanoseconds> deadline = {}) -> RunReport {
  RunConfig config;
  config.algorithm = c.algorithm;
  config.objective = c.objective;
  config.deadline = deadline;
  RunControl control;
  return run(prob, config, {}, control, oracle);
}

}  // namespace

int main() {
  const char* dir = std::getenv("NRP_DATA_DIR");
  if (dir == nullptr || *dir == '\0') {
    std::cout << "SKIP  NRP_DATA_DIR is not set" << std::endl;
    return 77;
  }
  std::filesystem::path path;
  for (const char* name : {"nrp1.txt", "nrp1", "nrp1.dat"}) {
    if (std::filesystem::exists(std::filesystem::path(dir) / name)) {
      path = std::filesystem::path(dir) / name;
      break;
    }
  }
  if (path.empty()) {
    std::cout << "SKIP  no nrp1 file in " << dir << std::endl;
    return 77;
  }

  auto inst = read_instance_file(path, InstanceFormat::classic);
  auto prob = build_bi_objective(inst);
  auto oracle = configured_oracle();
  bool all_pass = true;
  auto line = [&](bool pass, const std::string& id, const std::string& detail) {
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ": " << detail << std::endl;
  };

  auto full = run_with(prob, {Algorithm::any_hybrid, 1}, oracle);
  auto front = full.archive.points();
  line(full.termination == Termination::exhausted && front.size() == kFrontSize, "nrp1_front_size",
       "|PF| = " + std::to_string(front.size()) + " (expected " + std::to_string(kFrontSize) + ")");

  auto spf = run_with(prob, {Algorithm::spf, 1}, oracle);
  auto supported = supported_subset(front);
  line(spf.archive.size() == kSupportedSize && spf.archive.points() == supported, "nrp1_supported",
       "|SPF| = " + std::to_string(spf.archive.size()) + ", hull classification " +
           std::to_string(supported.size()) + " (expected " + std::to_string(kSupportedSize) + ")");

  const auto nadir = nadir_of(front.front(), front.back());
  const auto total = hypervolume(front, nadir);
  for (auto c : {AlgorithmChoice{Algorithm::any_augmecon, 1}, AlgorithmChoice{Algorithm::any_augmecon, 2},
                 AlgorithmChoice{Algorithm::any_tchebycheff, 1}, AlgorithmChoice{Algorithm::any_hybrid, 1},
                 AlgorithmChoice{Algorithm::mix_ht, 1}, AlgorithmChoice{Algorithm::mix_sht, 1}}) {
    auto r = run_with(prob, c, oracle, kDeadline);
    auto hyper = format_percent(Rational(hypervolume(r.archive, nadir), total));
    auto pf = format_percent(
        Rational(static_cast<std::int64_t>(r.archive.size()), static_cast<std::int64_t>(front.size())), 1);
    line(hyper == "100.000" && pf == "100.0", "nrp1_60s_" + to_string(c), "%Hyper " + hyper + ", %PF " + pf);
  }
  return all_pass ? 0 : 1;
}
