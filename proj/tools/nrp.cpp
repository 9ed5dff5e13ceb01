#include "nrp/anytime.hpp"
#include "nrp/bench.hpp"
#include "nrp/formats.hpp"
#include "nrp/http_service.hpp"
#include "nrp/instance_json.hpp"
#include "nrp/lp_format.hpp"
#include "nrp/metrics.hpp"
#include "nrp/service.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace nrp;

namespace {

auto seconds(double secs) -> std::chrono::nanoseconds {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(secs));
}

auto load(const std::string& path, const std::string& format) -> Instance {
  std::optional<InstanceFormat> fmt;
  if (!format.empty()) fmt = parse_instance_format(format);
  return read_instance_file(path, fmt);
}

auto configured_oracle() -> OracleFn {
  const char* cmd = std::getenv("BIOBJ_ORACLE_CMD");
  if (cmd == nullptr || *cmd == '\0') {
    return builtin_oracle();
  }
  std::string command(cmd);
  return [command](const Subproblem& sub, std::stop_token, SolveOptions) { return solve_external(sub, command); };
}

auto id_list(const Bits& bits) -> std::vector<int> {
  std::vector<int> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0) out.push_back(static_cast<int>(i + 1));
  }
  return out;
}

int cmd_solve(const std::string& path, const std::string& format, const std::string& algorithm,
              std::optional<double> deadline, const std::string& lambda, const std::string& out) {
  auto inst = load(path, format);
  auto choice = parse_algorithm(algorithm);
  RunConfig config;
  config.algorithm = choice.algorithm;
  config.objective = choice.objective;
  if (deadline) config.deadline = seconds(*deadline);
  if (!lambda.empty()) config.lambda = parse_rational(lambda);
  if (inst.num_requirements() + inst.num_stakeholders() <= 20) {
    auto front = brute_force_front(inst).points();
    config.total_hypervolume = front.empty() ? 0 : hypervolume(front, {front.back().f1, front.front().f2});
  }
  RunControl control;
  auto report = run(build_bi_objective(inst), config, {}, control, configured_oracle());

  if (out == "json") {
    nlohmann::json doc;
    doc["instance"] = inst.name;
    doc["algorithm"] = to_string(choice);
    doc["termination"] = std::string(to_string(report.termination));
    doc["oracle_calls"] = report.stats.oracle_calls;
    doc["points"] = nlohmann::json::array();
    for (const auto& e : report.archive.entries()) {
      doc["points"].push_back({{"f1", e.point.f1},
                               {"f2", e.point.f2},
                               {"requirements", id_list(e.solution.r)},
                               {"stakeholders", id_list(e.solution.s)}});
    }
    doc["events"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.events.size(); ++i) {
      doc["events"].push_back(event_to_json(report.events[i], i, config.total_hypervolume));
    }
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "event,elapsed_ms,f1,f2,hv,oracle_calls\n";
    for (std::size_t i = 0; i < report.events.size(); ++i) {
      const auto& e = report.events[i];
      std::cout << i << ',' << std::chrono::duration<double, std::milli>(e.elapsed).count() << ',' << e.point.f1
                << ',' << e.point.f2 << ',' << e.hypervolume << ',' << e.oracle_calls << '\n';
    }
    std::cerr << to_string(choice) << ": " << report.archive.size() << " points, " << report.stats.oracle_calls
              << " oracle calls, " << to_string(report.termination) << '\n';
  }
  return 0;
}

int cmd_bench(const std::string& dir, const std::string& format, const std::string& algorithms, std::size_t reps,
              std::optional<double> deadline, const std::string& out, std::size_t threads) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Instance> instances;
  for (const auto& f : files) {
    instances.push_back(load(f.string(), format));
  }
  std::vector<AlgorithmChoice> algos;
  std::stringstream list(algorithms);
  for (std::string item; std::getline(list, item, ',');) {
    if (!item.empty()) algos.push_back(parse_algorithm(item));
  }
  BenchOptions options;
  options.repetitions = reps;
  options.threads = threads;
  if (deadline) options.deadline = seconds(*deadline);

  fs::create_directories(out);
  std::ofstream rows_file(fs::path(out) / "rows.csv");
  rows_file << kRowsHeader << '\n';
  auto result = bench(instances, algos, options, [&](const BenchRow& row) { write_row_csv(rows_file, row); });
  std::ofstream summary_file(fs::path(out) / "summary.csv");
  write_summary_csv(summary_file, result.summaries);
  std::ofstream plot_file(fs::path(out) / "progress.dat");
  write_gnuplot(plot_file, result.rows);
  write_summary_csv(std::cout, result.summaries);
  return 0;
}

int cmd_gen(const GeneratorParams& params, const std::string& out) {
  auto inst = generate_instance(params);
  std::ofstream file(out);
  if (!file) {
    throw Error(ErrorKind::malformed_format, "cannot write " + out);
  }
  if (fs::path(out).extension() == ".json") {
    file << to_json(inst).dump(2) << '\n';
  } else {
    file << to_classic_text(inst);
  }
  return 0;
}

int cmd_front(const std::string& path, const std::string& format) {
  auto inst = load(path, format);
  auto front = brute_force_front(inst).points();
  auto supported = classify_supported(front);
  std::cout << "f1,f2,supported\n";
  for (std::size_t i = 0; i < front.size(); ++i) {
    std::cout << front[i].f1 << ',' << front[i].f2 << ',' << (supported[i] ? 1 : 0) << '\n';
  }
  if (!front.empty()) {
    Point nadir{front.back().f1, front.front().f2};
    std::cerr << front.size() << " points, " << std::count(supported.begin(), supported.end(), true)
              << " supported, nadir " << nadir << ", hypervolume " << hypervolume(front, nadir) << '\n';
  }
  return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& persist) {
  ServiceOptions options;
  if (!persist.empty()) options.persist_dir = persist;
  RunService service(options);
  httplib::Server server;
  mount_service(server, service);
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime exact solvers for the bi-objective next release problem"};
  app.require_subcommand(1);

  std::string instance;
  std::string format;
  std::string algorithm = "AnyHybrid";
  std::optional<double> deadline;
  std::string lambda;
  std::string out_kind = "csv";
  auto* solve = app.add_subcommand("solve", "Run one algorithm on one instance");
  solve->add_option("--instance", instance, "Instance file")->required();
  solve->add_option("--format", format, "json, classic or realistic (default: by extension)");
  solve->add_option("--algorithm", algorithm, "Algorithm, e.g. AnyHybrid or Econst1(2)");
  solve->add_option("--deadline", deadline, "Time limit in seconds");
  solve->add_option("--lambda", lambda, "Augmecon weight as P/Q");
  solve->add_option("--out", out_kind, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string instances_dir;
  std::string algorithms = "AnyHybrid,AnyAugmecon(1),AnyTchebycheff,MixHT,MixSHT,SPF";
  std::size_t reps = 1;
  std::size_t threads = 1;
  std::string out_dir = "bench-out";
  auto* bench_cmd = app.add_subcommand("bench", "Run an instance x algorithm matrix");
  bench_cmd->add_option("--instances", instances_dir, "Directory of instance files")->required();
  bench_cmd->add_option("--format", format, "json, classic or realistic (default: by extension)");
  bench_cmd->add_option("--algorithms", algorithms, "Comma-separated algorithm list");
  bench_cmd->add_option("--reps", reps, "Repetitions per cell");
  bench_cmd->add_option("--deadline", deadline, "Time limit per run in seconds");
  bench_cmd->add_option("--threads", threads, "Concurrent cells");
  bench_cmd->add_option("--out", out_dir, "Output directory");

  GeneratorParams params;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", params.n, "Requirements");
  gen->add_option("--m", params.m, "Stakeholders");
  gen->add_option("--seed", params.seed, "Seed");
  gen->add_option("--pdens", params.precedence_density, "Precedence density");
  gen->add_option("--qdens", params.request_density, "Request density");
  gen->add_option("--max-cost", params.max_cost, "Largest cost");
  gen->add_option("--max-weight", params.max_weight, "Largest weight");
  gen->add_option("--out", gen_out, "Output file (.json for JSON, else classic text)")->required();

  auto* front = app.add_subcommand("front", "Exact front by brute force (small instances)");
  front->add_option("--instance", instance, "Instance file")->required();
  front->add_option("--format", format, "json, classic or realistic (default: by extension)");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string persist;
  auto* serve = app.add_subcommand("serve", "Start the HTTP run service");
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--persist", persist, "Directory for JSON-lines event logs");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(instance, format, algorithm, deadline, lambda, out_kind);
    if (*bench_cmd) return cmd_bench(instances_dir, format, algorithms, reps, deadline, out_dir, threads);
    if (*gen) return cmd_gen(params, gen_out);
    if (*front) return cmd_front(instance, format);
    if (*serve) return cmd_serve(host, port, persist);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
