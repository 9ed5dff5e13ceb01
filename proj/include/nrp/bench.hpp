#ifndef NRP_BENCH_HPP
#define NRP_BENCH_HPP

// Benchmark matrix: instances x algorithms x repetitions, one row per archive event,
// plus a per-cell summary (%Hyper, %PF and the sigma/mu dispersion of %Hyper).

#include "anytime.hpp"
#include "core.hpp"
#include "formats.hpp"
#include "instance_json.hpp"
#include "metrics.hpp"
#include "model.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace nrp {

enum class InstanceFormat { json, classic, realistic };

inline auto parse_instance_format(std::string_view name) -> InstanceFormat {
  if (name == "json") return InstanceFormat::json;
  if (name == "classic") return InstanceFormat::classic;
  if (name == "realistic") return InstanceFormat::realistic;
  throw Error(ErrorKind::invalid_config, "unknown instance format '" + std::string(name) + "'");
}

inline auto detect_instance_format(const std::filesystem::path& path) -> InstanceFormat {
  return path.extension() == ".json" ? InstanceFormat::json : InstanceFormat::classic;
}

inline auto read_instance_file(const std::filesystem::path& path, std::optional<InstanceFormat> format = {})
    -> Instance {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::malformed_format, "cannot read " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();
  const auto name = path.stem().string();
  switch (format.value_or(detect_instance_format(path))) {
    case InstanceFormat::json: {
      auto inst = instance_from_json_text(text);
      if (inst.name.empty()) {
        inst.name = name;
      }
      return inst;
    }
    case InstanceFormat::classic: return parse_classic(text, name);
    case InstanceFormat::realistic: return parse_realistic(text, name);
  }
  return {};
}

/// Total hypervolume and front size used as the 100% reference.
struct FrontReference {
  std::int64_t total_hypervolume = 0;
  std::size_t front_size = 0;
  Point nadir;
  bool brute_force = false;
};

/// Brute force when the instance is small enough, otherwise a run of AnyHybrid to exhaustion.
inline auto front_reference(const Instance& inst) -> FrontReference {
  FrontReference ref;
  std::vector<Point> points;
  if (inst.num_requirements() + inst.num_stakeholders() <= kBruteForceLimit) {
    points = brute_force_front(inst).points();
    ref.brute_force = true;
  } else {
    RunConfig config;
    config.algorithm = Algorithm::any_hybrid;
    points = run(build_bi_objective(inst), config).archive.points();
  }
  ref.front_size = points.size();
  if (!points.empty()) {
    ref.nadir = {points.back().f1, points.front().f2};
    ref.total_hypervolume = hypervolume(points, ref.nadir);
  }
  return ref;
}

struct BenchRow {
  std::string instance;
  std::string algorithm;
  std::size_t run = 0;
  double elapsed_ms = 0;
  std::size_t event = 0;
  std::int64_t f1 = 0;
  std::int64_t f2 = 0;
  std::int64_t hv = 0;
  double hv_fraction = 0;
  std::uint64_t oracle_calls = 0;
};

struct BenchSummary {
  std::string instance;
  std::string algorithm;
  std::size_t runs = 0;
  Rational hyper{0, 1};  // mean final hypervolume over the reference
  Rational pf{0, 1};     // mean archive size over the reference front size
  double dispersion = 0;  // sigma/mu of the per-run %Hyper
  std::string error;
};

struct BenchOptions {
  std::size_t repetitions = 1;
  std::optional<std::chrono::nanoseconds> deadline;
  std::size_t threads = 1;
  std::optional<Rational> lambda;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summaries;
};

using RowSink = std::function<void(const BenchRow&)>;

namespace bench_detail {

struct CellOutcome {
  std::vector<BenchRow> rows;
  std::int64_t final_hv = 0;
  std::size_t final_size = 0;
  std::string error;
};

inline auto run_cell(const Instance& inst, const BiObjectiveProblem& prob, const FrontReference& ref,
                     const AlgorithmChoice& algo, std::size_t rep, const BenchOptions& options) -> CellOutcome {
  CellOutcome out;
  RunConfig config;
  config.algorithm = algo.algorithm;
  config.objective = algo.objective;
  config.deadline = options.deadline;
  config.lambda = options.lambda;
  config.total_hypervolume = ref.total_hypervolume;
  const auto label = to_string(algo);
  auto report = run(prob, config);
  // Rows use the reference nadir so fractions compare across algorithms.
  ParetoArchive partial;
  for (std::size_t i = 0; i < report.events.size(); ++i) {
    const auto& e = report.events[i];
    partial.insert(e.point);
    BenchRow row;
    row.instance = inst.name;
    row.algorithm = label;
    row.run = rep;
    row.elapsed_ms = std::chrono::duration<double, std::milli>(e.elapsed).count();
    row.event = i;
    row.f1 = e.point.f1;
    row.f2 = e.point.f2;
    row.hv = hypervolume(partial, ref.nadir);
    row.hv_fraction = ref.total_hypervolume == 0
                          ? 1.0
                          : static_cast<double>(row.hv) / static_cast<double>(ref.total_hypervolume);
    row.oracle_calls = e.oracle_calls;
    out.rows.push_back(std::move(row));
  }
  out.final_hv = hypervolume(report.archive, ref.nadir);
  out.final_size = report.archive.size();
  return out;
}

}  // namespace bench_detail

/// Runs every (instance, algorithm, repetition) cell. Errors are recorded per cell.
inline auto bench(const std::vector<Instance>& instances, const std::vector<AlgorithmChoice>& algorithms,
                  const BenchOptions& options, const RowSink& sink = {}) -> BenchResult {
  struct Cell {
    std::size_t instance;
    std::size_t algorithm;
    std::size_t rep;
  };
  std::vector<BiObjectiveProblem> problems;
  std::vector<std::optional<FrontReference>> refs;
  std::vector<std::string> instance_errors;
  for (const auto& inst : instances) {
    try {
      problems.push_back(build_bi_objective(inst));
      refs.push_back(front_reference(inst));
      instance_errors.emplace_back();
    } catch (const Error& e) {
      problems.emplace_back();
      refs.emplace_back();
      instance_errors.emplace_back(e.what());
    }
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      for (std::size_t r = 0; r < options.repetitions; ++r) {
        cells.push_back({i, a, r});
      }
    }
  }
  std::vector<bench_detail::CellOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  auto worker = [&] {
    for (auto k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1)) {
      const auto& cell = cells[k];
      auto& outcome = outcomes[k];
      if (!refs[cell.instance]) {
        outcome.error = instance_errors[cell.instance];
        continue;
      }
      try {
        outcome = bench_detail::run_cell(instances[cell.instance], problems[cell.instance], *refs[cell.instance],
                                         algorithms[cell.algorithm], cell.rep, options);
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
      if (sink) {
        std::lock_guard lock(sink_mutex);
        for (const auto& row : outcome.rows) {
          sink(row);
        }
      }
    }
  };
  const auto threads = std::max<std::size_t>(1, std::min(options.threads, cells.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  BenchResult result;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      BenchSummary summary;
      summary.instance = instances[i].name;
      summary.algorithm = to_string(algorithms[a]);
      std::int64_t hv_sum = 0;
      std::int64_t size_sum = 0;
      std::vector<double> hypers;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k].instance != i || cells[k].algorithm != a) {
          continue;
        }
        auto& outcome = outcomes[k];
        if (!outcome.error.empty()) {
          summary.error = outcome.error;
          continue;
        }
        ++summary.runs;
        hv_sum = checked::add(hv_sum, outcome.final_hv);
        size_sum = checked::add(size_sum, static_cast<std::int64_t>(outcome.final_size));
        const auto total = refs[i]->total_hypervolume;
        hypers.push_back(total == 0 ? 100.0 : 100.0 * static_cast<double>(outcome.final_hv) / static_cast<double>(total));
        for (auto& row : outcome.rows) {
          result.rows.push_back(std::move(row));
        }
      }
      if (summary.runs > 0) {
        const auto runs = static_cast<std::int64_t>(summary.runs);
        const auto& ref = *refs[i];
        summary.hyper = ref.total_hypervolume == 0 ? Rational(1, 1)
                                                   : Rational(hv_sum, checked::mul(runs, ref.total_hypervolume));
        summary.pf = ref.front_size == 0 ? Rational(1, 1)
                                         : Rational(size_sum, checked::mul(runs, static_cast<std::int64_t>(ref.front_size)));
        double mean = 0;
        for (auto h : hypers) mean += h;
        mean /= static_cast<double>(hypers.size());
        double var = 0;
        for (auto h : hypers) var += (h - mean) * (h - mean);
        var /= static_cast<double>(hypers.size());
        summary.dispersion = mean == 0 ? 0 : std::sqrt(var) / mean;
      }
      result.summaries.push_back(std::move(summary));
    }
  }
  return result;
}

namespace bench_detail {

inline auto csv_field(const std::string& s) -> std::string {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline auto fixed(double v, int digits) -> std::string {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace bench_detail

inline constexpr const char* kRowsHeader = "instance,algorithm,run,elapsed_ms,event,f1,f2,hv,hv_fraction,oracle_calls";
inline constexpr const char* kSummaryHeader = "instance,algorithm,runs,hyper_pct,pf_pct,dispersion,error";

inline void write_row_csv(std::ostream& os, const BenchRow& r) {
  using bench_detail::csv_field;
  using bench_detail::fixed;
  os << csv_field(r.instance) << ',' << csv_field(r.algorithm) << ',' << r.run << ',' << fixed(r.elapsed_ms, 3)
     << ',' << r.event << ',' << r.f1 << ',' << r.f2 << ',' << r.hv << ',' << fixed(r.hv_fraction, 6) << ','
     << r.oracle_calls << '\n';
}

inline void write_rows_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kRowsHeader << '\n';
  for (const auto& r : rows) {
    write_row_csv(os, r);
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<BenchSummary>& summaries) {
  using bench_detail::csv_field;
  os << kSummaryHeader << '\n';
  for (const auto& s : summaries) {
    os << csv_field(s.instance) << ',' << csv_field(s.algorithm) << ',' << s.runs << ',';
    if (s.runs > 0) {
      os << format_percent(s.hyper) << ',' << format_percent(s.pf, 1) << ',' << bench_detail::fixed(s.dispersion, 6);
    } else {
      os << ",,";
    }
    os << ',' << csv_field(s.error) << '\n';
  }
}

/// gnuplot data: one indexed block per (instance, algorithm, run) of "elapsed_ms hyper_pct".
inline void write_gnuplot(std::ostream& os, const std::vector<BenchRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<const BenchRow*>> blocks;
  for (const auto& r : rows) {
    blocks[{r.instance, r.algorithm, r.run}].push_back(&r);
  }
  bool first = true;
  for (const auto& [key, block] : blocks) {
    if (!first) {
      os << "\n\n";
    }
    first = false;
    os << "# " << std::get<0>(key) << ' ' << std::get<1>(key) << " run " << std::get<2>(key) << '\n';
    for (const auto* r : block) {
      os << bench_detail::fixed(r->elapsed_ms, 3) << ' ' << bench_detail::fixed(100.0 * r->hv_fraction, 3) << '\n';
    }
  }
}

}  // namespace nrp

#endif  // NRP_BENCH_HPP
