#ifndef NRP_LP_FORMAT_HPP
#define NRP_LP_FORMAT_HPP

// LP-file writer for Subproblem, plus a spawn-and-parse adapter for an
// external MILP solver configured through BIOBJ_ORACLE_CMD.

#include "oracle.hpp"

#include <unistd.h>

#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace nrp {

namespace lp_detail {

inline auto var_name(std::size_t j) -> std::string { return "x" + std::to_string(j + 1); }

// Writes "3 x1 - 2 x4 + x5"; an all-zero row becomes "0 x1".
inline void write_terms(std::ostream& os, const std::vector<std::int64_t>& coeffs, bool leading_aux = false,
                        std::int64_t sign = 1) {
  bool first = !leading_aux;
  if (leading_aux) {
    os << "aux";
  }
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    auto c = sign * coeffs[j];
    if (c == 0) {
      continue;
    }
    if (first) {
      if (c < 0) {
        os << "- ";
      }
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    auto mag = c < 0 ? -c : c;
    if (mag != 1) {
      os << mag << ' ';
    }
    os << var_name(j);
    first = false;
  }
  if (first) {
    os << "0 " << var_name(0);
  }
}

}  // namespace lp_detail

inline auto export_lp(const Subproblem& sub) -> std::string {
  validate(sub);
  std::ostringstream os;
  os << "\\ " << (sub.label.empty() ? "subproblem" : sub.label) << '\n';
  const auto* mp = std::get_if<MaxPlusObjective>(&sub.objective);
  const auto constant = mp ? mp->augment.constant : std::get<LinearObjective>(sub.objective).form.constant;
  os << "\\ objective scale " << sub.scale << ", constant " << constant << '\n';
  os << "Minimize\n obj: ";
  if (mp) {
    lp_detail::write_terms(os, mp->augment.coeffs, true);
  } else {
    lp_detail::write_terms(os, std::get<LinearObjective>(sub.objective).form.coeffs);
  }
  os << "\nSubject To\n";
  std::size_t row = 0;
  for (const auto& imp : sub.implications) {
    os << " imp" << ++row << ": " << lp_detail::var_name(imp.a) << " - " << lp_detail::var_name(imp.b)
       << " >= 0\n";
  }
  row = 0;
  for (const auto& c : sub.constraints) {
    os << ' ' << (c.name.empty() ? "c" + std::to_string(row + 1) : c.name) << ": ";
    ++row;
    lp_detail::write_terms(os, c.coeffs);
    os << " <= " << c.bound << '\n';
  }
  if (mp) {
    // aux >= A.x + a0 and aux >= B.x + b0
    os << " maxplus_a: ";
    lp_detail::write_terms(os, mp->first.coeffs, true, -1);
    os << " >= " << mp->first.constant << '\n';
    os << " maxplus_b: ";
    lp_detail::write_terms(os, mp->second.coeffs, true, -1);
    os << " >= " << mp->second.constant << '\n';
    os << "Bounds\n aux free\n";
  }
  os << "Binaries\n";
  for (std::size_t j = 0; j < sub.n_vars; ++j) {
    os << ' ' << lp_detail::var_name(j);
  }
  os << "\nEnd\n";
  return os.str();
}

/// Parses solver output: an "objective value" line marks a solution, "xK <value>"
/// lines give variables; "infeasible" anywhere marks infeasibility.
inline auto parse_external_solution(const std::string& text, const Subproblem& sub) -> OracleOutcome {
  OracleOutcome out;
  out.scale = sub.scale;
  std::string lowered(text);
  for (auto& ch : lowered) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  const bool has_objective = lowered.find("objective value") != std::string::npos;
  if (!has_objective) {
    if (lowered.find("infeasible") != std::string::npos) {
      out.status = OracleStatus::infeasible;
      return out;
    }
    throw Error(ErrorKind::malformed_format, "external solver output has no objective value line");
  }
  Bits x(sub.n_vars, 0);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    for (auto& ch : line) {
      if (ch == '=' || ch == ':' || ch == '\t') {
        ch = ' ';
      }
    }
    std::istringstream fields(line);
    std::string name;
    double value = 0.0;
    if (!(fields >> name >> value) || name.size() < 2 || name[0] != 'x') {
      continue;
    }
    std::size_t index = 0;
    try {
      index = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      continue;
    }
    if (index >= 1 && index <= sub.n_vars) {
      x[index - 1] = value > 0.5 ? 1 : 0;
    }
  }
  if (!satisfies_all(sub, x)) {
    throw Error(ErrorKind::malformed_format, "external solver returned an assignment violating the subproblem");
  }
  out.status = OracleStatus::optimal;
  out.value = objective_value(sub.objective, x);
  out.assignment = std::move(x);
  return out;
}

/// Runs `command <lp-file>` and parses its standard output.
inline auto solve_external(const Subproblem& sub, const std::string& command) -> OracleOutcome {
  namespace fs = std::filesystem;
  static std::atomic<std::uint64_t> counter{0};
  auto path = fs::temp_directory_path() /
              ("nrp-sub-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".lp");
  {
    std::ofstream file(path);
    file << export_lp(sub);
  }
  const auto full = command + " '" + path.string() + "'";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(full.c_str(), "r"), ::pclose);
  if (!pipe) {
    fs::remove(path);
    throw Error(ErrorKind::invalid_config, "cannot spawn external solver: " + command);
  }
  std::string output;
  std::array<char, 4096> buffer{};
  while (auto got = std::fread(buffer.data(), 1, buffer.size(), pipe.get())) {
    output.append(buffer.data(), got);
  }
  pipe.reset();
  fs::remove(path);
  return parse_external_solution(output, sub);
}

}  // namespace nrp

#endif  // NRP_LP_FORMAT_HPP
