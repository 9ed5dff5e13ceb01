#ifndef NRP_FORMATS_HPP
#define NRP_FORMATS_HPP

// Readers for the public NRP benchmark text formats and a seeded instance generator.
//
// Classic grammar (whitespace separated integers):
//   levels
//   per level: requirement-count, then that many costs
//   dependency-count, then that many "i j" pairs (i is a prerequisite of j)
//   customer-count, then per customer: weight request-count id...
// Realistic grammar: the same without the dependency section.

#include "core.hpp"
#include "model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace nrp {

namespace format_detail {

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  auto next_int(const char* what) -> std::int64_t {
    skip_space();
    if (pos_ >= text_.size()) {
      fail(std::string("unexpected end of input, expected ") + what);
    }
    const auto line = line_;
    const auto col = col_;
    std::size_t start = pos_;
    if (text_[pos_] == '-' || text_[pos_] == '+') {
      advance();
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
      advance();
    }
    auto token = text_.substr(start, pos_ - start);
    if (token.empty() || token == "-" || token == "+" ||
        (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) == 0)) {
      fail_at(line, col, std::string("expected integer ") + what);
    }
    try {
      return std::stoll(std::string(token));
    } catch (const std::exception&) {
      fail_at(line, col, std::string("integer out of range for ") + what);
    }
  }

  auto next_count(const char* what) -> std::size_t {
    auto line = this->line();
    auto col = column();
    auto value = next_int(what);
    if (value < 0) {
      fail_at(line, col, std::string("negative ") + what);
    }
    return static_cast<std::size_t>(value);
  }

  void expect_end() {
    skip_space();
    if (pos_ < text_.size()) {
      fail("trailing content after the customer section");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(line_, col_, msg); }

  [[noreturn]] static void fail_at(std::size_t line, std::size_t col, const std::string& msg) {
    throw Error(ErrorKind::malformed_format,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

  // Position of the next token.
  auto line() -> std::size_t {
    skip_space();
    return line_;
  }
  auto column() -> std::size_t {
    skip_space();
    return col_;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline auto read_id(Tokens& tokens, std::size_t n, const char* what) -> int {
  auto line = tokens.line();
  auto col = tokens.column();
  auto id = tokens.next_int(what);
  if (id < 1 || static_cast<std::size_t>(id) > n) {
    Tokens::fail_at(line, col, std::string(what) + " " + std::to_string(id) + " is not in 1.." + std::to_string(n));
  }
  return static_cast<int>(id);
}

inline auto parse(std::string_view text, bool with_dependencies, std::string name) -> Instance {
  Tokens tokens(text);
  Instance inst;
  inst.name = std::move(name);
  auto levels = tokens.next_count("level count");
  for (std::size_t l = 0; l < levels; ++l) {
    auto count = tokens.next_count("requirement count");
    for (std::size_t i = 0; i < count; ++i) {
      auto line = tokens.line();
      auto col = tokens.column();
      auto cost = tokens.next_int("requirement cost");
      if (cost < 0) {
        Tokens::fail_at(line, col, "negative requirement cost");
      }
      inst.costs.push_back(cost);
    }
  }
  const auto n = inst.costs.size();
  if (with_dependencies) {
    auto deps = tokens.next_count("dependency count");
    for (std::size_t d = 0; d < deps; ++d) {
      auto i = read_id(tokens, n, "prerequisite id");
      auto j = read_id(tokens, n, "dependent id");
      inst.precedence.emplace_back(i, j);
    }
  }
  auto customers = tokens.next_count("customer count");
  for (std::size_t k = 0; k < customers; ++k) {
    Stakeholder st;
    auto line = tokens.line();
    auto col = tokens.column();
    st.weight = tokens.next_int("customer weight");
    if (st.weight < 1) {
      Tokens::fail_at(line, col, "customer weight must be positive");
    }
    auto count = tokens.next_count("request count");
    if (count == 0) {
      tokens.fail("customer " + std::to_string(k + 1) + " has no requests");
    }
    for (std::size_t r = 0; r < count; ++r) {
      auto id = read_id(tokens, n, "requested id");
      if (std::find(st.requests.begin(), st.requests.end(), id) == st.requests.end()) {
        st.requests.push_back(id);
      }
    }
    inst.stakeholders.push_back(std::move(st));
  }
  tokens.expect_end();
  validate(inst);
  return inst;
}

}  // namespace format_detail

inline auto parse_classic(std::string_view text, std::string name = "classic") -> Instance {
  return format_detail::parse(text, true, std::move(name));
}

inline auto parse_realistic(std::string_view text, std::string name = "realistic") -> Instance {
  return format_detail::parse(text, false, std::move(name));
}

/// Writes the classic format (single level).
inline auto to_classic_text(const Instance& inst) -> std::string {
  std::string out = "1\n" + std::to_string(inst.costs.size()) + "\n";
  for (std::size_t i = 0; i < inst.costs.size(); ++i) {
    out += (i == 0 ? "" : " ") + std::to_string(inst.costs[i]);
  }
  out += "\n" + std::to_string(inst.precedence.size()) + "\n";
  for (const auto& [i, j] : inst.precedence) {
    out += std::to_string(i) + " " + std::to_string(j) + "\n";
  }
  out += std::to_string(inst.stakeholders.size()) + "\n";
  for (const auto& st : inst.stakeholders) {
    out += std::to_string(st.weight) + " " + std::to_string(st.requests.size());
    for (int id : st.requests) {
      out += " " + std::to_string(id);
    }
    out += "\n";
  }
  return out;
}

struct GeneratorParams {
  std::size_t n = 14;
  std::size_t m = 8;
  std::int64_t max_cost = 20;
  std::int64_t max_weight = 10;
  double precedence_density = 0.1;
  double request_density = 0.25;
  std::uint64_t seed = 1;
};

/// Seeded random instance. Precedence pairs only go from lower to higher id.
inline auto generate_instance(const GeneratorParams& params) -> Instance {
  if (params.precedence_density < 0.0 || params.precedence_density > 1.0 || params.request_density < 0.0 ||
      params.request_density > 1.0) {
    throw Error(ErrorKind::invalid_config, "densities must lie in [0, 1]");
  }
  if (params.n == 0 || params.max_cost < 1 || params.max_weight < 1) {
    throw Error(ErrorKind::invalid_config, "generator needs n >= 1, max cost >= 1 and max weight >= 1");
  }
  // Raw engine output only, so instances are identical across standard libraries.
  std::mt19937_64 rng(params.seed);
  auto below = [&](std::uint64_t k) { return static_cast<std::int64_t>(rng() % k); };
  auto chance = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };

  Instance inst;
  inst.name = "gen-n" + std::to_string(params.n) + "-m" + std::to_string(params.m) + "-s" +
              std::to_string(params.seed);
  for (std::size_t i = 0; i < params.n; ++i) {
    inst.costs.push_back(1 + below(static_cast<std::uint64_t>(params.max_cost)));
  }
  for (std::size_t i = 1; i <= params.n; ++i) {
    for (std::size_t j = i + 1; j <= params.n; ++j) {
      if (chance(params.precedence_density)) {
        inst.precedence.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  for (std::size_t k = 0; k < params.m; ++k) {
    Stakeholder st;
    st.weight = 1 + below(static_cast<std::uint64_t>(params.max_weight));
    for (std::size_t i = 1; i <= params.n; ++i) {
      if (chance(params.request_density)) {
        st.requests.push_back(static_cast<int>(i));
      }
    }
    if (st.requests.empty()) {
      st.requests.push_back(static_cast<int>(1 + below(params.n)));
    }
    inst.stakeholders.push_back(std::move(st));
  }
  return inst;
}

}  // namespace nrp

#endif  // NRP_FORMATS_HPP
