#ifndef NRP_CORE_HPP
#define NRP_CORE_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nrp {

enum class ErrorKind {
  invalid_instance,
  length_mismatch,
  arithmetic_overflow,
  malformed_format,
  too_large_instance,
  unknown_instance,
  unknown_run,
  invalid_config,
  invalid_edit,
  invalid_subproblem,
};

inline auto to_string(ErrorKind kind) -> std::string_view {
  switch (kind) {
    case ErrorKind::invalid_instance: return "invalid-instance";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::arithmetic_overflow: return "arithmetic-overflow";
    case ErrorKind::malformed_format: return "malformed-format";
    case ErrorKind::too_large_instance: return "too-large-instance";
    case ErrorKind::unknown_instance: return "unknown-instance";
    case ErrorKind::unknown_run: return "unknown-run";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::invalid_edit: return "invalid-edit";
    case ErrorKind::invalid_subproblem: return "invalid-subproblem";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] auto kind() const noexcept -> ErrorKind { return kind_; }

 private:
  ErrorKind kind_;
};

namespace checked {

inline auto add(std::int64_t a, std::int64_t b) -> std::int64_t {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorKind::arithmetic_overflow, "addition overflows int64");
  }
  return out;
}

inline auto sub(std::int64_t a, std::int64_t b) -> std::int64_t {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw Error(ErrorKind::arithmetic_overflow, "subtraction overflows int64");
  }
  return out;
}

inline auto mul(std::int64_t a, std::int64_t b) -> std::int64_t {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorKind::arithmetic_overflow, "multiplication overflows int64");
  }
  return out;
}

inline auto abs(std::int64_t a) -> std::int64_t {
  if (a == INT64_MIN) {
    throw Error(ErrorKind::arithmetic_overflow, "absolute value overflows int64");
  }
  return a < 0 ? -a : a;
}

}  // namespace checked

/// Floor division for a positive divisor.
inline auto floor_div(std::int64_t num, std::int64_t den) -> std::int64_t {
  auto q = num / den;
  if ((num % den != 0) && (num < 0)) {
    --q;
  }
  return q;
}

/// Exact non-negative-denominator rational used for scalarization parameters.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) {
      throw Error(ErrorKind::invalid_config, "rational with zero denominator");
    }
    if (den < 0) {
      num = checked::sub(0, num);
      den = checked::sub(0, den);
    }
    auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  [[nodiscard]] auto to_double() const -> double {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend auto operator==(const Rational&, const Rational&) -> bool = default;
  friend auto operator<=>(const Rational& a, const Rational& b) -> std::strong_ordering {
    return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
  }
};

/// Parses "P/Q" or an integer "P".
inline auto parse_rational(std::string_view text) -> Rational {
  auto parse_int = [&](std::string_view part) -> std::int64_t {
    if (part.empty()) {
      throw Error(ErrorKind::invalid_config, "malformed rational '" + std::string(text) + "'");
    }
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(std::string(part), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) {
      throw Error(ErrorKind::invalid_config, "malformed rational '" + std::string(text) + "'");
    }
    return value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text), 1);
  }
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

/// Objective-space image. f1 is negated satisfaction, f2 is cost; both minimized.
struct Point {
  std::int64_t f1 = 0;
  std::int64_t f2 = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

inline auto operator<<(std::ostream& os, const Point& p) -> std::ostream& {
  return os << '(' << p.f1 << ',' << p.f2 << ')';
}

/// a dominates b: component-wise no worse, strictly better somewhere.
constexpr auto dominates(const Point& a, const Point& b) -> bool {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

constexpr auto weakly_dominates(const Point& a, const Point& b) -> bool {
  return a.f1 <= b.f1 && a.f2 <= b.f2;
}

}  // namespace nrp

#endif  // NRP_CORE_HPP
