#ifndef NRP_METRICS_HPP
#define NRP_METRICS_HPP

#include "core.hpp"
#include "model.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nrp {

/// Non-dominated set ordered by ascending f1 (hence strictly descending f2).
/// The first solution seen for an image is kept.
class ParetoArchive {
 public:
  struct Entry {
    Point point;
    Solution solution;
  };

  /// Returns false when `p` is weakly dominated by a stored point.
  auto insert(const Point& p, Solution sol = {}) -> bool {
    auto pos = std::lower_bound(entries_.begin(), entries_.end(), p.f1,
                                [](const Entry& e, std::int64_t f1) { return e.point.f1 < f1; });
    if (pos != entries_.end() && pos->point.f1 == p.f1 && pos->point.f2 <= p.f2) {
      return false;
    }
    if (pos != entries_.begin() && std::prev(pos)->point.f2 <= p.f2) {
      return false;
    }
    auto last = pos;
    while (last != entries_.end() && last->point.f2 >= p.f2) {
      ++last;
    }
    pos = entries_.erase(pos, last);
    entries_.insert(pos, Entry{p, std::move(sol)});
    return true;
  }

  [[nodiscard]] auto contains(const Point& p) const -> bool {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.point == p; });
  }

  [[nodiscard]] auto points() const -> std::vector<Point> {
    std::vector<Point> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
      out.push_back(e.point);
    }
    return out;
  }

  [[nodiscard]] auto entries() const -> const std::vector<Entry>& { return entries_; }
  [[nodiscard]] auto size() const -> std::size_t { return entries_.size(); }
  [[nodiscard]] auto empty() const -> bool { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

inline auto pareto_filter(std::vector<Point> points) -> std::vector<Point> {
  std::sort(points.begin(), points.end());
  std::vector<Point> out;
  for (const auto& p : points) {
    // sorted by (f1, f2): p is kept iff its f2 beats every kept point
    if (out.empty() || p.f2 < out.back().f2) {
      out.push_back(p);
    }
  }
  return out;
}

/// Area dominated by `front` and bounded by `nadir`. Points outside the nadir box contribute nothing.
inline auto hypervolume(const std::vector<Point>& front, const Point& nadir) -> std::int64_t {
  auto filtered = pareto_filter(front);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    const auto& p = filtered[i];
    auto right = i + 1 < filtered.size() ? std::min(filtered[i + 1].f1, nadir.f1) : nadir.f1;
    auto width = right - p.f1;
    auto height = nadir.f2 - p.f2;
    if (width > 0 && height > 0) {
      total = checked::add(total, checked::mul(width, height));
    }
  }
  return total;
}

inline auto hypervolume(const ParetoArchive& archive, const Point& nadir) -> std::int64_t {
  return hypervolume(archive.points(), nadir);
}

/// Reference point built from the two lexicographic extremes: (z2.f1, z1.f2).
inline auto nadir_of(const Point& z1, const Point& z2) -> Point { return {z2.f1, z1.f2}; }

/// Flags the points on the lower-left convex hull, including points interior to hull edges.
/// `front` must be non-dominated and sorted by ascending f1.
inline auto classify_supported(const std::vector<Point>& front) -> std::vector<bool> {
  auto cross = [](const Point& o, const Point& a, const Point& b) -> __int128 {
    return static_cast<__int128>(a.f1 - o.f1) * (b.f2 - o.f2) - static_cast<__int128>(a.f2 - o.f2) * (b.f1 - o.f1);
  };
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < front.size(); ++i) {
    while (hull.size() >= 2 && cross(front[hull[hull.size() - 2]], front[hull.back()], front[i]) <= 0) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<bool> flags(front.size(), false);
  for (auto h : hull) {
    flags[h] = true;
  }
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    for (auto i = hull[e] + 1; i < hull[e + 1]; ++i) {
      flags[i] = cross(front[hull[e]], front[hull[e + 1]], front[i]) == 0;
    }
  }
  return flags;
}

inline auto supported_subset(const std::vector<Point>& front) -> std::vector<Point> {
  auto flags = classify_supported(front);
  std::vector<Point> out;
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (flags[i]) {
      out.push_back(front[i]);
    }
  }
  return out;
}

inline constexpr std::size_t kBruteForceLimit = 24;

/// Exact front by enumerating every precedence-closed requirement subset and
/// satisfying every stakeholder whose requests it covers.
inline auto brute_force_front(const Instance& inst) -> ParetoArchive {
  validate(inst);
  const auto n = inst.num_requirements();
  const auto m = inst.num_stakeholders();
  if (n + m > kBruteForceLimit) {
    throw Error(ErrorKind::too_large_instance, "brute force is limited to n + m <= " +
                                                   std::to_string(kBruteForceLimit));
  }
  std::vector<std::uint32_t> request_masks(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    for (int id : inst.stakeholders[k].requests) {
      request_masks[k] |= 1U << (id - 1);
    }
  }
  ParetoArchive archive;
  const std::uint32_t limit = n == 0 ? 1U : (1U << n);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    bool closed = true;
    for (const auto& [i, j] : inst.precedence) {
      if ((mask >> (j - 1) & 1U) != 0 && (mask >> (i - 1) & 1U) == 0) {
        closed = false;
        break;
      }
    }
    if (!closed) {
      continue;
    }
    Solution sol{Bits(n, 0), Bits(m, 0)};
    Point p;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i & 1U) != 0) {
        sol.r[i] = 1;
        p.f2 += inst.costs[i];
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      if ((request_masks[k] & mask) == request_masks[k]) {
        sol.s[k] = 1;
        p.f1 -= inst.stakeholders[k].weight;
      }
    }
    archive.insert(p, std::move(sol));
  }
  return archive;
}

/// Current and (when known) total hypervolume of a growing archive.
struct HvTracker {
  Point nadir;
  std::int64_t current = 0;
  std::optional<std::int64_t> total;

  void update(const ParetoArchive& archive) { current = hypervolume(archive, nadir); }

  [[nodiscard]] auto fraction() const -> std::optional<Rational> {
    if (!total) {
      return std::nullopt;
    }
    if (*total == 0) {
      return Rational(1, 1);
    }
    return Rational(current, *total);
  }
};

/// Renders num/den as a percentage with `decimals` digits (default three), rounding half up.
inline auto format_percent(const Rational& r, int decimals = 3) -> std::string {
  __int128 unit = 1;
  for (int i = 0; i < decimals; ++i) {
    unit *= 10;
  }
  const __int128 scaled = (static_cast<__int128>(r.num) * 100 * unit * 2 + r.den) / (2 * static_cast<__int128>(r.den));
  auto whole = std::to_string(static_cast<long long>(scaled / unit));
  if (decimals <= 0) {
    return whole;
  }
  auto frac = std::to_string(static_cast<long long>(scaled % unit));
  return whole + "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
}

}  // namespace nrp

#endif  // NRP_METRICS_HPP
