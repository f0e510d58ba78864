#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tarskiq {

/// A vertex of [n]^k, 1-based. For k = 1 the y coordinate is always 1.
struct Point {
  int x = 1;
  int y = 1;

  friend auto operator<=>(const Point&, const Point&) = default;
  std::string to_string() const;
};

/// Componentwise order.
inline bool leq(const Point& a, const Point& b) { return a.x <= b.x && a.y <= b.y; }

/// Explicit table of f : [n]^k -> [n]^k, k in {1, 2}.
class LatticeFn {
 public:
  /// values are row-major, x outer and y inner.
  LatticeFn(int n, int k, std::vector<Point> values);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  std::size_t cells() const noexcept { return values_.size(); }
  const std::vector<Point>& values() const noexcept { return values_; }

  /// Direct table read; does not count as a query.
  const Point& operator()(const Point& v) const { return values_[index(v)]; }
  std::size_t index(const Point& v) const;
  Point point(std::size_t index) const;

  /// {"n": n, "k": k, "values": [[fx, fy], ...]}.
  std::string to_json() const;
  static LatticeFn from_json(const std::string& text);

  friend bool operator==(const LatticeFn&, const LatticeFn&) = default;

 private:
  int n_;
  int k_;
  std::vector<Point> values_;
};

using LatticePtr = std::shared_ptr<const LatticeFn>;

/// Counting access to a function on [n]^k. Every query() reads through the
/// underlying table once and bumps the counter; nothing is cached. Each view
/// owns its counter, so concurrent solvers must use separate views.
class Oracle {
 public:
  explicit Oracle(LatticePtr f);

  /// f ∘ g over [n]^k where g clamps each coordinate to the table's side and
  /// drops coordinates beyond its dimension; missing output coordinates are 1.
  static Oracle clamp(LatticePtr f, int n, int k);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  Point query(const Point& v);
  std::uint64_t queries() const noexcept { return queries_; }
  void reset() noexcept { queries_ = 0; }

  /// Evaluates every vertex into a table; counts n^k queries.
  LatticeFn materialize();

 private:
  Oracle(LatticePtr f, int n, int k);

  LatticePtr f_;
  int n_;
  int k_;
  std::uint64_t queries_ = 0;
};

struct MonotoneCheck {
  bool monotone = true;
  /// a <= b with f(a) not <= f(b); a and b form a covering pair.
  std::optional<std::pair<Point, Point>> witness;
};

/// Scans covering pairs (v, v + e_x) and (v, v + e_y) in row-major order.
MonotoneCheck check_monotone(const LatticeFn& f);

/// Every v with f(v) = v, row-major.
std::vector<Point> brute_fixed_points(const LatticeFn& f);

enum class Algorithm { Brute, Nested };

struct SolveResult {
  Point fixed_point;
  std::uint64_t queries_used = 0;
  Algorithm algorithm = Algorithm::Brute;
  /// Nested search failed its post-check and a full scan produced the answer.
  bool fell_back = false;

  std::string to_json() const;
};

const char* algorithm_name(Algorithm a);

/// Queries every vertex in row-major order, returns the first fixed point.
SolveResult brute_solve(Oracle& f);

/// Outer binary search on x; inner binary search on y along the middle
/// column for z with f(mid, z)_y = z. The box [a, b] keeps f(a) >= a and
/// f(b) <= b. The answer is re-queried once before returning.
SolveResult nested_solve(Oracle& f);

/// Seeded random monotone function: a random table made monotone by running
/// maxima along each axis.
LatticeFn random_monotone(int n, int k, std::uint64_t seed);

}  // namespace tarskiq
