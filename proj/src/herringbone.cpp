#include "tarskiq/herringbone.hpp"

#include <algorithm>

#include "json.hpp"
#include "tarskiq/error.hpp"
#include "tarskiq/symbol.hpp"

namespace tarskiq {

Point line_point(const Point& u, const Point& v, int c) {
  const int s = u.x + u.y;
  const int d = v.x + v.y;
  if (s == d) return u;
  const Rational x(static_cast<std::int64_t>(u.x) * (d - c) + static_cast<std::int64_t>(v.x) * (c - s), d - s);
  const int lx = static_cast<int>(round_half_up(x));
  return {lx, c - lx};
}

GridLine grid_line(const Point& u, const Point& v) {
  if (!leq(u, v)) invalid_argument("grid_line: " + u.to_string() + " is not below " + v.to_string());
  GridLine line{u, v, {}};
  for (int c = u.x + u.y; c <= v.x + v.y; ++c) line.points.push_back(line_point(u, v, c));
  return line;
}

SpineGeometry::SpineGeometry(int n) : n_(n), n_prime_(n * (n * n + n - 1)) {
  if (n < 2) invalid_argument("geometry: n must be at least 2, got " + std::to_string(n));
}

void SpineGeometry::check_chunk(int i) const {
  if (i < 1 || i > n_) invalid_argument("geometry: chunk " + std::to_string(i) + " outside [1, " + std::to_string(n_) + "]");
}

int SpineGeometry::low(int i, int j) const {
  check_chunk(i);
  if (j < 1 || j > n_ + 2) invalid_argument("geometry: region " + std::to_string(j) + " outside [1, n+2]");
  return 2 * (n_ - 1) * ((n_ + 2) * (i - 1) + j - 1) + n_ + 1;
}

int SpineGeometry::high(int i, int j) const {
  check_chunk(i);
  if (j < 1 || j > n_ + 2) invalid_argument("geometry: region " + std::to_string(j) + " outside [1, n+2]");
  return 2 * (n_ - 1) * ((n_ + 2) * (i - 1) + j) + n_ + 1;
}

int SpineGeometry::bound(int i) const {
  if (i < 1 || i > n_ + 1) invalid_argument("geometry: boundary " + std::to_string(i) + " outside [1, n+1]");
  return i <= n_ ? low(i, 1) : high(n_, n_ + 2);
}

std::vector<Point> SpineGeometry::boundary(int c) const {
  std::vector<Point> out;
  for (int x = std::max(1, c - n_prime_); x <= std::min(n_prime_, c - 1); ++x) {
    const int y = c - x;
    if (std::abs(x - y) <= n_ - 1) out.push_back({x, y});
  }
  return out;
}

Point SpineGeometry::boundary_point(int c, int j) const {
  const auto b = boundary(c);
  if (j < 1 || j > static_cast<int>(b.size())) {
    invalid_argument("geometry: B^" + std::to_string(c) + " has no element " + std::to_string(j));
  }
  return b[static_cast<std::size_t>(j - 1)];
}

std::optional<int> SpineGeometry::boundary_index(int c) const {
  for (int i = 1; i <= n_ + 1; ++i) {
    if (bound(i) == c) return i;
  }
  return std::nullopt;
}

Spine chunked_spine(const SpineGeometry& geo, const std::vector<int>& c) {
  const int n = geo.n();
  if (static_cast<int>(c.size()) != n + 1) {
    invalid_argument("chunked_spine: C needs " + std::to_string(n + 1) + " entries, got " + std::to_string(c.size()));
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] < 1 || c[k] > n) invalid_argument("chunked_spine: C_" + std::to_string(k + 1) + " outside [1, n]");
  }
  auto b = [&](int sum, int j) { return geo.boundary_point(sum, j); };
  auto cc = [&](int i) { return c[static_cast<std::size_t>(i - 1)]; };

  std::vector<std::pair<Point, Point>> segments;
  segments.emplace_back(Point{1, 1}, b(geo.low(1, 1), cc(1)));
  for (int i = 1; i <= n; ++i) {
    const int r = cc(i) + 1;
    segments.emplace_back(b(geo.low(i, 1), cc(i)), b(geo.low(i, r), cc(i)));
    segments.emplace_back(b(geo.low(i, r), cc(i)), b(geo.high(i, r), cc(i + 1)));
    segments.emplace_back(b(geo.high(i, r), cc(i + 1)), b(geo.high(i, n + 2), cc(i + 1)));
  }
  segments.emplace_back(b(geo.high(n, n + 2), cc(n + 1)), Point{geo.n_prime(), geo.n_prime()});

  Spine spine{c, {}};
  for (const auto& [u, v] : segments) {
    for (const auto& p : grid_line(u, v).points) {
      if (!spine.vertices.empty() && spine.vertices.back() == p) continue;
      spine.vertices.push_back(p);
    }
  }
  return spine;
}

LatticeFn herringbone(const Spine& spine, int side, int fp_sum) {
  const auto& s = spine.vertices;
  if (s.size() != static_cast<std::size_t>(2 * side - 1)) {
    invalid_argument("herringbone: spine has " + std::to_string(s.size()) + " vertices, expected " +
                     std::to_string(2 * side - 1));
  }
  // Vertex k has coordinate sum k + 2; that plus unit steps makes the path
  // connected and monotone.
  std::vector<int> col_min(static_cast<std::size_t>(side) + 1, side + 1);
  std::vector<int> col_max(static_cast<std::size_t>(side) + 1, 0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Point& p = s[k];
    if (p.x < 1 || p.y < 1 || p.x > side || p.y > side || p.x + p.y != static_cast<int>(k) + 2) {
      invalid_argument("herringbone: spine vertex " + std::to_string(k + 1) + " " + p.to_string() +
                       " breaks the monotone path");
    }
    col_min[p.x] = std::min(col_min[p.x], p.y);
    col_max[p.x] = std::max(col_max[p.x], p.y);
  }
  if (fp_sum < 2 || fp_sum > 2 * side) invalid_argument("herringbone: fixed point sum out of range");
  const int j = fp_sum - 2;

  std::vector<Point> values;
  values.reserve(static_cast<std::size_t>(side) * side);
  for (int x = 1; x <= side; ++x) {
    for (int y = 1; y <= side; ++y) {
      const int k = x + y - 2;
      if (s[k] == Point{x, y}) {
        values.push_back(k == j ? s[k] : k < j ? s[k + 1] : s[k - 1]);
      } else if (y > col_max[x]) {
        values.push_back({x + 1, y - 1});
      } else {
        values.push_back({x - 1, y + 1});
      }
    }
  }
  return LatticeFn(side, 2, std::move(values));
}

std::string InstanceParams::sidecar_json(int n) const {
  return nlohmann::json{{"n", n}, {"C", c}, {"i", i}}.dump();
}

LatticeFn build_instance(const SpineGeometry& geo, const InstanceParams& params) {
  if (params.i < 1 || params.i > geo.n() + 1) {
    invalid_argument("build_instance: i = " + std::to_string(params.i) + " outside [1, " +
                     std::to_string(geo.n() + 1) + "]");
  }
  return herringbone(chunked_spine(geo, params.c), geo.n_prime(), geo.bound(params.i));
}

std::vector<InstanceParams> family_params(const SpineGeometry& geo) {
  const int n = geo.n();
  std::vector<InstanceParams> out;
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<int> c(static_cast<std::size_t>(n + 1), 1);
    while (true) {
      out.push_back({c, i});
      int k = n;
      while (k >= 0 && ++c[static_cast<std::size_t>(k)] > n) c[static_cast<std::size_t>(k--)] = 1;
      if (k < 0) break;
    }
  }
  return out;
}

std::string nos_correspondence(const SpineGeometry& geo, const InstanceParams& params) {
  const int n = geo.n();
  if (static_cast<int>(params.c.size()) != n + 1 || params.i < 1 || params.i > n + 1) {
    invalid_argument("nos_correspondence: parameters do not match n = " + std::to_string(n));
  }
  std::string s;
  for (int j = 1; j <= n + 1; ++j) {
    const Symbol sigma = j == params.i ? Symbol::Star : j < params.i ? Symbol::Up : Symbol::Down;
    const int at = params.c[static_cast<std::size_t>(j - 1)];
    for (int q = 1; q <= n; ++q) {
      s += symbol_byte(q < at ? Symbol::Right : q == at ? sigma : Symbol::Left);
    }
  }
  return s;
}

ThresholdQuad thresholds(const Point& fixed, FixedEnd which, const std::vector<Point>& candidates,
                         const Point& point) {
  std::vector<Point> moving = candidates;
  std::sort(moving.begin(), moving.end());
  const int c = point.x + point.y;

  // Band per candidate: 0 below, 1 through, 2 above; steps only for band 1.
  struct Row {
    Point w;
    int band;
    int next;  // 0 for (0,1), 1 for (1,0)
    int prev;  // 0 for (-1,0), 1 for (0,-1)
  };
  std::vector<Row> rows;
  for (const auto& w : moving) {
    const Point u = which == FixedEnd::Start ? fixed : w;
    const Point v = which == FixedEnd::Start ? w : fixed;
    if (!leq(u, v)) invalid_argument("thresholds: endpoint " + u.to_string() + " is not below " + v.to_string());
    if (c < u.x + u.y || c > v.x + v.y) {
      invalid_argument("thresholds: point " + point.to_string() + " is outside the sums spanned by " + u.to_string() +
                       " and " + v.to_string());
    }
    const Point at = line_point(u, v, c);
    Row row{w, at.x < point.x ? 0 : at.x == point.x ? 1 : 2, 0, 0};
    // Steps past either endpoint belong to neighbouring segments; they are
    // left at 0 so they never split a band.
    if (row.band == 1) {
      const Point up = c < v.x + v.y ? line_point(u, v, c + 1) : Point{point.x, point.y + 1};
      const Point down = c > u.x + u.y ? line_point(u, v, c - 1) : Point{point.x - 1, point.y};
      if (up == Point{point.x, point.y + 1}) {
        row.next = 0;
      } else if (up == Point{point.x + 1, point.y}) {
        row.next = 1;
      } else {
        fail(ErrorKind::CheckFailed, "thresholds: grid line through " + point.to_string() + " jumps to " + up.to_string());
      }
      if (down == Point{point.x - 1, point.y}) {
        row.prev = 0;
      } else if (down == Point{point.x, point.y - 1}) {
        row.prev = 1;
      } else {
        fail(ErrorKind::CheckFailed, "thresholds: grid line through " + point.to_string() + " comes from " + down.to_string());
      }
    }
    rows.push_back(row);
  }

  auto contiguous = [&](auto key, const char* what) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (key(rows[k]) < key(rows[k - 1])) {
        fail(ErrorKind::CheckFailed, std::string("thresholds: ") + what + " bands are not contiguous at " +
                                         point.to_string() + " between candidates " + rows[k - 1].w.to_string() +
                                         " and " + rows[k].w.to_string());
      }
    }
  };
  contiguous([](const Row& r) { return r.band; }, "position");
  contiguous([](const Row& r) { return r.band == 1 ? r.next : r.band == 0 ? -1 : 2; }, "next-step");
  contiguous([](const Row& r) { return r.band == 1 ? r.prev : r.band == 0 ? -1 : 2; }, "previous-step");

  ThresholdQuad q;
  for (const auto& r : rows) {
    if (r.band == 0) q.d1 = r.w.x;
  }
  q.d2 = q.d3 = q.d4 = q.d1;
  for (const auto& r : rows) {
    if (r.band != 1) continue;
    q.d4 = r.w.x;
    if (r.next == 0) q.d2 = r.w.x;
    if (r.prev == 0) q.d3 = r.w.x;
  }
  return q;
}

namespace {

// Chunk α with bound(α) <= s, clamped to [n]; s must lie in [bound(1), bound(n+1)].
int chunk_of_sum(const SpineGeometry& geo, int s) {
  int alpha = 1;
  while (alpha < geo.n() && geo.bound(alpha + 1) <= s) ++alpha;
  return alpha;
}

std::optional<RegionAnchor> try_anchor(const SpineGeometry& geo, const Point& w) {
  const int n = geo.n();
  const int s = w.x + w.y;
  if (s < geo.bound(1) || s > geo.bound(n + 1)) return std::nullopt;
  RegionAnchor a;
  a.chunk = chunk_of_sum(geo, s);
  a.line = w.x - static_cast<int>(round_half_up(Rational(s - (n + 1), 2)));
  if (a.line < 1 || a.line > n) return std::nullopt;
  const Point from = geo.boundary_point(geo.bound(a.chunk), a.line);
  const Point to = geo.boundary_point(geo.bound(a.chunk + 1), a.line);
  if (line_point(from, to, s) != w) return std::nullopt;
  a.region = 1;
  while (a.region < n + 2 && geo.high(a.chunk, a.region) < s) ++a.region;
  return a;
}

}  // namespace

RegionAnchor region_anchor(const SpineGeometry& geo, const Point& w) {
  auto a = try_anchor(geo, w);
  if (!a) invalid_argument("region_anchor: " + w.to_string() + " is outside the tube");
  return *a;
}

bool in_tube(const SpineGeometry& geo, const Point& w) { return try_anchor(geo, w).has_value(); }

const char* cover_case_name(CoverCase c) {
  switch (c) {
    case CoverCase::Outside: return "outside";
    case CoverCase::Boundary: return "boundary";
    case CoverCase::Prefix: return "prefix";
    case CoverCase::Suffix: return "suffix";
    case CoverCase::Chunk: return "chunk";
  }
  return "?";
}

CoveringSet covering_set(const SpineGeometry& geo, const Point& p) {
  const int n = geo.n();
  const int np = geo.n_prime();
  if (p.x < 1 || p.y < 1 || p.x > np || p.y > np) invalid_argument("covering_set: " + p.to_string() + " outside the grid");
  const int s = p.x + p.y;
  CoveringSet out;
  auto add = [&](const Point& v) {
    if (std::find(out.points.begin(), out.points.end(), v) == out.points.end()) out.points.push_back(v);
  };
  auto add_by_x = [&](const std::vector<Point>& b, std::initializer_list<int> xs) {
    for (const auto& v : b) {
      if (std::find(xs.begin(), xs.end(), v.x) != xs.end()) add(v);
    }
  };

  if (geo.boundary_index(s)) {
    const auto b = geo.boundary(s);
    if (std::find(b.begin(), b.end(), p) != b.end()) {
      out.kind = CoverCase::Boundary;
      add(p);
      return out;
    }
  }
  if (s < geo.bound(1)) {
    out.kind = CoverCase::Prefix;
    const auto b = geo.boundary(geo.bound(1));
    const auto q = thresholds({1, 1}, FixedEnd::Start, b, p);
    add_by_x(b, {q.d1, q.d2, q.d4});
    return out;
  }
  if (s > geo.bound(n + 1)) {
    out.kind = CoverCase::Suffix;
    const auto b = geo.boundary(geo.bound(n + 1));
    const auto q = thresholds({np, np}, FixedEnd::End, b, p);
    add_by_x(b, {q.d1, q.d3, q.d4});
    return out;
  }
  const auto anchor = try_anchor(geo, p);
  if (!anchor) return out;  // Outside: every family member agrees here.

  out.kind = CoverCase::Chunk;
  const int alpha = anchor->chunk;
  const int beta = anchor->region;
  const int lower = geo.bound(alpha);
  const int upper = geo.bound(alpha + 1);
  add(geo.boundary_point(lower, anchor->line));
  add(geo.boundary_point(upper, anchor->line));
  if (beta - 1 >= 1 && beta - 1 <= n) {
    add(geo.boundary_point(lower, beta - 1));
    const auto top = geo.boundary(geo.high(alpha, beta));
    const auto q = thresholds(geo.boundary_point(geo.low(alpha, beta), beta - 1), FixedEnd::Start, top, p);
    for (int j = 1; j <= n; ++j) {
      const int x = top[static_cast<std::size_t>(j - 1)].x;
      if (x == q.d1 || x == q.d2 || x == q.d3 || x == q.d4) add(geo.boundary_point(upper, j));
    }
  }
  return out;
}

}  // namespace tarskiq
