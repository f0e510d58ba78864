#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tarskiq/herringbone.hpp"
#include "tarskiq/query_problem.hpp"
#include "tarskiq/symbol.hpp"

using namespace tarskiq;

namespace {

std::vector<Point> pts(std::initializer_list<Point> l) { return l; }

bool on_line(const GridLine& g, const Point& p) {
  return std::find(g.points.begin(), g.points.end(), p) != g.points.end();
}

struct Family {
  SpineGeometry geo;
  std::vector<InstanceParams> params;
  std::vector<LatticeFn> fns;

  explicit Family(int n) : geo(n), params(family_params(geo)) {
    for (const auto& p : params) fns.push_back(build_instance(geo, p));
  }
};

}  // namespace

TEST_CASE("grid line examples") {
  CHECK(grid_line({1, 1}, {1, 4}).points == pts({{1, 1}, {1, 2}, {1, 3}, {1, 4}}));
  CHECK(grid_line({1, 1}, {3, 3}).points == pts({{1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}}));
  CHECK(grid_line({2, 5}, {2, 5}).points == pts({{2, 5}}));
  CHECK_THROWS_AS(grid_line({2, 1}, {1, 3}), Error);
}

TEST_CASE("grid lines are monotone paths between their endpoints") {
  testkit::Gen gen(61);
  for (int trial = 0; trial < 500; ++trial) {
    const Point u{gen.int_in(1, 20), gen.int_in(1, 20)};
    const Point v{u.x + gen.int_in(0, 20), u.y + gen.int_in(0, 20)};
    const auto g = grid_line(u, v);
    REQUIRE(g.points.size() == static_cast<std::size_t>(v.x + v.y - u.x - u.y + 1));
    CHECK(g.points.front() == u);
    CHECK(g.points.back() == v);
    for (std::size_t k = 1; k < g.points.size(); ++k) {
      const int dx = g.points[k].x - g.points[k - 1].x;
      const int dy = g.points[k].y - g.points[k - 1].y;
      CHECK(((dx == 1 && dy == 0) || (dx == 0 && dy == 1)));
    }
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const int c = u.x + u.y + static_cast<int>(k);
      CHECK(line_point(u, v, c) == g.points[k]);
    }
  }
}

TEST_CASE("grid line x-coordinate is monotone in either endpoint, n = 3 boundaries") {
  const SpineGeometry geo(3);
  for (int i = 1; i <= 3; ++i) {
    const auto starts = geo.boundary(geo.bound(i));
    const auto ends = geo.boundary(geo.bound(i + 1));
    for (const auto& v : ends) {
      for (std::size_t a = 0; a + 1 < starts.size(); ++a) {
        for (int c = geo.bound(i); c <= geo.bound(i + 1); ++c) {
          CHECK(line_point(starts[a], v, c).x <= line_point(starts[a + 1], v, c).x);
        }
      }
    }
    for (const auto& u : starts) {
      for (std::size_t a = 0; a + 1 < ends.size(); ++a) {
        for (int c = geo.bound(i); c <= geo.bound(i + 1); ++c) {
          CHECK(line_point(u, ends[a], c).x <= line_point(u, ends[a + 1], c).x);
        }
      }
    }
  }
}

TEST_CASE("geometry constants") {
  const SpineGeometry g3(3);
  CHECK(g3.n_prime() == 33);
  CHECK(g3.bound(1) == 4);
  CHECK(g3.bound(2) == 24);
  CHECK(g3.bound(4) == 64);
  CHECK(g3.boundary(4) == pts({{1, 3}, {2, 2}, {3, 1}}));
  CHECK(SpineGeometry(2).n_prime() == 10);
  CHECK_THROWS_AS(SpineGeometry(1), Error);
  CHECK_THROWS_AS(g3.bound(5), Error);
  CHECK_THROWS_AS(g3.boundary_point(4, 4), Error);
}

TEST_CASE("region sums and boundary sets follow their closed forms, n = 2..6") {
  for (int n = 2; n <= 6; ++n) {
    const SpineGeometry geo(n);
    CHECK(geo.n_prime() == n * (n * n + n - 1));
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n + 2; ++j) {
        CHECK(geo.low(i, j) == 2 * (n - 1) * ((n + 2) * (i - 1) + j - 1) + n + 1);
        if (j <= n + 1) CHECK(geo.high(i, j) == geo.low(i, j + 1));
      }
      CHECK(geo.bound(i) == geo.low(i, 1));
    }
    CHECK(geo.bound(n + 1) == geo.high(n, n + 2));
    CHECK(geo.bound(n + 1) == 2 * geo.n_prime() - n + 1);
    for (int c = geo.low(1, 1); c <= geo.bound(n + 1); c += 2 * (n - 1)) {
      const int t = (c - n - 1) / (2 * (n - 1));
      const auto b = geo.boundary(c);
      REQUIRE(b.size() == static_cast<std::size_t>(n));
      for (int j = 1; j <= n; ++j) {
        CHECK(b[j - 1] == Point{(n - 1) * t + j, (n - 1) * t + n + 1 - j});
        CHECK(geo.boundary_point(c, j) == b[j - 1]);
      }
    }
    for (int i = 1; i <= n + 1; ++i) CHECK(geo.boundary_index(geo.bound(i)) == i);
    CHECK_FALSE(geo.boundary_index(geo.bound(1) + 1).has_value());
  }
}

TEST_CASE("chunked spines thread their boundary points, every C for n = 2, 3") {
  for (int n = 2; n <= 3; ++n) {
    const SpineGeometry geo(n);
    std::set<std::vector<int>> seen;
    for (const auto& p : family_params(geo)) {
      if (!seen.insert(p.c).second) continue;
      const auto s = chunked_spine(geo, p.c);
      REQUIRE(s.vertices.size() == static_cast<std::size_t>(2 * geo.n_prime() - 1));
      CHECK(s.vertices.front() == Point{1, 1});
      CHECK(s.vertices.back() == Point{geo.n_prime(), geo.n_prime()});
      for (std::size_t k = 0; k < s.vertices.size(); ++k) {
        CHECK(s.vertices[k].x + s.vertices[k].y == static_cast<int>(k) + 2);
        if (k > 0) CHECK(leq(s.vertices[k - 1], s.vertices[k]));
      }
      for (int i = 1; i <= n + 1; ++i) {
        const Point b = geo.boundary_point(geo.bound(i), p.c[i - 1]);
        CHECK(s.vertices[geo.bound(i) - 2] == b);
      }
    }
    CHECK(seen.size() == static_cast<std::size_t>(std::pow(n, n + 1)));
  }
  CHECK_THROWS_AS(chunked_spine(SpineGeometry(2), {1, 2}), Error);
  CHECK_THROWS_AS(chunked_spine(SpineGeometry(2), {1, 3, 1}), Error);
}

TEST_CASE("herringbone on a hand-built spine") {
  const Spine s{{}, pts({{1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}})};
  const auto f = herringbone(s, 3, 4);  // fixed point (2,2)
  CHECK(f({1, 3}) == Point{2, 2});      // above the spine
  CHECK(f({3, 1}) == Point{2, 2});      // below the spine
  CHECK(f({1, 1}) == Point{2, 1});
  CHECK(f({2, 1}) == Point{2, 2});
  CHECK(f({2, 2}) == Point{2, 2});
  CHECK(f({3, 3}) == Point{3, 2});
  CHECK(f({3, 2}) == Point{2, 2});
  CHECK(check_monotone(f).monotone);
  CHECK(brute_fixed_points(f) == pts({{2, 2}}));
}

TEST_CASE("instance family is sound and has distinct members, n = 2, 3") {
  for (int n = 2; n <= 3; ++n) {
    const Family fam(n);
    const auto expect = static_cast<std::size_t>(std::pow(n, n + 1) * (n + 1));
    REQUIRE(fam.fns.size() == expect);
    std::set<std::string> distinct;
    for (std::size_t k = 0; k < fam.fns.size(); ++k) {
      const auto& f = fam.fns[k];
      const auto& p = fam.params[k];
      CHECK(check_monotone(f).monotone);
      CHECK(brute_fixed_points(f) == pts({fam.geo.boundary_point(fam.geo.bound(p.i), p.c[p.i - 1])}));
      distinct.insert(f.to_json());
    }
    CHECK(distinct.size() == expect);
  }
}

TEST_CASE("family parameters are ordered i-major with C_1 most significant") {
  const auto ps = family_params(SpineGeometry(2));
  REQUIRE(ps.size() == 24);
  CHECK(ps[0].i == 1);
  CHECK(ps[0].c == std::vector<int>{1, 1, 1});
  CHECK(ps[1].c == std::vector<int>{1, 1, 2});
  CHECK(ps[4].c == std::vector<int>{2, 1, 1});
  CHECK(ps[8].i == 2);
  CHECK(ps[0].sidecar_json(2) == R"({"C":[1,1,1],"i":1,"n":2})");
}

TEST_CASE("NOS correspondence") {
  const SpineGeometry g3(3);
  const InstanceParams p{{1, 2, 1, 3}, 2};
  CHECK(render_instance(nos_correspondence(g3, p)) == "UP LT LT RT ST LT DN LT LT RT RT DN");

  for (int n = 2; n <= 3; ++n) {
    const SpineGeometry geo(n);
    const auto nos = make_nos(n + 1, n);
    std::set<std::size_t> hit;
    for (const auto& q : family_params(geo)) {
      const auto x = nos->find(nos_correspondence(geo, q));
      REQUIRE(x.has_value());
      CHECK(nos->answer(*x) == Letter::index(q.i));
      hit.insert(*x);
    }
    CHECK(hit.size() == nos->size());
  }
}

TEST_CASE("Tarski boundary queries reproduce NOS distinguishers, n = 2") {
  const Family fam(2);
  const auto nos = make_nos(3, 2);
  std::vector<std::size_t> image;
  for (const auto& p : fam.params) image.push_back(*nos->find(nos_correspondence(fam.geo, p)));
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Point b = fam.geo.boundary_point(fam.geo.bound(i), j);
      const auto d = distinguisher(*nos, (i - 1) * 2 + j);
      for (std::size_t x = 0; x < fam.fns.size(); ++x) {
        for (std::size_t y = 0; y < fam.fns.size(); ++y) {
          const bool tarski = fam.fns[x](b) != fam.fns[y](b);
          CHECK(d(image[x], image[y]) == Rational(tarski ? 1 : 0));
        }
      }
    }
  }
}

TEST_CASE("thresholds") {
  const SpineGeometry g3(3);
  const auto b4 = g3.boundary(4);
  const auto t = thresholds({1, 1}, FixedEnd::Start, b4, {2, 2});
  CHECK(t.d1 == 1);
  CHECK(t.d4 == 2);

  const auto at_end = thresholds({1, 1}, FixedEnd::Start, b4, {1, 1});
  CHECK(at_end.d1 == 0);
  CHECK(at_end.d4 == 3);
}

TEST_CASE("threshold bands are contiguous and ordered over chunk 1, n = 3") {
  const SpineGeometry geo(3);
  const int lo = geo.bound(1);
  const int hi = geo.bound(2);
  const auto ends = geo.boundary(hi);
  std::size_t checked = 0;
  for (const auto& u : geo.boundary(lo)) {
    for (int x = 1; x <= geo.n_prime(); ++x) {
      for (int y = 1; y <= geo.n_prime(); ++y) {
        if (x + y < lo || x + y > hi) continue;
        ThresholdQuad q;
        REQUIRE_NOTHROW(q = thresholds(u, FixedEnd::Start, ends, {x, y}));
        CHECK(q.d1 <= q.d2);
        CHECK(q.d2 <= q.d4);
        CHECK(q.d1 <= q.d3);
        CHECK(q.d3 <= q.d4);
        // Through band: exactly the candidates whose line passes the point.
        for (const auto& v : ends) {
          const bool through = line_point(u, v, x + y) == Point{x, y};
          CHECK(through == (q.d1 < v.x && v.x <= q.d4));
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("region anchors") {
  const SpineGeometry g3(3);
  const auto a = region_anchor(g3, {3, 3});
  CHECK(a.line == 2);
  CHECK(on_line(grid_line({2, 2}, {4, 4}), {3, 3}));
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) CHECK(region_anchor(g3, g3.boundary_point(g3.bound(i), j)).line == j);
  }
  CHECK_FALSE(in_tube(g3, {1, 33}));
  CHECK_THROWS_AS(region_anchor(g3, {1, 33}), Error);
}

TEST_CASE("every tube point has a consistent anchor, n = 2, 3") {
  for (int n = 2; n <= 3; ++n) {
    const SpineGeometry geo(n);
    std::size_t tube = 0;
    for (int x = 1; x <= geo.n_prime(); ++x) {
      for (int y = 1; y <= geo.n_prime(); ++y) {
        const int s = x + y;
        if (s < geo.bound(1) || s > geo.bound(n + 1) || !in_tube(geo, {x, y})) continue;
        ++tube;
        const auto a = region_anchor(geo, {x, y});
        CHECK(a.line >= 1);
        CHECK(a.line <= n);
        CHECK(a.chunk >= 1);
        CHECK(a.chunk <= n);
        const auto line = grid_line(geo.boundary_point(geo.bound(a.chunk), a.line),
                                    geo.boundary_point(geo.bound(a.chunk + 1), a.line));
        CHECK(on_line(line, {x, y}));
      }
    }
    // Each boundary-to-boundary line family covers n points per sum.
    CHECK(tube == static_cast<std::size_t>(n * (geo.bound(n + 1) - geo.bound(1) + 1)));
  }
}

TEST_CASE("region anchors do not depend on which boundary pair spans the chunk, n = 2") {
  // Any line between B^c_j and B^d_j with c, d chunk-boundary sums of the same
  // chunk passes through the anchored points of that line.
  const SpineGeometry geo(2);
  for (int a = 1; a <= 2; ++a) {
    for (int j = 1; j <= 2; ++j) {
      const auto line = grid_line(geo.boundary_point(geo.bound(a), j), geo.boundary_point(geo.bound(a + 1), j));
      for (const auto& p : line.points) CHECK(region_anchor(geo, p).line == j);
    }
  }
}

TEST_CASE("covering sets") {
  const SpineGeometry g3(3);
  const auto corner = covering_set(g3, {1, 33});
  CHECK(corner.kind == CoverCase::Outside);
  CHECK(corner.points.empty());
  const Point b = g3.boundary_point(g3.bound(2), 3);
  const auto self = covering_set(g3, b);
  CHECK(self.kind == CoverCase::Boundary);
  CHECK(self.points == pts({b}));
  CHECK_THROWS_AS(covering_set(g3, {0, 1}), Error);
}

TEST_CASE("covering property holds exhaustively for n = 2") {
  const Family fam(2);
  const int np = fam.geo.n_prime();
  std::size_t pairs = 0;
  for (int x = 1; x <= np; ++x) {
    for (int y = 1; y <= np; ++y) {
      const Point p{x, y};
      const auto cover = covering_set(fam.geo, p);
      CHECK(cover.points.size() <= 7);
      for (std::size_t f = 0; f < fam.fns.size(); ++f) {
        for (std::size_t g = f + 1; g < fam.fns.size(); ++g) {
          ++pairs;
          if (fam.fns[f](p) == fam.fns[g](p)) continue;
          const bool witnessed = std::any_of(cover.points.begin(), cover.points.end(),
                                             [&](const Point& v) { return fam.fns[f](v) != fam.fns[g](v); });
          CAPTURE(p.to_string());
          CAPTURE(f);
          CAPTURE(g);
          CHECK(witnessed);
        }
      }
    }
  }
  CHECK(pairs == 100u * 276u);
}

TEST_CASE("covering sets stay within seven boundary points, n = 3") {
  const SpineGeometry geo(3);
  std::map<CoverCase, int> kinds;
  for (int x = 1; x <= geo.n_prime(); ++x) {
    for (int y = 1; y <= geo.n_prime(); ++y) {
      const auto c = covering_set(geo, {x, y});
      ++kinds[c.kind];
      CHECK(c.points.size() <= 7);
      for (const auto& v : c.points) CHECK(geo.boundary_index(v.x + v.y).has_value());
    }
  }
  for (auto k : {CoverCase::Outside, CoverCase::Boundary, CoverCase::Prefix, CoverCase::Suffix, CoverCase::Chunk}) {
    CAPTURE(cover_case_name(k));
    CHECK(kinds[k] > 0);
  }
}
