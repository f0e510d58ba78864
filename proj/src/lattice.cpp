#include "tarskiq/lattice.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"
#include "tarskiq/error.hpp"

namespace tarskiq {

std::string Point::to_string() const { return "(" + std::to_string(x) + ", " + std::to_string(y) + ")"; }

LatticeFn::LatticeFn(int n, int k, std::vector<Point> values) : n_(n), k_(k), values_(std::move(values)) {
  if (n_ < 1) invalid_argument("lattice function: n must be positive");
  if (k_ != 1 && k_ != 2) invalid_argument("lattice function: only k = 1 and k = 2 are supported");
  const std::size_t expect = k_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
  if (values_.size() != expect) {
    invalid_argument("lattice function: " + std::to_string(values_.size()) + " cells, expected " +
                     std::to_string(expect));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& v = values_[i];
    if (v.x < 1 || v.x > n_ || v.y < 1 || v.y > (k_ == 1 ? 1 : n_)) {
      invalid_argument("lattice function: value " + v.to_string() + " at " + point(i).to_string() +
                       " is out of range");
    }
  }
}

std::size_t LatticeFn::index(const Point& v) const {
  if (v.x < 1 || v.x > n_ || v.y < 1 || v.y > (k_ == 1 ? 1 : n_)) {
    invalid_argument("lattice function: vertex " + v.to_string() + " outside the lattice");
  }
  return k_ == 1 ? static_cast<std::size_t>(v.x - 1)
                 : static_cast<std::size_t>(v.x - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v.y - 1);
}

Point LatticeFn::point(std::size_t index) const {
  if (k_ == 1) return {static_cast<int>(index) + 1, 1};
  return {static_cast<int>(index / n_) + 1, static_cast<int>(index % n_) + 1};
}

std::string LatticeFn::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["k"] = k_;
  auto values = nlohmann::json::array();
  for (const auto& v : values_) {
    values.push_back(k_ == 1 ? nlohmann::json::array({v.x}) : nlohmann::json::array({v.x, v.y}));
  }
  j["values"] = std::move(values);
  return j.dump();
}

LatticeFn LatticeFn::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    invalid_argument(std::string("lattice file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("values")) {
    invalid_argument("lattice file: expected an object with \"n\" and \"values\"");
  }
  if (!j["n"].is_number_integer()) invalid_argument("lattice file: \"n\" must be an integer");
  const int n = j["n"].get<int>();
  const int k = j.contains("k") ? j["k"].get<int>() : 2;
  if (n < 1) invalid_argument("lattice file: n must be positive");
  if (k != 1 && k != 2) invalid_argument("lattice file: k must be 1 or 2");
  const auto& vals = j["values"];
  if (!vals.is_array()) invalid_argument("lattice file: \"values\" must be an array");
  const std::size_t expect = k == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
  auto cell_name = [&](std::size_t i) {
    return k == 1 ? "(" + std::to_string(i + 1) + ")"
                  : Point{static_cast<int>(i / n) + 1, static_cast<int>(i % n) + 1}.to_string();
  };
  if (vals.size() < expect) invalid_argument("lattice file: missing cell " + cell_name(vals.size()));
  if (vals.size() > expect) {
    invalid_argument("lattice file: " + std::to_string(vals.size()) + " cells, expected " + std::to_string(expect));
  }
  std::vector<Point> values;
  values.reserve(expect);
  for (std::size_t i = 0; i < expect; ++i) {
    const auto& v = vals[i];
    if (!v.is_array() || v.size() != static_cast<std::size_t>(k) || !v[0].is_number_integer() ||
        (k == 2 && !v[1].is_number_integer())) {
      invalid_argument("lattice file: malformed cell " + cell_name(i));
    }
    values.push_back({v[0].get<int>(), k == 2 ? v[1].get<int>() : 1});
  }
  return LatticeFn(n, k, std::move(values));
}

Oracle::Oracle(LatticePtr f) : Oracle(f, f ? f->n() : 0, f ? f->k() : 0) {}

Oracle::Oracle(LatticePtr f, int n, int k) : f_(std::move(f)), n_(n), k_(k) {
  if (!f_) invalid_argument("oracle: null lattice function");
}

Oracle Oracle::clamp(LatticePtr f, int n, int k) {
  if (!f) invalid_argument("clamp: null lattice function");
  if (n < f->n() || k < f->k() || (k != 1 && k != 2)) {
    invalid_argument("clamp: cannot embed [" + std::to_string(f->n()) + "]^" + std::to_string(f->k()) + " into [" +
                     std::to_string(n) + "]^" + std::to_string(k));
  }
  return Oracle(std::move(f), n, k);
}

Point Oracle::query(const Point& v) {
  if (v.x < 1 || v.x > n_ || v.y < 1 || v.y > (k_ == 1 ? 1 : n_)) {
    invalid_argument("oracle: vertex " + v.to_string() + " outside the lattice");
  }
  ++queries_;
  const int side = f_->n();
  Point g{std::min(v.x, side), f_->k() == 1 ? 1 : std::min(v.y, side)};
  return (*f_)(g);
}

LatticeFn Oracle::materialize() {
  std::vector<Point> values;
  for (int x = 1; x <= n_; ++x) {
    if (k_ == 1) {
      values.push_back(query({x, 1}));
      continue;
    }
    for (int y = 1; y <= n_; ++y) values.push_back(query({x, y}));
  }
  return LatticeFn(n_, k_, std::move(values));
}

MonotoneCheck check_monotone(const LatticeFn& f) {
  MonotoneCheck out;
  const int ymax = f.k() == 1 ? 1 : f.n();
  for (int x = 1; x <= f.n(); ++x) {
    for (int y = 1; y <= ymax; ++y) {
      const Point a{x, y};
      for (const Point b : {Point{x + 1, y}, Point{x, y + 1}}) {
        if (b.x > f.n() || b.y > ymax) continue;
        if (!leq(f(a), f(b))) {
          out.monotone = false;
          out.witness = std::make_pair(a, b);
          return out;
        }
      }
    }
  }
  return out;
}

std::vector<Point> brute_fixed_points(const LatticeFn& f) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const Point v = f.point(i);
    if (f(v) == v) out.push_back(v);
  }
  return out;
}

const char* algorithm_name(Algorithm a) { return a == Algorithm::Brute ? "brute" : "nested"; }

std::string SolveResult::to_json() const {
  nlohmann::json j;
  j["fixed_point"] = {fixed_point.x, fixed_point.y};
  j["queries_used"] = queries_used;
  j["algorithm"] = algorithm_name(algorithm);
  j["fell_back"] = fell_back;
  return j.dump();
}

SolveResult brute_solve(Oracle& f) {
  const std::uint64_t before = f.queries();
  std::optional<Point> found;
  const int ymax = f.k() == 1 ? 1 : f.n();
  for (int x = 1; x <= f.n(); ++x) {
    for (int y = 1; y <= ymax; ++y) {
      const Point v{x, y};
      if (f.query(v) == v && !found) found = v;
    }
  }
  if (!found) fail(ErrorKind::CheckFailed, "brute_solve: no fixed point; the function is not monotone");
  return SolveResult{*found, f.queries() - before, Algorithm::Brute, false};
}

SolveResult nested_solve(Oracle& f) {
  const std::uint64_t before = f.queries();
  const int ymax = f.k() == 1 ? 1 : f.n();
  Point a{1, 1};
  Point b{f.n(), ymax};
  std::optional<Point> answer;
  while (a.x <= b.x && !answer) {
    const int mid = a.x + (b.x - a.x) / 2;
    int lo = a.y;
    int hi = b.y;
    Point image;
    int z = lo;
    while (true) {
      if (lo > hi) break;
      z = lo + (hi - lo) / 2;
      image = f.query({mid, z});
      if (image.y == z) break;
      if (image.y > z) {
        lo = z + 1;
      } else {
        hi = z - 1;
      }
    }
    if (lo > hi) break;  // invariant broken: f is not monotone on the box
    if (image.x == mid) {
      answer = Point{mid, z};
    } else if (image.x > mid) {
      a = {mid + 1, z};
    } else {
      b = {mid - 1, z};
    }
  }
  if (answer && f.query(*answer) == *answer) {
    return SolveResult{*answer, f.queries() - before, Algorithm::Nested, false};
  }
  auto brute = brute_solve(f);
  return SolveResult{brute.fixed_point, f.queries() - before, Algorithm::Nested, true};
}

LatticeFn random_monotone(int n, int k, std::uint64_t seed) {
  if (n < 1 || (k != 1 && k != 2)) invalid_argument("random_monotone: need n >= 1 and k in {1, 2}");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(1, n);
  const int ymax = k == 1 ? 1 : n;
  std::vector<Point> values(static_cast<std::size_t>(n) * ymax);
  auto at = [&](int x, int y) -> Point& { return values[static_cast<std::size_t>(x - 1) * ymax + (y - 1)]; };
  for (auto& v : values) v = {coord(rng), k == 1 ? 1 : coord(rng)};
  for (int x = 1; x <= n; ++x) {
    for (int y = 1; y <= ymax; ++y) {
      Point& v = at(x, y);
      if (x > 1) v = {std::max(v.x, at(x - 1, y).x), std::max(v.y, at(x - 1, y).y)};
      if (y > 1) v = {std::max(v.x, at(x, y - 1).x), std::max(v.y, at(x, y - 1).y)};
    }
  }
  return LatticeFn(n, k, std::move(values));
}

}  // namespace tarskiq
