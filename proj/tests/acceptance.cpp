// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime limits are fixed here and are not
// configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tarskiq/adversary.hpp"
#include "tarskiq/herringbone.hpp"
#include "tarskiq/lab.hpp"
#include "tarskiq/lattice.hpp"
#include "tarskiq/query_problem.hpp"
#include "tarskiq/spectral.hpp"

using namespace tarskiq;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 for none
  std::function<Verdict()> run;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::shared_ptr<const SearchLabeling> hsos_lab(int m) {
  return std::make_shared<const SearchLabeling>(hsos_labeling(make_hsos(m)));
}

std::vector<InnerSpec> hilbert_inner(int a, int b) {
  return std::vector<InnerSpec>(static_cast<std::size_t>(a), InnerSpec{hsos_lab(b), hilbert_tile(b)});
}

// ||Γ ∘ D_i|| over the problem's own distinguisher.
double masked_norm(const AdversaryMatrix& g, int position) {
  const auto& p = *g.problem;
  const auto op = SymmetricOperator::masked(
      g.matrix, [&](std::size_t r, std::size_t c) { return p.at(r, position) != p.at(c, position); });
  return spectral_norm(op).norm;
}

double tile_masked_norm(const Tile& t, int position) {
  const auto at = static_cast<std::size_t>(position - 1);
  const auto op = SymmetricOperator::masked(
      t.matrix, [at](std::size_t r, std::size_t c) { return std::min(r, c) <= at && at <= std::max(r, c); });
  return spectral_norm(op).norm;
}

struct Family {
  SpineGeometry geo;
  std::vector<InstanceParams> params;
  std::vector<LatticeFn> fns;

  explicit Family(int n) : geo(n), params(family_params(geo)) {
    for (const auto& p : params) fns.push_back(build_instance(geo, p));
  }
};

// ----------------------------------------------------------------------

Verdict hilbert_bounds() {
  double worst_position = 0.0;
  double worst_slack = 1e300;
  for (int m = 1; m <= 256; ++m) {
    const auto tile = hilbert_tile(m);
    const auto op = SymmetricOperator::from_dense(tile.matrix);
    double harmonic = 0.0;
    for (int k = 1; k <= (m + 1) / 2; ++k) harmonic += 1.0 / k;
    const double norm = spectral_norm(op).norm;
    worst_slack = std::min(worst_slack, norm - harmonic);
    if (norm < harmonic - 1e-8) return {false, "m=" + std::to_string(m) + ": ||A_m|| = " + fmt(norm, 12) + " < " + fmt(harmonic, 12)};
    for (int i = 1; i <= m; ++i) {
      const auto at = static_cast<std::size_t>(i - 1);
      const auto masked =
          op.filtered([at](std::size_t r, std::size_t c) { return std::min(r, c) <= at && at <= std::max(r, c); });
      const double got = spectral_norm(masked).norm;
      worst_position = std::max(worst_position, got);
      if (got > 2.0 * std::numbers::pi + 1e-8) {
        return {false, "m=" + std::to_string(m) + ", i=" + std::to_string(i) + ": ||A_m o D_i|| = " + fmt(got, 12)};
      }
    }
  }
  return {true, "max ||A_m o D_i|| = " + fmt(worst_position) + " <= 2pi; min ||A_m|| - H = " + fmt(worst_slack)};
}

Verdict numerator_identity() {
  double worst = 0.0;
  std::size_t cases = 0;
  auto one = [&](const AdversaryMatrix& f, int a, int b) -> std::optional<std::string> {
    const auto inner = hilbert_inner(a, b);
    const auto h = compose_adversary(f, inner);
    const double want = spectral_norm(f.matrix).norm * std::pow(spectral_norm(inner[0].tile.matrix).norm, a);
    const double got = spectral_norm(h.matrix).norm;
    const double e = rel_err(got, want);
    worst = std::max(worst, e);
    ++cases;
    if (e > 1e-6) return "a=" + std::to_string(a) + ", b=" + std::to_string(b) + ": relative error " + fmt(e);
    return std::nullopt;
  };
  for (int a = 2; a <= 4; ++a) {
    for (int b = 2; b <= 4; ++b) {
      if (auto bad = one(os_adversary(a), a, b)) return {false, *bad};
    }
  }
  for (std::uint64_t k = 0; k < 20; ++k) {
    const int a = 2 + static_cast<int>(k % 3);
    const int b = 2 + static_cast<int>((k / 3) % 3);
    if (auto bad = one(random_adversary(make_os(a), k), a, b)) return {false, "random seed " + std::to_string(k) + ", " + *bad};
  }
  return {true, std::to_string(cases) + " compositions, max relative error " + fmt(worst, 3)};
}

Verdict denominator_identity() {
  std::size_t entries = 0;
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      const auto f = os_adversary(a);
      const auto inner = hilbert_inner(a, b);
      for (int i = 1; i <= a * b; ++i) {
        const auto c = check_distinguisher_identity(f, inner, i);
        entries += c.entries_checked;
        if (c.mismatches) {
          return {false, "a=" + std::to_string(a) + ", b=" + std::to_string(b) + ", i=" + std::to_string(i) + ": " +
                             c.first_mismatch.value_or("mismatch")};
        }
      }
    }
  }
  double worst = 0.0;
  std::size_t positions = 0;
  for (int a = 2; a <= 4; ++a) {
    for (int b = 2; b <= 4; ++b) {
      const auto f = os_adversary(a);
      const auto inner = hilbert_inner(a, b);
      const auto h = compose_adversary(f, inner);
      const double na = spectral_norm(inner[0].tile.matrix).norm;
      for (int i = 1; i <= a * b; ++i) {
        const auto [p, q] = block_of_position(*h.problem, i);
        const double want = masked_norm(f, p) * tile_masked_norm(inner[p - 1].tile, q) * std::pow(na, a - 1);
        const double e = rel_err(masked_norm(h, i), want);
        worst = std::max(worst, e);
        ++positions;
        if (e > 1e-6) {
          return {false, "a=" + std::to_string(a) + ", b=" + std::to_string(b) + ", i=" + std::to_string(i) +
                             ": relative error " + fmt(e)};
        }
      }
    }
  }
  return {true, std::to_string(entries) + " exact entries; " + std::to_string(positions) +
                    " positions, max relative error " + fmt(worst, 3)};
}

Verdict composition_theorem() {
  double min_margin = 1e300;
  for (int a = 2; a <= 4; ++a) {
    for (int b = 2; b <= 4; ++b) {
      const double sa_h = sa_ratio(compose_adversary(os_adversary(a), hilbert_inner(a, b))).sa_value;
      const double sa_f = sa_ratio(os_adversary(a)).sa_value;
      const double sa_g = tile_ratio(hilbert_tile(b), *hsos_lab(b)).sa_value;
      const double margin = sa_h - sa_f * sa_g;
      min_margin = std::min(min_margin, margin);
      if (margin < -1e-6) {
        return {false, "a=" + std::to_string(a) + ", b=" + std::to_string(b) + ": " + fmt(sa_h) + " < " + fmt(sa_f) +
                           " * " + fmt(sa_g)};
      }
    }
  }
  return {true, "9 compositions, min SA(h) - SA(f) SA(g) = " + fmt(min_margin)};
}

Verdict symmetrization() {
  double worst_den = 0.0;
  double worst_gain = 1e300;
  for (int m = 1; m <= 4; ++m) {
    const auto lab = hsos_lab(m);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::string where = "m=" + std::to_string(m) + ", seed=" + std::to_string(seed);
      const auto s = symmetrize(random_adversary(lab->problem(), seed), lab);
      const auto& out = s.gamma.matrix;
      const auto& sl = *s.labeling;
      std::vector<std::size_t> perm(sl.sigmas().size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (std::size_t x = 0; x < out.dim(); ++x) {
          for (std::size_t y = 0; y < out.dim(); ++y) {
            const auto px = sl.instance_at(perm[sl.sigma_of(x)], sl.variant_of(x));
            const auto py = sl.instance_at(perm[sl.sigma_of(y)], sl.variant_of(y));
            if (out(px, py) != out(x, y)) return {false, where + ": not uniform at (" + std::to_string(x) + ", " + std::to_string(y) + ")"};
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      const auto r = sa_ratio(s.gamma);
      worst_den = std::max(worst_den, r.denominator);
      worst_gain = std::min(worst_gain, r.numerator - s.normalized_norm);
      if (r.numerator < s.normalized_norm - 1e-6) return {false, where + ": ||G'|| = " + fmt(r.numerator) + " < " + fmt(s.normalized_norm)};
      if (r.denominator > 1.0 + 1e-6) return {false, where + ": max ||G' o D_i|| = " + fmt(r.denominator)};
    }
  }
  return {true, "20 matrices exactly uniform; min ||G'|| - ||G|| = " + fmt(worst_gain) + ", max ||G' o D_i|| = " +
                    fmt(worst_den, 10)};
}

Verdict embedding() {
  std::size_t compared = 0;
  for (int n = 2; n <= 3; ++n) {
    const Family fam(n);
    const auto nos = make_nos(n + 1, n);
    std::vector<std::size_t> image;
    for (const auto& p : fam.params) image.push_back(*nos->find(nos_correspondence(fam.geo, p)));
    if (std::set<std::size_t>(image.begin(), image.end()).size() != nos->size()) {
      return {false, "n=" + std::to_string(n) + ": correspondence is not a bijection"};
    }
    for (int i = 1; i <= n + 1; ++i) {
      for (int j = 1; j <= n; ++j) {
        const Point b = fam.geo.boundary_point(fam.geo.bound(i), j);
        const int pos = (i - 1) * n + j;
        for (std::size_t x = 0; x < fam.fns.size(); ++x) {
          for (std::size_t y = 0; y < fam.fns.size(); ++y) {
            const bool tarski = fam.fns[x](b) != fam.fns[y](b);
            const bool nos_d = nos->at(image[x], pos) != nos->at(image[y], pos);
            ++compared;
            if (tarski != nos_d) {
              return {false, "n=" + std::to_string(n) + ", i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                 ": mismatch between instances " + std::to_string(x) + " and " + std::to_string(y)};
            }
          }
        }
      }
    }
  }
  return {true, std::to_string(compared) + " entries, 0 mismatches over 24 + 324 instances"};
}

// Pairs differing at p without a witness in V exist iff two instances agree
// on all of V but not at p.
std::optional<std::string> cover_point(const Family& fam, const Point& p, std::size_t& pairs, std::size_t& max_v) {
  const auto cover = covering_set(fam.geo, p);
  max_v = std::max(max_v, cover.points.size());
  if (cover.points.size() > 7) return "|V| = " + std::to_string(cover.points.size()) + " at " + p.to_string();
  std::map<std::vector<Point>, Point> seen;
  for (std::size_t k = 0; k < fam.fns.size(); ++k) {
    std::vector<Point> sig;
    for (const auto& v : cover.points) sig.push_back(fam.fns[k](v));
    const auto [it, fresh] = seen.emplace(std::move(sig), fam.fns[k](p));
    if (!fresh && it->second != fam.fns[k](p)) {
      return "instances differ at " + p.to_string() + " but agree on V (" + cover_case_name(cover.kind) + ")";
    }
  }
  pairs += fam.fns.size() * (fam.fns.size() - 1) / 2;
  return std::nullopt;
}

Verdict covering() {
  std::size_t pairs = 0;
  std::size_t max_v = 0;
  std::size_t points = 0;
  {
    const Family fam(2);
    for (int x = 1; x <= fam.geo.n_prime(); ++x) {
      for (int y = 1; y <= fam.geo.n_prime(); ++y) {
        ++points;
        if (auto bad = cover_point(fam, {x, y}, pairs, max_v)) return {false, "n=2: " + *bad};
      }
    }
  }
  const Family fam(3);
  std::set<int> edges;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 5; ++j) edges.insert(fam.geo.low(i, j));
  }
  edges.insert(fam.geo.bound(4));
  std::vector<Point> interior;
  for (int x = 1; x <= fam.geo.n_prime(); ++x) {
    for (int y = 1; y <= fam.geo.n_prime(); ++y) {
      if (edges.count(x + y)) {
        ++points;
        if (auto bad = cover_point(fam, {x, y}, pairs, max_v)) return {false, "n=3 boundary sums: " + *bad};
      } else {
        interior.push_back({x, y});
      }
    }
  }
  std::mt19937_64 rng(0);
  std::shuffle(interior.begin(), interior.end(), rng);
  interior.resize(200);
  for (const auto& p : interior) {
    ++points;
    if (auto bad = cover_point(fam, p, pairs, max_v)) return {false, "n=3 sample: " + *bad};
  }
  return {true, std::to_string(points) + " points, " + std::to_string(pairs) + " instance pairs, max |V| = " +
                    std::to_string(max_v)};
}

Verdict family_soundness() {
  std::size_t count = 0;
  for (int n = 2; n <= 3; ++n) {
    const Family fam(n);
    for (std::size_t k = 0; k < fam.fns.size(); ++k) {
      const auto& p = fam.params[k];
      const std::string where = "n=" + std::to_string(n) + ", instance " + std::to_string(k);
      if (!check_monotone(fam.fns[k]).monotone) return {false, where + " is not monotone"};
      const auto fps = brute_fixed_points(fam.fns[k]);
      const Point want = fam.geo.boundary_point(fam.geo.bound(p.i), p.c[p.i - 1]);
      if (fps.size() != 1 || fps[0] != want) return {false, where + ": fixed points differ from " + want.to_string()};
      ++count;
    }
  }
  if (count != 348) return {false, std::to_string(count) + " instances instead of 348"};
  return {true, "348 instances monotone with the expected unique fixed point"};
}

Verdict solver() {
  std::ostringstream detail;
  for (int n = 2; n <= 3; ++n) {
    const Family fam(n);
    const int np = fam.geo.n_prime();
    const auto budget = nested_query_budget(np);
    std::uint64_t max_q = 0;
    for (std::size_t k = 0; k < fam.fns.size(); ++k) {
      const auto f = std::make_shared<const LatticeFn>(fam.fns[k]);
      Oracle bo(f);
      Oracle no(f);
      const auto b = brute_solve(bo);
      const auto r = nested_solve(no);
      const std::string where = "n'=" + std::to_string(np) + ", instance " + std::to_string(k);
      if (b.queries_used != static_cast<std::uint64_t>(np) * np) return {false, where + ": brute used " + std::to_string(b.queries_used)};
      if (r.fell_back || r.fixed_point != b.fixed_point) return {false, where + ": nested answer " + r.fixed_point.to_string()};
      if (r.queries_used > budget) return {false, where + ": nested used " + std::to_string(r.queries_used) + " > " + std::to_string(budget)};
      max_q = std::max(max_q, r.queries_used);
    }
    detail << (n == 2 ? "" : "; ") << "T(" << np << "): max " << max_q << " <= " << budget << " queries";
  }
  return {true, detail.str()};
}

Verdict bound_tables() {
  LabOptions opts;
  const auto tarski = bound_table({"tarski", {2, 3, 4}, {}}, opts);
  const double factor = epsilon_factor(1.0 / 3.0);
  std::ostringstream detail;
  double prev = 0.0;
  for (const auto& row : tarski) {
    const auto& r = row.report;
    if (!(r.query_lower_bound > 0.0)) return {false, "tarski n=" + row.size + ": nonpositive bound"};
    if (r.query_lower_bound < prev) return {false, "tarski n=" + row.size + ": bound decreased"};
    if (rel_err(r.query_lower_bound, r.numerator / r.denominator * factor) > 1e-12) {
      return {false, "tarski n=" + row.size + ": lb is not sa * (1 - 2 sqrt(eps (1 - eps)))"};
    }
    prev = r.query_lower_bound;
    detail << "tarski " << row.size << ": " << fmt(r.query_lower_bound) << "; ";
  }
  const auto os = bound_table({"os", {}, {}}, opts);
  std::vector<double> xs, ys;
  double last = 0.0;
  for (const auto& row : os) {
    if (row.report.sa_value < last) return {false, "os m=" + row.size + ": SA decreased"};
    last = row.report.sa_value;
    xs.push_back(std::log(std::stod(row.size)));
    ys.push_back(row.report.sa_value);
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 0.0;
  detail << "os slope vs ln m = " << fmt(slope) << ", R^2 = " << fmt(r2);
  if (!(slope > 0.0) || !(r2 > 0.95)) return {false, detail.str()};
  return {true, detail.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Hilbert tile bounds, m <= 256", 60.0, hilbert_bounds},
      {2, "Composition numerator identity", 120.0, numerator_identity},
      {3, "Composition denominator identity", 0.0, denominator_identity},
      {4, "Composition theorem on NOS", 0.0, composition_theorem},
      {5, "Symmetrization", 0.0, symmetrization},
      {6, "Embedding exactness", 0.0, embedding},
      {7, "Seven-point covering", 0.0, covering},
      {8, "Instance family soundness", 60.0, family_soundness},
      {9, "Solver agreement and query budget", 0.0, solver},
      {10, "End-to-end bound tables", 0.0, bound_tables},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.pass && c.time_limit > 0.0 && secs >= c.time_limit) {
      v = {false, v.detail + "; over the " + fmt(c.time_limit) + " s limit"};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
