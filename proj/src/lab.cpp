#include "tarskiq/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "tarskiq/error.hpp"
#include "tarskiq/parallel.hpp"
#include "tarskiq/symbol.hpp"

namespace tarskiq {

namespace {

struct Outcome {
  std::size_t count = 1;
  std::optional<std::string> failure;
};

struct Check {
  std::string id;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join_points(const std::vector<Point>& pts) {
  std::string s = "[";
  for (std::size_t k = 0; k < pts.size(); ++k) s += (k ? ", " : "") + pts[k].to_string();
  return s + "]";
}

std::string describe_c(const std::vector<int>& c) {
  std::string s = "C=(";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k]);
  return s + ")";
}

std::string describe(const InstanceParams& p) { return describe_c(p.c) + ", i=" + std::to_string(p.i); }

Outcome pass(std::size_t count = 1) { return Outcome{count, std::nullopt}; }
Outcome failed(std::string why) { return Outcome{1, std::move(why)}; }

bool close_rel(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max({std::abs(got), std::abs(want), 1e-300});
}

// Runs the checks on `jobs` threads. A check that throws is a failure whose
// counterexample is the error text.
SuiteReport run_checks(std::string suite, std::vector<Check> checks, int jobs) {
  std::vector<Outcome> outcomes(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t k) {
    try {
      outcomes[k] = checks[k].run();
    } catch (const std::exception& e) {
      outcomes[k] = failed(std::string("error: ") + e.what());
    }
  });
  SuiteReport report;
  report.suite = std::move(suite);
  for (std::size_t k = 0; k < checks.size(); ++k) {
    report.checks_run += outcomes[k].count;
    if (outcomes[k].failure) report.failures.push_back({checks[k].id, *outcomes[k].failure});
  }
  return report;
}

std::vector<int> ns_or(const LabOptions& o, std::vector<int> fallback) {
  return o.n ? std::vector<int>{o.n} : fallback;
}

std::string nid(int n) { return "n=" + std::to_string(n); }

struct Family {
  SpineGeometry geo;
  std::vector<InstanceParams> params;
  std::vector<LatticeFn> members;
};

std::shared_ptr<const Family> build_family(int n) {
  SpineGeometry geo(n);
  auto params = family_params(geo);
  std::vector<LatticeFn> members;
  members.reserve(params.size());
  for (const auto& p : params) members.push_back(build_instance(geo, p));
  return std::make_shared<const Family>(Family{geo, std::move(params), std::move(members)});
}

// Sums that start or end some region, ascending.
std::vector<int> region_sums(const SpineGeometry& geo) {
  std::set<int> sums;
  for (int i = 1; i <= geo.n(); ++i) {
    for (int j = 1; j <= geo.n() + 2; ++j) {
      sums.insert(geo.low(i, j));
      sums.insert(geo.high(i, j));
    }
  }
  return {sums.begin(), sums.end()};
}

std::optional<std::string> path_problem(const std::vector<Point>& pts) {
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const int dx = pts[k].x - pts[k - 1].x;
    const int dy = pts[k].y - pts[k - 1].y;
    if (!((dx == 1 && dy == 0) || (dx == 0 && dy == 1))) {
      return "non-unit step " + pts[k - 1].to_string() + " -> " + pts[k].to_string();
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- geometry

void geometry_checks(int n, std::vector<Check>& out) {
  auto geo = std::make_shared<const SpineGeometry>(n);
  const auto sums = region_sums(*geo);
  const std::string pre = "geometry/" + nid(n);

  for (int c : sums) {
    out.push_back({pre + "/boundary/c=" + std::to_string(c), [geo, c, n]() {
                     const auto b = geo->boundary(c);
                     if (static_cast<int>(b.size()) != n) {
                       return failed("|B^" + std::to_string(c) + "| = " + std::to_string(b.size()));
                     }
                     const int t = (c - n - 1) / (2 * (n - 1));
                     for (int j = 1; j <= n; ++j) {
                       const Point want{(n - 1) * t + j, (n - 1) * t + n + 1 - j};
                       if (b[j - 1] != want) {
                         return failed("B^" + std::to_string(c) + "_" + std::to_string(j) + " = " +
                                       b[j - 1].to_string() + ", formula gives " + want.to_string());
                       }
                     }
                     return pass();
                   }});
  }

  for (std::size_t lo = 0; lo < sums.size(); ++lo) {
    for (std::size_t hi = lo + 1; hi < sums.size(); ++hi) {
      const int c = sums[lo];
      const int d = sums[hi];
      out.push_back({pre + "/monotone/c=" + std::to_string(c) + ",d=" + std::to_string(d), [geo, c, d]() {
                       const auto bc = geo->boundary(c);
                       const auto bd = geo->boundary(d);
                       std::size_t count = 0;
                       for (const auto& u : bc) {
                         for (const auto& v : bd) {
                           if (!leq(u, v)) continue;
                           const auto line = grid_line(u, v);
                           ++count;
                           if (line.points.front() != u || line.points.back() != v) {
                             return failed("grid line " + u.to_string() + " -> " + v.to_string() + " misses an endpoint");
                           }
                           if (auto bad = path_problem(line.points)) {
                             return failed("grid line " + u.to_string() + " -> " + v.to_string() + ": " + *bad);
                           }
                         }
                       }
                       // L(u, v, s)_1 is nondecreasing in either endpoint's x.
                       for (int s = c; s <= d; ++s) {
                         for (std::size_t a = 0; a < bc.size(); ++a) {
                           for (std::size_t k = 1; k < bd.size(); ++k) {
                             ++count;
                             if (line_point(bc[a], bd[k], s).x < line_point(bc[a], bd[k - 1], s).x) {
                               return failed("L(" + bc[a].to_string() + ", v, " + std::to_string(s) +
                                             ") decreases between v = " + bd[k - 1].to_string() + " and " +
                                             bd[k].to_string());
                             }
                           }
                         }
                         for (std::size_t a = 0; a < bd.size(); ++a) {
                           for (std::size_t k = 1; k < bc.size(); ++k) {
                             ++count;
                             if (line_point(bc[k], bd[a], s).x < line_point(bc[k - 1], bd[a], s).x) {
                               return failed("L(u, " + bd[a].to_string() + ", " + std::to_string(s) +
                                             ") decreases between u = " + bc[k - 1].to_string() + " and " +
                                             bc[k].to_string());
                             }
                           }
                         }
                       }
                       return pass(count);
                     }});
    }
  }

  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n + 2; ++j) {
      out.push_back({pre + "/tiling/region=" + std::to_string(i) + "," + std::to_string(j), [geo, i, j, n]() {
                       const int low = geo->low(i, j);
                       const int high = geo->high(i, j);
                       std::set<Point> region;
                       for (const auto& u : geo->boundary(low)) {
                         for (const auto& v : geo->boundary(high)) {
                           if (!leq(u, v)) continue;
                           for (const auto& w : grid_line(u, v).points) region.insert(w);
                         }
                       }
                       std::size_t count = 0;
                       for (const auto& w : region) {
                         const int s = w.x + w.y;
                         const int ell = w.x - static_cast<int>(round_half_up(Rational(s - (n + 1), 2)));
                         ++count;
                         if (ell < 1 || ell > n) return failed(w.to_string() + " has line index " + std::to_string(ell));
                         if (!in_tube(*geo, w)) return failed(w.to_string() + " is in the region but not in the tube");
                         const auto a = region_anchor(*geo, w);
                         const bool on_edge = geo->boundary_index(s).has_value();
                         if (a.line != ell || (!on_edge && (geo->low(a.chunk, a.region) >= s || geo->high(a.chunk, a.region) < s))) {
                           return failed(w.to_string() + " anchored at chunk " + std::to_string(a.chunk) + ", region " +
                                         std::to_string(a.region) + ", line " + std::to_string(a.line));
                         }
                         // Every wider pair of region boundaries spans w on line ell.
                         for (int c1 = 1; c1 <= n; ++c1) {
                           for (int d1 = 1; d1 <= n + 2; ++d1) {
                             if (geo->low(c1, d1) > low) continue;
                             for (int c2 = 1; c2 <= n; ++c2) {
                               for (int d2 = 1; d2 <= n + 2; ++d2) {
                                 if (geo->high(c2, d2) < high) continue;
                                 ++count;
                                 const Point from = geo->boundary_point(geo->low(c1, d1), ell);
                                 const Point to = geo->boundary_point(geo->high(c2, d2), ell);
                                 if (line_point(from, to, s) != w) {
                                   return failed(w.to_string() + " is not on the grid line " + from.to_string() +
                                                 " -> " + to.to_string());
                                 }
                               }
                             }
                           }
                         }
                       }
                       return pass(count);
                     }});
    }
  }

  for (int alpha = 1; alpha <= n; ++alpha) {
    for (int ell = 1; ell <= n; ++ell) {
      out.push_back({pre + "/tube/chunk=" + std::to_string(alpha) + ",line=" + std::to_string(ell), [geo, alpha, ell]() {
                       const auto line = grid_line(geo->boundary_point(geo->bound(alpha), ell),
                                                   geo->boundary_point(geo->bound(alpha + 1), ell));
                       for (const auto& w : line.points) {
                         const auto a = region_anchor(*geo, w);
                         const int s = w.x + w.y;
                         if (a.line != ell || geo->bound(a.chunk) > s || geo->bound(a.chunk + 1) < s) {
                           return failed(w.to_string() + " anchored at chunk " + std::to_string(a.chunk) + ", line " +
                                         std::to_string(a.line));
                         }
                       }
                       return pass(line.points.size());
                     }});
    }
  }

  SpineGeometry g(n);
  for (const auto& p : family_params(g)) {
    if (p.i != 1) break;
    out.push_back({pre + "/spine/" + describe_c(p.c), [geo, p]() {
                     const auto spine = chunked_spine(*geo, p.c);
                     const auto& v = spine.vertices;
                     const int np = geo->n_prime();
                     if (v.size() != static_cast<std::size_t>(2 * np - 1)) {
                       return failed(std::to_string(v.size()) + " vertices");
                     }
                     if (v.front() != Point{1, 1} || v.back() != Point{np, np}) {
                       return failed("runs from " + v.front().to_string() + " to " + v.back().to_string());
                     }
                     if (auto bad = path_problem(v)) return failed(*bad);
                     for (int i = 1; i <= geo->n() + 1; ++i) {
                       const Point want = geo->boundary_point(geo->bound(i), p.c[i - 1]);
                       if (v[static_cast<std::size_t>(geo->bound(i) - 2)] != want) {
                         return failed("misses " + want.to_string() + " on chunk boundary " + std::to_string(i));
                       }
                     }
                     return pass();
                   }});
  }
  for (const auto& p : family_params(g)) {
    out.push_back({pre + "/family/" + describe(p), [geo, p]() {
                     const auto f = build_instance(*geo, p);
                     const auto mono = check_monotone(f);
                     if (!mono.monotone) {
                       return failed("not monotone at " + mono.witness->first.to_string() + " <= " +
                                     mono.witness->second.to_string());
                     }
                     const auto fps = brute_fixed_points(f);
                     const Point want = geo->boundary_point(geo->bound(p.i), p.c[p.i - 1]);
                     if (fps.size() != 1 || fps[0] != want) {
                       return failed("fixed points " + join_points(fps) + ", expected " + want.to_string());
                     }
                     return pass();
                   }});
  }
}

// ------------------------------------------------------------- composition

struct Composition {
  int a;
  int b;
  AdversaryMatrix outer;
  std::vector<InnerSpec> inner;
  AdversaryMatrix h;
  BoundReport h_ratio;
  BoundReport outer_ratio;
  BoundReport tile;
};

void composition_checks(const LabOptions& o, std::vector<Check>& out) {
  const std::vector<int> as = o.a ? std::vector<int>{o.a} : std::vector<int>{2, 3, 4};
  const std::vector<int> bs = o.b ? std::vector<int>{o.b} : std::vector<int>{2, 3, 4};
  RatioOptions ro{o.eps, o.tol, 1};
  for (int a : as) {
    for (int b : bs) {
      const std::string pre = "composition/a=" + std::to_string(a) + ",b=" + std::to_string(b);
      auto hsos = make_hsos(b);
      auto lab = std::make_shared<const SearchLabeling>(hsos_labeling(hsos));
      std::vector<InnerSpec> inner(static_cast<std::size_t>(a), InnerSpec{lab, hilbert_tile(b)});
      auto outer = os_adversary(a);
      auto h = compose_adversary(outer, inner, o.tol);
      RatioOptions wide = ro;
      wide.jobs = o.jobs;
      auto c = std::make_shared<const Composition>(Composition{a, b, outer, inner, h, sa_ratio(h, wide),
                                                               sa_ratio(outer, ro), tile_ratio(inner[0].tile, *lab, ro)});
      const double tile_norm = c->tile.numerator;

      out.push_back({pre + "/numerator", [c, tile_norm]() {
                       const double want = c->outer_ratio.numerator * std::pow(tile_norm, c->a);
                       if (!close_rel(c->h_ratio.numerator, want, 1e-6)) {
                         return failed("||G_h|| = " + fmt(c->h_ratio.numerator) + ", product = " + fmt(want));
                       }
                       return pass();
                     }});
      out.push_back({pre + "/eigenvector", [c, o]() {
                       const auto delta = composed_eigenvector(c->outer, c->inner, *c->h.problem, o.tol);
                       const double lambda = c->h_ratio.numerator;
                       double res2 = 0.0;
                       for (std::size_t r = 0; r < c->h.matrix.dim(); ++r) {
                         double acc = 0.0;
                         const auto row = c->h.matrix.row(r);
                         for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * delta[k];
                         res2 += (acc - lambda * delta[r]) * (acc - lambda * delta[r]);
                       }
                       if (std::sqrt(res2) > 1e-6) return failed("residual " + fmt(std::sqrt(res2)));
                       return pass();
                     }});
      for (int pos = 1; pos <= a * b; ++pos) {
        out.push_back({pre + "/position=" + std::to_string(pos) + "/norm", [c, pos, tile_norm]() {
                         const auto [p, q] = block_of_position(*c->h.problem, pos);
                         const double want = c->outer_ratio.position_norms[p - 1] * c->tile.position_norms[q - 1] *
                                             std::pow(tile_norm, c->a - 1);
                         const double got = c->h_ratio.position_norms[pos - 1];
                         if (!close_rel(got, want, 1e-6)) {
                           return failed("||G_h o D_" + std::to_string(pos) + "|| = " + fmt(got) + ", product = " + fmt(want));
                         }
                         return pass();
                       }});
        if (a <= 3 && b <= 3) {
          out.push_back({pre + "/position=" + std::to_string(pos) + "/exact", [c, pos]() {
                           const auto r = check_distinguisher_identity(c->outer, c->inner, pos);
                           if (r.mismatches) {
                             return failed(std::to_string(r.mismatches) + " mismatches; first " + *r.first_mismatch);
                           }
                           return Outcome{r.entries_checked, std::nullopt};
                         }});
        }
      }
      out.push_back({pre + "/theorem", [c]() {
                       const double want = c->outer_ratio.sa_value * c->tile.sa_value;
                       if (c->h_ratio.sa_value < want - 1e-6) {
                         return failed("sa(h) = " + fmt(c->h_ratio.sa_value) + " < sa(f) * min tile = " + fmt(want));
                       }
                       return pass();
                     }});
      for (int k = 0; k < 20; ++k) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
        out.push_back({pre + "/random=" + std::to_string(k), [c, seed, o, tile_norm]() {
                         auto outer = random_adversary(make_os(c->a), seed);
                         auto h = compose_adversary(outer, c->inner, o.tol);
                         const double got = spectral_norm(h.matrix, o.tol, "random composition").norm;
                         const double want = spectral_norm(outer.matrix, o.tol, "random outer").norm * std::pow(tile_norm, c->a);
                         if (!close_rel(got, want, 1e-6)) {
                           return failed("seed " + std::to_string(seed) + ": ||G_h|| = " + fmt(got) + ", product = " + fmt(want));
                         }
                         return pass();
                       }});
      }
    }
  }
}

// ----------------------------------------------------------------- hilbert

void hilbert_checks(const LabOptions& o, std::vector<Check>& out) {
  const int top = o.m ? o.m : 64;
  if (top < 1) invalid_argument("hilbert suite: m must be positive");
  for (int m = 1; m <= top; ++m) {
    auto op = std::make_shared<const SymmetricOperator>(SymmetricOperator::from_dense(hilbert_tile(m).matrix));
    const std::string pre = "hilbert/m=" + std::to_string(m);
    out.push_back({pre + "/norm", [op, m, o]() {
                     double harmonic = 0.0;
                     for (int k = 1; k <= (m + 1) / 2; ++k) harmonic += 1.0 / k;
                     const double got = spectral_norm(*op, o.tol, "A_m").norm;
                     if (got < harmonic - 1e-8) return failed("||A_m|| = " + fmt(got) + " < H = " + fmt(harmonic));
                     return pass();
                   }});
    for (int i = 1; i <= m; ++i) {
      out.push_back({pre + "/position=" + std::to_string(i), [op, i, o]() {
                       const auto at = static_cast<std::size_t>(i - 1);
                       auto masked = op->filtered([at](std::size_t r, std::size_t c) {
                         return std::min(r, c) <= at && at <= std::max(r, c);
                       });
                       const double got = spectral_norm(masked, o.tol, "A_m o D_i").norm;
                       if (got > 2.0 * std::numbers::pi + 1e-8) return failed("||A_m o D_i|| = " + fmt(got));
                       return pass();
                     }});
    }
    // The interval rule is the HSOS labeling's cross-answer pattern; the
    // labeling tables grow as m^3, so this runs for small m only.
    if (m <= 16) {
      out.push_back({pre + "/interval-rule", [m]() {
                       const auto lab = hsos_labeling(make_hsos(m));
                       for (int i = 1; i <= m; ++i) {
                         if (hilbert_distinguisher(m, i) != tile_distinguisher(lab, i)) {
                           return failed("interval rule disagrees with the labeling at position " + std::to_string(i));
                         }
                       }
                       return Outcome{static_cast<std::size_t>(m), std::nullopt};
                     }});
    }
  }
}

// -------------------------------------------------------------- symmetrize

void symmetrize_checks(const LabOptions& o, std::vector<Check>& out) {
  const std::vector<int> ms = o.m ? std::vector<int>{o.m} : std::vector<int>{1, 2, 3, 4};
  for (int m : ms) {
    for (int k = 0; k < 5; ++k) {
      const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
      out.push_back({"symmetrize/m=" + std::to_string(m) + "/seed=" + std::to_string(seed), [m, seed, o]() {
                       auto problem = make_hsos(m);
                       auto lab = std::make_shared<const SearchLabeling>(hsos_labeling(problem));
                       RatioOptions ro{o.eps, o.tol, 1};
                       const auto r = symmetrize(random_adversary(problem, seed), lab, ro);
                       tile_of_uniform(r.gamma, *r.labeling);
                       const auto after = sa_ratio(r.gamma, ro);
                       if (after.numerator < r.normalized_norm - 1e-6) {
                         return failed("||G'|| = " + fmt(after.numerator) + " < ||G|| = " + fmt(r.normalized_norm));
                       }
                       if (after.denominator > 1.0 + 1e-6) {
                         return failed("max ||G' o D_i|| = " + fmt(after.denominator));
                       }
                       return Outcome{3, std::nullopt};
                     }});
    }
  }
}

// --------------------------------------------------------------- embedding

void embedding_checks(const LabOptions& o, std::vector<Check>& out) {
  for (int n : ns_or(o, {2, 3})) {
    auto fam = build_family(n);
    auto nos = make_nos(n + 1, n);
    const std::string pre = "embedding/" + nid(n);
    auto map = std::make_shared<std::vector<std::size_t>>();
    std::optional<std::string> map_error;
    std::set<std::size_t> seen;
    for (const auto& p : fam->params) {
      const auto idx = nos->find(nos_correspondence(fam->geo, p));
      if (!idx) {
        map_error = describe(p) + " has no NOS instance";
        break;
      }
      if (!seen.insert(*idx).second) {
        map_error = describe(p) + " collides with another instance";
        break;
      }
      map->push_back(*idx);
    }
    const bool bijective = !map_error && seen.size() == nos->size();
    out.push_back({pre + "/correspondence", [map_error, bijective]() {
                     if (map_error) return failed(*map_error);
                     if (!bijective) return failed("the correspondence misses some NOS instances");
                     return pass();
                   }});
    if (!bijective) continue;
    for (int i = 1; i <= n + 1; ++i) {
      for (int j = 1; j <= n; ++j) {
        out.push_back({pre + "/i=" + std::to_string(i) + ",j=" + std::to_string(j), [fam, nos, map, i, j, n]() {
                         const Point v = fam->geo.boundary_point(fam->geo.bound(i), j);
                         const int pos = (i - 1) * n + j;
                         const std::size_t count = fam->members.size();
                         for (std::size_t x = 0; x < count; ++x) {
                           for (std::size_t y = x + 1; y < count; ++y) {
                             const bool tarski = fam->members[x](v) != fam->members[y](v);
                             const bool nos_d = nos->at((*map)[x], pos) != nos->at((*map)[y], pos);
                             if (tarski != nos_d) {
                               return failed("at " + v.to_string() + ": " + describe(fam->params[x]) + " vs " +
                                             describe(fam->params[y]) + " give D^Tarski = " + std::to_string(tarski) +
                                             ", D^NOS = " + std::to_string(nos_d));
                             }
                           }
                         }
                         return Outcome{count * (count - 1) / 2, std::nullopt};
                       }});
      }
    }
  }
}

// ---------------------------------------------------------------- covering

void covering_checks(const LabOptions& o, std::vector<Check>& out) {
  for (int n : ns_or(o, {2, 3})) {
    auto fam = build_family(n);
    const int np = fam->geo.n_prime();
    const auto sums = region_sums(fam->geo);
    const std::set<int> edge(sums.begin(), sums.end());
    std::vector<Point> exhaustive;
    std::vector<Point> interior;
    for (int x = 1; x <= np; ++x) {
      for (int y = 1; y <= np; ++y) (edge.count(x + y) ? exhaustive : interior).push_back({x, y});
    }
    if (n >= 3 && o.sample > 0 && static_cast<std::size_t>(o.sample) < interior.size()) {
      std::mt19937_64 rng(o.seed);
      std::shuffle(interior.begin(), interior.end(), rng);
      interior.resize(static_cast<std::size_t>(o.sample));
    }
    std::vector<Point> points = exhaustive;
    points.insert(points.end(), interior.begin(), interior.end());
    std::sort(points.begin(), points.end());

    const std::size_t count = fam->members.size();
    const std::size_t pairs = count * (count - 1) / 2;
    for (const auto& p : points) {
      out.push_back({"covering/" + nid(n) + "/point=" + p.to_string(), [fam, p, pairs]() {
                       const auto cs = covering_set(fam->geo, p);
                       if (cs.points.size() > 7) {
                         return failed(std::string(cover_case_name(cs.kind)) + " covering set has " +
                                       std::to_string(cs.points.size()) + " points");
                       }
                       // Grouping by the values on V is equivalent to scanning every pair.
                       std::map<std::vector<Point>, std::size_t> seen;
                       for (std::size_t k = 0; k < fam->members.size(); ++k) {
                         const auto& f = fam->members[k];
                         std::vector<Point> key;
                         key.reserve(cs.points.size());
                         for (const auto& v : cs.points) key.push_back(f(v));
                         auto [it, fresh] = seen.emplace(std::move(key), k);
                         if (!fresh && fam->members[it->second](p) != f(p)) {
                           return failed(std::string(cover_case_name(cs.kind)) + " point, V = " + join_points(cs.points) +
                                         ": " + describe(fam->params[it->second]) + " and " + describe(fam->params[k]) +
                                         " agree on V but map the point to " + fam->members[it->second](p).to_string() +
                                         " and " + f(p).to_string());
                         }
                       }
                       return Outcome{pairs, std::nullopt};
                     }});
    }
  }
}

// ------------------------------------------------------------------ solver

void solver_checks(const LabOptions& o, std::vector<Check>& out) {
  for (int n : ns_or(o, {2, 3})) {
    SpineGeometry geo(n);
    const auto budget = nested_query_budget(geo.n_prime());
    const auto full = static_cast<std::uint64_t>(geo.n_prime()) * geo.n_prime();
    for (const auto& p : family_params(geo)) {
      out.push_back({"solver/" + nid(n) + "/" + describe(p), [geo, p, budget, full]() {
                       auto f = std::make_shared<const LatticeFn>(build_instance(geo, p));
                       const auto want = brute_fixed_points(*f);
                       Oracle brute_view(f);
                       const auto brute = brute_solve(brute_view);
                       if (brute.queries_used != full) return failed("brute used " + std::to_string(brute.queries_used) + " queries");
                       Oracle nested_view(f);
                       const auto nested = nested_solve(nested_view);
                       if (want.size() != 1 || nested.fixed_point != want[0] || brute.fixed_point != want[0]) {
                         return failed("nested " + nested.fixed_point.to_string() + ", brute " + brute.fixed_point.to_string() +
                                       ", fixed points " + join_points(want));
                       }
                       if (nested.fell_back || nested.queries_used > budget) {
                         return failed("nested used " + std::to_string(nested.queries_used) + " queries (budget " +
                                       std::to_string(budget) + ")");
                       }
                       return Outcome{2, std::nullopt};
                     }});
    }
  }
  for (int k : {1, 2}) {
    for (int side : {1, 2, 3, 5, 8, 13, 21, 34}) {
      for (int r = 0; r < 5; ++r) {
        const std::uint64_t seed = o.seed * 1000 + static_cast<std::uint64_t>(side * 10 + r);
        out.push_back({"solver/random/k=" + std::to_string(k) + ",n=" + std::to_string(side) + ",seed=" + std::to_string(seed),
                       [k, side, seed]() {
                         auto f = std::make_shared<const LatticeFn>(random_monotone(side, k, seed));
                         Oracle view(f);
                         const auto got = nested_solve(view);
                         if ((*f)(got.fixed_point) != got.fixed_point) return failed(got.fixed_point.to_string() + " is not fixed");
                         if (got.fell_back || got.queries_used > nested_query_budget(side)) {
                           return failed("nested used " + std::to_string(got.queries_used) + " queries");
                         }
                         // Clamping into a larger square keeps monotonicity and the fixed points.
                         const int big = side + 3;
                         auto clamped = Oracle::clamp(f, big, 2).materialize();
                         if (!check_monotone(clamped).monotone) return failed("clamped table is not monotone");
                         if (brute_fixed_points(clamped) != brute_fixed_points(*f)) {
                           return failed("clamping changed the fixed points");
                         }
                         return Outcome{3, std::nullopt};
                       }});
      }
    }
  }
}

// ------------------------------------------------------------------- bound

std::size_t instance_count(int a, int b) {
  // a * b^a: OS_a has a instances and every HSOS_b answer has b preimages.
  std::size_t total = static_cast<std::size_t>(a);
  for (int k = 0; k < a; ++k) {
    total *= static_cast<std::size_t>(b);
    if (total > kMaxBoundInstances) return total;
  }
  return total;
}

AdversaryMatrix nos_adversary(int a, int b, double tol) {
  if (a < 1 || b < 1) invalid_argument("nos: a and b must be positive");
  const std::size_t count = instance_count(a, b);
  if (count > kMaxBoundInstances) {
    invalid_argument("NOS_{" + std::to_string(a) + "," + std::to_string(b) + "} has more than " +
                     std::to_string(kMaxBoundInstances) + " instances (a*b^a); dense matrices are capped at " +
                     std::to_string(kMaxBoundInstances) + ", choose smaller sizes");
  }
  // Dense storage, the row-compressed copy and one masked copy per position scan.
  const double need = static_cast<double>(count) * static_cast<double>(count) * 32.0;
  const double have = static_cast<double>(sysconf(_SC_PHYS_PAGES)) * static_cast<double>(sysconf(_SC_PAGE_SIZE));
  if (have > 0 && need > 0.8 * have) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "NOS_{%d,%d} has %zu instances and needs about %.1f GB; this machine has %.1f GB", a,
                  b, count, need / 1e9, have / 1e9);
    invalid_argument(buf);
  }
  auto lab = std::make_shared<const SearchLabeling>(hsos_labeling(make_hsos(b)));
  std::vector<InnerSpec> inner(static_cast<std::size_t>(a), InnerSpec{lab, hilbert_tile(b)});
  return compose_adversary(os_adversary(a), inner, tol);
}

AdversaryMatrix hsos_adversary(int m) {
  if (m < 1) invalid_argument("hsos: m must be positive");
  auto lab = std::make_shared<const SearchLabeling>(hsos_labeling(make_hsos(m)));
  return uniform_from_tile(lab, hilbert_tile(m));
}

}  // namespace

std::string SuiteReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["checks_run"] = checks_run;
  j["ok"] = ok();
  auto arr = nlohmann::json::array();
  for (const auto& f : failures) arr.push_back({{"id", f.id}, {"counterexample", f.counterexample}});
  j["failures"] = std::move(arr);
  return j.dump(2);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "composition", "hilbert", "symmetrize",
                                              "embedding", "covering",    "solver"};
  return names;
}

SuiteReport run_suite(std::string_view suite, const LabOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opts.n != 0 && opts.n < 2) invalid_argument("--n must be at least 2, got " + std::to_string(opts.n));
  std::vector<Check> checks;
  if (suite == "geometry") {
    for (int n : ns_or(opts, {2, 3})) geometry_checks(n, checks);
  } else if (suite == "composition") {
    composition_checks(opts, checks);
  } else if (suite == "hilbert") {
    hilbert_checks(opts, checks);
  } else if (suite == "symmetrize") {
    symmetrize_checks(opts, checks);
  } else if (suite == "embedding") {
    embedding_checks(opts, checks);
  } else if (suite == "covering") {
    covering_checks(opts, checks);
  } else if (suite == "solver") {
    solver_checks(opts, checks);
  } else {
    invalid_argument("unknown suite '" + std::string(suite) +
                     "'; expected geometry, composition, hilbert, symmetrize, embedding, covering or solver");
  }
  auto report = run_checks(std::string(suite), std::move(checks), opts.jobs);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<GeneratedInstance> generate_instances(int n, const std::optional<std::vector<int>>& c,
                                                  const std::optional<int>& i) {
  SpineGeometry geo(n);
  if (c.has_value() != i.has_value()) invalid_argument("gen: pass both C and i, or neither for the whole family");
  std::vector<InstanceParams> params;
  if (c) {
    params.push_back({*c, *i});
  } else {
    params = family_params(geo);
  }
  std::vector<GeneratedInstance> out;
  out.reserve(params.size());
  for (auto& p : params) {
    auto f = build_instance(geo, p);
    std::string stem = "tarski_n" + std::to_string(n) + "_C";
    for (std::size_t k = 0; k < p.c.size(); ++k) stem += (k ? "-" : "") + std::to_string(p.c[k]);
    stem += "_i" + std::to_string(p.i);
    out.push_back({std::move(p), std::move(stem), std::move(f)});
  }
  return out;
}

std::vector<std::string> write_instances(const std::vector<GeneratedInstance>& instances, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory '" + dir + "': " + ec.message());
  std::vector<std::string> paths;
  const int n = instances.empty() ? 0 : static_cast<int>(instances.front().params.c.size()) - 1;
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text << '\n';
    if (!os) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  };
  for (const auto& g : instances) {
    const fs::path base = fs::path(dir) / g.stem;
    write(base.string() + ".json", g.function.to_json());
    write(base.string() + ".meta.json", g.params.sidecar_json(n));
    paths.push_back(base.string() + ".json");
  }
  return paths;
}

std::vector<BoundRow> bound_table(const BoundRequest& req, const LabOptions& opts) {
  RatioOptions ro{opts.eps, opts.tol, opts.jobs};
  std::vector<BoundRow> rows;
  auto sizes = req.sizes;
  if (req.problem == "os") {
    if (sizes.empty()) {
      for (int m = 2; m <= 256; m *= 2) sizes.push_back(m);
    }
    for (int m : sizes) rows.push_back({"os", std::to_string(m), sa_ratio(os_adversary(m), ro)});
  } else if (req.problem == "hsos") {
    if (sizes.empty()) sizes = {1, 2, 3, 4, 5, 6, 7, 8};
    for (int m : sizes) rows.push_back({"hsos", std::to_string(m), sa_ratio(hsos_adversary(m), ro)});
  } else if (req.problem == "nos") {
    if (sizes.empty()) sizes = {2, 3, 4};
    auto bs = req.sizes_b.empty() ? std::vector<int>{2, 3, 4} : req.sizes_b;
    for (int a : sizes) {
      for (int b : bs) {
        rows.push_back({"nos", std::to_string(a) + "x" + std::to_string(b), sa_ratio(nos_adversary(a, b, opts.tol), ro)});
      }
    }
  } else if (req.problem == "tarski") {
    if (sizes.empty()) sizes = {2, 3, 4};
    for (int n : sizes) {
      if (n < 2) invalid_argument("tarski: n must be at least 2, got " + std::to_string(n));
      auto r = sa_ratio(nos_adversary(n + 1, n, opts.tol), ro);
      r.denominator *= 7.0;
      r.sa_value = r.numerator / r.denominator;
      r.query_lower_bound = epsilon_factor(opts.eps) * r.sa_value;
      rows.push_back({"tarski", std::to_string(n), std::move(r)});
    }
  } else {
    invalid_argument("unknown problem '" + req.problem + "'; expected os, hsos, nos or tarski");
  }
  return rows;
}

std::string bound_csv(const std::vector<BoundRow>& rows) {
  std::string out = "problem,size,numerator,denominator,sa,lb\n";
  for (const auto& r : rows) {
    out += r.problem + "," + r.size + "," + fmt(r.report.numerator) + "," + fmt(r.report.denominator) + "," +
           fmt(r.report.sa_value) + "," + fmt(r.report.query_lower_bound) + "\n";
  }
  return out;
}

std::string bound_json(const std::vector<BoundRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    auto j = nlohmann::json::parse(r.report.to_json());
    j["problem"] = r.problem;
    j["size"] = r.size;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string bound_matrix_json(const std::string& problem, int size, int size_b) {
  AdversaryMatrix g;
  if (problem == "os") {
    g = os_adversary(size);
  } else if (problem == "hsos") {
    g = hsos_adversary(size);
  } else if (problem == "nos") {
    g = nos_adversary(size, size_b, kDefaultSpectralTol);
  } else if (problem == "tarski") {
    g = nos_adversary(size + 1, size, kDefaultSpectralTol);
  } else {
    invalid_argument("unknown problem '" + problem + "'");
  }
  return g.exact ? to_json(*g.exact, LabelStyle::Symbols) : to_json(g.matrix, LabelStyle::Symbols);
}

SolveResult solve_checked(const LatticeFn& f, Algorithm algo) {
  const auto mono = check_monotone(f);
  if (!mono.monotone) {
    const auto& [a, b] = *mono.witness;
    fail(ErrorKind::CheckFailed, "input is not monotone: " + a.to_string() + " <= " + b.to_string() + " but f" +
                                     a.to_string() + " = " + f(a).to_string() + " is not <= f" + b.to_string() + " = " +
                                     f(b).to_string());
  }
  Oracle view(std::make_shared<const LatticeFn>(f));
  return algo == Algorithm::Brute ? brute_solve(view) : nested_solve(view);
}

std::uint64_t nested_query_budget(int n) {
  if (n < 1) invalid_argument("nested_query_budget: n must be positive");
  std::uint64_t bits = 0;
  while ((std::uint64_t{1} << bits) < static_cast<std::uint64_t>(n)) ++bits;
  return 4 * (bits + 1) * (bits + 1);
}

}  // namespace tarskiq
