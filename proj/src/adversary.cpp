#include "tarskiq/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"
#include "tarskiq/parallel.hpp"

namespace tarskiq {

namespace {

void require_instance_labels(const QueryProblem& p, const std::vector<std::string>& labels) {
  if (labels.size() != p.size()) {
    invalid_argument("adversary matrix for " + p.name() + ": dimension " + std::to_string(labels.size()) +
                     " does not match " + std::to_string(p.size()) + " instances");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != p.instance(i)) {
      invalid_argument("adversary matrix for " + p.name() + ": label " + std::to_string(i) +
                       " is not the instance in that position");
    }
  }
}

template <class T>
void require_zero_on_same_answer(const QueryProblem& p, const BasicLabeledMatrix<T>& m) {
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = r; c < m.dim(); ++c) {
      if (p.answer(r) == p.answer(c) && m(r, c) != T(0)) {
        invalid_argument("adversary matrix for " + p.name() + ": nonzero entry between '" +
                         render_instance(p.instance(r)) + "' and '" + render_instance(p.instance(c)) +
                         "', which share answer " + p.answer(r).to_string());
      }
    }
  }
}

void require_tile_labels(const std::vector<std::string>& labels) {
  if (labels != index_labels(labels.size())) invalid_argument("tile: labels must be variant indices 0..m-1");
}

// Per composed instance: index of x~ and the 0-based variant of every block.
struct CompositeIndex {
  std::vector<std::size_t> tilde;
  std::vector<std::vector<int>> variant;
};

CompositeIndex index_composite(const QueryProblem& h, const std::vector<InnerSpec>& inner) {
  const CompositeInfo* info = h.composite();
  if (!info) invalid_argument("composition: " + h.name() + " was not built by compose()");
  CompositeIndex out;
  out.tilde = info->tilde_index;
  out.variant.resize(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) {
    out.variant[x].resize(inner.size());
    for (std::size_t p = 0; p < inner.size(); ++p) {
      out.variant[x][p] = inner[p].labeling->variant_of(info->block_index[x][p]) - 1;
    }
  }
  return out;
}

ProblemPtr composed_problem(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner) {
  if (!outer.problem) invalid_argument("composition: outer matrix has no problem");
  if (static_cast<int>(inner.size()) != outer.problem->length()) {
    invalid_argument("composition: " + std::to_string(inner.size()) + " tiles for an outer problem of length " +
                     std::to_string(outer.problem->length()));
  }
  std::vector<ProblemPtr> problems;
  for (std::size_t p = 0; p < inner.size(); ++p) {
    if (!inner[p].labeling) invalid_argument("composition: missing labeling for block " + std::to_string(p + 1));
    if (inner[p].tile.variants() != static_cast<std::size_t>(inner[p].labeling->variants())) {
      invalid_argument("composition: tile " + std::to_string(p + 1) + " has " +
                       std::to_string(inner[p].tile.variants()) + " variants, labeling has " +
                       std::to_string(inner[p].labeling->variants()));
    }
    problems.push_back(inner[p].labeling->problem());
  }
  return compose(outer.problem, problems);
}

// A product of a rational coefficient and formal norm tokens.
struct Monomial {
  Rational coeff{0};
  std::vector<int> powers;

  void normalize() {
    if (coeff.numerator() == 0) std::fill(powers.begin(), powers.end(), 0);
  }
  bool operator==(const Monomial&) const = default;
};

std::string render_monomial(const Monomial& m) {
  std::string s = to_string(m.coeff);
  for (std::size_t t = 0; t < m.powers.size(); ++t) {
    if (m.powers[t] == 0) continue;
    s += " * N" + std::to_string(t + 1);
    if (m.powers[t] > 1) s += "^" + std::to_string(m.powers[t]);
  }
  return s;
}

std::vector<std::vector<int>> all_permutations(int size) {
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

}  // namespace

AdversaryMatrix make_adversary(ProblemPtr problem, LabeledMatrix matrix) {
  if (!problem) invalid_argument("make_adversary: null problem");
  require_instance_labels(*problem, matrix.labels());
  require_zero_on_same_answer(*problem, matrix);
  return AdversaryMatrix{std::move(problem), std::move(matrix), std::nullopt};
}

AdversaryMatrix make_adversary(ProblemPtr problem, RationalMatrix exact) {
  if (!problem) invalid_argument("make_adversary: null problem");
  require_instance_labels(*problem, exact.labels());
  require_zero_on_same_answer(*problem, exact);
  auto approx = to_float(exact);
  return AdversaryMatrix{std::move(problem), std::move(approx), std::move(exact)};
}

Tile make_tile(RationalMatrix exact) {
  require_tile_labels(exact.labels());
  auto approx = to_float(exact);
  return Tile{std::move(approx), std::move(exact)};
}

Tile make_tile(LabeledMatrix matrix) {
  require_tile_labels(matrix.labels());
  return Tile{std::move(matrix), std::nullopt};
}

double epsilon_factor(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) invalid_argument("epsilon must lie in (0, 1/2), got " + std::to_string(eps));
  return 1.0 - 2.0 * std::sqrt(eps * (1.0 - eps));
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["sa_value"] = sa_value;
  j["worst_position"] = worst_position;
  j["numerator"] = numerator;
  j["denominator"] = denominator;
  j["epsilon"] = epsilon;
  j["query_lower_bound"] = query_lower_bound;
  j["position_norms"] = position_norms;
  return j.dump();
}

Tile hilbert_tile(int m) {
  if (m < 1) invalid_argument("hilbert_tile: m must be positive");
  return make_tile(RationalMatrix::from_function(index_labels(static_cast<std::size_t>(m)), [](std::size_t r, std::size_t c) {
    return Rational(1, static_cast<std::int64_t>(c - r) + 1);
  }));
}

RationalMatrix hilbert_distinguisher(int m, int position) {
  if (m < 1 || position < 1 || position > m) {
    invalid_argument("hilbert_distinguisher: position " + std::to_string(position) + " outside [1, " +
                     std::to_string(m) + "]");
  }
  const auto i = static_cast<std::size_t>(position - 1);
  return RationalMatrix::from_function(index_labels(static_cast<std::size_t>(m)), [&](std::size_t r, std::size_t c) {
    return Rational(r <= i && i <= c ? 1 : 0);
  });
}

RationalMatrix tile_distinguisher(const SearchLabeling& lab, int position) {
  const int m = lab.variants();
  std::vector<Rational> values(static_cast<std::size_t>(m * m));
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      switch (lab.cross_pattern(position, a, b)) {
        case SearchLabeling::Pattern::Equal: values[(a - 1) * m + (b - 1)] = 0; break;
        case SearchLabeling::Pattern::Differ: values[(a - 1) * m + (b - 1)] = 1; break;
        case SearchLabeling::Pattern::Conflict:
          invalid_argument("tile_distinguisher: equality at position " + std::to_string(position) +
                           " for variants (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") depends on the answers");
        case SearchLabeling::Pattern::Unobserved:
          invalid_argument("tile_distinguisher: no cross-answer pair for variants (" + std::to_string(a) + ", " +
                           std::to_string(b) + ")");
      }
    }
  }
  return RationalMatrix(index_labels(static_cast<std::size_t>(m)), std::move(values));
}

AdversaryMatrix uniform_from_tile(const std::shared_ptr<const SearchLabeling>& lab, const Tile& tile) {
  if (!lab) invalid_argument("uniform_from_tile: null labeling");
  if (tile.variants() != static_cast<std::size_t>(lab->variants())) {
    invalid_argument("uniform_from_tile: tile has " + std::to_string(tile.variants()) + " variants, labeling has " +
                     std::to_string(lab->variants()));
  }
  const auto& p = lab->problem();
  auto labels = instance_labels(*p);
  auto entry_index = [&](std::size_t r, std::size_t c) -> std::optional<std::pair<std::size_t, std::size_t>> {
    if (lab->sigma_of(r) == lab->sigma_of(c)) return std::nullopt;
    return std::pair<std::size_t, std::size_t>(lab->variant_of(r) - 1, lab->variant_of(c) - 1);
  };
  if (tile.exact) {
    return make_adversary(p, RationalMatrix::from_function(std::move(labels), [&](std::size_t r, std::size_t c) {
      auto ij = entry_index(r, c);
      return ij ? (*tile.exact)(ij->first, ij->second) : Rational(0);
    }));
  }
  return make_adversary(p, LabeledMatrix::from_function(std::move(labels), [&](std::size_t r, std::size_t c) {
    auto ij = entry_index(r, c);
    return ij ? tile.matrix(ij->first, ij->second) : 0.0;
  }));
}

AdversaryMatrix os_adversary(int m) {
  auto p = make_os(m);
  auto labels = instance_labels(*p);
  return make_adversary(p, RationalMatrix::from_function(std::move(labels), [](std::size_t r, std::size_t c) {
    return r == c ? Rational(0) : Rational(1, static_cast<std::int64_t>(c - r) + 1);
  }));
}

AdversaryMatrix random_adversary(ProblemPtr problem, std::uint64_t seed) {
  if (!problem) invalid_argument("random_adversary: null problem");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> weight(1, 1000);
  auto labels = instance_labels(*problem);
  const auto& p = *problem;
  auto exact = RationalMatrix::from_function(std::move(labels), [&](std::size_t r, std::size_t c) {
    return p.answer(r) == p.answer(c) ? Rational(0) : Rational(weight(rng), 1000);
  });
  return make_adversary(std::move(problem), std::move(exact));
}

AdversaryMatrix compose_adversary(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner, double tol) {
  auto h = composed_problem(outer, inner);
  const auto idx = index_composite(*h, inner);
  const CompositeInfo& info = *h->composite();
  std::vector<double> norms;
  for (std::size_t p = 0; p < inner.size(); ++p) {
    norms.push_back(spectral_norm(inner[p].tile.matrix, tol, "tile " + std::to_string(p + 1)).norm);
  }
  const std::size_t k = inner.size();
  auto matrix = LabeledMatrix::from_function(instance_labels(*h), [&](std::size_t x, std::size_t y) {
    double v = outer.matrix(idx.tilde[x], idx.tilde[y]);
    if (v == 0.0) return 0.0;
    const auto& ax = info.tilde[x];
    const auto& ay = info.tilde[y];
    for (std::size_t p = 0; p < k && v != 0.0; ++p) {
      const int vx = idx.variant[x][p];
      const int vy = idx.variant[y][p];
      if (ax[p] == ay[p]) {
        v = vx == vy ? v * norms[p] : 0.0;
      } else {
        v *= inner[p].tile.matrix(static_cast<std::size_t>(vx), static_cast<std::size_t>(vy));
      }
    }
    return v;
  });
  return make_adversary(std::move(h), std::move(matrix));
}

std::vector<double> composed_eigenvector(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner,
                                         const QueryProblem& composed, double tol) {
  const auto idx = index_composite(composed, inner);
  const auto df = spectral_norm(outer.matrix, tol, "outer").eigenvector;
  std::vector<std::vector<double>> da;
  for (std::size_t p = 0; p < inner.size(); ++p) {
    da.push_back(spectral_norm(inner[p].tile.matrix, tol, "tile " + std::to_string(p + 1)).eigenvector);
  }
  std::vector<double> out(composed.size());
  for (std::size_t x = 0; x < composed.size(); ++x) {
    double v = df[idx.tilde[x]];
    for (std::size_t p = 0; p < inner.size(); ++p) v *= da[p][static_cast<std::size_t>(idx.variant[x][p])];
    out[x] = v;
  }
  return out;
}

std::pair<int, int> block_of_position(const QueryProblem& composed, int position) {
  const CompositeInfo* info = composed.composite();
  if (!info) invalid_argument("block_of_position: " + composed.name() + " was not built by compose()");
  if (position < 1 || position > composed.length()) {
    invalid_argument("block_of_position: position " + std::to_string(position) + " outside [1, " +
                     std::to_string(composed.length()) + "]");
  }
  for (std::size_t p = info->inner.size(); p-- > 0;) {
    if (position > info->block_offsets[p]) return {static_cast<int>(p) + 1, position - info->block_offsets[p]};
  }
  invalid_argument("block_of_position: unreachable position");
}

IdentityCheck check_distinguisher_identity(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner,
                                           int position) {
  if (!outer.exact) invalid_argument("identity check: outer matrix is not exact");
  for (std::size_t p = 0; p < inner.size(); ++p) {
    if (!inner[p].tile.exact) invalid_argument("identity check: tile " + std::to_string(p + 1) + " is not exact");
  }
  auto h = composed_problem(outer, inner);
  const auto idx = index_composite(*h, inner);
  const CompositeInfo& info = *h->composite();
  const auto [bp, q] = block_of_position(*h, position);
  const auto p = static_cast<std::size_t>(bp - 1);
  const auto dq = tile_distinguisher(*inner[p].labeling, q);
  const std::size_t k = inner.size();
  const auto col = static_cast<std::size_t>(position - 1);
  const RationalMatrix& gf = *outer.exact;

  // Tokens 0..k-1 stand for ||A_d||, token k for ||A_p ∘ D_q||.
  auto block_factor = [&](Monomial& m, std::size_t d, std::size_t x, std::size_t y, bool masked) {
    const int vx = idx.variant[x][d];
    const int vy = idx.variant[y][d];
    if (info.tilde[x][d] == info.tilde[y][d]) {
      if (vx != vy) {
        m.coeff = 0;
      } else {
        ++m.powers[masked ? k : d];
      }
    } else {
      m.coeff *= (*inner[d].tile.exact)(static_cast<std::size_t>(vx), static_cast<std::size_t>(vy));
      if (masked) m.coeff *= dq(static_cast<std::size_t>(vx), static_cast<std::size_t>(vy));
    }
  };

  IdentityCheck out;
  for (std::size_t x = 0; x < h->size(); ++x) {
    for (std::size_t y = 0; y < h->size(); ++y) {
      Monomial lhs{Rational(0), std::vector<int>(k + 1, 0)};
      if (h->instance(x)[col] != h->instance(y)[col]) {
        lhs.coeff = gf(idx.tilde[x], idx.tilde[y]);
        for (std::size_t d = 0; d < k; ++d) block_factor(lhs, d, x, y, false);
      }
      lhs.normalize();

      Monomial rhs{Rational(0), std::vector<int>(k + 1, 0)};
      if (info.tilde[x][p] != info.tilde[y][p]) {
        rhs.coeff = gf(idx.tilde[x], idx.tilde[y]);
        for (std::size_t d = 0; d < k; ++d) block_factor(rhs, d, x, y, d == p);
      }
      rhs.normalize();

      ++out.entries_checked;
      if (!(lhs == rhs)) {
        ++out.mismatches;
        if (!out.first_mismatch) {
          out.first_mismatch = "position " + std::to_string(position) + ", entry ('" +
                               render_instance(h->instance(x)) + "', '" + render_instance(h->instance(y)) +
                               "'): " + render_monomial(lhs) + " vs " + render_monomial(rhs);
        }
      }
    }
  }
  return out;
}

BoundReport sa_ratio(const AdversaryMatrix& g, const RatioOptions& opts) {
  const double factor = epsilon_factor(opts.eps);
  const QueryProblem& p = *g.problem;
  const auto op = SymmetricOperator::from_dense(g.matrix);
  BoundReport out;
  out.numerator = spectral_norm(op, opts.tol, p.name()).norm;
  out.position_norms.assign(static_cast<std::size_t>(p.length()), 0.0);
  parallel_for(out.position_norms.size(), opts.jobs, [&](std::size_t i) {
    auto masked = op.filtered([&](std::size_t r, std::size_t c) { return p.instance(r)[i] != p.instance(c)[i]; });
    out.position_norms[i] = spectral_norm(masked, opts.tol, p.name() + " ∘ D_" + std::to_string(i + 1)).norm;
  });
  const auto worst = std::max_element(out.position_norms.begin(), out.position_norms.end());
  out.denominator = *worst;
  out.worst_position = static_cast<std::size_t>(worst - out.position_norms.begin()) + 1;
  if (!(out.denominator > 0.0)) {
    invalid_argument("sa_ratio: every ||Γ ∘ D_i|| vanishes for " + p.name() +
                     "; some instances with different answers are indistinguishable");
  }
  out.sa_value = out.numerator / out.denominator;
  out.epsilon = opts.eps;
  out.query_lower_bound = factor * out.sa_value;
  return out;
}

BoundReport tile_ratio(const Tile& tile, const SearchLabeling& lab, const RatioOptions& opts) {
  const double factor = epsilon_factor(opts.eps);
  if (tile.variants() != static_cast<std::size_t>(lab.variants())) {
    invalid_argument("tile_ratio: tile and labeling disagree on the number of variants");
  }
  BoundReport out;
  out.numerator = spectral_norm(tile.matrix, opts.tol, "tile").norm;
  out.position_norms.assign(static_cast<std::size_t>(lab.problem()->length()), 0.0);
  parallel_for(out.position_norms.size(), opts.jobs, [&](std::size_t i) {
    const auto d = to_float(tile_distinguisher(lab, static_cast<int>(i) + 1));
    out.position_norms[i] =
        spectral_norm(hadamard(tile.matrix, d), opts.tol, "tile ∘ D_" + std::to_string(i + 1)).norm;
  });
  const auto worst = std::max_element(out.position_norms.begin(), out.position_norms.end());
  out.denominator = *worst;
  out.worst_position = static_cast<std::size_t>(worst - out.position_norms.begin()) + 1;
  if (!(out.denominator > 0.0)) invalid_argument("tile_ratio: every ||A ∘ D_i|| vanishes");
  out.sa_value = out.numerator / out.denominator;
  out.epsilon = opts.eps;
  out.query_lower_bound = factor * out.sa_value;
  return out;
}

SymmetrizeResult symmetrize(const AdversaryMatrix& g, const std::shared_ptr<const SearchLabeling>& lab,
                            const RatioOptions& opts) {
  if (!lab) invalid_argument("symmetrize: null labeling");
  const QueryProblem& p = *g.problem;
  if (lab->problem()->instances() != p.instances()) {
    invalid_argument("symmetrize: labeling belongs to a different problem than the matrix");
  }
  const std::size_t s = lab->sigmas().size();
  if (s > kMaxSymmetrizeAnswers) {
    invalid_argument("symmetrize: " + std::to_string(s) + " answers exceed the limit of " +
                     std::to_string(kMaxSymmetrizeAnswers) + " (permutation group too large)");
  }

  SymmetrizeResult out;
  const auto report = sa_ratio(g, opts);
  out.scale = report.denominator;
  out.normalized_norm = report.numerator / out.scale;

  const std::size_t n = p.size();
  std::vector<double> scaled(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) scaled[r * n + c] = g.matrix(r, c) / out.scale;
  }
  const LabeledMatrix gn(g.matrix.labels(), scaled);
  const auto delta = spectral_norm(gn, opts.tol, p.name() + " (normalized)").eigenvector;

  const auto perms = all_permutations(static_cast<int>(s));
  // image[π][x] = π(x)
  std::vector<std::vector<std::size_t>> image(perms.size(), std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < perms.size(); ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      image[k][x] = lab->instance_at(static_cast<std::size_t>(perms[k][lab->sigma_of(x)]), lab->variant_of(x));
    }
  }

  std::vector<double> beta(n);
  std::vector<char> keep(n, 1);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> sq;
    sq.reserve(perms.size());
    bool vanishes = true;
    for (std::size_t k = 0; k < perms.size(); ++k) {
      const double d = delta[image[k][x]];
      vanishes = vanishes && std::abs(d) <= kZeroEigenThreshold;
      sq.push_back(d * d);
    }
    beta[x] = std::sqrt(sorted_sum(sq));
    keep[x] = vanishes ? 0 : 1;
  }

  // The orbit of x under the group is every answer with x's variant, so the
  // dropped set is a union of whole variants.
  std::vector<int> variant_kept(static_cast<std::size_t>(lab->variants()) + 1, -1);
  for (std::size_t x = 0; x < n; ++x) {
    auto& v = variant_kept[static_cast<std::size_t>(lab->variant_of(x))];
    if (v == -1) v = keep[x];
    if (v != keep[x]) fail(ErrorKind::Numeric, "symmetrize: eigenvector support is not permutation invariant");
  }
  std::vector<int> renumber(variant_kept.size(), 0);
  int next_variant = 0;
  for (int j = 1; j <= lab->variants(); ++j) {
    if (variant_kept[static_cast<std::size_t>(j)] == 1) {
      renumber[static_cast<std::size_t>(j)] = ++next_variant;
    } else {
      out.dropped_variants.push_back(j);
    }
  }
  if (next_variant == 0) fail(ErrorKind::Numeric, "symmetrize: principal eigenvector vanishes everywhere");

  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < n; ++x) {
    if (keep[x]) kept.push_back(x);
  }

  ProblemPtr target = g.problem;
  std::shared_ptr<const SearchLabeling> target_lab = lab;
  if (kept.size() != n) {
    std::vector<std::string> instances;
    std::vector<Letter> answers;
    std::vector<int> sigma_of;
    std::vector<int> variant_of;
    for (auto x : kept) {
      instances.push_back(p.instance(x));
      answers.push_back(p.answer(x));
      sigma_of.push_back(lab->sigma_of(x));
      variant_of.push_back(renumber[static_cast<std::size_t>(lab->variant_of(x))]);
    }
    target = std::make_shared<QueryProblem>(p.name() + "|restricted", p.input_alphabet(), p.output_alphabet(),
                                            p.length(), std::move(instances), std::move(answers));
    target_lab = std::make_shared<SearchLabeling>(target, lab->sigmas(), std::move(sigma_of), std::move(variant_of));
  }

  std::vector<double> terms(perms.size());
  auto matrix = LabeledMatrix::from_function(instance_labels(*target), [&](std::size_t r, std::size_t c) {
    const std::size_t x = kept[r];
    const std::size_t y = kept[c];
    for (std::size_t k = 0; k < perms.size(); ++k) {
      const std::size_t px = image[k][x];
      const std::size_t py = image[k][y];
      // δ product first so (x, y) and (y, x) produce identical bits.
      terms[k] = gn(px, py) * (delta[px] * delta[py]);
    }
    return std::max(0.0, sorted_sum(terms) / (beta[x] * beta[y]));
  });
  out.gamma = make_adversary(target, std::move(matrix));
  out.labeling = std::move(target_lab);
  return out;
}

Tile tile_of_uniform(const AdversaryMatrix& g, const SearchLabeling& lab) {
  const QueryProblem& p = *g.problem;
  if (lab.problem()->instances() != p.instances()) {
    invalid_argument("tile_of_uniform: labeling belongs to a different problem than the matrix");
  }
  if (lab.sigmas().size() < 2) invalid_argument("tile_of_uniform: need at least two answers");
  const auto m = static_cast<std::size_t>(lab.variants());
  std::vector<std::optional<std::size_t>> source(m * m);  // flat index into g of the first witness
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (lab.sigma_of(x) == lab.sigma_of(y)) continue;
      auto& src = source[(lab.variant_of(x) - 1) * m + (lab.variant_of(y) - 1)];
      if (!src) {
        src = x * p.size() + y;
        continue;
      }
      const std::size_t x0 = *src / p.size();
      const std::size_t y0 = *src % p.size();
      const bool same = g.exact ? (*g.exact)(x, y) == (*g.exact)(x0, y0) : g.matrix(x, y) == g.matrix(x0, y0);
      if (!same) {
        invalid_argument("tile_of_uniform: entry ('" + render_instance(p.instance(x)) + "', '" +
                         render_instance(p.instance(y)) + "') differs from ('" + render_instance(p.instance(x0)) +
                         "', '" + render_instance(p.instance(y0)) + "') although both map to tile entry (" +
                         std::to_string(lab.variant_of(x)) + ", " + std::to_string(lab.variant_of(y)) + ")");
      }
    }
  }
  auto at = [&](std::size_t a, std::size_t b) { return *source[a * m + b]; };
  const std::size_t stride = p.size();
  if (g.exact) {
    return make_tile(RationalMatrix::from_function(index_labels(m), [&](std::size_t a, std::size_t b) {
      const auto f = at(a, b);
      return (*g.exact)(f / stride, f % stride);
    }));
  }
  return make_tile(LabeledMatrix::from_function(index_labels(m), [&](std::size_t a, std::size_t b) {
    const auto f = at(a, b);
    return g.matrix(f / stride, f % stride);
  }));
}

}  // namespace tarskiq
