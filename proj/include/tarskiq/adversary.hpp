#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tarskiq/labeled_matrix.hpp"
#include "tarskiq/query_problem.hpp"
#include "tarskiq/spectral.hpp"

namespace tarskiq {

/// Γ over the instances of `problem`, zero on every same-answer pair.
/// `exact` is present when the construction is rational end to end.
struct AdversaryMatrix {
  ProblemPtr problem;
  LabeledMatrix matrix;
  std::optional<RationalMatrix> exact;
};

/// Validates labels (instance strings in problem order) and the zero
/// same-answer condition, then wraps.
AdversaryMatrix make_adversary(ProblemPtr problem, LabeledMatrix matrix);
AdversaryMatrix make_adversary(ProblemPtr problem, RationalMatrix exact);

/// m x m tile indexed by variant (one-byte labels 0..m-1).
struct Tile {
  LabeledMatrix matrix;
  std::optional<RationalMatrix> exact;

  std::size_t variants() const noexcept { return matrix.dim(); }
};

Tile make_tile(RationalMatrix exact);
Tile make_tile(LabeledMatrix matrix);

struct BoundReport {
  double numerator = 0.0;
  double denominator = 0.0;
  double sa_value = 0.0;
  std::size_t worst_position = 0;  // 1-based
  double epsilon = 0.0;
  double query_lower_bound = 0.0;
  /// ||Γ ∘ D_i|| for i = 1..n.
  std::vector<double> position_norms;

  std::string to_json() const;
};

/// 1 - 2 sqrt(eps (1 - eps)); requires 0 < eps < 1/2.
double epsilon_factor(double eps);

/// A_m[i, j] = 1 / (|i - j| + 1).
Tile hilbert_tile(int m);

/// D^A_i for the HSOS labeling, by the interval rule min(a,b) <= i <= max(a,b).
RationalMatrix hilbert_distinguisher(int m, int position);

/// D^A_i from the cross-answer equality pattern of a labeling.
RationalMatrix tile_distinguisher(const SearchLabeling& lab, int position);

AdversaryMatrix uniform_from_tile(const std::shared_ptr<const SearchLabeling>& lab, const Tile& tile);

/// Γ_{OS_m} = A_m - I.
AdversaryMatrix os_adversary(int m);

/// Seeded valid Γ: entries k/1000 with k uniform in [1, 1000] on every
/// different-answer pair, zero elsewhere.
AdversaryMatrix random_adversary(ProblemPtr problem, std::uint64_t seed);

/// Inner function of a composition: its labeling and the tile A_p.
struct InnerSpec {
  std::shared_ptr<const SearchLabeling> labeling;
  Tile tile;
};

/// The composition adversary matrix over compose(outer.problem, inner problems).
/// ||A_p|| enters the equal-symbol blocks as a float spectral norm.
AdversaryMatrix compose_adversary(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner,
                                  double tol = kDefaultSpectralTol);

/// δ_h[x] = δ_f[x~] * prod_p δ_{A_p}[variant of block p], unit length.
std::vector<double> composed_eigenvector(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner,
                                         const QueryProblem& composed, double tol = kDefaultSpectralTol);

/// Entrywise comparison of Γ_h ∘ D^h_i against the composition generated by
/// Γ_f ∘ D^f_p, A_p ∘ D^{A_p}_q and the other A_d. Norm factors are kept as
/// formal tokens so the check is exact. Requires rational outer and tiles.
struct IdentityCheck {
  std::size_t entries_checked = 0;
  std::size_t mismatches = 0;
  std::optional<std::string> first_mismatch;
};
IdentityCheck check_distinguisher_identity(const AdversaryMatrix& outer, const std::vector<InnerSpec>& inner,
                                           int position);

/// Block p and offset q (both 1-based) of position i in a composed problem.
std::pair<int, int> block_of_position(const QueryProblem& composed, int position);

struct RatioOptions {
  double eps = 1.0 / 3.0;
  double tol = kDefaultSpectralTol;
  int jobs = 1;
};

/// ||Γ|| / max_i ||Γ ∘ D_i|| for the given Γ. The position scan runs on
/// `jobs` threads. Throws if the denominator is zero.
BoundReport sa_ratio(const AdversaryMatrix& g, const RatioOptions& opts = {});

/// min_i ||A|| / ||A ∘ D^A_i|| over the positions of the labeled problem.
BoundReport tile_ratio(const Tile& tile, const SearchLabeling& lab, const RatioOptions& opts = {});

struct SymmetrizeResult {
  AdversaryMatrix gamma;  // Γ'
  std::shared_ptr<const SearchLabeling> labeling;
  /// Γ was divided by this before averaging so that max_i ||Γ ∘ D_i|| = 1.
  double scale = 1.0;
  double normalized_norm = 0.0;  // ||Γ / scale||
  /// Variants removed because every permuted eigenvector vanished there.
  std::vector<int> dropped_variants;
};

inline constexpr double kZeroEigenThreshold = 1e-12;
inline constexpr std::size_t kMaxSymmetrizeAnswers = 6;

/// Averages Γ over all permutations of the answer alphabet, weighted by the
/// permuted principal eigenvector. The result is uniform bit for bit.
SymmetrizeResult symmetrize(const AdversaryMatrix& g, const std::shared_ptr<const SearchLabeling>& lab,
                            const RatioOptions& opts = {});

/// Extracts the tile of a uniform Γ. Throws naming the first violating pair.
Tile tile_of_uniform(const AdversaryMatrix& g, const SearchLabeling& lab);

}  // namespace tarskiq
