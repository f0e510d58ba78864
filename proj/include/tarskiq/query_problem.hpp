#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tarskiq/labeled_matrix.hpp"
#include "tarskiq/symbol.hpp"

namespace tarskiq {

class QueryProblem;
using ProblemPtr = std::shared_ptr<const QueryProblem>;

/// Bookkeeping carried by problems built with compose().
struct CompositeInfo {
  ProblemPtr outer;
  std::vector<ProblemPtr> inner;
  std::vector<int> block_offsets;  // 0-based start of block p in an instance
  /// Per composed instance: x~ as an outer instance string, and its index.
  std::vector<std::string> tilde;
  std::vector<std::size_t> tilde_index;
  /// Per composed instance, per block: index of the block in inner[p].
  std::vector<std::vector<std::size_t>> block_index;
};

/// A finite query problem f : S -> H with S a set of equal-length strings
/// over a symbol alphabet G. Positions are 1-based in the public API.
class QueryProblem {
 public:
  QueryProblem(std::string name, std::vector<Symbol> input_alphabet,
               std::vector<Letter> output_alphabet, int length,
               std::vector<std::string> instances, std::vector<Letter> answers);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Symbol>& input_alphabet() const noexcept { return input_alphabet_; }
  const std::vector<Letter>& output_alphabet() const noexcept { return output_alphabet_; }
  int length() const noexcept { return length_; }
  std::size_t size() const noexcept { return instances_.size(); }

  const std::string& instance(std::size_t idx) const { return instances_.at(idx); }
  const std::vector<std::string>& instances() const noexcept { return instances_; }
  const Letter& answer(std::size_t idx) const { return answers_.at(idx); }
  Symbol at(std::size_t idx, int position) const;

  std::optional<std::size_t> find(const std::string& instance) const;
  std::vector<std::size_t> preimage(const Letter& answer) const;

  const CompositeInfo* composite() const noexcept { return composite_.get(); }

  /// JSON dump: {"alphabet": [...], "length": n, "instances": [{"s", "answer"}]}.
  std::string to_json() const;

 private:
  friend ProblemPtr compose(const ProblemPtr& outer, const std::vector<ProblemPtr>& inner);

  std::string name_;
  std::vector<Symbol> input_alphabet_;
  std::vector<Letter> output_alphabet_;
  int length_ = 0;
  std::vector<std::string> instances_;
  std::vector<Letter> answers_;
  std::unordered_map<std::string, std::size_t> index_;
  std::shared_ptr<const CompositeInfo> composite_;
};

/// Ordered search: instances ↑^{k-1} * ↓^{m-k} ↦ k, ordered by k.
ProblemPtr make_os(int m);

/// Hidden-symbol ordered search: →^{k-1} x ←^{m-k} ↦ x for x ∈ {↑, ↓, *},
/// ordered by (x, k) with symbols in code order.
ProblemPtr make_hsos(int m);

/// h = f ∘ (g_1, ..., g_k). Instances are enumerated outer-instance-major,
/// then lexicographically by inner index with block 1 most significant.
ProblemPtr compose(const ProblemPtr& outer, const std::vector<ProblemPtr>& inner);

/// OS_a ∘ (HSOS_b, ..., HSOS_b).
ProblemPtr make_nos(int a, int b);

/// 0/1 matrix over instances, 1 where characters at position i differ.
RationalMatrix distinguisher(const QueryProblem& p, int position);

/// Instance strings as matrix labels.
std::vector<std::string> instance_labels(const QueryProblem& p);

/// Labeling (σ, j) of a generalized search function, with the observed
/// character-equality patterns at every position.
class SearchLabeling {
 public:
  enum class Pattern : std::int8_t { Unobserved = -1, Equal = 0, Differ = 1, Conflict = 2 };

  /// sigma_of[x] indexes `sigmas`, variant_of[x] is 1-based. Throws unless the
  /// assignment is a bijection onto Σ × [m] that respects answers.
  SearchLabeling(ProblemPtr problem, std::vector<Letter> sigmas, std::vector<int> sigma_of,
                 std::vector<int> variant_of);

  const ProblemPtr& problem() const noexcept { return problem_; }
  const std::vector<Letter>& sigmas() const noexcept { return sigmas_; }
  int variants() const noexcept { return variants_; }

  std::size_t instance_at(std::size_t sigma, int variant) const;
  int sigma_of(std::size_t instance) const { return sigma_of_.at(instance); }
  int variant_of(std::size_t instance) const { return variant_of_.at(instance); }

  /// Equality of (σ1, j1)_i and (σ2, j2)_i over pairs with σ1 ≠ σ2.
  Pattern cross_pattern(int position, int j1, int j2) const;
  /// Same, over pairs with σ1 = σ2.
  Pattern same_pattern(int position, int j1, int j2) const;

  /// Both conditions of a generalized search function hold.
  bool valid() const noexcept { return !first_conflict_.has_value(); }
  const std::optional<std::string>& first_conflict() const noexcept { return first_conflict_; }

 private:
  std::size_t pattern_slot(int position, int j1, int j2) const;

  ProblemPtr problem_;
  std::vector<Letter> sigmas_;
  int variants_ = 0;
  std::vector<int> sigma_of_;
  std::vector<int> variant_of_;
  std::vector<std::size_t> by_label_;
  std::vector<Pattern> cross_;
  std::vector<Pattern> same_;
  std::optional<std::string> first_conflict_;
};

/// Groups instances by answer, orders each group by the first position whose
/// character occurs there only within that group, and validates the result.
std::optional<SearchLabeling> detect_search_labeling(const ProblemPtr& p);

/// The (σ, j) ↦ →^{j-1} σ ←^{m-j} labeling of HSOS_m.
SearchLabeling hsos_labeling(const ProblemPtr& hsos);

}  // namespace tarskiq
