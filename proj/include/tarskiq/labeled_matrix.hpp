#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tarskiq/error.hpp"
#include "tarskiq/rational.hpp"

namespace tarskiq {

/// Dense nonnegative symmetric matrix whose rows and columns are labeled by
/// opaque byte strings (problem instances, tile variants, ...).
///
/// Values are immutable once constructed. Construction validates symmetry,
/// nonnegativity and label distinctness, so every live object satisfies them.
template <class T>
class BasicLabeledMatrix {
 public:
  using value_type = T;

  BasicLabeledMatrix() = default;

  BasicLabeledMatrix(std::vector<std::string> labels, std::vector<T> entries)
      : dim_(labels.size()), labels_(std::move(labels)), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      invalid_argument("labeled matrix: expected " + std::to_string(dim_ * dim_) +
                       " entries, got " + std::to_string(entries_.size()));
    }
    validate();
  }

  /// Builds the matrix from the upper triangle of `entry(r, c)`; the lower
  /// triangle is mirrored so symmetry holds exactly.
  template <class Fn>
  static BasicLabeledMatrix from_function(std::vector<std::string> labels, Fn&& entry) {
    const std::size_t n = labels.size();
    std::vector<T> values(n * n, T(0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r; c < n; ++c) {
        T v = entry(r, c);
        values[r * n + c] = v;
        values[c * n + r] = v;
      }
    }
    return BasicLabeledMatrix(std::move(labels), std::move(values));
  }

  static BasicLabeledMatrix zeros(std::vector<std::string> labels) {
    const std::size_t n = labels.size();
    return BasicLabeledMatrix(std::move(labels), std::vector<T>(n * n, T(0)));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::span<const T> entries() const noexcept { return entries_; }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(entries_).subspan(r * dim_, dim_);
  }

  const T& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

  friend bool operator==(const BasicLabeledMatrix&, const BasicLabeledMatrix&) = default;

 private:
  void validate() const {
    std::unordered_set<std::string> seen;
    seen.reserve(dim_);
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) invalid_argument("labeled matrix: duplicate label");
    }
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const T& v = entries_[r * dim_ + c];
        if (v < T(0)) {
          invalid_argument("labeled matrix: negative entry at (" + std::to_string(r) + ", " +
                           std::to_string(c) + ")");
        }
        if (c > r && !(v == entries_[c * dim_ + r])) {
          invalid_argument("labeled matrix: asymmetric entry at (" + std::to_string(r) + ", " +
                           std::to_string(c) + ")");
        }
      }
    }
  }

  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<T> entries_;
};

using LabeledMatrix = BasicLabeledMatrix<double>;
using RationalMatrix = BasicLabeledMatrix<Rational>;

LabeledMatrix to_float(const RationalMatrix& m);

/// Pointwise product. Both operands must carry identical label order.
LabeledMatrix hadamard(const LabeledMatrix& a, const LabeledMatrix& b);
RationalMatrix hadamard(const RationalMatrix& a, const RationalMatrix& b);

/// Kronecker product; output label (i * dim(b) + j) is label_a(i) + label_b(j).
LabeledMatrix tensor(const LabeledMatrix& a, const LabeledMatrix& b);
RationalMatrix tensor(const RationalMatrix& a, const RationalMatrix& b);

/// Labels 0..n-1 encoded as one byte each; used for tile (variant) indices.
std::vector<std::string> index_labels(std::size_t n);

enum class LabelStyle {
  Hex,      // raw bytes as lowercase hex
  Symbols,  // bytes are problem symbols, rendered by name
};

std::string render_label(const std::string& label, LabelStyle style);

/// {"dim": d, "labels": [...], "entries": [[...]]}. Rational entries are
/// emitted as "p/q" strings, float entries as JSON numbers.
std::string to_json(const LabeledMatrix& m, LabelStyle style);
std::string to_json(const RationalMatrix& m, LabelStyle style);

}  // namespace tarskiq
