#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tarskiq/labeled_matrix.hpp"

namespace tarskiq {

inline constexpr double kDefaultSpectralTol = 1e-9;

struct SpectralResult {
  double norm = 0.0;
  /// Unit-length Perron vector (entries nonnegative up to rounding).
  std::vector<double> eigenvector;
  std::size_t iterations = 0;
  /// ||M v - norm v||; convergence means residual <= tol * norm.
  double residual = 0.0;
};

/// Row-compressed copy of a nonnegative symmetric matrix, optionally with a
/// 0/1 mask applied. Power iteration runs on this instead of the dense matrix
/// because adversary matrices and their masked versions are mostly zeros.
class SymmetricOperator {
 public:
  SymmetricOperator() = default;

  static SymmetricOperator from_dense(const LabeledMatrix& m);

  /// Keeps entry (r, c) iff keep(r, c). keep must be symmetric.
  template <class Keep>
  static SymmetricOperator masked(const LabeledMatrix& m, Keep&& keep) {
    SymmetricOperator op;
    op.dim_ = m.dim();
    op.row_start_.reserve(op.dim_ + 1);
    op.row_start_.push_back(0);
    for (std::size_t r = 0; r < op.dim_; ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < op.dim_; ++c) {
        if (row[c] != 0.0 && keep(r, c)) {
          op.cols_.push_back(static_cast<std::uint32_t>(c));
          op.values_.push_back(row[c]);
        }
      }
      op.row_start_.push_back(op.values_.size());
    }
    return op;
  }

  /// Sub-operator keeping the stored entries (r, c) with keep(r, c).
  template <class Keep>
  SymmetricOperator filtered(Keep&& keep) const {
    SymmetricOperator op;
    op.dim_ = dim_;
    op.row_start_.reserve(dim_ + 1);
    op.row_start_.push_back(0);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
        if (keep(r, static_cast<std::size_t>(cols_[k]))) {
          op.cols_.push_back(cols_[k]);
          op.values_.push_back(values_[k]);
        }
      }
      op.row_start_.push_back(op.values_.size());
    }
    return op;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

/// Largest eigenvalue (= spectral norm) of a nonnegative symmetric matrix and
/// its nonnegative Perron vector. Power iteration from the all-ones start,
/// accelerated by restarted Lanczos steps for clustered top eigenvalues.
/// Throws ErrorKind::Numeric naming `name` if the iteration cap is reached.
SpectralResult spectral_norm(const SymmetricOperator& op, double tol = kDefaultSpectralTol,
                             std::string_view name = "matrix");

SpectralResult spectral_norm(const LabeledMatrix& m, double tol = kDefaultSpectralTol,
                             std::string_view name = "matrix");

/// v^T M v / v^T v.
double rayleigh_quotient(const LabeledMatrix& m, std::span<const double> v);

}  // namespace tarskiq
