#pragma once

// Shared test scaffolding: a dense Eigen eigensolver as the independent
// oracle for spectral norms, and small seeded generators for property tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <type_traits>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tarskiq/error.hpp"
#include "tarskiq/labeled_matrix.hpp"
#include "tarskiq/lattice.hpp"
#include "tarskiq/rational.hpp"

namespace testkit {

// Largest |eigenvalue| of a symmetric matrix from a full decomposition.
template <class M>
double oracle_norm(const M& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if constexpr (std::is_same_v<M, tarskiq::RationalMatrix>) {
        dense(r, c) = tarskiq::to_double(m(r, c));
      } else {
        dense(r, c) = m(r, c);
      }
    }
  }
  if (n == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Kind of the tarskiq::Error raised by fn; fails the test if none is raised.
template <class Fn>
tarskiq::ErrorKind error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const tarskiq::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return tarskiq::ErrorKind::CheckFailed;
}

inline bool close_rel(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale;
}

// Every generator draws from one mt19937_64 so a failing case replays from
// its seed alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int int_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real_in(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  // Nonnegative symmetric, about `density` of the off-diagonal pairs nonzero.
  tarskiq::LabeledMatrix sym_matrix(std::size_t dim, double density = 0.6) {
    return tarskiq::LabeledMatrix::from_function(tarskiq::index_labels(dim), [&](std::size_t, std::size_t) {
      return coin(density) ? real_in(0.0, 2.0) : 0.0;
    });
  }

  // Entries k/den with k in [0, den].
  tarskiq::RationalMatrix rational_matrix(std::size_t dim, int den = 12) {
    return tarskiq::RationalMatrix::from_function(tarskiq::index_labels(dim), [&](std::size_t, std::size_t) {
      return tarskiq::Rational(int_in(0, den), den);
    });
  }

  // 0/1 matrix with entries of `upper` kept only where keep is 1: a pair
  // lower <= upper elementwise.
  std::pair<tarskiq::LabeledMatrix, tarskiq::LabeledMatrix> ordered_masks(std::size_t dim) {
    std::vector<double> hi(dim * dim), lo(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = r; c < dim; ++c) {
        const double h = coin(0.7) ? 1.0 : 0.0;
        const double l = (h > 0.0 && coin(0.5)) ? 1.0 : 0.0;
        hi[r * dim + c] = hi[c * dim + r] = h;
        lo[r * dim + c] = lo[c * dim + r] = l;
      }
    }
    return {tarskiq::LabeledMatrix(tarskiq::index_labels(dim), lo), tarskiq::LabeledMatrix(tarskiq::index_labels(dim), hi)};
  }

  std::vector<double> vec(std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = real_in(-1.0, 1.0);
    return v;
  }

  // Arbitrary (usually non-monotone) table on [n]^2.
  tarskiq::LatticeFn any_fn(int n) {
    std::vector<tarskiq::Point> values(static_cast<std::size_t>(n) * n);
    for (auto& p : values) p = {int_in(1, n), int_in(1, n)};
    return tarskiq::LatticeFn(n, 2, values);
  }

  // Monotone on [n]^2 by construction: each output coordinate is a clamped
  // sum of two nondecreasing step sequences, one per input axis.
  tarskiq::LatticeFn monotone_fn(int n) {
    auto steps = [&] {
      std::vector<int> s(static_cast<std::size_t>(n) + 1, 0);
      s[0] = int_in(-n, n);
      for (int i = 1; i <= n; ++i) s[i] = s[i - 1] + (coin(0.4) ? int_in(0, 2) : 0);
      return s;
    };
    const auto ax = steps(), ay = steps(), bx = steps(), by = steps();
    auto clamp = [n](int v) { return std::clamp(v, 1, n); };
    std::vector<tarskiq::Point> values;
    values.reserve(static_cast<std::size_t>(n) * n);
    for (int x = 1; x <= n; ++x) {
      for (int y = 1; y <= n; ++y) values.push_back({clamp(ax[x] + ay[y]), clamp(bx[x] + by[y])});
    }
    return tarskiq::LatticeFn(n, 2, values);
  }

  std::uint64_t seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testkit
