#include "tarskiq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

namespace tarskiq {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Floor on the cap so tiny matrices with a small spectral gap still converge.
constexpr std::size_t kMinIterations = 1000;
constexpr double kStartPerturbation = 1e-3;
// Krylov dimension per restart.
constexpr std::size_t kKrylov = 40;

// Largest eigenpair of a small dense symmetric matrix by cyclic Jacobi.
std::pair<double, std::vector<double>> top_eigenpair(std::vector<double> a, std::size_t k) {
  std::vector<double> q(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) q[i * k + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) off += a[i * k + j] * a[i * k + j];
    }
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t r = p + 1; r < k; ++r) {
        const double apr = a[p * k + r];
        if (apr == 0.0) continue;
        const double theta = (a[r * k + r] - a[p * k + p]) / (2.0 * apr);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < k; ++i) {
          const double aip = a[i * k + p], air = a[i * k + r];
          a[i * k + p] = c * aip - s * air;
          a[i * k + r] = s * aip + c * air;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double api = a[p * k + i], ari = a[r * k + i];
          a[p * k + i] = c * api - s * ari;
          a[r * k + i] = s * api + c * ari;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double qip = q[i * k + p], qir = q[i * k + r];
          q[i * k + p] = c * qip - s * qir;
          q[i * k + r] = s * qip + c * qir;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (a[i * k + i] > a[best * k + best]) best = i;
  }
  std::vector<double> vec(k);
  for (std::size_t i = 0; i < k; ++i) vec[i] = q[i * k + best];
  return {a[best * k + best], std::move(vec)};
}

}  // namespace

SymmetricOperator SymmetricOperator::from_dense(const LabeledMatrix& m) {
  return masked(m, [](std::size_t, std::size_t) { return true; });
}

void SymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

// Restarted Lanczos with full reorthogonalization. Each restart begins at the
// current top Ritz vector, so with a single Krylov step this is plain power
// iteration; the extra steps only accelerate it when the top of the spectrum
// is clustered. `iterations` counts operator applications.
SpectralResult spectral_norm(const SymmetricOperator& op, double tol, std::string_view name) {
  if (!(tol > 0.0)) invalid_argument("spectral_norm: tolerance must be positive");
  const std::size_t n = op.dim();
  SpectralResult result;
  if (n == 0) return result;

  std::vector<double> v(n, 1.0);
  v[0] += kStartPerturbation;
  {
    const double s = norm2(v);
    for (auto& x : v) x /= s;
  }
  std::vector<double> w(n);
  const std::size_t krylov = std::min(n, kKrylov);
  std::vector<std::vector<double>> basis;
  const std::size_t cap = std::max<std::size_t>(100 * n, kMinIterations);
  std::size_t applied = 0;

  while (true) {
    op.apply(v, w);
    ++applied;
    const double lambda = dot(v, w);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - lambda * v[i];
      res2 += d * d;
    }
    const double residual = std::sqrt(res2);
    result.residual = residual;
    if (residual <= tol * std::max(lambda, 0.0)) {
      // A top eigenvector of a nonnegative matrix stays one under |.|; this
      // picks the nonnegative representative.
      for (auto& x : v) x = std::abs(x);
      result.norm = std::max(lambda, 0.0);
      result.eigenvector = std::move(v);
      result.iterations = applied;
      return result;
    }
    if (applied >= cap) break;

    // Krylov basis from v; w already holds op(v).
    basis.assign(1, v);
    std::vector<double> t(krylov * krylov, 0.0);
    std::size_t k = 0;
    while (true) {
      const auto& q = basis[k];
      const double alpha = dot(q, w);
      t[k * krylov + k] = alpha;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          const double c = dot(b, w);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
        }
      }
      const double beta = norm2(w);
      ++k;
      if (k == krylov || applied >= cap || beta <= 1e-14 * std::max(std::abs(alpha), 1e-300)) break;
      // Ritz residual of the current top pair is beta times its last
      // coefficient; stop extending once it is below the target.
      {
        std::vector<double> small(k * k);
        for (std::size_t r = 0; r < k; ++r) {
          for (std::size_t c = 0; c < k; ++c) small[r * k + c] = t[r * krylov + c];
        }
        const auto [theta, y] = top_eigenpair(std::move(small), k);
        if (beta * std::abs(y[k - 1]) <= 0.5 * tol * std::max(theta, 0.0)) break;
      }
      t[(k - 1) * krylov + k] = beta;
      t[k * krylov + (k - 1)] = beta;
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / beta;
      basis.push_back(std::move(next));
      op.apply(basis.back(), w);
      ++applied;
    }
    std::vector<double> small(k * k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) small[r * k + c] = t[r * krylov + c];
    }
    const auto s = top_eigenpair(std::move(small), k).second;
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) v[i] += s[j] * basis[j][i];
    }
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
  }
  std::ostringstream msg;
  msg << "spectral_norm: Lanczos iteration on '" << name << "' (dim " << n << ") did not converge after "
      << cap << " iterations; residual " << result.residual;
  fail(ErrorKind::Numeric, msg.str());
}

SpectralResult spectral_norm(const LabeledMatrix& m, double tol, std::string_view name) {
  return spectral_norm(SymmetricOperator::from_dense(m), tol, name);
}

double rayleigh_quotient(const LabeledMatrix& m, std::span<const double> v) {
  if (v.size() != m.dim()) invalid_argument("rayleigh_quotient: vector length mismatch");
  double num = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r) num += v[r] * dot(m.row(r), v);
  const double den = dot(v, v);
  if (den == 0.0) invalid_argument("rayleigh_quotient: zero probe vector");
  return num / den;
}

}  // namespace tarskiq
