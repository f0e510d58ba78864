#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tarskiq/adversary.hpp"
#include "tarskiq/herringbone.hpp"
#include "tarskiq/lattice.hpp"

namespace tarskiq {

/// Shared knobs of the experiment runner. Zero for n, m, a or b means "the
/// suite's default sweep".
struct LabOptions {
  int n = 0;
  int m = 0;
  int a = 0;
  int b = 0;
  double eps = 1.0 / 3.0;
  double tol = kDefaultSpectralTol;
  std::uint64_t seed = 0;
  /// Interior points sampled by the n >= 3 covering sweep; 0 means all.
  int sample = 200;
  int jobs = 1;
};

struct SuiteFailure {
  std::string id;
  std::string counterexample;
};

struct SuiteReport {
  std::string suite;
  std::size_t checks_run = 0;
  /// In check order, independent of how work was sharded.
  std::vector<SuiteFailure> failures;
  double wall_time = 0.0;

  bool ok() const noexcept { return failures.empty(); }
  std::string to_json() const;
};

const std::vector<std::string>& suite_names();

/// Throws InvalidArgument for an unknown suite name.
SuiteReport run_suite(std::string_view suite, const LabOptions& opts);

struct GeneratedInstance {
  InstanceParams params;
  /// "tarski_n2_C1-2-1_i1"; the instance goes to <stem>.json and the
  /// provenance record to <stem>.meta.json.
  std::string stem;
  LatticeFn function;
};

/// The whole family when c and i are both absent, otherwise the single
/// instance they select (both are then required).
std::vector<GeneratedInstance> generate_instances(int n, const std::optional<std::vector<int>>& c,
                                                  const std::optional<int>& i);

/// Writes every instance and sidecar under dir (created if missing) and
/// returns the instance paths. I/O problems raise ErrorKind::Io.
std::vector<std::string> write_instances(const std::vector<GeneratedInstance>& instances, const std::string& dir);

inline constexpr std::size_t kMaxBoundInstances = 20000;

struct BoundRow {
  std::string problem;
  std::string size;
  BoundReport report;
};

struct BoundRequest {
  std::string problem;  // os, hsos, nos or tarski
  std::vector<int> sizes;
  /// Second dimension for nos (b values); the table is the product a x b.
  std::vector<int> sizes_b;
};

/// Rows in request order. For tarski the denominator carries the factor 7
/// from the seven-point covering, so sa = SA(NOS_{n+1,n}) / 7.
std::vector<BoundRow> bound_table(const BoundRequest& req, const LabOptions& opts);

/// problem,size,numerator,denominator,sa,lb with "%.10g" in the C locale.
std::string bound_csv(const std::vector<BoundRow>& rows);
std::string bound_json(const std::vector<BoundRow>& rows);

/// The adversary matrix behind one bound row, dumped as labeled JSON.
std::string bound_matrix_json(const std::string& problem, int size, int size_b);

/// Refuses non-monotone input with ErrorKind::CheckFailed naming the witness.
SolveResult solve_checked(const LatticeFn& f, Algorithm algo);

/// 4 (ceil(log2 n) + 1)^2.
std::uint64_t nested_query_budget(int n);

}  // namespace tarskiq
