#include "tarskiq/tarskiq.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tarskiq/error.hpp"
#include "tarskiq/lab.hpp"
#include "tarskiq/lattice.hpp"

struct tq_lattice {
  tarskiq::LatticeFn fn;
};

struct tq_report {
  tarskiq::SuiteReport report;
};

namespace {

thread_local std::string last_error;

tq_status status_of(tarskiq::ErrorKind kind) {
  switch (kind) {
    case tarskiq::ErrorKind::InvalidArgument: return TQ_ERR_INVALID;
    case tarskiq::ErrorKind::Numeric: return TQ_ERR_NUMERIC;
    case tarskiq::ErrorKind::Io: return TQ_ERR_IO;
    case tarskiq::ErrorKind::CheckFailed: return TQ_ERR_CHECK_FAILED;
  }
  return TQ_ERR_INTERNAL;
}

// No exception crosses the C boundary.
template <class Fn>
tq_status guarded(Fn&& fn) {
  try {
    fn();
    return TQ_OK;
  } catch (const tarskiq::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TQ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TQ_ERR_INTERNAL;
  }
}

tq_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return TQ_ERR_INVALID;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tarskiq::LabOptions lab_options(const tq_options* o) {
  tarskiq::LabOptions lo;
  if (!o) return lo;
  lo.n = o->n;
  lo.m = o->m;
  lo.a = o->a;
  lo.b = o->b;
  lo.eps = o->eps;
  lo.tol = o->tol;
  lo.seed = o->seed;
  lo.sample = o->sample;
  lo.jobs = o->jobs;
  if (!(lo.tol > 0.0)) tarskiq::invalid_argument("tolerance must be positive");
  if (lo.sample < 0) tarskiq::invalid_argument("sample must be nonnegative");
  if (lo.jobs < 1) tarskiq::invalid_argument("jobs must be at least 1");
  tarskiq::epsilon_factor(lo.eps);
  return lo;
}

}  // namespace

extern "C" {

const char* tq_version(void) { return "1.0.0"; }

const char* tq_last_error(void) { return last_error.c_str(); }

void tq_string_free(char* s) { std::free(s); }

void tq_options_default(tq_options* out) {
  if (!out) return;
  *out = tq_options{0, 0, 0, 0, 1.0 / 3.0, tarskiq::kDefaultSpectralTol, 0, 200, 1};
}

tq_status tq_lattice_parse(const char* json, tq_lattice** out) {
  if (!json || !out) return null_argument("json/out");
  *out = nullptr;
  return guarded([&] { *out = new tq_lattice{tarskiq::LatticeFn::from_json(json)}; });
}

tq_status tq_lattice_load(const char* path, tq_lattice** out) {
  if (!path || !out) return null_argument("path/out");
  *out = nullptr;
  return guarded([&] {
    std::ifstream is(path, std::ios::binary);
    if (!is) tarskiq::fail(tarskiq::ErrorKind::Io, std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    if (is.bad()) tarskiq::fail(tarskiq::ErrorKind::Io, std::string("cannot read '") + path + "'");
    *out = new tq_lattice{tarskiq::LatticeFn::from_json(ss.str())};
  });
}

void tq_lattice_free(tq_lattice* f) { delete f; }

tq_status tq_lattice_shape(const tq_lattice* f, int* n, int* k) {
  if (!f || !n || !k) return null_argument("lattice/n/k");
  *n = f->fn.n();
  *k = f->fn.k();
  return TQ_OK;
}

tq_status tq_lattice_check_monotone(const tq_lattice* f, int* monotone, char** witness) {
  if (!f || !monotone) return null_argument("lattice/monotone");
  if (witness) *witness = nullptr;
  return guarded([&] {
    const auto r = tarskiq::check_monotone(f->fn);
    *monotone = r.monotone ? 1 : 0;
    if (witness && r.witness) {
      const auto& [a, b] = *r.witness;
      *witness = dup_string(nlohmann::json::array({{a.x, a.y}, {b.x, b.y}}).dump());
    }
  });
}

tq_status tq_solve(const tq_lattice* f, tq_algorithm algo, tq_solve_result* out) {
  if (!f || !out) return null_argument("lattice/out");
  if (algo != TQ_ALGO_BRUTE && algo != TQ_ALGO_NESTED) {
    last_error = "unknown algorithm";
    return TQ_ERR_INVALID;
  }
  return guarded([&] {
    const auto r = tarskiq::solve_checked(f->fn, algo == TQ_ALGO_BRUTE ? tarskiq::Algorithm::Brute
                                                                       : tarskiq::Algorithm::Nested);
    *out = tq_solve_result{r.fixed_point.x, r.fixed_point.y, r.queries_used, r.fell_back ? 1 : 0};
  });
}

tq_status tq_generate(int n, const int* c, size_t c_len, int i, const char* dir, size_t* files_written) {
  if (!dir) return null_argument("dir");
  return guarded([&] {
    std::optional<std::vector<int>> cv;
    std::optional<int> iv;
    if (c) cv = std::vector<int>(c, c + c_len);
    if (i != 0) iv = i;
    const auto instances = tarskiq::generate_instances(n, cv, iv);
    const auto paths = tarskiq::write_instances(instances, dir);
    if (files_written) *files_written = paths.size();
  });
}

tq_status tq_verify(const char* suite, const tq_options* opts, tq_report** out) {
  if (!suite || !out) return null_argument("suite/out");
  *out = nullptr;
  return guarded([&] { *out = new tq_report{tarskiq::run_suite(suite, lab_options(opts))}; });
}

void tq_report_free(tq_report* r) { delete r; }

size_t tq_report_checks(const tq_report* r) { return r ? r->report.checks_run : 0; }

size_t tq_report_failure_count(const tq_report* r) { return r ? r->report.failures.size() : 0; }

tq_status tq_report_failure(const tq_report* r, size_t index, const char** id, const char** counterexample) {
  if (!r || !id || !counterexample) return null_argument("report/id/counterexample");
  if (index >= r->report.failures.size()) {
    last_error = "failure index out of range";
    return TQ_ERR_INVALID;
  }
  *id = r->report.failures[index].id.c_str();
  *counterexample = r->report.failures[index].counterexample.c_str();
  return TQ_OK;
}

double tq_report_wall_time(const tq_report* r) { return r ? r->report.wall_time : 0.0; }

tq_status tq_report_json(const tq_report* r, char** out) {
  if (!r || !out) return null_argument("report/out");
  *out = nullptr;
  return guarded([&] { *out = dup_string(r->report.to_json()); });
}

tq_status tq_bound(const char* problem, const int* sizes, size_t sizes_len, const int* sizes_b, size_t sizes_b_len,
                   const tq_options* opts, tq_format format, char** out) {
  if (!problem || !out || (sizes_len && !sizes) || (sizes_b_len && !sizes_b)) return null_argument("problem/sizes/out");
  *out = nullptr;
  return guarded([&] {
    tarskiq::BoundRequest req{problem, std::vector<int>(sizes, sizes + sizes_len),
                              std::vector<int>(sizes_b, sizes_b + sizes_b_len)};
    const auto rows = tarskiq::bound_table(req, lab_options(opts));
    *out = dup_string(format == TQ_FORMAT_JSON ? tarskiq::bound_json(rows) : tarskiq::bound_csv(rows));
  });
}

tq_status tq_bound_matrix(const char* problem, int size, int size_b, char** out) {
  if (!problem || !out) return null_argument("problem/out");
  *out = nullptr;
  return guarded([&] { *out = dup_string(tarskiq::bound_matrix_json(problem, size, size_b) + "\n"); });
}

}  // extern "C"
