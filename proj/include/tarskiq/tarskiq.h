/* C interface to the tarskiq workbench.
 *
 * Every function returns a tq_status. On failure the message is available
 * from tq_last_error() on the same thread until the next failing call.
 * Strings returned through char** are owned by the caller and released with
 * tq_string_free. Handles are released with their *_free function; passing
 * NULL to any *_free is a no-op. */
#ifndef TARSKIQ_H
#define TARSKIQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TQ_API __declspec(dllexport)
#else
#define TQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tq_status {
  TQ_OK = 0,
  TQ_ERR_CHECK_FAILED = 1, /* a verified property does not hold */
  TQ_ERR_INVALID = 2,      /* bad argument or malformed input */
  TQ_ERR_IO = 3,
  TQ_ERR_NUMERIC = 4, /* e.g. an eigenvalue iteration did not converge */
  TQ_ERR_INTERNAL = 5
} tq_status;

typedef enum tq_algorithm { TQ_ALGO_BRUTE = 0, TQ_ALGO_NESTED = 1 } tq_algorithm;

typedef enum tq_format { TQ_FORMAT_CSV = 0, TQ_FORMAT_JSON = 1 } tq_format;

/* Zero for n, m, a or b selects the suite's default sweep. */
typedef struct tq_options {
  int n;
  int m;
  int a;
  int b;
  double eps;
  double tol;
  uint64_t seed;
  int sample;
  int jobs;
} tq_options;

typedef struct tq_lattice tq_lattice;
typedef struct tq_report tq_report;

typedef struct tq_solve_result {
  int x;
  int y;
  uint64_t queries_used;
  int fell_back;
} tq_solve_result;

TQ_API const char* tq_version(void);
TQ_API const char* tq_last_error(void);
TQ_API void tq_string_free(char* s);

/* eps 1/3, tol 1e-9, seed 0, sample 200, jobs 1, sizes 0. */
TQ_API void tq_options_default(tq_options* out);

/* Lattice functions in the JSON table format. */
TQ_API tq_status tq_lattice_load(const char* path, tq_lattice** out);
TQ_API tq_status tq_lattice_parse(const char* json, tq_lattice** out);
TQ_API void tq_lattice_free(tq_lattice* f);
TQ_API tq_status tq_lattice_shape(const tq_lattice* f, int* n, int* k);
/* *monotone is 1 or 0; witness receives a JSON pair or NULL. */
TQ_API tq_status tq_lattice_check_monotone(const tq_lattice* f, int* monotone, char** witness);
/* Refuses non-monotone input with TQ_ERR_CHECK_FAILED. */
TQ_API tq_status tq_solve(const tq_lattice* f, tq_algorithm algo, tq_solve_result* out);

/* Writes <dir>/<stem>.json and <stem>.meta.json per instance. With c == NULL
 * (and i == 0) the whole family for n is written. */
TQ_API tq_status tq_generate(int n, const int* c, size_t c_len, int i, const char* dir, size_t* files_written);

/* Runs a verification suite. A report with failures still returns TQ_OK. */
TQ_API tq_status tq_verify(const char* suite, const tq_options* opts, tq_report** out);
TQ_API void tq_report_free(tq_report* r);
TQ_API size_t tq_report_checks(const tq_report* r);
TQ_API size_t tq_report_failure_count(const tq_report* r);
/* Pointers stay valid until tq_report_free. */
TQ_API tq_status tq_report_failure(const tq_report* r, size_t index, const char** id, const char** counterexample);
TQ_API double tq_report_wall_time(const tq_report* r);
TQ_API tq_status tq_report_json(const tq_report* r, char** out);

/* Bound table for problem os, hsos, nos or tarski. sizes_b is used by nos
 * only; empty size lists select the default sweep. */
TQ_API tq_status tq_bound(const char* problem, const int* sizes, size_t sizes_len, const int* sizes_b,
                          size_t sizes_b_len, const tq_options* opts, tq_format format, char** out);

/* Labeled JSON dump of the adversary matrix behind one bound row. */
TQ_API tq_status tq_bound_matrix(const char* problem, int size, int size_b, char** out);

#ifdef __cplusplus
}
#endif

#endif
