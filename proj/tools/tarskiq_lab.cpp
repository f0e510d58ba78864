// Command-line runner over the C interface: gen, verify, bound, solve.
// Exit status: 0 success, 1 check failure, 2 usage error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tarskiq/tarskiq.h"

namespace {

constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code(tq_status s) {
  switch (s) {
    case TQ_OK: return 0;
    case TQ_ERR_INVALID: return kExitUsage;
    case TQ_ERR_IO: return kExitIo;
    default: return kExitCheck;
  }
}

int report_error(tq_status s) {
  std::cerr << "error: " << tq_last_error() << "\n";
  return exit_code(s);
}

struct CString {
  char* p = nullptr;
  ~CString() { tq_string_free(p); }
};

// Accepts "p/q" or a decimal literal.
double parse_eps(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    const double v = std::stod(text, &used);
    if (used != text.size()) throw CLI::ValidationError("--eps", "not a number: " + text);
    return v;
  }
  const double num = std::stod(text.substr(0, slash), &used);
  const std::string den_text = text.substr(slash + 1);
  std::size_t used_den = 0;
  const double den = std::stod(den_text, &used_den);
  if (used != slash || used_den != den_text.size() || den == 0.0) {
    throw CLI::ValidationError("--eps", "not a fraction: " + text);
  }
  return num / den;
}

// Writes to --out when given, stdout otherwise.
int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return 0;
  }
  std::ofstream os(out_path, std::ios::binary);
  os << text;
  if (!os) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitIo;
  }
  return 0;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

struct Common {
  std::string eps = "1/3";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int sample = 200;
  int jobs = 1;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--eps", c.eps, "Bounded error, as p/q or a decimal in (0, 1/2)")->capture_default_str();
  app->add_option("--tol", c.tol, "Relative spectral tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Seed for sampled and random checks")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
  app->add_option("--format", c.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
}

tq_options to_options(const Common& c) {
  tq_options o;
  tq_options_default(&o);
  o.eps = parse_eps(c.eps);
  o.tol = c.tol;
  o.seed = c.seed;
  o.sample = c.sample;
  o.jobs = c.jobs;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral adversary workbench for Tarski fixed-point lower bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tq_version()));

  // gen
  int gen_n = 0;
  std::vector<int> gen_c;
  int gen_i = 0;
  std::string gen_out = ".";
  auto* gen = app.add_subcommand("gen", "Write herringbone instances and provenance sidecars");
  gen->add_option("--n", gen_n, "Chunk parameter (n' = n(n^2+n-1))")->required()->check(CLI::Range(2, 64));
  auto* c_opt = gen->add_option("--C", gen_c, "Entry indices C_1..C_{n+1}, comma separated")->delimiter(',');
  gen->add_option("--i", gen_i, "Chunk boundary holding the fixed point")->needs(c_opt);
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // verify
  std::string suite;
  int v_n = 0, v_m = 0, v_a = 0, v_b = 0;
  Common v_common;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"geometry", "composition", "hilbert", "symmetrize", "embedding", "covering", "solver"}));
  verify->add_option("--n", v_n, "Chunk parameter (geometry, embedding, covering, solver)");
  verify->add_option("--m", v_m, "Size (hilbert: every m' <= m; symmetrize: HSOS_m)");
  verify->add_option("--a", v_a, "Outer OS size (composition)");
  verify->add_option("--b", v_b, "Inner HSOS size (composition)");
  verify->add_option("--sample", v_common.sample, "Interior points sampled for n >= 3 covering; 0 for all")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_common(verify, v_common);

  // bound
  std::string problem;
  std::vector<int> b_n, b_m, b_a, b_b;
  Common b_common;
  std::string dump_path;
  auto* bound = app.add_subcommand("bound", "Compute spectral adversary bound tables");
  bound->add_option("problem", problem, "os, hsos, nos or tarski")
      ->required()
      ->check(CLI::IsMember({"os", "hsos", "nos", "tarski"}));
  bound->add_option("--n", b_n, "Sizes for tarski")->delimiter(',');
  bound->add_option("--m", b_m, "Sizes for os and hsos")->delimiter(',');
  bound->add_option("--a", b_a, "Outer sizes for nos")->delimiter(',');
  bound->add_option("--b", b_b, "Inner sizes for nos")->delimiter(',');
  bound->add_option("--dump-matrix", dump_path, "Also write the adversary matrix of the single requested row");
  add_common(bound, b_common);

  // solve
  std::string instance_path;
  std::string algo = "nested";
  Common s_common;
  auto* solve = app.add_subcommand("solve", "Find a fixed point of an instance file");
  solve->add_option("instance", instance_path, "Instance JSON file")->required();
  solve->add_option("--algo", algo, "Solver")->capture_default_str()->check(CLI::IsMember({"brute", "nested"}));
  solve->add_option("--format", s_common.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  solve->add_option("--out", s_common.out, "Write output to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const bool single = !gen_c.empty();
      if (single && gen_i == 0) {
        std::cerr << "error: --C needs --i\n";
        return kExitUsage;
      }
      std::size_t written = 0;
      const tq_status s = tq_generate(gen_n, single ? gen_c.data() : nullptr, gen_c.size(), gen_i, gen_out.c_str(), &written);
      if (s != TQ_OK) return report_error(s);
      std::cout << "wrote " << written << " instance file" << (written == 1 ? "" : "s") << " to " << gen_out << "\n";
      return 0;
    }

    if (*verify) {
      tq_options o = to_options(v_common);
      o.n = v_n;
      o.m = v_m;
      o.a = v_a;
      o.b = v_b;
      tq_report* raw = nullptr;
      const tq_status s = tq_verify(suite.c_str(), &o, &raw);
      if (s != TQ_OK) return report_error(s);
      std::unique_ptr<tq_report, void (*)(tq_report*)> report(raw, tq_report_free);
      const std::size_t failures = tq_report_failure_count(report.get());
      std::string text;
      if (v_common.format == "json") {
        CString json;
        const tq_status js = tq_report_json(report.get(), &json.p);
        if (js != TQ_OK) return report_error(js);
        text = std::string(json.p) + "\n";
      } else {
        text = "suite,id,counterexample\n";
        for (std::size_t k = 0; k < failures; ++k) {
          const char* id = nullptr;
          const char* ce = nullptr;
          tq_report_failure(report.get(), k, &id, &ce);
          text += suite + "," + csv_field(id) + "," + csv_field(ce) + "\n";
        }
      }
      if (const int rc = emit(text, v_common.out)) return rc;
      char timing[64];
      std::snprintf(timing, sizeof timing, "%.2f", tq_report_wall_time(report.get()));
      std::cerr << suite << ": " << tq_report_checks(report.get()) << " checks, " << failures << " failures (" << timing
                << " s)\n";
      return failures == 0 ? 0 : kExitCheck;
    }

    if (*bound) {
      tq_options o = to_options(b_common);
      const std::vector<int>* sizes = &b_m;
      const std::vector<int>* sizes_b = nullptr;
      if (problem == "tarski") sizes = &b_n;
      if (problem == "nos") {
        sizes = &b_a;
        sizes_b = &b_b;
      }
      CString table;
      const tq_status s = tq_bound(problem.c_str(), sizes->data(), sizes->size(), sizes_b ? sizes_b->data() : nullptr,
                                   sizes_b ? sizes_b->size() : 0, &o,
                                   b_common.format == "json" ? TQ_FORMAT_JSON : TQ_FORMAT_CSV, &table.p);
      if (s != TQ_OK) return report_error(s);
      if (!dump_path.empty()) {
        if (sizes->size() != 1 || (sizes_b && sizes_b->size() != 1)) {
          std::cerr << "error: --dump-matrix needs exactly one size\n";
          return kExitUsage;
        }
        CString matrix;
        const tq_status ms = tq_bound_matrix(problem.c_str(), sizes->front(), sizes_b ? sizes_b->front() : 0, &matrix.p);
        if (ms != TQ_OK) return report_error(ms);
        if (const int rc = emit(matrix.p, dump_path)) return rc;
      }
      return emit(table.p, b_common.out);
    }

    if (*solve) {
      tq_lattice* raw = nullptr;
      const tq_status ls = tq_lattice_load(instance_path.c_str(), &raw);
      if (ls != TQ_OK) return report_error(ls);
      std::unique_ptr<tq_lattice, void (*)(tq_lattice*)> f(raw, tq_lattice_free);
      tq_solve_result r{};
      const tq_status s = tq_solve(f.get(), algo == "brute" ? TQ_ALGO_BRUTE : TQ_ALGO_NESTED, &r);
      if (s != TQ_OK) return report_error(s);
      std::string text;
      if (s_common.format == "json") {
        nlohmann::json j{{"fixed_point", {r.x, r.y}},
                         {"queries_used", r.queries_used},
                         {"algorithm", algo},
                         {"fell_back", r.fell_back != 0}};
        text = j.dump() + "\n";
      } else {
        std::ostringstream os;
        os << "x,y,queries_used,algorithm,fell_back\n"
           << r.x << "," << r.y << "," << r.queries_used << "," << algo << "," << (r.fell_back ? "true" : "false") << "\n";
        text = os.str();
      }
      return emit(text, s_common.out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
