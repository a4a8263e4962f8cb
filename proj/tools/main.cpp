// Command-line front end: validate / gen / period / hash / analyze.
// Exit codes: 0 success, 1 validation failure, 2 budget or size guard
// exceeded, 3 I/O or parse failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polywalk/common.hpp"
#include "polywalk/io.hpp"
#include "polywalk/lincomp.hpp"
#include "polywalk/orbit.hpp"
#include "polywalk/spectral.hpp"
#include "polywalk/systems.hpp"
#include "polywalk/walk_hash.hpp"

using namespace polywalk;

namespace {

std::vector<std::int64_t> parse_i64_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ParseError("empty entry in list: " + text);
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw ParseError("not an integer: " + item);
    }
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

std::vector<FieldElement> parse_init(const std::string& text, const SystemFamily& fam) {
  std::vector<FieldElement> v;
  for (std::int64_t x : parse_i64_list(text)) v.push_back(FieldElement::from_signed(x, fam.prime()));
  if (v.size() != fam.dim())
    throw ParseError("--init must have m+1 = " + std::to_string(fam.dim()) + " coordinates");
  return v;
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string join_i64(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

// stdout by default, or a file when --output was given
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot open output file: " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("POLYWALK_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("POLYWALK_BUDGET: not a number");
    }
  }
  return 100'000'000;
}

struct Args {
  std::string system_file;
  std::string params_file;
  std::string init;
  std::string output;
  std::string input;
  std::string input_format = "bits";
  std::string emit = "bits";
  std::string kind = "U";
  std::vector<std::string> a_lists;
  std::vector<std::string> b_lists;
  std::string coeff;
  std::uint64_t count = 10;
  std::uint64_t N = 100;
  std::int64_t c = 0;
  std::uint64_t M = 1;
  unsigned H = 32;
  double Cs = 0.0;  // 0 = default (3/2)^s
  std::uint32_t kmax = 6;
  std::uint64_t term_cap = 1'000'000;
  std::uint64_t budget = 0;  // 0 = env or default
  std::uint64_t max_steps = 100'000'000;
  unsigned workers = 1;
  unsigned nu = 2;
  bool truncate = false;
  bool period = false;
  bool full = false;
  bool show = false;
};

int run_validate(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  std::string perm = "true";
  try {
    bool all = true;
    for (const TriangularSystem& sys : fam.members())
      all = all && is_permutation(sys).is_permutation;
    perm = all ? "true" : "false";
  } catch (const BudgetExceeded&) {
    perm = "unknown (guard exceeded)";
  }
  std::cout << "ok, permutation: " << perm << "\n";
  if (args.show) {
    for (std::size_t idx = 0; idx < fam.members().size(); ++idx) {
      std::cout << "system " << idx << ":\n";
      const auto polys = fam.members()[idx].full_polys();
      for (std::size_t i = 0; i < polys.size(); ++i)
        std::cout << "  F" << i << " = " << polys[i].to_string() << "\n";
    }
  }
  return 0;
}

int run_gen(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const std::vector<FieldElement> v = parse_init(args.init, fam);
  Sink sink(args.output);
  if (args.period) {
    const PeriodInfo info = find_period(fam, v, args.max_steps);
    sink.out() << info.tail << " " << info.tau << "\n";
    return 0;
  }
  const Orbit orbit = generate(fam, v, args.count);
  const std::size_t width = args.truncate ? fam.m() : fam.dim();
  for (const auto& state : orbit.states) {
    for (std::size_t j = 0; j < width; ++j) sink.out() << (j ? " " : "") << state[j];
    sink.out() << "\n";
  }
  return 0;
}

int run_hash(const Args& args) {
  const HashParams params = load_hash_params(args.params_file);
  std::string bits = args.input;
  if (args.input_format == "hex") {
    bits = bits_from_hex(bits);
  } else if (args.input_format != "bits") {
    throw ParseError("--input-format must be bits or hex");
  }
  const Digest digest = walk_hash(params, bits);
  Sink sink(args.output);
  if (args.emit == "bits") {
    sink.out() << digest.bits << "\n";
  } else if (args.emit == "hex") {
    sink.out() << hex_from_bits(digest.bits) << "\n";
  } else if (args.emit == "coords") {
    for (std::size_t j = 0; j < digest.coords.size(); ++j)
      sink.out() << (j ? " " : "") << digest.coords[j].value();
    sink.out() << "\n";
  } else {
    throw ParseError("--emit must be bits, hex or coords");
  }
  return 0;
}

int run_degrees(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const DegreeLawReport report = check_degree_law(fam, args.kmax, args.term_cap);
  Sink sink(args.output);
  sink.out() << "k,i,observed,predicted,equal\n";
  for (const DegreeLawRow& row : report.rows)
    sink.out() << row.k << "," << row.i << "," << row.observed << "," << row.predicted << ","
               << (row.equal ? 1 : 0) << "\n";
  return 0;
}

int run_sums(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const std::vector<FieldElement> v = parse_init(args.init, fam);
  const Orbit orbit = generate(fam, v, args.N);
  const auto trunc = orbit.truncated();
  Sink sink(args.output);
  sink.out() << "kind,a_or_b,N,re,im,modulus\n";
  for (const std::string& text : args.a_lists) {
    const auto a = parse_i64_list(text);
    if (a.size() != fam.m()) throw ParseError("--a must have m entries");
    const SumResult r = sum_S(fam.prime(), trunc, a, args.N);
    sink.out() << "S," << join_i64(a) << "," << args.N << "," << fmt12(r.value.real()) << ","
               << fmt12(r.value.imag()) << "," << fmt12(std::abs(r.value)) << "\n";
  }
  for (const std::string& text : args.b_lists) {
    const auto b = parse_i64_list(text);
    if (b.size() != fam.dim()) throw ParseError("--b must have m+1 entries");
    const SumResult r = sum_T(fam.prime(), orbit.states, b, args.N);
    sink.out() << "T," << join_i64(b) << "," << args.N << "," << fmt12(r.value.real()) << ","
               << fmt12(r.value.imag()) << "," << fmt12(std::abs(r.value)) << "\n";
  }
  return 0;
}

int run_avg_sums(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  AvgSumOptions opt;
  opt.budget = args.budget != 0 ? args.budget : default_budget();
  opt.workers = args.workers;
  const auto coeff = parse_i64_list(args.coeff);
  double value = 0.0;
  if (args.kind == "U") {
    value = sum_U(fam, coeff, args.c, args.M, args.N, opt);
  } else if (args.kind == "V") {
    value = sum_V(fam, coeff, args.c, args.M, args.N, opt);
  } else {
    throw ParseError("--kind must be U or V");
  }
  Sink sink(args.output);
  sink.out() << "kind,c,M,N,value,budget\n";
  sink.out() << args.kind << "," << args.c << "," << args.M << "," << args.N << ","
             << fmt12(value) << "," << opt.budget << "\n";
  return 0;
}

int run_discrepancy(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const std::vector<FieldElement> v = parse_init(args.init, fam);
  const Orbit orbit = generate(fam, v, args.N);
  const PointSet ps = PointSet::from_orbit(orbit, !args.full);
  const double cs = args.Cs != 0.0 ? args.Cs : default_etk_constant(ps.dim());
  const double exact = discrepancy_exact(ps);
  const double bound = etk_bound(ps, args.H, cs);
  Sink sink(args.output);
  sink.out() << "N,exact,etk_bound,H,C_s\n";
  sink.out() << args.N << "," << fmt12(exact) << "," << fmt12(bound) << "," << args.H << ","
             << fmt12(cs) << "\n";
  return 0;
}

int run_lincomp(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const std::vector<FieldElement> v = parse_init(args.init, fam);
  const Orbit orbit = generate(fam, v, args.N);
  const LinearComplexityResult r = linear_complexity(fam.prime(), orbit.truncated());
  Sink sink(args.output);
  sink.out() << "L " << r.L << (r.window_empty ? " (empty window)" : "") << "\n";
  for (std::size_t h = 0; h < r.witness.coeffs.size(); ++h) {
    sink.out() << "c_" << h;
    for (std::uint64_t x : r.witness.coeffs[h]) sink.out() << " " << x;
    sink.out() << "\n";
  }
  const LowerBoundReport bound = lower_bound_report(r.L, args.N, fam.prime(), fam.m());
  sink.out() << "reference N^(1/m)/p " << fmt12(bound.reference) << "\n";
  sink.out() << "ratio " << fmt12(bound.ratio) << (bound.degenerate ? " (degenerate: L = 0)" : "")
             << "\n";
  return 0;
}

int run_ratios(const Args& args) {
  const SystemFamily fam = load_family(args.system_file);
  const std::vector<FieldElement> v = parse_init(args.init, fam);
  const Orbit orbit = generate(fam, v, args.N);
  std::vector<std::vector<std::int64_t>> as;
  for (const std::string& text : args.a_lists) {
    auto a = parse_i64_list(text);
    if (a.size() != fam.m()) throw ParseError("--a must have m entries");
    as.push_back(std::move(a));
  }
  if (as.empty()) throw ParseError("--a is required at least once");
  const std::vector<std::size_t> lengths = {static_cast<std::size_t>(args.N)};
  const RatioReport report = ratio_report(fam.prime(), orbit.truncated(), as, lengths, args.nu);
  Sink sink(args.output);
  sink.out() << "a,N,modulus,envelope,ratio\n";
  for (const RatioRow& row : report.rows)
    sink.out() << join_i64(row.a) << "," << row.N << "," << fmt12(row.sum_modulus) << ","
               << fmt12(row.envelope) << "," << fmt12(row.ratio) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triangular polynomial walk toolkit"};
  app.require_subcommand(1);
  Args args;

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a system file for membership");
  validate_cmd->add_option("--system", args.system_file, "system definition file")->required();
  validate_cmd->add_flag("--show", args.show, "print the maps F_i of every member");

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate orbit states");
  gen_cmd->add_option("--system", args.system_file)->required();
  gen_cmd->add_option("--init", args.init, "comma-separated initial vector")->required();
  gen_cmd->add_option("--count", args.count, "number of states");
  gen_cmd->add_flag("--truncate", args.truncate, "drop the last coordinate");
  gen_cmd->add_flag("--period", args.period, "print 'tail tau' instead of states");
  gen_cmd->add_option("--max-steps", args.max_steps);
  gen_cmd->add_option("--output", args.output);

  CLI::App* period_cmd = app.add_subcommand("period", "detect tail and period");
  period_cmd->add_option("--system", args.system_file)->required();
  period_cmd->add_option("--init", args.init)->required();
  period_cmd->add_option("--max-steps", args.max_steps);
  period_cmd->add_option("--output", args.output);

  CLI::App* hash_cmd = app.add_subcommand("hash", "input-driven polynomial walk digest");
  hash_cmd->add_option("--params", args.params_file)->required();
  hash_cmd->add_option("--input", args.input)->required();
  hash_cmd->add_option("--input-format", args.input_format, "bits|hex");
  hash_cmd->add_option("--emit", args.emit, "bits|hex|coords");
  hash_cmd->add_option("--output", args.output);

  CLI::App* analyze = app.add_subcommand("analyze", "statistics along orbits");
  analyze->require_subcommand(1);

  CLI::App* degrees_cmd =
      analyze->add_subcommand("degrees", "observed vs predicted iterate degrees");
  degrees_cmd->add_option("--system", args.system_file)->required();
  degrees_cmd->add_option("--kmax", args.kmax);
  degrees_cmd->add_option("--term-cap", args.term_cap);
  degrees_cmd->add_option("--output", args.output);

  CLI::App* sums_cmd = analyze->add_subcommand("sums", "exponential sums along an orbit");
  sums_cmd->add_option("--system", args.system_file)->required();
  sums_cmd->add_option("--init", args.init)->required();
  sums_cmd->add_option("--N", args.N);
  sums_cmd->add_option("--a", args.a_lists, "coefficient vector for S (repeatable)");
  sums_cmd->add_option("--b", args.b_lists, "coefficient vector for T (repeatable)");
  sums_cmd->add_option("--output", args.output);

  CLI::App* avg_cmd = analyze->add_subcommand("avg-sums", "seed-averaged square sums");
  avg_cmd->add_option("--system", args.system_file)->required();
  avg_cmd->add_option("--kind", args.kind, "U|V");
  avg_cmd->add_option("--coeff", args.coeff, "coefficient vector (m entries for U, m+1 for V)")
      ->required();
  avg_cmd->add_option("--c", args.c);
  avg_cmd->add_option("--M", args.M);
  avg_cmd->add_option("--N", args.N);
  avg_cmd->add_option("--budget", args.budget,
                      "cap on p^(m+1)*N (default env POLYWALK_BUDGET or 1e8)");
  avg_cmd->add_option("--workers", args.workers);
  avg_cmd->add_option("--output", args.output);

  CLI::App* disc_cmd = analyze->add_subcommand("discrepancy", "exact discrepancy and its bound");
  disc_cmd->add_option("--system", args.system_file)->required();
  disc_cmd->add_option("--init", args.init)->required();
  disc_cmd->add_option("--N", args.N);
  disc_cmd->add_flag("--full", args.full, "use all m+1 coordinates");
  disc_cmd->add_option("--H", args.H);
  disc_cmd->add_option("--Cs", args.Cs, "constant (default (3/2)^s)");
  disc_cmd->add_option("--output", args.output);

  CLI::App* lin_cmd = analyze->add_subcommand("lincomp", "vector linear complexity");
  lin_cmd->add_option("--system", args.system_file)->required();
  lin_cmd->add_option("--init", args.init)->required();
  lin_cmd->add_option("--N", args.N);
  lin_cmd->add_option("--output", args.output);

  CLI::App* ratio_cmd = analyze->add_subcommand("ratios", "sum moduli against reference envelopes");
  ratio_cmd->add_option("--system", args.system_file)->required();
  ratio_cmd->add_option("--init", args.init)->required();
  ratio_cmd->add_option("--N", args.N);
  ratio_cmd->add_option("--nu", args.nu);
  ratio_cmd->add_option("--a", args.a_lists, "coefficient vector (repeatable)");
  ratio_cmd->add_option("--output", args.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate_cmd->parsed()) return run_validate(args);
    if (gen_cmd->parsed()) return run_gen(args);
    if (period_cmd->parsed()) {
      args.period = true;
      return run_gen(args);
    }
    if (hash_cmd->parsed()) return run_hash(args);
    if (degrees_cmd->parsed()) return run_degrees(args);
    if (sums_cmd->parsed()) return run_sums(args);
    if (avg_cmd->parsed()) return run_avg_sums(args);
    if (disc_cmd->parsed()) return run_discrepancy(args);
    if (lin_cmd->parsed()) return run_lincomp(args);
    if (ratio_cmd->parsed()) return run_ratios(args);
    std::cerr << "error: no subcommand\n";
    return 3;
  } catch (const ValidationFailure& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const TermCapExceeded& e) {
    std::cerr << "term cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
