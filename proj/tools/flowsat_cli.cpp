// flowsat: decide 2SAT instances with the multicommodity flow LP.
//
//   flowsat solve  <in.cnf> [--mode lp] [--arith float] [--cert out] [--check]
//   flowsat export <in.cnf> [-o out.mps] [--fixing] [--colmap map.json]
//   flowsat qn     [<in.cnf>] [--n 2 --all-formulas] [--weights 1,-2] [--csv out]
//   flowsat bench  --sizes 4,6,8 --densities 0.3 --trials 10 --modes lp,apt
//   flowsat verify <in.cnf> <cert.txt>
//
// Exit codes: 10 SAT, 20 UNSAT, 1 error, 2 disagreement between routes.

#include <flowsat/flowsat.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace {

using namespace flowsat;

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitError = 1;
constexpr int kExitDisagree = 2;

int verdict_exit(Verdict v) { return v == Verdict::Sat ? kExitSat : kExitUnsat; }

ParsedFormula read_formula(const std::string& path) {
  if (path == "-") {
    return parse_dimacs(std::cin);
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return parse_dimacs(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

CapacityMode parse_capacity(const std::string& s) {
  if (s == "unit") {
    return CapacityMode::UnitCapped;
  }
  if (s == "source") {
    return CapacityMode::SourceCapped;
  }
  throw std::invalid_argument("unknown capacity mode \"" + s + "\"");
}

Arithmetic parse_arith(const std::string& s) {
  if (s == "float") {
    return Arithmetic::Float;
  }
  if (s == "rational") {
    return Arithmetic::Rational;
  }
  throw std::invalid_argument("unknown arithmetic \"" + s + "\"");
}

struct SolveArgs {
  std::string input;
  std::string mode = "lp";
  std::string arith = "float";
  std::string capacity = "unit";
  std::string cert;
  std::string graph;
  bool check = false;
};

int cmd_solve(const SolveArgs& a) {
  const ParsedFormula p = read_formula(a.input);
  const Formula& f = p.formula;
  const DecideMode mode = parse_mode(a.mode);
  const auto t0 = std::chrono::steady_clock::now();
  const Decision d = decide(f, mode, parse_arith(a.arith), parse_capacity(a.capacity));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream line;
  line << to_string(d.certificate.verdict) << ' ' << (is_lp_mode(mode) ? d.zstar_exact : "-") << ' '
       << f.num_vars() << ' ' << f.num_clauses() << ' ' << to_string(mode) << ' ' << d.pivots << ' '
       << std::fixed << std::setprecision(6) << elapsed << "s\n";
  std::cout << line.str();

  const std::string cert = write_certificate(d.certificate, f.num_vars());
  if (a.cert.empty()) {
    std::cout << cert;
  } else {
    write_text(a.cert, cert);
  }
  if (!a.graph.empty()) {
    std::ostringstream g;
    write_edge_list(g, build_implication_graph(f));
    write_text(a.graph, g.str());
  }

  if (a.check) {
    std::vector<std::string> problems;
    if (!verify_certificate(f, d.certificate)) {
      problems.emplace_back("certificate does not verify");
    }
    const Verdict apt = apt_decide(f).verdict;
    if (apt != d.certificate.verdict) {
      problems.emplace_back(std::string("apt says ") + to_string(apt));
    }
    if (f.num_vars() <= kBruteForceMaxVars) {
      const Verdict brute = brute_force_sat(f).verdict;
      if (brute != d.certificate.verdict) {
        problems.emplace_back(std::string("brute force says ") + to_string(brute));
      }
    }
    if (is_lp_mode(mode)) {
      const auto expected = expected_flow_value(f);
      if (d.zstar_exact != std::to_string(expected)) {
        problems.emplace_back("z* " + d.zstar_exact + " but " + std::to_string(expected) +
                              " literals reach their negation");
      }
    }
    if (!problems.empty()) {
      std::cerr << "flowsat: DISAGREEMENT";
      for (const auto& s : problems) {
        std::cerr << "; " << s;
      }
      std::cerr << "\n" << to_dimacs(f);
      return kExitDisagree;
    }
  }
  return verdict_exit(d.certificate.verdict);
}

struct ExportArgs {
  std::string input;
  std::string output;
  std::string capacity = "unit";
  std::string colmap;
  bool fixing = false;
};

const char* kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::Source: return "source";
    case FlowKind::Sink: return "sink";
    case FlowKind::Arc: return "arc";
  }
  return "?";
}

int cmd_export(const ExportArgs& a) {
  const Formula f = read_formula(a.input).formula;
  const LpInstance base = build_pn(f.num_vars(), parse_capacity(a.capacity));
  const LpInstance lp = a.fixing ? apply_face_fixing(base, f) : with_objective(base, f);
  write_text(a.output, export_mps(lp));
  if (!a.colmap.empty()) {
    const FlowIndex idx(f.num_vars());
    nlohmann::json cols = nlohmann::json::array();
    for (std::size_t c = 0; c < lp.num_vars; ++c) {
      const FlowVarId id = idx.decode(c);
      nlohmann::json e = {{"index", c}, {"name", lp.col_names[c]}, {"kind", kind_name(id.kind)},
                          {"commodity", id.commodity}};
      if (id.kind == FlowKind::Arc) {
        e["tail"] = id.tail;
        e["head"] = id.head;
      }
      cols.push_back(std::move(e));
    }
    const nlohmann::json doc = {{"n", f.num_vars()}, {"columns", std::move(cols)}};
    write_text(a.colmap, doc.dump(1) + "\n");
  }
  return 0;
}

struct QnArgs {
  std::string input;
  int n = 0;
  bool all = false;
  std::vector<std::int64_t> weights;
  std::string csv;
};

int cmd_qn(const QnArgs& a) {
  if (a.all) {
    if (a.n == 0) {
      throw std::invalid_argument("--all-formulas needs --n");
    }
    const QnModel& model = qn_model(a.n);
    std::uint64_t agree = 0;
    for (std::uint64_t mask = 0; mask < model.formula_count(); ++mask) {
      const Formula f = model.formula(mask);
      const Verdict truth = brute_force_sat(f).verdict;
      bool ok = prop1_unweighted(model, f).verdict == truth;
      if (!a.weights.empty()) {
        ok = ok && prop1_weighted(model, f, a.weights).verdict == truth;
      }
      if (ok) {
        ++agree;
      } else {
        std::cerr << "flowsat: DISAGREEMENT at formula " << mask << "\n" << to_dimacs(f);
      }
    }
    if (!a.csv.empty()) {
      std::ostringstream out;
      write_qn_audit_csv(out, model);
      write_text(a.csv, out.str());
    }
    std::cout << agree << '/' << model.formula_count() << " agree (n=" << a.n << ", "
              << model.vertex_count() << " vertices)\n";
    return agree == model.formula_count() ? 0 : kExitDisagree;
  }

  if (a.input.empty()) {
    throw std::invalid_argument("qn needs an input file or --all-formulas");
  }
  const Formula f = read_formula(a.input).formula;
  const Prop1Result r = prop1_unweighted(f);
  std::cout << to_string(r.verdict) << " z*=" << r.zstar.str() << " ones=" << r.ones << "\n";
  Verdict v = r.verdict;
  if (!a.weights.empty()) {
    const Prop1WeightedResult w = prop1_weighted(f, a.weights);
    std::cout << to_string(w.verdict) << " weighted z*=" << w.zstar.str() << " ones=" << w.ones
              << (w.fallback ? " (W=0, unweighted)" : "") << "\n";
    if (w.verdict != v) {
      std::cerr << "flowsat: DISAGREEMENT between weighted and unweighted verdicts\n";
      return kExitDisagree;
    }
  }
  return verdict_exit(v);
}

struct BenchArgs {
  std::vector<int> sizes{4, 6, 8};
  std::vector<double> densities{0.3};
  int trials = 10;
  std::vector<std::string> modes{"lp", "apt"};
  std::uint64_t seed = 0;
  std::string arith = "float";
  std::string output;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<DecideMode> modes;
  for (const auto& m : a.modes) {
    modes.push_back(parse_mode(m));
  }
  const Arithmetic arith = parse_arith(a.arith);
  std::ostringstream csv;
  csv << "n,m,seed,mode,verdict,zstar,pivots,micros\n";
  std::uint64_t instance = 0;
  for (int n : a.sizes) {
    for (double density : a.densities) {
      for (int trial = 0; trial < a.trials; ++trial, ++instance) {
        const std::uint64_t seed = a.seed + instance;
        std::mt19937_64 rng(seed);
        const Formula f = random_formula(n, density, rng);
        std::map<std::string, Verdict> verdicts;
        for (DecideMode m : modes) {
          const auto t0 = std::chrono::steady_clock::now();
          const Decision d = decide(f, m, arith);
          const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
          verdicts[to_string(m)] = d.certificate.verdict;
          csv << n << ',' << f.num_clauses() << ',' << seed << ',' << to_string(m) << ','
              << to_string(d.certificate.verdict) << ',' << (is_lp_mode(m) ? d.zstar_exact : "")
              << ',' << d.pivots << ',' << micros << '\n';
          if (!verify_certificate(f, d.certificate) ||
              d.certificate.verdict != verdicts.begin()->second) {
            std::cerr << "flowsat: DISAGREEMENT n=" << n << " density=" << density
                      << " seed=" << seed << " mode=" << to_string(m) << "\n"
                      << to_dimacs(f);
            write_text(a.output, csv.str());
            return kExitDisagree;
          }
        }
      }
    }
  }
  write_text(a.output, csv.str());
  return 0;
}

int cmd_verify(const std::string& formula_path, const std::string& cert_path) {
  const Formula f = read_formula(formula_path).formula;
  std::ifstream in(cert_path);
  if (!in) {
    throw std::runtime_error("cannot open " + cert_path);
  }
  const ParsedCertificate c = read_certificate(in);
  if (c.n != f.num_vars()) {
    std::cout << "INVALID certificate n=" << c.n << " but formula n=" << f.num_vars() << "\n";
    return kExitError;
  }
  if (!verify_certificate(f, c.certificate)) {
    std::cout << "INVALID " << to_string(c.certificate.verdict) << "\n";
    return kExitError;
  }
  std::cout << "VALID " << to_string(c.certificate.verdict) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowsat: 2SAT by multicommodity flow LP"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "decide a DIMACS 2-CNF file");
  solve->add_option("input", solve_args.input, "DIMACS file, - for stdin")->required();
  solve->add_option("--mode", solve_args.mode, "lp, lp-decomposed, lp-fixing, apt, brute");
  solve->add_option("--arith", solve_args.arith, "float or rational");
  solve->add_option("--capacity", solve_args.capacity, "unit or source");
  solve->add_option("--cert", solve_args.cert, "write the certificate here instead of stdout");
  solve->add_option("--dump-graph", solve_args.graph, "write the implication graph edge list");
  solve->add_flag("--check", solve_args.check, "cross-check against apt and brute force");

  ExportArgs export_args;
  auto* exp = app.add_subcommand("export", "write the flow LP as MPS");
  exp->add_option("input", export_args.input, "DIMACS file")->required();
  exp->add_option("-o,--output", export_args.output, "MPS file (default stdout)");
  exp->add_option("--capacity", export_args.capacity, "unit or source");
  exp->add_option("--colmap", export_args.colmap, "JSON column map");
  exp->add_flag("--fixing", export_args.fixing, "fix missing-clause arcs to 0");

  QnArgs qn_args;
  auto* qn = app.add_subcommand("qn", "vertex-enumeration oracle for n <= 3");
  qn->add_option("input", qn_args.input, "DIMACS file");
  qn->add_option("--n", qn_args.n, "number of variables");
  qn->add_flag("--all-formulas", qn_args.all, "sweep every formula over n variables");
  qn->add_option("--weights", qn_args.weights, "weight vector w")->delimiter(',');
  qn->add_option("--csv", qn_args.csv, "audit CSV (with --all-formulas)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "random-instance benchmark");
  bench->add_option("--sizes", bench_args.sizes)->delimiter(',');
  bench->add_option("--densities", bench_args.densities)->delimiter(',');
  bench->add_option("--trials", bench_args.trials);
  bench->add_option("--modes", bench_args.modes)->delimiter(',');
  bench->add_option("--seed", bench_args.seed);
  bench->add_option("--arith", bench_args.arith);
  bench->add_option("-o,--output", bench_args.output, "CSV file (default stdout)");

  std::string verify_formula, verify_cert;
  auto* verify = app.add_subcommand("verify", "check a certificate against a formula");
  verify->add_option("formula", verify_formula)->required();
  verify->add_option("certificate", verify_cert)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) {
      return cmd_solve(solve_args);
    }
    if (*exp) {
      return cmd_export(export_args);
    }
    if (*qn) {
      return cmd_qn(qn_args);
    }
    if (*bench) {
      return cmd_bench(bench_args);
    }
    return cmd_verify(verify_formula, verify_cert);
  } catch (const std::exception& e) {
    std::cerr << "flowsat: " << e.what() << "\n";
  }
  return kExitError;
}
