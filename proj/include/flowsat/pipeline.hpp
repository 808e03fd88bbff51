#pragma once

// End-to-end decision: formula -> flow LP -> simplex -> certificate, plus the
// combinatorial routes it is checked against.

#include <flowsat/certificate.hpp>
#include <flowsat/decode.hpp>
#include <flowsat/formula.hpp>
#include <flowsat/implication.hpp>
#include <flowsat/lp_model.hpp>
#include <flowsat/lp_solver.hpp>
#include <flowsat/qn_oracle.hpp>
#include <flowsat/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

enum class DecideMode { Lp, LpDecomposed, LpFixing, Apt, Brute };

inline const char* to_string(DecideMode m) {
  switch (m) {
    case DecideMode::Lp: return "lp";
    case DecideMode::LpDecomposed: return "lp-decomposed";
    case DecideMode::LpFixing: return "lp-fixing";
    case DecideMode::Apt: return "apt";
    case DecideMode::Brute: return "brute";
  }
  return "?";
}

inline DecideMode parse_mode(const std::string& s) {
  for (auto m : {DecideMode::Lp, DecideMode::LpDecomposed, DecideMode::LpFixing, DecideMode::Apt,
                 DecideMode::Brute}) {
    if (s == to_string(m)) {
      return m;
    }
  }
  throw std::invalid_argument("unknown mode \"" + s + "\"");
}

inline bool is_lp_mode(DecideMode m) {
  return m == DecideMode::Lp || m == DecideMode::LpDecomposed || m == DecideMode::LpFixing;
}

/// Optimal flow of one LP route, merged to full-model columns.
template <class T>
struct FlowRun {
  SolveResult<T> solution;
  LpInstance lp;  // the monolithic instance the solution refers to
  Certificate certificate;
};

/// Solves the flow LP of f in one of the three LP modes and decodes it.
/// Decomposed mode solves the 2n commodity blocks separately and stitches
/// their primal vectors together.
template <class T>
FlowRun<T> run_flow_lp(const Formula& f, DecideMode mode, CapacityMode cap,
                       const SolverOptions& opts = {}) {
  if (!is_lp_mode(mode)) {
    throw std::invalid_argument("not an LP mode");
  }
  FlowRun<T> run;
  const LpInstance base = build_pn(f.num_vars(), cap);
  run.lp = mode == DecideMode::LpFixing ? apply_face_fixing(base, f) : with_objective(base, f);

  if (mode == DecideMode::LpDecomposed) {
    SolveResult<T>& merged = run.solution;
    merged.primal.assign(run.lp.num_vars, T(0));
    merged.objective = T(0);
    for (const auto& part : decompose(run.lp)) {
      SolveResult<T> r = solve<T>(part.lp, opts);
      if (r.status != SolveStatus::Optimal) {
        merged.status = r.status;
        break;
      }
      for (std::size_t c = 0; c < part.parent_columns.size(); ++c) {
        merged.primal[part.parent_columns[c]] = r.primal[c];
      }
      merged.objective += r.objective;
      merged.pivots += r.pivots;
      merged.degenerate_pivots += r.degenerate_pivots;
      merged.bound_flips += r.bound_flips;
      for (std::size_t b : r.basis) {
        merged.basis.push_back(b < part.parent_columns.size() ? part.parent_columns[b]
                                                              : run.lp.num_vars + merged.basis.size());
      }
      for (std::size_t u : r.at_upper) {
        merged.at_upper.push_back(part.parent_columns[u]);
      }
    }
  } else {
    run.solution = solve<T>(run.lp, opts);
  }
  if (run.solution.status != SolveStatus::Optimal) {
    throw std::runtime_error(std::string("flow LP not solved to optimality: ") +
                             to_string(run.solution.status));
  }
  run.certificate = decide_from_solution(run.solution, f);
  return run;
}

/// Mode-independent summary of one decision.
struct Decision {
  Certificate certificate;
  double zstar = 0.0;          // LP modes only
  std::string zstar_exact;     // LP modes only
  std::size_t pivots = 0;
  bool integral = true;
};

inline Decision decide(const Formula& f, DecideMode mode, Arithmetic arith,
                       CapacityMode cap = CapacityMode::UnitCapped, SolverOptions opts = {}) {
  Decision d;
  switch (mode) {
    case DecideMode::Apt:
      d.certificate = apt_decide(f);
      return d;
    case DecideMode::Brute: {
      Certificate c = brute_force_sat(f);
      if (c.verdict == Verdict::Unsat) {
        c = apt_decide(f);  // brute force only knows the verdict
      }
      d.certificate = std::move(c);
      return d;
    }
    default:
      break;
  }
  opts.arithmetic = arith;
  if (arith == Arithmetic::Rational) {
    auto run = run_flow_lp<Rational>(f, mode, cap, opts);
    d.certificate = std::move(run.certificate);
    d.zstar = ScalarTraits<Rational>::to_double(run.solution.objective);
    d.zstar_exact = run.solution.objective.str();
    d.pivots = run.solution.pivots;
    d.integral = verify_integral(run.solution.primal);
  } else {
    auto run = run_flow_lp<double>(f, mode, cap, opts);
    d.certificate = std::move(run.certificate);
    d.zstar = run.solution.objective;
    d.zstar_exact = std::to_string(static_cast<long long>(std::llround(run.solution.objective)));
    d.pivots = run.solution.pivots;
    d.integral = verify_integral(run.solution.primal);
  }
  return d;
}

/// Number of literals k with an implication path k -> not k: the optimum the
/// flow LP must reach.
inline std::size_t expected_flow_value(const Formula& f) {
  const int n = f.num_vars();
  const Digraph g = build_implication_graph(f);
  std::size_t count = 0;
  for (int k = 1; k <= 2 * n; ++k) {
    if (reachable(g, vertex_of(k), vertex_of(negate(Literal{k}, n).code))) {
      ++count;
    }
  }
  return count;
}

/// m = floor(density * (2n^2 - 2n)) clauses drawn uniformly without
/// replacement from the non-tautological universe.
template <class Rng>
Formula random_formula(int n, double density, Rng& rng) {
  if (density < 0.0 || density > 1.0) {
    throw std::invalid_argument("density must lie in [0, 1]");
  }
  std::vector<Clause> pool = proper_clauses(n);
  const auto m = static_cast<std::size_t>(std::floor(density * static_cast<double>(pool.size())));
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  return Formula(n, std::move(pool));
}

}  // namespace flowsat
