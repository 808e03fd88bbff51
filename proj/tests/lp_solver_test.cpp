#include <flowsat/lp_solver.hpp>
#include <flowsat/pipeline.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <optional>
#include <random>
#include <sstream>

namespace flowsat {
namespace {

Clause C(int a, int b) { return make_clause(Literal{a}, Literal{b}); }

const Formula kUnsat2(2, {C(1, 2), C(1, 4), C(2, 3), C(3, 4)});

LpInstance single_bounded_variable() {
  LpInstance lp;
  lp.num_vars = 1;
  lp.lower = {0};
  lp.upper = {1};
  lp.objective = {1};
  return lp;
}

TEST(Solve, SingleBoundedVariable) {
  const auto lp = single_bounded_variable();
  const auto f = solve<double>(lp);
  EXPECT_EQ(f.status, SolveStatus::Optimal);
  EXPECT_DOUBLE_EQ(f.objective, 1.0);
  const auto r = solve<Rational>(lp);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective, 1);
  EXPECT_EQ(r.at_upper, std::vector<std::size_t>{0});
}

TEST(Solve, FlowExamplesN2) {
  const auto base = build_pn(2, CapacityMode::UnitCapped);
  const auto unsat = solve<Rational>(with_objective(base, kUnsat2));
  ASSERT_EQ(unsat.status, SolveStatus::Optimal);
  EXPECT_EQ(unsat.objective, 4);
  EXPECT_EQ(expected_flow_value(kUnsat2), 4u);

  const Formula one(2, {C(1, 2)});
  const auto sat = solve<Rational>(with_objective(base, one));
  ASSERT_EQ(sat.status, SolveStatus::Optimal);
  EXPECT_EQ(sat.objective, 0);
  EXPECT_EQ(expected_flow_value(one), 0u);
}

TEST(Solve, PhaseOneAndGeneralRhs) {
  // x + y = 3, x <= 2, y <= 2, max x + 2y -> (1, 2), 5
  LpInstance lp;
  lp.num_vars = 2;
  lp.lower = {0, 0};
  lp.upper = {2, 2};
  lp.objective = {1, 2};
  lp.rows = {EqualityRow{{{0, 1}, {1, 1}}, 3}};
  const auto r = solve<Rational>(lp);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective, 5);
  EXPECT_EQ(r.primal[0], 1);
  EXPECT_EQ(r.primal[1], 2);
  EXPECT_TRUE(verify_feasible(lp, r.primal));

  lp.rows[0].rhs = 5;
  EXPECT_EQ(solve<Rational>(lp).status, SolveStatus::Infeasible);
  EXPECT_EQ(solve<double>(lp).status, SolveStatus::Infeasible);

  lp.rows[0].rhs = -1;
  EXPECT_EQ(solve<double>(lp).status, SolveStatus::Infeasible);
}

TEST(Solve, Unbounded) {
  LpInstance lp;
  lp.num_vars = 2;
  lp.lower = {0, 0};
  lp.upper = {std::nullopt, std::nullopt};
  lp.objective = {1, 0};
  lp.rows = {EqualityRow{{{0, 1}, {1, -1}}, 0}};
  EXPECT_EQ(solve<double>(lp).status, SolveStatus::Unbounded);
  EXPECT_EQ(solve<Rational>(lp).status, SolveStatus::Unbounded);
}

TEST(Solve, IterationLimit) {
  SolverOptions opts;
  opts.iteration_cap = 1;
  const auto lp = with_objective(build_pn(2, CapacityMode::UnitCapped), kUnsat2);
  EXPECT_EQ(solve<double>(lp, opts).status, SolveStatus::IterationLimit);
}

TEST(Solve, RejectsBadOptions) {
  SolverOptions opts;
  opts.tolerance = 0;
  EXPECT_THROW(SimplexSolver<double>(single_bounded_variable(), opts), std::invalid_argument);
}

// Oracle: enumerate every basic solution of a tiny bounded LP (choose the
// basic columns, put each nonbasic at a bound, solve the square system by
// Cramer's rule) and keep the best feasible objective.
std::optional<Rational> vertex_oracle(const LpInstance& lp) {
  const std::size_t m = lp.rows.size(), nv = lp.num_vars;
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(nv, 0));
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& e : lp.rows[r].entries) {
      A[r][e.col] = e.coef;
    }
  }
  std::optional<Rational> best;
  for (std::uint32_t basis = 0; basis < (1U << nv); ++basis) {
    if (static_cast<std::size_t>(std::popcount(basis)) != m) {
      continue;
    }
    std::vector<std::size_t> B, N;
    for (std::size_t j = 0; j < nv; ++j) {
      ((basis >> j) & 1U ? B : N).push_back(j);
    }
    for (std::uint32_t at_up = 0; at_up < (1U << N.size()); ++at_up) {
      std::vector<Rational> x(nv, 0);
      bool ok = true;
      for (std::size_t t = 0; t < N.size(); ++t) {
        const std::size_t j = N[t];
        x[j] = (at_up >> t) & 1U ? Rational(*lp.upper[j]) : Rational(lp.lower[j]);
      }
      std::vector<Rational> rhs(m);
      for (std::size_t r = 0; r < m; ++r) {
        rhs[r] = lp.rows[r].rhs;
        for (std::size_t j : N) {
          rhs[r] -= A[r][j] * x[j];
        }
      }
      if (m == 1) {
        if (A[0][B[0]] == 0) {
          continue;
        }
        x[B[0]] = rhs[0] / A[0][B[0]];
      } else if (m == 2) {
        const Rational det = A[0][B[0]] * A[1][B[1]] - A[0][B[1]] * A[1][B[0]];
        if (det == 0) {
          continue;
        }
        x[B[0]] = (rhs[0] * A[1][B[1]] - A[0][B[1]] * rhs[1]) / det;
        x[B[1]] = (A[0][B[0]] * rhs[1] - rhs[0] * A[1][B[0]]) / det;
      }
      for (std::size_t j : B) {
        ok &= x[j] >= lp.lower[j] && x[j] <= *lp.upper[j];
      }
      if (!ok) {
        continue;
      }
      Rational z(0);
      for (std::size_t j = 0; j < nv; ++j) {
        z += Rational(lp.objective[j]) * x[j];
      }
      if (!best || z > *best) {
        best = z;
      }
    }
  }
  return best;
}

bool full_row_rank(const LpInstance& lp) {
  const std::size_t nv = lp.num_vars;
  std::vector<std::vector<std::int64_t>> A(lp.rows.size(), std::vector<std::int64_t>(nv, 0));
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    for (const auto& e : lp.rows[r].entries) {
      A[r][e.col] = e.coef;
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (A.size() == 1 && A[0][i] != 0) {
      return true;
    }
    for (std::size_t j = i + 1; A.size() == 2 && j < nv; ++j) {
      if (A[0][i] * A[1][j] - A[0][j] * A[1][i] != 0) {
        return true;
      }
    }
  }
  return false;
}

TEST(Solve, MatchesBasicSolutionEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-2, 2), bound(0, 3), cost(-3, 3), rhs(-3, 4);
  for (int trial = 0; trial < 400; ++trial) {
    LpInstance lp;
    const std::size_t m = 1 + rng() % 2;
    lp.num_vars = 4;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      const int lo = bound(rng) - 1;
      lp.lower.push_back(lo);
      lp.upper.push_back(lo + bound(rng));
      lp.objective.push_back(cost(rng));
    }
    for (std::size_t r = 0; r < m; ++r) {
      EqualityRow row;
      for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const int c = coef(rng);
        if (c != 0) {
          row.entries.push_back({j, c});
        }
      }
      row.rhs = rhs(rng);
      lp.rows.push_back(row);
    }
    if (!full_row_rank(lp)) {
      continue;
    }
    const auto oracle = vertex_oracle(lp);
    for (auto rule : {PivotRule::DantzigBland, PivotRule::Bland}) {
      SolverOptions opts;
      opts.pivot_rule = rule;
      const auto r = solve<Rational>(lp, opts);
      if (!oracle) {
        EXPECT_EQ(r.status, SolveStatus::Infeasible) << "trial " << trial;
        continue;
      }
      ASSERT_EQ(r.status, SolveStatus::Optimal) << "trial " << trial;
      EXPECT_EQ(r.objective, *oracle) << "trial " << trial;
      EXPECT_TRUE(verify_feasible(lp, r.primal));
      const auto d = solve<double>(lp, opts);
      ASSERT_EQ(d.status, SolveStatus::Optimal);
      EXPECT_NEAR(d.objective, oracle->convert_to<double>(), 1e-9);
    }
  }
}

TEST(Solve, DeterministicBasis) {
  std::mt19937_64 rng(1);
  const Formula f = random_formula(4, 0.4, rng);
  const auto lp = with_objective(build_pn(4, CapacityMode::UnitCapped), f);
  const auto a = solve<double>(lp);
  const auto b = solve<double>(lp);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.at_upper, b.at_upper);
  EXPECT_EQ(a.pivots, b.pivots);
}

TEST(Solve, PivotLogWritesOneLinePerStep) {
  std::ostringstream log;
  SolverOptions opts;
  opts.pivot_log = &log;
  const auto r = solve<Rational>(with_objective(build_pn(2, CapacityMode::UnitCapped), kUnsat2), opts);
  const std::string text = log.str();
  const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  EXPECT_EQ(lines, r.pivots + r.bound_flips);
}

// Flow LP properties: integral optimum, z* = number of literals reaching their
// negation, penalized arcs at zero, both capacity modes and both pivot rules
// agreeing, float matching rational.
TEST(Solve, FlowLpProperties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const Formula f = random_formula(n, std::uniform_real_distribution<double>(0, 0.6)(rng), rng);
    const Rational expected(static_cast<std::int64_t>(expected_flow_value(f)));
    for (auto cap : {CapacityMode::UnitCapped, CapacityMode::SourceCapped}) {
      const auto lp = with_objective(build_pn(n, cap), f);
      const auto r = solve<Rational>(lp);
      ASSERT_EQ(r.status, SolveStatus::Optimal);
      EXPECT_EQ(r.objective, expected);
      EXPECT_GE(r.objective, 0);
      EXPECT_LE(r.objective, 2 * n);
      EXPECT_TRUE(verify_feasible(lp, r.primal));
      EXPECT_TRUE(verify_integral(r.primal));
      for (std::size_t c = 0; c < lp.num_vars; ++c) {
        if (lp.objective[c] < 0) {
          EXPECT_EQ(r.primal[c], 0);
        }
      }
      const FlowIndex idx(n);
      for (int k = 1; k <= 2 * n; ++k) {
        EXPECT_EQ(r.primal[idx.source(k)], r.primal[idx.sink(k)]);
      }

      const auto d = solve<double>(lp);
      ASSERT_EQ(d.status, SolveStatus::Optimal);
      EXPECT_NEAR(d.objective, expected.convert_to<double>(), 1e-6);
      EXPECT_TRUE(verify_feasible(lp, d.primal, 1e-7));
      EXPECT_TRUE(verify_integral(d.primal, 1e-6));

      SolverOptions bland;
      bland.pivot_rule = PivotRule::Bland;
      EXPECT_EQ(solve<Rational>(lp, bland).objective, expected);
    }
  }
}

TEST(VerifyFeasible, Examples) {
  const auto lp = build_pn(2, CapacityMode::SourceCapped);
  std::vector<double> zero(lp.num_vars, 0.0);
  EXPECT_TRUE(verify_feasible(lp, zero));
  auto bad = zero;
  bad[FlowIndex(2).source(1)] = 1.5;
  EXPECT_FALSE(verify_feasible(lp, bad));
  EXPECT_FALSE(verify_feasible(lp, std::vector<double>(3, 0.0)));
  std::vector<Rational> exact(lp.num_vars, 0);
  EXPECT_TRUE(verify_feasible(lp, exact));
  exact[0] = Rational(1, 1000000000);
  EXPECT_FALSE(verify_feasible(lp, exact));
}

TEST(VerifyIntegral, Examples) {
  EXPECT_TRUE(verify_integral(std::vector<double>(5, 0.0)));
  EXPECT_FALSE(verify_integral(std::vector<double>{0.0, 0.5}));
  EXPECT_TRUE(verify_integral(std::vector<double>{1.0 + 1e-9, -1e-9}));
  EXPECT_FALSE(verify_integral(std::vector<Rational>{Rational(1, 2)}));
  EXPECT_TRUE(verify_integral(std::vector<Rational>{0, 1}));
}

}  // namespace
}  // namespace flowsat
