#include <flowsat/certificate.hpp>
#include <flowsat/decode.hpp>
#include <flowsat/pipeline.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace flowsat {
namespace {

Clause C(int a, int b) { return make_clause(Literal{a}, Literal{b}); }

const Formula kUnsat2(2, {C(1, 2), C(1, 4), C(2, 3), C(3, 4)});

SolveResult<Rational> optimum(const Formula& f) {
  return solve<Rational>(with_objective(build_pn(f.num_vars(), CapacityMode::UnitCapped), f));
}

TEST(FlowBit, Thresholds) {
  EXPECT_FALSE(flow_bit(0.0));
  EXPECT_FALSE(flow_bit(1e-9));
  EXPECT_TRUE(flow_bit(1.0 - 1e-9));
  EXPECT_THROW(flow_bit(0.5), DecodeError);
  EXPECT_THROW(flow_bit(2.0), DecodeError);
  EXPECT_TRUE(flow_bit(Rational(1)));
  EXPECT_THROW(flow_bit(Rational(1, 2)), DecodeError);
}

TEST(Decode, UnsatExample) {
  const auto sol = optimum(kUnsat2);
  const Certificate c = decide_from_solution(sol, kUnsat2);
  EXPECT_EQ(c.verdict, Verdict::Unsat);
  EXPECT_EQ(c.witness, 1);
  EXPECT_EQ(c.forward.front(), 1);
  EXPECT_EQ(c.forward.back(), 3);
  EXPECT_EQ(c.backward.front(), 3);
  EXPECT_EQ(c.backward.back(), 1);
  EXPECT_TRUE(verify_certificate(kUnsat2, c));
}

TEST(Decode, SatExamples) {
  const Formula one(2, {C(1, 2)});
  const Certificate c = decide_from_solution(optimum(one), one);
  EXPECT_EQ(c.verdict, Verdict::Sat);
  EXPECT_TRUE(satisfies(one, c.assignment));

  // no flow anywhere, so every variable is set by the lowest-literal rule
  const Formula empty(3, {});
  const Certificate e = decide_from_solution(optimum(empty), empty);
  EXPECT_EQ(e.assignment, (Assignment{true, true, true}));
}

TEST(Decode, ForcedLiteralsFollowFlow) {
  // (x1) forced by (x1 v x2)(x1 v not x2): commodity of not x1 carries flow
  const Formula f(2, {C(1, 2), C(1, 4)});
  const auto sol = optimum(f);
  const FlowIndex idx(2);
  EXPECT_EQ(sol.primal[idx.source(3)], 1);
  EXPECT_EQ(sol.primal[idx.source(1)], 0);
  const Certificate c = decide_from_solution(sol, f);
  ASSERT_EQ(c.verdict, Verdict::Sat);
  EXPECT_TRUE(c.assignment[0]);
  EXPECT_THROW(extract_path(sol, 2, 1), DecodeError);
  const LiteralPath p = extract_path(sol, 2, 3);
  EXPECT_TRUE(is_implication_chain(f, p, 3, 1));
}

TEST(Decode, ChainPath) {
  // x1 -> x2 -> x3 -> not x1 via (not x1 v x2)(not x2 v x3)(not x3 v not x1);
  // the contrapositive route x1 -> not x3 -> not x2 -> not x1 is equally short
  const Formula f(3, {C(4, 2), C(5, 3), C(6, 4)});
  const auto sol = optimum(f);
  const LiteralPath p = extract_path(sol, 3, 1);
  EXPECT_TRUE(p == (LiteralPath{1, 2, 3, 4}) || p == (LiteralPath{1, 6, 5, 4}));
  const Certificate c = decide_from_solution(sol, f);
  ASSERT_EQ(c.verdict, Verdict::Sat);
  EXPECT_FALSE(c.assignment[0]);
}

TEST(Decode, RejectsWrongShape) {
  SolveResult<double> bad;
  bad.status = SolveStatus::Optimal;
  bad.primal.assign(3, 0.0);
  EXPECT_THROW(extract_assignment_flow(bad, Formula(2, {})), DecodeError);
  bad.status = SolveStatus::Infeasible;
  EXPECT_THROW(decide_from_solution(bad, Formula(2, {})), DecodeError);
}

TEST(Decode, PathArcsArePresentClauses) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const Formula f = random_formula(n, 0.35, rng);
    const auto sol = solve<double>(with_objective(build_pn(n, CapacityMode::UnitCapped), f));
    const FlowIndex idx(n);
    for (int k = 1; k <= 2 * n; ++k) {
      if (!flow_bit(sol.primal[idx.source(k)])) {
        continue;
      }
      const LiteralPath p = extract_path(sol, n, k);
      EXPECT_TRUE(is_implication_chain(f, p, k, negate(Literal{k}, n).code));
      std::vector<bool> seen(static_cast<std::size_t>(2 * n + 1), false);
      for (int v : p) {
        EXPECT_FALSE(seen[static_cast<std::size_t>(v)]) << "path repeats a vertex";
        seen[static_cast<std::size_t>(v)] = true;
      }
    }
  }
}

TEST(Certificate, RejectsForgeries) {
  Certificate bogus = Certificate::unsat(1, {1, 3}, {3, 1});
  EXPECT_FALSE(verify_certificate(Formula(2, {C(1, 2)}), bogus));
  // the x_i -> not x_i shortcut is not an implication of any clause
  EXPECT_FALSE(verify_certificate(kUnsat2, bogus));
  EXPECT_FALSE(verify_certificate(kUnsat2, Certificate::unsat(1, {1, 2, 3}, {})));
  EXPECT_TRUE(verify_certificate(kUnsat2, Certificate::unsat(1, {1, 2, 3}, {3, 4, 1})));
  EXPECT_FALSE(verify_certificate(kUnsat2, Certificate::unsat(3, {1, 2, 3}, {3, 4, 1})));

  const Formula one(2, {C(1, 2)});
  EXPECT_FALSE(verify_certificate(one, Certificate::sat({false, false})));
  EXPECT_TRUE(verify_certificate(one, Certificate::sat({false, true})));
}

TEST(Certificate, TextRoundTrip) {
  const Certificate u = Certificate::unsat(1, {1, 2, 3}, {3, 4, 1});
  const std::string text = write_certificate(u, 2);
  EXPECT_NE(text.find("verdict UNSAT"), std::string::npos);
  EXPECT_NE(text.find("forward 1 2 -1"), std::string::npos);
  std::istringstream in(text);
  const auto back = read_certificate(in);
  EXPECT_EQ(back.n, 2);
  EXPECT_EQ(back.certificate.witness, 1);
  EXPECT_EQ(back.certificate.forward, u.forward);
  EXPECT_EQ(back.certificate.backward, u.backward);

  const Certificate s = Certificate::sat({true, false, true});
  std::istringstream in2(write_certificate(s, 3));
  const auto back2 = read_certificate(in2);
  EXPECT_EQ(back2.certificate.verdict, Verdict::Sat);
  EXPECT_EQ(back2.certificate.assignment, s.assignment);

  std::istringstream junk("verdict MAYBE\n");
  EXPECT_THROW(read_certificate(junk), std::runtime_error);
}

TEST(Certificate, AptAssignmentsVerify) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const Formula f = random_formula(n, 0.15, rng);
    const Certificate c = apt_decide(f);
    EXPECT_TRUE(verify_certificate(f, c));
    EXPECT_EQ(c.verdict, brute_force_sat(f).verdict);
  }
}

}  // namespace
}  // namespace flowsat
