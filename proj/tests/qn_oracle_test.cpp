#include <flowsat/implication.hpp>
#include <flowsat/pipeline.hpp>
#include <flowsat/qn_oracle.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

namespace flowsat {
namespace {

Clause C(int a, int b) { return make_clause(Literal{a}, Literal{b}); }

const Formula kUnsat2(2, {C(1, 2), C(1, 4), C(2, 3), C(3, 4)});

Assignment from_bits(std::uint32_t t, int n) {
  Assignment a(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    a[static_cast<std::size_t>(v)] = (t >> v) & 1U;
  }
  return a;
}

// Independent count of (formula, satisfying assignment) pairs via satisfies().
std::size_t count_pairs(int n) {
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << proper_universe_size(n)); ++mask) {
    const Formula f = formula_from_mask(n, mask);
    for (std::uint32_t t = 0; t < (1U << n); ++t) {
      count += satisfies(f, from_bits(t, n));
    }
  }
  return count;
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_sat(kUnsat2).verdict, Verdict::Unsat);
  const auto c = brute_force_sat(Formula(2, {C(1, 2)}));
  ASSERT_EQ(c.verdict, Verdict::Sat);
  // lexicographically first with x1 most significant: (0, 1)
  EXPECT_EQ(c.assignment, (Assignment{false, true}));
  EXPECT_EQ(brute_force_sat(Formula(3, {})).assignment, (Assignment{false, false, false}));
}

TEST(BruteForce, Weighted) {
  const auto a = brute_force_weighted(Formula(2, {}), {2, 3});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->weight, 5);
  EXPECT_EQ(a->assignment, (Assignment{true, true}));

  const auto b = brute_force_weighted(Formula(3, {}), {-1, -2, -3});
  ASSERT_TRUE(b);
  EXPECT_EQ(b->weight, 0);
  EXPECT_EQ(b->assignment, (Assignment{false, false, false}));

  EXPECT_FALSE(brute_force_weighted(kUnsat2, {1, 1}));
  EXPECT_THROW(brute_force_weighted(kUnsat2, {1}), std::invalid_argument);
}

TEST(QnModel, VertexCounts) {
  EXPECT_EQ(qn_model(1).vertex_count(), 2u);
  // each assignment falsifies C(n,2) of the proper clauses, so it lies in
  // 2^(proper - C(n,2)) formulas: 4 * 2^3 and 8 * 2^9
  EXPECT_EQ(qn_model(2).vertex_count(), 32u);
  EXPECT_EQ(qn_model(3).vertex_count(), 4096u);
  EXPECT_EQ(count_pairs(2), 32u);
  EXPECT_EQ(count_pairs(3), 4096u);
}

TEST(QnModel, StreamedVerticesSatisfyTheirFormula) {
  for (int n = 1; n <= 3; ++n) {
    auto stream = enumerate_qn_vertices(n);
    std::size_t seen = 0;
    while (auto v = stream.next()) {
      std::vector<Clause> cs;
      const auto universe = clause_universe(n);
      ASSERT_EQ(v->y.bits.size(), universe.size());
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (v->y.bits[i]) {
          cs.push_back(universe[i].clause);
        }
      }
      EXPECT_TRUE(satisfies(Formula(n, cs), v->x));
      ++seen;
    }
    EXPECT_EQ(seen, qn_model(n).vertex_count());
  }
}

TEST(QnModel, RefusesLargeN) {
  EXPECT_THROW(qn_model(4), std::domain_error);
  try {
    QnModel m(4);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("n=4"), std::string::npos);
  }
}

TEST(Prop1, Examples) {
  const auto one = prop1_unweighted(Formula(2, {C(1, 2)}));
  EXPECT_EQ(one.zstar, 1);
  EXPECT_EQ(one.verdict, Verdict::Sat);

  const auto u = prop1_unweighted(kUnsat2);
  EXPECT_EQ(u.zstar, 3);
  EXPECT_EQ(u.verdict, Verdict::Unsat);

  const auto e = prop1_unweighted(Formula(3, {}));
  EXPECT_EQ(e.zstar, 0);
  EXPECT_EQ(e.verdict, Verdict::Sat);
}

TEST(Prop1, WeightedExamples) {
  const auto r = prop1_weighted(Formula(2, {}), {1, -1});
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.x, (Assignment{true, false}));
  EXPECT_EQ(r.zstar, Rational(1, 6));  // w.x = 1, W = 2

  const auto z = prop1_weighted(Formula(2, {C(1, 2)}), {0, 0});
  EXPECT_TRUE(z.fallback);
  EXPECT_EQ(z.verdict, Verdict::Sat);

  const auto u = prop1_weighted(kUnsat2, {5, -2});
  EXPECT_EQ(u.verdict, Verdict::Unsat);
  EXPECT_LE(u.zstar, Rational(4) - Rational(2, 3));
}

TEST(Prop1, ExhaustiveDichotomy) {
  for (int n : {2, 3}) {
    const QnModel& m = qn_model(n);
    for (std::uint64_t mask = 0; mask < m.formula_count(); ++mask) {
      const Formula f = m.formula(mask);
      EXPECT_EQ(m.mask_of(f), mask);
      const auto r = prop1_unweighted(m, f);
      const Verdict truth = brute_force_sat(f).verdict;
      EXPECT_EQ(r.verdict, truth);
      const Rational ones(static_cast<std::int64_t>(f.num_clauses()));
      if (truth == Verdict::Sat) {
        EXPECT_EQ(r.zstar, ones);
      } else {
        EXPECT_LE(r.zstar, ones - 1);
      }
    }
  }
}

TEST(Prop1, WeightedRandomAgreesWithBruteForce) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> wd(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const QnModel& m = qn_model(n);
    const Formula f = m.formula(rng() % m.formula_count());
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    for (auto& wi : w) {
      wi = wd(rng);
    }
    const auto r = prop1_weighted(m, f, w);
    const auto best = brute_force_weighted(f, w);
    EXPECT_EQ(r.verdict == Verdict::Sat, best.has_value());
    if (best && !r.fallback) {
      std::int64_t W = 0;
      for (auto wi : w) {
        W += wi < 0 ? -wi : wi;
      }
      const Rational ones(static_cast<std::int64_t>(f.num_clauses()));
      EXPECT_EQ(r.zstar, ones + Rational(best->weight, 3 * W));
      EXPECT_EQ(weight_of(r.x, w), best->weight);
      EXPECT_TRUE(satisfies(f, r.x));
    }
  }
}

TEST(Prop1, AuditCsv) {
  std::ostringstream out;
  write_qn_audit_csv(out, qn_model(2));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("formula_index,verdict,zstar,ones\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 17u);
  EXPECT_NE(text.find("\n15,UNSAT,3,4\n"), std::string::npos);
}

}  // namespace
}  // namespace flowsat
