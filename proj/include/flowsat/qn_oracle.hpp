#pragma once

// Brute-force satisfiability oracles and a vertex-list model of the natural
// 2SAT polytope: the convex hull of all pairs (formula indicator, satisfying
// assignment). At n <= 3 the vertex list is small enough to enumerate, and a
// linear program over the hull is a maximum over that list.

#include <flowsat/certificate.hpp>
#include <flowsat/formula.hpp>
#include <flowsat/rational.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

constexpr int kBruteForceMaxVars = 24;
constexpr int kQnMaxVars = 3;

namespace detail {

// Assignments are enumerated as integers t in [0, 2^n) with x_1 as the most
// significant bit, so increasing t is lexicographic order with false < true.
inline bool bit_of(std::uint32_t t, int var, int n) { return (t >> (n - var)) & 1U; }

inline bool literal_true(std::uint32_t t, Literal l, int n) {
  const bool v = bit_of(t, variable_of(l, n), n);
  return is_positive(l, n) ? v : !v;
}

inline bool satisfies_index(const Formula& f, std::uint32_t t) {
  const int n = f.num_vars();
  for (const auto& c : f.clauses()) {
    if (!literal_true(t, c.lo, n) && !literal_true(t, c.hi, n)) {
      return false;
    }
  }
  return true;
}

inline Assignment assignment_of(std::uint32_t t, int n) {
  Assignment a(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) {
    a[static_cast<std::size_t>(v - 1)] = bit_of(t, v, n);
  }
  return a;
}

inline void check_brute_force_size(int n) {
  if (n > kBruteForceMaxVars) {
    throw std::domain_error("brute force refuses n=" + std::to_string(n) + " (limit " +
                            std::to_string(kBruteForceMaxVars) + ")");
  }
}

}  // namespace detail

/// Exact verdict by enumeration; Sat returns the lexicographically first
/// satisfying assignment.
inline Certificate brute_force_sat(const Formula& f) {
  const int n = f.num_vars();
  detail::check_brute_force_size(n);
  for (std::uint32_t t = 0; t < (1U << n); ++t) {
    if (detail::satisfies_index(f, t)) {
      return Certificate::sat(detail::assignment_of(t, n));
    }
  }
  return Certificate::unsat(0);
}

struct WeightedOptimum {
  std::int64_t weight = 0;
  Assignment assignment;
};

inline std::int64_t weight_of(const Assignment& a, const std::vector<std::int64_t>& w) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) {
      s += w[i];
    }
  }
  return s;
}

/// Maximum w.x over satisfying assignments, ties to the lexicographically
/// first; nullopt when unsatisfiable.
inline std::optional<WeightedOptimum> brute_force_weighted(const Formula& f,
                                                           const std::vector<std::int64_t>& w) {
  const int n = f.num_vars();
  detail::check_brute_force_size(n);
  if (w.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("weight vector length must equal n");
  }
  std::optional<WeightedOptimum> best;
  for (std::uint32_t t = 0; t < (1U << n); ++t) {
    if (!detail::satisfies_index(f, t)) {
      continue;
    }
    Assignment a = detail::assignment_of(t, n);
    const std::int64_t s = weight_of(a, w);
    if (!best || s > best->weight) {
      best = WeightedOptimum{s, std::move(a)};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Vertex model

struct QnVertex {
  FormulaIndicator y;
  Assignment x;
};

/// All formulas over the non-tautological universe, indexed by the bitmask of
/// their clauses in universe order, with their satisfying assignments.
class QnModel {
 public:
  explicit QnModel(int n) : n_(n) {
    if (n < 1 || n > kQnMaxVars) {
      const double pairs = std::ldexp(1.0, static_cast<int>(proper_universe_size(n > 0 ? n : 1))) *
                           std::ldexp(1.0, n > 0 ? n : 1);
      throw std::domain_error("vertex enumeration refuses n=" + std::to_string(n) + " (about " +
                              std::to_string(pairs) + " candidate pairs; limit n<=" +
                              std::to_string(kQnMaxVars) + ")");
    }
    proper_ = proper_clauses(n);
    const std::uint32_t assignments = 1U << n;
    // satisfying-assignment set of each clause, as a bitmask over t
    std::vector<std::uint32_t> clause_sat(proper_.size(), 0);
    for (std::size_t c = 0; c < proper_.size(); ++c) {
      for (std::uint32_t t = 0; t < assignments; ++t) {
        if (detail::literal_true(t, proper_[c].lo, n) || detail::literal_true(t, proper_[c].hi, n)) {
          clause_sat[c] |= 1U << t;
        }
      }
    }
    const std::uint64_t formulas = std::uint64_t{1} << proper_.size();
    sat_sets_.resize(formulas);
    const std::uint32_t all = (1U << assignments) - 1;
    for (std::uint64_t mask = 0; mask < formulas; ++mask) {
      std::uint32_t s = all;
      for (std::size_t c = 0; c < proper_.size(); ++c) {
        if ((mask >> c) & 1U) {
          s &= clause_sat[c];
        }
      }
      sat_sets_[mask] = s;
      if (s != 0) {
        satisfiable_.push_back(mask);
        vertex_count_ += static_cast<std::size_t>(std::popcount(s));
      }
    }
  }

  int n() const { return n_; }
  std::uint64_t formula_count() const { return sat_sets_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  const std::vector<Clause>& proper() const { return proper_; }
  const std::vector<std::uint64_t>& satisfiable_masks() const { return satisfiable_; }

  /// Bitmask over assignment indices t that satisfy the formula `mask`.
  std::uint32_t sat_set(std::uint64_t mask) const { return sat_sets_.at(mask); }

  std::uint64_t mask_of(const Formula& f) const {
    if (f.num_vars() != n_) {
      throw std::domain_error("formula n does not match the vertex model");
    }
    std::uint64_t mask = 0;
    for (const auto& c : f.clauses()) {
      for (std::size_t i = 0; i < proper_.size(); ++i) {
        if (proper_[i] == c) {
          mask |= std::uint64_t{1} << i;
        }
      }
    }
    return mask;
  }

  Formula formula(std::uint64_t mask) const { return formula_from_mask(n_, mask); }

  QnVertex vertex(std::uint64_t mask, std::uint32_t t) const {
    return {to_indicator(formula(mask)), detail::assignment_of(t, n_)};
  }

 private:
  int n_;
  std::vector<Clause> proper_;
  std::vector<std::uint32_t> sat_sets_;
  std::vector<std::uint64_t> satisfiable_;
  std::size_t vertex_count_ = 0;
};

/// Shared, lazily built model for n in [1, 3].
inline const QnModel& qn_model(int n) {
  if (n < 1 || n > kQnMaxVars) {
    QnModel refuse(n);  // throws with the size estimate
  }
  static std::mutex mu;
  static std::vector<std::unique_ptr<QnModel>> models(kQnMaxVars + 1);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = models[static_cast<std::size_t>(n)];
  if (!slot) {
    slot = std::make_unique<QnModel>(n);
  }
  return *slot;
}

/// Generator over the vertex list: formulas in mask order, then satisfying
/// assignments in lexicographic order.
class QnVertexStream {
 public:
  explicit QnVertexStream(int n) : model_(&qn_model(n)) {}

  std::optional<QnVertex> next() {
    const auto& masks = model_->satisfiable_masks();
    while (formula_pos_ < masks.size()) {
      const std::uint32_t s = model_->sat_set(masks[formula_pos_]);
      while (t_ < (1U << model_->n())) {
        const std::uint32_t t = t_++;
        if ((s >> t) & 1U) {
          return model_->vertex(masks[formula_pos_], t);
        }
      }
      ++formula_pos_;
      t_ = 0;
    }
    return std::nullopt;
  }

 private:
  const QnModel* model_;
  std::size_t formula_pos_ = 0;
  std::uint32_t t_ = 0;
};

inline QnVertexStream enumerate_qn_vertices(int n) { return QnVertexStream(n); }

struct Prop1Result {
  Rational zstar;
  std::size_t ones = 0;  // clauses in the formula
  QnVertex argmax;
  Verdict verdict = Verdict::Sat;
};

/// max c.y over the vertex list with c = +1 on the formula's clauses and -1
/// elsewhere. The optimum equals the clause count iff the formula is
/// satisfiable and is at least one below it otherwise.
inline Prop1Result prop1_unweighted(const QnModel& model, const Formula& f) {
  const std::uint64_t phi = model.mask_of(f);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::uint64_t best_mask = 0;
  for (std::uint64_t psi : model.satisfiable_masks()) {
    const std::int64_t value = 2 * std::popcount(psi & phi) - std::popcount(psi);
    if (value > best) {
      best = value;
      best_mask = psi;
    }
  }
  Prop1Result res;
  res.zstar = Rational(best);
  res.ones = f.num_clauses();
  const Rational ones(static_cast<std::int64_t>(res.ones));
  const std::uint32_t s = model.sat_set(best_mask);
  res.argmax = model.vertex(best_mask, static_cast<std::uint32_t>(std::countr_zero(s)));
  if (res.zstar == ones) {
    res.verdict = Verdict::Sat;
  } else if (res.zstar <= ones - 1) {
    res.verdict = Verdict::Unsat;
  } else {
    throw std::logic_error("unweighted optimum above the clause count");
  }
  return res;
}

inline Prop1Result prop1_unweighted(const Formula& f) {
  return prop1_unweighted(qn_model(f.num_vars()), f);
}

struct Prop1WeightedResult {
  Rational zstar;
  std::size_t ones = 0;
  Assignment x;
  Verdict verdict = Verdict::Sat;
  bool fallback = false;  // W = 0: unweighted objective was used
};

/// max c.y + w.x / (3W) over the vertex list. Unsat iff the optimum is at
/// most ones - 2/3, Sat iff it is at least ones - 1/3.
inline Prop1WeightedResult prop1_weighted(const QnModel& model, const Formula& f,
                                          const std::vector<std::int64_t>& w) {
  const int n = model.n();
  if (w.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("weight vector length must equal n");
  }
  std::int64_t W = 0;
  for (auto wi : w) {
    W += wi < 0 ? -wi : wi;
  }
  Prop1WeightedResult res;
  res.ones = f.num_clauses();
  if (W == 0) {
    const Prop1Result u = prop1_unweighted(model, f);
    res.zstar = u.zstar;
    res.x = u.argmax.x;
    res.verdict = u.verdict;
    res.fallback = true;
    return res;
  }

  const std::uint64_t phi = model.mask_of(f);
  const std::uint32_t assignments = 1U << n;
  std::vector<std::int64_t> wx(assignments);
  for (std::uint32_t t = 0; t < assignments; ++t) {
    wx[t] = weight_of(detail::assignment_of(t, n), w);
  }
  const Rational scale(1, 3 * W);
  std::optional<Rational> best;
  std::uint32_t best_t = 0;
  for (std::uint64_t psi : model.satisfiable_masks()) {
    const Rational cy(2 * std::popcount(psi & phi) - std::popcount(psi));
    const std::uint32_t s = model.sat_set(psi);
    for (std::uint32_t t = 0; t < assignments; ++t) {
      if (!((s >> t) & 1U)) {
        continue;
      }
      Rational z = cy + scale * wx[t];
      if (!best || z > *best) {
        best = std::move(z);
        best_t = t;
      }
    }
  }
  res.zstar = *best;
  res.x = detail::assignment_of(best_t, n);
  const Rational ones(static_cast<std::int64_t>(res.ones));
  if (res.zstar <= ones - Rational(2, 3)) {
    res.verdict = Verdict::Unsat;
  } else if (res.zstar >= ones - Rational(1, 3)) {
    res.verdict = Verdict::Sat;
  } else {
    throw std::logic_error("weighted optimum falls inside the (-2/3, -1/3) gap");
  }
  return res;
}

inline Prop1WeightedResult prop1_weighted(const Formula& f, const std::vector<std::int64_t>& w) {
  return prop1_weighted(qn_model(f.num_vars()), f, w);
}

/// formula_index,verdict,zstar,ones for every formula of the model.
inline void write_qn_audit_csv(std::ostream& out, const QnModel& model) {
  out << "formula_index,verdict,zstar,ones\n";
  for (std::uint64_t mask = 0; mask < model.formula_count(); ++mask) {
    const Formula f = model.formula(mask);
    const Prop1Result r = prop1_unweighted(model, f);
    out << mask << ',' << to_string(r.verdict) << ',' << r.zstar.str() << ',' << r.ones << '\n';
  }
}

}  // namespace flowsat
