#pragma once

// 2SAT formula model.
//
// Literal codes follow the flow construction: codes 1..n are the positive
// literals x_1..x_n and codes n+1..2n are their negations, so negation is
// "add n modulo 2n" on the range [1, 2n].

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

struct Literal {
  int code = 0;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Complementary literal: code + n wrapped into [1, 2n].
inline Literal negate(Literal l, int n) {
  if (n < 1 || l.code < 1 || l.code > 2 * n) {
    throw std::domain_error("literal code " + std::to_string(l.code) +
                            " outside [1, " + std::to_string(2 * n) + "]");
  }
  return Literal{l.code + n <= 2 * n ? l.code + n : l.code - n};
}

/// Variable index in [1, n] of a literal.
inline int variable_of(Literal l, int n) { return l.code > n ? l.code - n : l.code; }

inline bool is_positive(Literal l, int n) { return l.code <= n; }

/// DIMACS integer (+v / -v) for a literal.
inline int to_dimacs_literal(Literal l, int n) {
  return is_positive(l, n) ? l.code : -(l.code - n);
}

inline Literal from_dimacs_literal(int value, int n) {
  if (value == 0 || value > n || value < -n) {
    throw std::domain_error("DIMACS literal " + std::to_string(value) +
                            " outside variable range 1.." + std::to_string(n));
  }
  return Literal{value > 0 ? value : n - value};
}

/// Two-literal clause, stored with lo.code < hi.code.
struct Clause {
  Literal lo;
  Literal hi;

  friend auto operator<=>(const Clause&, const Clause&) = default;
};

inline bool is_tautology(const Clause& c, int n) { return c.hi.code == c.lo.code + n; }

/// Canonical clause from two literals in any order.
inline Clause make_clause(Literal a, Literal b) {
  if (a.code == b.code) {
    throw std::domain_error("clause needs two distinct literals");
  }
  return a.code < b.code ? Clause{a, b} : Clause{b, a};
}

/// Size of the clause universe: every unordered pair of distinct literal
/// codes, tautologies included.
constexpr std::size_t universe_size(int n) {
  return static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(2 * n - 1) / 2;
}

/// Number of clauses that are not tautologies.
constexpr std::size_t proper_universe_size(int n) {
  return universe_size(n) - static_cast<std::size_t>(n);
}

/// Position of a clause in the lexicographic universe.
inline std::size_t universe_index(const Clause& c, int n) {
  const std::size_t a = static_cast<std::size_t>(c.lo.code - 1);
  const std::size_t b = static_cast<std::size_t>(c.hi.code - 1);
  const std::size_t m = static_cast<std::size_t>(2 * n);
  // rows 0..a-1 contribute (m-1) + (m-2) + ... + (m-a) slots
  return a * (2 * m - a - 1) / 2 + (b - a - 1);
}

struct ClauseSlot {
  Clause clause;
  bool tautology = false;
};

inline std::vector<ClauseSlot> clause_universe(int n) {
  if (n < 1) {
    throw std::domain_error("clause universe needs n >= 1");
  }
  std::vector<ClauseSlot> slots;
  slots.reserve(universe_size(n));
  for (int a = 1; a <= 2 * n; ++a) {
    for (int b = a + 1; b <= 2 * n; ++b) {
      Clause c{Literal{a}, Literal{b}};
      slots.push_back({c, is_tautology(c, n)});
    }
  }
  return slots;
}

/// Non-tautological clauses in universe order.
inline std::vector<Clause> proper_clauses(int n) {
  std::vector<Clause> out;
  out.reserve(proper_universe_size(n));
  for (const auto& slot : clause_universe(n)) {
    if (!slot.tautology) {
      out.push_back(slot.clause);
    }
  }
  return out;
}

class Formula {
 public:
  Formula() = default;

  /// Canonicalizes (sorts, deduplicates) and validates the clause set.
  Formula(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
    if (n_ < 1) {
      throw std::domain_error("formula needs n >= 1");
    }
    for (const auto& c : clauses_) {
      if (c.lo.code < 1 || c.hi.code > 2 * n_ || c.lo.code >= c.hi.code) {
        throw std::domain_error("clause literals out of range or not canonical");
      }
      if (is_tautology(c, n_)) {
        throw std::domain_error("tautological clause in formula");
      }
    }
    std::sort(clauses_.begin(), clauses_.end());
    clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
  }

  int num_vars() const { return n_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  bool contains(const Clause& c) const {
    return std::binary_search(clauses_.begin(), clauses_.end(), c);
  }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  int n_ = 1;
  std::vector<Clause> clauses_;
};

/// Truth value per variable, index 0 is x_1.
using Assignment = std::vector<bool>;

inline bool literal_value(const Assignment& a, Literal l, int n) {
  const bool v = a[static_cast<std::size_t>(variable_of(l, n) - 1)];
  return is_positive(l, n) ? v : !v;
}

inline bool satisfies(const Formula& f, const Assignment& a) {
  const int n = f.num_vars();
  if (a.size() != static_cast<std::size_t>(n)) {
    return false;
  }
  return std::all_of(f.clauses().begin(), f.clauses().end(), [&](const Clause& c) {
    return literal_value(a, c.lo, n) || literal_value(a, c.hi, n);
  });
}

/// 0/1 set indicator of a formula over the full clause universe.
struct FormulaIndicator {
  std::vector<std::uint8_t> bits;

  std::size_t popcount() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
  }
  friend bool operator==(const FormulaIndicator&, const FormulaIndicator&) = default;
};

inline FormulaIndicator to_indicator(const Formula& f) {
  FormulaIndicator ind;
  ind.bits.assign(universe_size(f.num_vars()), 0);
  for (const auto& c : f.clauses()) {
    ind.bits[universe_index(c, f.num_vars())] = 1;
  }
  return ind;
}

// ---------------------------------------------------------------------------
// DIMACS

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedFormula {
  Formula formula;
  std::size_t header_clauses = 0;   // m from the "p cnf" line
  std::size_t tautologies_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Strict 2SAT DIMACS reader: every clause must have exactly two distinct
/// nonzero literals. Tautologies are dropped and counted.
inline ParsedFormula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  std::size_t header_m = 0;
  std::vector<Clause> clauses;
  std::vector<int> pending;
  std::size_t pending_line = 0;
  std::size_t tautologies = 0;
  std::size_t raw_clauses = 0;

  auto finish_clause = [&](std::size_t at) {
    if (pending.size() != 2) {
      throw ParseError(at, "clause has " + std::to_string(pending.size()) +
                               (pending.size() == 1 ? " literal" : " literals"));
    }
    Literal a = from_dimacs_literal(pending[0], n);
    Literal b = from_dimacs_literal(pending[1], n);
    if (a == b) {
      throw ParseError(at, "clause repeats literal " + std::to_string(pending[0]));
    }
    Clause c = make_clause(a, b);
    ++raw_clauses;
    if (is_tautology(c, n)) {
      ++tautologies;
    } else {
      clauses.push_back(c);
    }
    pending.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c' || line[first] == '%') {
      continue;
    }
    if (line[first] == 'p') {
      if (n >= 0) {
        throw ParseError(line_no, "duplicate header");
      }
      std::istringstream hs(line.substr(first));
      std::string p, fmt;
      long long vars = -1, m = -1;
      std::string extra;
      if (!(hs >> p >> fmt >> vars >> m) || p != "p" || fmt != "cnf" || vars < 1 ||
          m < 0 || (hs >> extra)) {
        throw ParseError(line_no, "malformed header, expected \"p cnf <n> <m>\"");
      }
      n = static_cast<int>(vars);
      header_m = static_cast<std::size_t>(m);
      continue;
    }
    if (n < 0) {
      throw ParseError(line_no, "clause before \"p cnf\" header");
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(tok, &used);
        if (used != tok.size()) {
          throw std::invalid_argument(tok);
        }
      } catch (const std::exception&) {
        throw ParseError(line_no, "not an integer: \"" + tok + "\"");
      }
      if (v == 0) {
        finish_clause(pending_line ? pending_line : line_no);
        pending_line = 0;
        continue;
      }
      if (v > n || v < -n) {
        throw ParseError(line_no, "variable " + std::to_string(v < 0 ? -v : v) +
                                      " exceeds n=" + std::to_string(n));
      }
      if (pending.empty()) {
        pending_line = line_no;
      }
      pending.push_back(static_cast<int>(v));
    }
  }
  if (n < 0) {
    throw ParseError(line_no, "missing \"p cnf\" header");
  }
  if (!pending.empty()) {
    throw ParseError(pending_line, "clause not terminated by 0");
  }
  ParsedFormula out{Formula(n, clauses), header_m, tautologies, 0};
  out.duplicates_dropped = clauses.size() - out.formula.num_clauses();
  return out;
}

inline ParsedFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

/// "p cnf n m" followed by one 0-terminated clause per line, canonical order.
inline std::string to_dimacs(const Formula& f) {
  const int n = f.num_vars();
  std::string out = "p cnf " + std::to_string(n) + " " + std::to_string(f.num_clauses()) + "\n";
  for (const auto& c : f.clauses()) {
    out += std::to_string(to_dimacs_literal(c.lo, n)) + " " +
           std::to_string(to_dimacs_literal(c.hi, n)) + " 0\n";
  }
  return out;
}

/// Formula whose clauses are the set bits of `mask` over proper_clauses(n).
inline Formula formula_from_mask(int n, std::uint64_t mask) {
  const auto proper = proper_clauses(n);
  std::vector<Clause> cs;
  for (std::size_t i = 0; i < proper.size(); ++i) {
    if ((mask >> i) & 1U) {
      cs.push_back(proper[i]);
    }
  }
  return Formula(n, std::move(cs));
}

}  // namespace flowsat
