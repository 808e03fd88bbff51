#pragma once

// Satisfiability certificates and their independent checker, plus a small
// line-oriented text format used by the CLI.

#include <flowsat/formula.hpp>

#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

enum class Verdict { Sat, Unsat };

inline const char* to_string(Verdict v) { return v == Verdict::Sat ? "SAT" : "UNSAT"; }

/// Vertex sequence of literal codes.
using LiteralPath = std::vector<int>;

struct Certificate {
  Verdict verdict = Verdict::Sat;
  Assignment assignment;       // Sat only
  int witness = 0;             // Unsat only, variable index in [1, n]
  LiteralPath forward;         // x_i -> ... -> not x_i
  LiteralPath backward;        // not x_i -> ... -> x_i

  static Certificate sat(Assignment a) {
    Certificate c;
    c.verdict = Verdict::Sat;
    c.assignment = std::move(a);
    return c;
  }
  static Certificate unsat(int witness, LiteralPath fwd = {}, LiteralPath bwd = {}) {
    Certificate c;
    c.verdict = Verdict::Unsat;
    c.witness = witness;
    c.forward = std::move(fwd);
    c.backward = std::move(bwd);
    return c;
  }
};

/// True iff u -> v is an implication forced by a clause present in f, i.e.
/// the clause {not u, v} is in f.
inline bool is_implication(const Formula& f, int u, int v) {
  const int n = f.num_vars();
  if (u < 1 || v < 1 || u > 2 * n || v > 2 * n || u == v) {
    return false;
  }
  Literal nu = negate(Literal{u}, n);
  if (nu.code == v) {
    return false;
  }
  Clause c = make_clause(nu, Literal{v});
  return !is_tautology(c, n) && f.contains(c);
}

inline bool is_implication_chain(const Formula& f, const LiteralPath& path, int from, int to) {
  if (path.size() < 2 || path.front() != from || path.back() != to) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!is_implication(f, path[i], path[i + 1])) {
      return false;
    }
  }
  return true;
}

inline bool verify_certificate(const Formula& f, const Certificate& cert) {
  const int n = f.num_vars();
  if (cert.verdict == Verdict::Sat) {
    return satisfies(f, cert.assignment);
  }
  if (cert.witness < 1 || cert.witness > n) {
    return false;
  }
  const int pos = cert.witness;
  const int neg = cert.witness + n;
  return is_implication_chain(f, cert.forward, pos, neg) &&
         is_implication_chain(f, cert.backward, neg, pos);
}

// ---------------------------------------------------------------------------
// Text format
//
//   verdict SAT|UNSAT
//   n <vars>
//   assignment <dimacs literals...>        (SAT)
//   witness <i>                            (UNSAT)
//   forward <literal codes as dimacs ints> (UNSAT)
//   backward <...>                         (UNSAT)

inline std::string write_certificate(const Certificate& cert, int n) {
  std::ostringstream out;
  out << "verdict " << to_string(cert.verdict) << "\n";
  out << "n " << n << "\n";
  auto dimacs_path = [&](const LiteralPath& p) {
    for (int code : p) {
      out << ' ' << to_dimacs_literal(Literal{code}, n);
    }
    out << "\n";
  };
  if (cert.verdict == Verdict::Sat) {
    out << "assignment";
    for (int i = 0; i < n; ++i) {
      out << ' ' << (cert.assignment[static_cast<std::size_t>(i)] ? i + 1 : -(i + 1));
    }
    out << "\n";
  } else {
    out << "witness " << cert.witness << "\n";
    out << "forward";
    dimacs_path(cert.forward);
    out << "backward";
    dimacs_path(cert.backward);
  }
  return out.str();
}

struct ParsedCertificate {
  Certificate certificate;
  int n = 0;
};

inline ParsedCertificate read_certificate(std::istream& in) {
  ParsedCertificate out;
  std::string line;
  bool have_verdict = false;
  auto read_ints = [](std::istringstream& ls) {
    std::vector<int> v;
    int x = 0;
    while (ls >> x) {
      v.push_back(x);
    }
    return v;
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) {
      continue;
    }
    if (key == "verdict") {
      std::string v;
      ls >> v;
      if (v != "SAT" && v != "UNSAT") {
        throw std::runtime_error("certificate: bad verdict \"" + v + "\"");
      }
      out.certificate.verdict = v == "SAT" ? Verdict::Sat : Verdict::Unsat;
      have_verdict = true;
    } else if (key == "n") {
      ls >> out.n;
    } else if (key == "assignment") {
      auto lits = read_ints(ls);
      out.certificate.assignment.assign(lits.size(), false);
      for (std::size_t i = 0; i < lits.size(); ++i) {
        const int v = lits[i] < 0 ? -lits[i] : lits[i];
        if (v != static_cast<int>(i) + 1) {
          throw std::runtime_error("certificate: assignment literals out of order");
        }
        out.certificate.assignment[i] = lits[i] > 0;
      }
    } else if (key == "witness") {
      ls >> out.certificate.witness;
    } else if (key == "forward" || key == "backward") {
      if (out.n < 1) {
        throw std::runtime_error("certificate: path before \"n\" line");
      }
      LiteralPath p;
      for (int v : read_ints(ls)) {
        p.push_back(from_dimacs_literal(v, out.n).code);
      }
      (key == "forward" ? out.certificate.forward : out.certificate.backward) = std::move(p);
    } else {
      throw std::runtime_error("certificate: unknown key \"" + key + "\"");
    }
  }
  if (!have_verdict || out.n < 1) {
    throw std::runtime_error("certificate: missing verdict or n");
  }
  return out;
}

}  // namespace flowsat
