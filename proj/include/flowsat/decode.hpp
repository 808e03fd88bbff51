#pragma once

// Reading a verdict and a certificate off an optimal flow.
//
// The verdict itself needs only a scan over index pairs (i, n+i) of the
// source flows with a constant number of counters. Witness paths are
// recovered by walking saturated arcs of one commodity; the satisfying
// assignment is labelled by propagation over the implication graph, seeded
// from the commodities that carry flow.

#include <flowsat/certificate.hpp>
#include <flowsat/formula.hpp>
#include <flowsat/implication.hpp>
#include <flowsat/lp_model.hpp>
#include <flowsat/lp_solver.hpp>
#include <flowsat/rational.hpp>

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 0/1 reading of a flow value. Float values in (0.1, 0.9) or beyond 1.1 are
/// errors, not rounding candidates; exact values must be exactly 0 or 1.
template <class T>
bool flow_bit(const T& v) {
  using Traits = ScalarTraits<T>;
  if constexpr (Traits::exact) {
    if (v == 0) {
      return false;
    }
    if (v == 1) {
      return true;
    }
    throw DecodeError("non-integral flow value " + Traits::to_string(v));
  } else {
    const double d = Traits::to_double(v);
    if (d <= 0.1 && d >= -0.1) {
      return false;
    }
    if (d >= 0.9 && d <= 1.1) {
      return true;
    }
    throw DecodeError("non-integral flow value " + Traits::to_string(v));
  }
}

template <class T>
void check_flow_solution(const SolveResult<T>& sol, int n) {
  if (sol.status != SolveStatus::Optimal) {
    throw DecodeError(std::string("solution is not optimal: ") + to_string(sol.status));
  }
  if (sol.primal.size() != FlowIndex(n).num_vars()) {
    throw DecodeError("solution size does not match the flow model");
  }
}

/// Simple literal path x_k -> ... -> x_{n+k} along arcs that carry commodity
/// k. Revisiting a vertex cuts the cycle out of the walk.
template <class T>
LiteralPath extract_path(const SolveResult<T>& sol, int n, int k) {
  check_flow_solution(sol, n);
  const FlowIndex idx(n);
  const int L = idx.literals();
  if (k < 1 || k > L) {
    throw std::out_of_range("commodity out of range");
  }
  if (!flow_bit(sol.primal[idx.source(k)])) {
    throw DecodeError("commodity " + std::to_string(k) + " carries no flow");
  }
  const int target = idx.sink_node(k);
  std::vector<bool> used(idx.arcs_per_commodity(), false);
  std::vector<int> seen_at(static_cast<std::size_t>(L + 1), -1);
  LiteralPath path{k};
  seen_at[static_cast<std::size_t>(k)] = 0;
  const std::size_t base = idx.arc(k, 1, 2);
  while (path.back() != target) {
    const int u = path.back();
    int next = 0;
    for (int j = 1; j <= L && next == 0; ++j) {
      if (j == u) {
        continue;
      }
      const std::size_t col = idx.arc(k, u, j);
      if (!used[col - base] && flow_bit(sol.primal[col])) {
        used[col - base] = true;
        next = j;
      }
    }
    if (next == 0) {
      throw DecodeError("flow conservation broken at literal " + std::to_string(u) +
                        " for commodity " + std::to_string(k));
    }
    const int prev = seen_at[static_cast<std::size_t>(next)];
    if (prev >= 0) {
      for (std::size_t i = static_cast<std::size_t>(prev) + 1; i < path.size(); ++i) {
        seen_at[static_cast<std::size_t>(path[i])] = -1;
      }
      path.resize(static_cast<std::size_t>(prev) + 1);
    } else {
      seen_at[static_cast<std::size_t>(next)] = static_cast<int>(path.size());
      path.push_back(next);
    }
  }
  return path;
}

/// Labelling procedure: a literal whose commodity carries flow reaches its own
/// negation, so it is set false; truth is then pushed along implication edges,
/// and when propagation stalls the lowest unlabelled literal is set true.
template <class T>
Assignment extract_assignment_flow(const SolveResult<T>& sol, const Formula& f) {
  const int n = f.num_vars();
  check_flow_solution(sol, n);
  const FlowIndex idx(n);
  const int L = idx.literals();
  const Digraph g = build_implication_graph(f);

  // 0 unlabelled, 1 true, -1 false; indexed by literal code
  std::vector<int> label(static_cast<std::size_t>(L + 1), 0);
  std::deque<int> queue;
  auto set_true = [&](int lit) {
    auto& l = label[static_cast<std::size_t>(lit)];
    if (l == 1) {
      return;
    }
    if (l == -1) {
      throw DecodeError("labelling conflict at literal " + std::to_string(lit));
    }
    l = 1;
    label[static_cast<std::size_t>(negate(Literal{lit}, n).code)] = -1;
    queue.push_back(lit);
  };
  auto propagate = [&] {
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (std::size_t v : g.out(vertex_of(u))) {
        set_true(code_of(v));
      }
    }
  };

  for (int k = 1; k <= L; ++k) {
    if (flow_bit(sol.primal[idx.source(k)])) {
      set_true(negate(Literal{k}, n).code);
      propagate();
    }
  }
  for (int lit = 1; lit <= L; ++lit) {
    if (label[static_cast<std::size_t>(lit)] == 0) {
      set_true(lit);
      propagate();
    }
  }
  Assignment a(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    a[static_cast<std::size_t>(i - 1)] = label[static_cast<std::size_t>(i)] == 1;
  }
  if (!satisfies(f, a)) {
    throw DecodeError("labelled assignment does not satisfy the formula");
  }
  return a;
}

/// Unsat iff both commodities of some variable carry flow; the lowest such
/// variable is the witness.
template <class T>
Certificate decide_from_solution(const SolveResult<T>& sol, const Formula& f) {
  const int n = f.num_vars();
  check_flow_solution(sol, n);
  const FlowIndex idx(n);
  for (int i = 1; i <= n; ++i) {
    if (flow_bit(sol.primal[idx.source(i)]) && flow_bit(sol.primal[idx.source(i + n)])) {
      return Certificate::unsat(i, extract_path(sol, n, i), extract_path(sol, n, i + n));
    }
  }
  return Certificate::sat(extract_assignment_flow(sol, f));
}

}  // namespace flowsat
