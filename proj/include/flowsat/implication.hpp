#pragma once

// Implication graph of a 2SAT formula and the classical path-based decision
// procedure (strong components), used as the ground-truth oracle for the
// flow LP.

#include <flowsat/certificate.hpp>
#include <flowsat/formula.hpp>

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace flowsat {

/// Directed graph with per-vertex ordered out-neighbour lists.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t vertex_count) : adj_(vertex_count) {}

  std::size_t vertex_count() const { return adj_.size(); }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj_) {
      m += a.size();
    }
    return m;
  }

  /// Adds u -> v unless already present. Self-loops are rejected.
  void add_edge(std::size_t u, std::size_t v) {
    if (u >= adj_.size() || v >= adj_.size()) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (u == v) {
      throw std::invalid_argument("self-loop");
    }
    auto& a = adj_[u];
    if (std::find(a.begin(), a.end(), v) == a.end()) {
      a.push_back(v);
    }
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    const auto& a = adj_.at(u);
    return std::find(a.begin(), a.end(), v) != a.end();
  }

  const std::vector<std::size_t>& out(std::size_t u) const { return adj_[u]; }

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

/// Vertex index of literal code c (0-based).
constexpr std::size_t vertex_of(int code) { return static_cast<std::size_t>(code - 1); }
constexpr int code_of(std::size_t vertex) { return static_cast<int>(vertex) + 1; }

/// Each clause {a, b} contributes not a -> b and not b -> a. Edges are added
/// in canonical clause order, which fixes the adjacency order.
inline Digraph build_implication_graph(const Formula& f) {
  const int n = f.num_vars();
  Digraph g(static_cast<std::size_t>(2 * n));
  for (const auto& c : f.clauses()) {
    g.add_edge(vertex_of(negate(c.lo, n).code), vertex_of(c.hi.code));
    g.add_edge(vertex_of(negate(c.hi, n).code), vertex_of(c.lo.code));
  }
  return g;
}

inline void write_edge_list(std::ostream& out, const Digraph& g) {
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    for (std::size_t v : g.out(u)) {
      out << code_of(u) << ' ' << code_of(v) << '\n';
    }
  }
}

struct SccDecomposition {
  /// Component id per vertex. Ids are assigned in reverse topological order
  /// of the condensation: an edge u -> v between components implies
  /// component_of[u] > component_of[v].
  std::vector<std::size_t> component_of;
  std::size_t component_count = 0;
};

/// Tarjan's algorithm with an explicit call stack.
inline SccDecomposition scc(const Digraph& g) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t nv = g.vertex_count();
  SccDecomposition out;
  out.component_of.assign(nv, kUnvisited);

  std::vector<std::size_t> index(nv, kUnvisited);
  std::vector<std::size_t> low(nv, 0);
  std::vector<bool> on_stack(nv, false);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> calls;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < nv; ++root) {
    if (index[root] != kUnvisited) {
      continue;
    }
    calls.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!calls.empty()) {
      Frame& fr = calls.back();
      const auto& nbrs = g.out(fr.v);
      if (fr.next < nbrs.size()) {
        const std::size_t w = nbrs[fr.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
        continue;
      }
      const std::size_t v = fr.v;
      calls.pop_back();
      if (!calls.empty()) {
        low[calls.back().v] = std::min(low[calls.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component_of[w] = out.component_count;
        } while (w != v);
        ++out.component_count;
      }
    }
  }
  return out;
}

/// Breadth-first predecessor tree from `from`; returns the vertex path to
/// `to` or an empty vector.
inline std::vector<std::size_t> find_path(const Digraph& g, std::size_t from, std::size_t to) {
  const std::size_t nv = g.vertex_count();
  if (from >= nv || to >= nv) {
    throw std::out_of_range("vertex out of range");
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(nv, kNone);
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty() && parent[to] == kNone) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : g.out(u)) {
      if (parent[v] == kNone) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  if (parent[to] == kNone) {
    return {};
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) {
    path.push_back(parent[path.back()]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline bool reachable(const Digraph& g, std::size_t u, std::size_t v) {
  return u == v || !find_path(g, u, v).empty();
}

inline LiteralPath to_literal_path(const std::vector<std::size_t>& vertices) {
  LiteralPath p;
  p.reserve(vertices.size());
  for (std::size_t v : vertices) {
    p.push_back(code_of(v));
  }
  return p;
}

/// Linear-time decision via strong components. Unsat certificates carry the
/// two implication chains for the lowest conflicting variable.
inline Certificate apt_decide(const Formula& f) {
  const int n = f.num_vars();
  const Digraph g = build_implication_graph(f);
  const SccDecomposition comps = scc(g);
  Assignment a(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const std::size_t pos = comps.component_of[vertex_of(i)];
    const std::size_t neg = comps.component_of[vertex_of(i + n)];
    if (pos == neg) {
      return Certificate::unsat(
          i, to_literal_path(find_path(g, vertex_of(i), vertex_of(i + n))),
          to_literal_path(find_path(g, vertex_of(i + n), vertex_of(i))));
    }
    // smaller id = later in topological order
    a[static_cast<std::size_t>(i - 1)] = pos < neg;
  }
  return Certificate::sat(std::move(a));
}

}  // namespace flowsat
