#pragma once

// The multicommodity flow LP for 2SAT.
//
// The graph has literal vertices x_1..x_2n, complete in both directions, and
// one terminal t_k per literal. Commodity k (one per literal code) runs from
// t_k into x_k and leaves from x_{n+k} into t_{n+k}, so one unit of
// commodity k is exactly an implication path from literal k to its negation.
//
// Columns, in order:
//   Source(k)       k = 1..2n           flow k on (t_k, x_k), 0 <= . <= 1
//   Sink(k)         k = 1..2n           flow k on (x_{n+k}, t_{n+k})
//   Arc(k, i, j)    lexicographic       flow k on (x_i, x_j), i != j
// Rows: conservation at x_i for commodity k, row (k-1)*2n + (i-1).

#include <flowsat/formula.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

enum class CapacityMode {
  SourceCapped,  // only Source(k) is capped at 1
  UnitCapped,     // every flow variable is capped at 1
};

enum class FlowKind { Source, Sink, Arc };

struct FlowVarId {
  FlowKind kind = FlowKind::Source;
  int commodity = 1;
  int tail = 0;  // Arc only
  int head = 0;  // Arc only

  friend bool operator==(const FlowVarId&, const FlowVarId&) = default;
};

/// Closed-form column indexing for a fixed n.
class FlowIndex {
 public:
  explicit FlowIndex(int n) : n_(n), lits_(2 * n) {
    if (n < 2) {
      throw std::domain_error("flow model needs n >= 2");
    }
  }

  int n() const { return n_; }
  int literals() const { return lits_; }

  std::size_t arcs_per_commodity() const {
    return static_cast<std::size_t>(lits_) * static_cast<std::size_t>(lits_ - 1);
  }
  std::size_t num_vars() const {
    return static_cast<std::size_t>(lits_) * arcs_per_commodity() + 2 * static_cast<std::size_t>(lits_);
  }
  std::size_t num_rows() const { return static_cast<std::size_t>(lits_) * static_cast<std::size_t>(lits_); }

  std::size_t source(int k) const { return static_cast<std::size_t>(k - 1); }
  std::size_t sink(int k) const { return static_cast<std::size_t>(lits_ + k - 1); }
  std::size_t arc(int k, int i, int j) const {
    const auto L = static_cast<std::size_t>(lits_);
    const auto jj = static_cast<std::size_t>(j - 1 - (j > i ? 1 : 0));
    return 2 * L + static_cast<std::size_t>(k - 1) * arcs_per_commodity() +
           static_cast<std::size_t>(i - 1) * (L - 1) + jj;
  }
  std::size_t column(const FlowVarId& id) const {
    switch (id.kind) {
      case FlowKind::Source: return source(id.commodity);
      case FlowKind::Sink: return sink(id.commodity);
      case FlowKind::Arc: return arc(id.commodity, id.tail, id.head);
    }
    return 0;
  }

  FlowVarId decode(std::size_t col) const {
    const auto L = static_cast<std::size_t>(lits_);
    if (col >= num_vars()) {
      throw std::out_of_range("column index out of range");
    }
    if (col < L) {
      return {FlowKind::Source, static_cast<int>(col) + 1, 0, 0};
    }
    if (col < 2 * L) {
      return {FlowKind::Sink, static_cast<int>(col - L) + 1, 0, 0};
    }
    std::size_t r = col - 2 * L;
    const int k = static_cast<int>(r / arcs_per_commodity()) + 1;
    r %= arcs_per_commodity();
    const int i = static_cast<int>(r / (L - 1)) + 1;
    int j = static_cast<int>(r % (L - 1)) + 1;
    if (j >= i) {
      ++j;
    }
    return {FlowKind::Arc, k, i, j};
  }

  /// Conservation row of node x_i for commodity k.
  std::size_t row(int k, int i) const {
    return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(lits_) + static_cast<std::size_t>(i - 1);
  }

  /// Literal where commodity k leaves the literal graph.
  int sink_node(int k) const { return negate(Literal{k}, n_).code; }

 private:
  int n_;
  int lits_;
};

struct RowEntry {
  std::size_t col;
  std::int64_t coef;

  friend bool operator==(const RowEntry&, const RowEntry&) = default;
};

struct EqualityRow {
  std::vector<RowEntry> entries;
  std::int64_t rhs = 0;

  friend bool operator==(const EqualityRow&, const EqualityRow&) = default;
};

/// Integer-data LP: maximize objective.x subject to equality rows and
/// per-column bounds. A missing upper bound means +infinity.
struct LpInstance {
  std::string name;
  std::size_t num_vars = 0;
  std::vector<EqualityRow> rows;
  std::vector<std::int64_t> lower;
  std::vector<std::optional<std::int64_t>> upper;
  std::vector<std::int64_t> objective;
  std::vector<std::string> col_names;
  std::vector<std::string> row_names;

  int n = 0;  // 0 when not a flow model
  CapacityMode capacity = CapacityMode::UnitCapped;
  std::optional<int> commodity;  // set on per-commodity sub-LPs

  /// Finite bound sides; lower bound 0 counts as an inequality.
  std::size_t inequality_count() const {
    std::size_t c = num_vars;
    for (const auto& u : upper) {
      if (u) {
        ++c;
      }
    }
    return c;
  }

  friend bool operator==(const LpInstance&, const LpInstance&) = default;
};

struct ModelCounts {
  std::size_t vars;
  std::size_t equalities;
  std::size_t inequalities;

  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;
};

/// 8n^3-4n^2+4n variables, 4n^2 equalities, 8n^3-4n^2+6n inequalities.
constexpr ModelCounts counts(int n) {
  const auto m = static_cast<std::size_t>(n);
  return {8 * m * m * m - 4 * m * m + 4 * m, 4 * m * m, 8 * m * m * m - 4 * m * m + 6 * m};
}

namespace detail {

inline std::string padded(int v, int width) {
  std::string s = std::to_string(v);
  return std::string(static_cast<std::size_t>(width) - std::min(s.size(), static_cast<std::size_t>(width)), '0') + s;
}

inline int digits(int v) {
  int d = 1;
  while (v >= 10) {
    v /= 10;
    ++d;
  }
  return d;
}

}  // namespace detail

/// Column name derived from the FlowVarId: S<k>, T<k>, A<k><i><j>, with each
/// index zero-padded to the width of 2n. Fits the 8-character MPS field for
/// n <= 49.
inline std::string column_name(const FlowIndex& idx, const FlowVarId& id) {
  const int w = detail::digits(idx.literals());
  switch (id.kind) {
    case FlowKind::Source: return "S" + detail::padded(id.commodity, w);
    case FlowKind::Sink: return "T" + detail::padded(id.commodity, w);
    case FlowKind::Arc:
      return "A" + detail::padded(id.commodity, w) + detail::padded(id.tail, w) +
             detail::padded(id.head, w);
  }
  return {};
}

inline std::string row_name(const FlowIndex& idx, int k, int i) {
  const int w = detail::digits(idx.literals());
  return "R" + detail::padded(k, w) + detail::padded(i, w);
}

inline LpInstance build_pn(int n, CapacityMode cap) {
  const FlowIndex idx(n);
  const int L = idx.literals();
  LpInstance lp;
  lp.name = "P" + std::to_string(n) + (cap == CapacityMode::UnitCapped ? "U" : "F");
  lp.n = n;
  lp.capacity = cap;
  lp.num_vars = idx.num_vars();
  lp.lower.assign(lp.num_vars, 0);
  lp.upper.assign(lp.num_vars, std::nullopt);
  lp.objective.assign(lp.num_vars, 0);
  lp.col_names.resize(lp.num_vars);
  for (std::size_t c = 0; c < lp.num_vars; ++c) {
    const FlowVarId id = idx.decode(c);
    lp.col_names[c] = column_name(idx, id);
    if (id.kind == FlowKind::Source || cap == CapacityMode::UnitCapped) {
      lp.upper[c] = 1;
    }
  }

  lp.rows.resize(idx.num_rows());
  lp.row_names.resize(idx.num_rows());
  for (int k = 1; k <= L; ++k) {
    for (int i = 1; i <= L; ++i) {
      auto& row = lp.rows[idx.row(k, i)];
      lp.row_names[idx.row(k, i)] = row_name(idx, k, i);
      // inflow positive, outflow negative; entries sorted by column
      if (k == i) {
        row.entries.push_back({idx.source(k), 1});
      }
      if (idx.sink_node(k) == i) {
        row.entries.push_back({idx.sink(k), -1});
      }
      for (int j = 1; j <= L; ++j) {
        if (j == i) {
          continue;
        }
        row.entries.push_back({idx.arc(k, j, i), 1});
        row.entries.push_back({idx.arc(k, i, j), -1});
      }
      std::sort(row.entries.begin(), row.entries.end(),
                [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
    }
  }
  return lp;
}

/// Clause whose implications include the arc x_i -> x_j: the clause
/// {not x_i, x_j}. Arcs x_i -> not x_i would need the unit clause
/// {not x_i, not x_i} and map to nothing.
inline std::optional<Clause> clause_of_arc(int tail, int head, int n) {
  if (tail == head) {
    return std::nullopt;
  }
  const Literal nt = negate(Literal{tail}, n);
  if (nt.code == head) {
    return std::nullopt;
  }
  return make_clause(nt, Literal{head});
}

/// True iff the arc tail -> head is an implication of a clause present in f.
/// Arcs without a clause preimage are never present.
inline bool arc_present(const Formula& f, int tail, int head) {
  const auto c = clause_of_arc(tail, head, f.num_vars());
  return c && f.contains(*c);
}

inline void check_same_n(const LpInstance& lp, const Formula& f) {
  if (lp.n != f.num_vars() || lp.commodity) {
    throw std::domain_error("LP built for n=" + std::to_string(lp.n) +
                            " but formula has n=" + std::to_string(f.num_vars()));
  }
}

inline std::int64_t penalty_weight(int n) { return -(2 * static_cast<std::int64_t>(n) + 1); }

/// +1 on every Source(k), -(2n+1) on every arc that is not an implication of
/// f, 0 elsewhere.
inline std::vector<std::int64_t> build_objective(const Formula& f, const LpInstance& lp) {
  check_same_n(lp, f);
  const FlowIndex idx(lp.n);
  std::vector<std::int64_t> obj(lp.num_vars, 0);
  const std::int64_t penalty = penalty_weight(lp.n);
  for (std::size_t c = 0; c < lp.num_vars; ++c) {
    const FlowVarId id = idx.decode(c);
    if (id.kind == FlowKind::Source) {
      obj[c] = 1;
    } else if (id.kind == FlowKind::Arc && !arc_present(f, id.tail, id.head)) {
      obj[c] = penalty;
    }
  }
  return obj;
}

inline LpInstance with_objective(LpInstance lp, const Formula& f) {
  lp.objective = build_objective(f, lp);
  return lp;
}

/// Restriction to the face of f: every non-implication arc is fixed to 0 and
/// the objective is the plain sum of Source(k).
inline LpInstance apply_face_fixing(const LpInstance& lp, const Formula& f) {
  check_same_n(lp, f);
  const FlowIndex idx(lp.n);
  LpInstance out = lp;
  for (std::size_t c = 0; c < lp.num_vars; ++c) {
    const FlowVarId id = idx.decode(c);
    out.objective[c] = id.kind == FlowKind::Source ? 1 : 0;
    if (id.kind == FlowKind::Arc && !arc_present(f, id.tail, id.head)) {
      out.upper[c] = 0;
    }
  }
  return out;
}

/// One commodity of a decomposed flow LP, with the map back to the parent's
/// column indices.
struct CommodityLp {
  int commodity = 0;
  LpInstance lp;
  std::vector<std::size_t> parent_columns;
};

/// Splits a flow LP into its 2n disjoint single-commodity blocks.
inline std::vector<CommodityLp> decompose(const LpInstance& lp) {
  if (lp.n < 2 || lp.commodity) {
    throw std::domain_error("decompose needs a full flow model");
  }
  const FlowIndex idx(lp.n);
  const int L = idx.literals();
  if (lp.num_vars != idx.num_vars() || lp.rows.size() != idx.num_rows()) {
    throw std::domain_error("LP dimensions do not match the flow model");
  }
  std::vector<CommodityLp> out;
  out.reserve(static_cast<std::size_t>(L));
  for (int k = 1; k <= L; ++k) {
    CommodityLp sub;
    sub.commodity = k;
    std::vector<std::size_t> cols{idx.source(k), idx.sink(k)};
    for (int i = 1; i <= L; ++i) {
      for (int j = 1; j <= L; ++j) {
        if (i != j) {
          cols.push_back(idx.arc(k, i, j));
        }
      }
    }
    std::vector<std::size_t> local(lp.num_vars, SIZE_MAX);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      local[cols[c]] = c;
    }
    LpInstance& s = sub.lp;
    s.name = lp.name + "K" + std::to_string(k);
    s.n = lp.n;
    s.capacity = lp.capacity;
    s.commodity = k;
    s.num_vars = cols.size();
    for (std::size_t parent : cols) {
      s.lower.push_back(lp.lower[parent]);
      s.upper.push_back(lp.upper[parent]);
      s.objective.push_back(lp.objective[parent]);
      s.col_names.push_back(lp.col_names.empty() ? std::string() : lp.col_names[parent]);
    }
    for (int i = 1; i <= L; ++i) {
      const auto& row = lp.rows[idx.row(k, i)];
      EqualityRow r;
      r.rhs = row.rhs;
      for (const auto& e : row.entries) {
        if (local[e.col] == SIZE_MAX) {
          throw std::domain_error("row " + std::to_string(idx.row(k, i)) +
                                  " couples commodity " + std::to_string(k) +
                                  " with a foreign column");
        }
        r.entries.push_back({local[e.col], e.coef});
      }
      s.rows.push_back(std::move(r));
      s.row_names.push_back(lp.row_names.empty() ? std::string() : lp.row_names[idx.row(k, i)]);
    }
    sub.parent_columns = std::move(cols);
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace flowsat
