#pragma once

// Bounded-variable primal simplex.
//
// Revised form with an explicit dense basis inverse. Nonbasic columns rest at
// one of their bounds; each equality row owns an artificial column which is
// fixed to zero once a feasible basis is known. Homogeneous instances (all
// rhs zero, lower bounds zero) start feasible from the all-artificial basis
// and skip phase one.
//
// Pricing is Dantzig (largest reduced cost) and falls back to Bland's
// smallest-index rule after a run of degenerate pivots, returning to Dantzig
// on the next pivot that makes progress.

#include <flowsat/lp_model.hpp>
#include <flowsat/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

enum class Arithmetic { Float, Rational };
enum class PivotRule { DantzigBland, Bland };
enum class SolveStatus { Optimal, IterationLimit, Infeasible, Unbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct SolverOptions {
  Arithmetic arithmetic = Arithmetic::Float;
  double tolerance = 1e-7;  // float mode only
  PivotRule pivot_rule = PivotRule::DantzigBland;
  std::size_t degenerate_threshold = 50;
  std::size_t iteration_cap = 0;  // 0: 50 * (rows + cols)
  std::size_t refactor_interval = 100;  // float mode only
  std::ostream* pivot_log = nullptr;
};

template <class T>
struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  T objective{};
  std::vector<T> primal;
  /// Basic column per row; indices >= num_vars are row artificials.
  std::vector<std::size_t> basis;
  /// Structural nonbasic columns resting at their upper bound.
  std::vector<std::size_t> at_upper;
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
  std::size_t bound_flips = 0;
};

template <class T>
class SimplexSolver {
  using Traits = ScalarTraits<T>;

 public:
  SimplexSolver(const LpInstance& lp, SolverOptions opts) : lp_(lp), opts_(opts) {
    if (opts_.tolerance <= 0.0 || opts_.degenerate_threshold == 0 || opts_.refactor_interval == 0) {
      throw std::invalid_argument("solver tolerance and caps must be positive");
    }
    m_ = lp.rows.size();
    nv_ = lp.num_vars;
    total_ = nv_ + m_;
    if (lp.lower.size() != nv_ || lp.upper.size() != nv_ || lp.objective.size() != nv_) {
      throw std::invalid_argument("LP bound/objective vectors do not match num_vars");
    }
    cap_ = opts_.iteration_cap ? opts_.iteration_cap : 50 * (m_ + nv_);
    tol_ = Traits::exact ? T(0) : T(opts_.tolerance);
    pivot_tol_ = Traits::exact ? T(0) : T(1e-9);
  }

  SolveResult<T> solve() {
    setup();
    SolveResult<T> res;

    bool need_phase1 = false;
    for (std::size_t r = 0; r < m_; ++r) {
      if (!Traits::is_zero(x_[nv_ + r])) {
        need_phase1 = true;
      }
    }
    if (need_phase1) {
      for (std::size_t j = 0; j < total_; ++j) {
        cost_[j] = j >= nv_ ? T(-1) : T(0);
      }
      compute_duals();
      const SolveStatus s = iterate(res);
      if (s != SolveStatus::Optimal) {
        res.status = s;
        return finish(res);
      }
      T infeas(0);
      for (std::size_t r = 0; r < m_; ++r) {
        infeas += x_[nv_ + r];
      }
      if (infeas > tol_ * T(static_cast<double>(m_ + 1))) {
        res.status = SolveStatus::Infeasible;
        return finish(res);
      }
    }

    // phase two: artificials pinned at zero
    for (std::size_t r = 0; r < m_; ++r) {
      has_upper_[nv_ + r] = true;
      upper_[nv_ + r] = T(0);
      if (position_[nv_ + r] == kNonbasic) {
        x_[nv_ + r] = T(0);
        at_upper_[nv_ + r] = false;
      }
    }
    for (std::size_t j = 0; j < total_; ++j) {
      cost_[j] = j < nv_ ? Traits::from_int(lp_.objective[j]) : T(0);
    }
    compute_duals();
    res.status = iterate(res);
    return finish(res);
  }

 private:
  static constexpr std::size_t kNonbasic = std::numeric_limits<std::size_t>::max();

  // --- column access -------------------------------------------------------

  struct ColEntry {
    std::size_t row;
    std::int64_t coef;
  };

  void setup() {
    col_start_.assign(total_ + 1, 0);
    for (const auto& row : lp_.rows) {
      for (const auto& e : row.entries) {
        if (e.col >= nv_) {
          throw std::invalid_argument("row entry references column out of range");
        }
        if (e.coef != 0) {
          ++col_start_[e.col + 1];
        }
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      ++col_start_[nv_ + r + 1];
    }
    for (std::size_t j = 0; j < total_; ++j) {
      col_start_[j + 1] += col_start_[j];
    }
    entries_.assign(col_start_[total_], ColEntry{0, 0});
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t r = 0; r < m_; ++r) {
      for (const auto& e : lp_.rows[r].entries) {
        if (e.coef != 0) {
          entries_[fill[e.col]++] = {r, e.coef};
        }
      }
    }

    lower_.assign(total_, T(0));
    upper_.assign(total_, T(0));
    has_upper_.assign(total_, false);
    for (std::size_t j = 0; j < nv_; ++j) {
      lower_[j] = Traits::from_int(lp_.lower[j]);
      if (lp_.upper[j]) {
        if (*lp_.upper[j] < lp_.lower[j]) {
          throw std::invalid_argument("column " + std::to_string(j) + " has upper < lower");
        }
        has_upper_[j] = true;
        upper_[j] = Traits::from_int(*lp_.upper[j]);
      }
    }

    x_.assign(total_, T(0));
    at_upper_.assign(total_, false);
    position_.assign(total_, kNonbasic);
    cost_.assign(total_, T(0));
    for (std::size_t j = 0; j < nv_; ++j) {
      x_[j] = lower_[j];
    }

    // residual of the rows with every structural at its lower bound
    std::vector<T> resid(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      resid[r] = Traits::from_int(lp_.rows[r].rhs);
    }
    for (std::size_t j = 0; j < nv_; ++j) {
      if (Traits::is_zero(x_[j])) {
        continue;
      }
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        resid[entries_[p].row] -= Traits::from_int(entries_[p].coef) * x_[j];
      }
    }

    head_.assign(m_, 0);
    binv_.assign(m_ * m_, T(0));
    for (std::size_t r = 0; r < m_; ++r) {
      const std::int64_t sign = resid[r] < 0 ? -1 : 1;
      entries_[col_start_[nv_ + r]] = {r, sign};
      head_[r] = nv_ + r;
      position_[nv_ + r] = r;
      x_[nv_ + r] = sign < 0 ? T(-resid[r]) : resid[r];
      binv_[r * m_ + r] = Traits::from_int(sign);
    }
    y_.assign(m_, T(0));
    alpha_.assign(m_, T(0));
    pivots_since_refactor_ = 0;
  }

  /// acc += coef * v without a multiply for unit coefficients.
  static void add_scaled(T& acc, std::int64_t coef, const T& v) {
    if (coef == 1) {
      acc += v;
    } else if (coef == -1) {
      acc -= v;
    } else {
      acc += Traits::from_int(coef) * v;
    }
  }

  T reduced_cost(std::size_t j) const {
    T d = cost_[j];
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      const T& yr = y_[entries_[p].row];
      if (!Traits::is_zero(yr)) {
        add_scaled(d, -entries_[p].coef, yr);
      }
    }
    return d;
  }

  void compute_duals() {
    for (std::size_t r = 0; r < m_; ++r) {
      y_[r] = T(0);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const T& cb = cost_[head_[i]];
      if (Traits::is_zero(cb)) {
        continue;
      }
      const T* row = &binv_[i * m_];
      for (std::size_t r = 0; r < m_; ++r) {
        if (!Traits::is_zero(row[r])) {
          y_[r] += cb * row[r];
        }
      }
    }
  }

  void compute_alpha(std::size_t j) {
    for (std::size_t i = 0; i < m_; ++i) {
      alpha_[i] = T(0);
    }
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      const std::size_t r = entries_[p].row;
      const std::int64_t coef = entries_[p].coef;
      for (std::size_t i = 0; i < m_; ++i) {
        const T& b = binv_[i * m_ + r];
        if (!Traits::is_zero(b)) {
          add_scaled(alpha_[i], coef, b);
        }
      }
    }
  }

  bool is_fixed(std::size_t j) const { return has_upper_[j] && upper_[j] == lower_[j]; }

  // --- main loop -------------------------------------------------------------

  SolveStatus iterate(SolveResult<T>& res) {
    std::size_t degenerate_run = 0;
    for (;;) {
      if (res.pivots + res.bound_flips >= cap_) {
        return SolveStatus::IterationLimit;
      }
      const bool bland =
          opts_.pivot_rule == PivotRule::Bland || degenerate_run >= opts_.degenerate_threshold;

      // pricing
      std::size_t enter = kNonbasic;
      T best_d(0);
      T best_abs(0);
      for (std::size_t j = 0; j < total_; ++j) {
        if (position_[j] != kNonbasic || is_fixed(j)) {
          continue;
        }
        T d = reduced_cost(j);
        const bool improving = at_upper_[j] ? d < -tol_ : d > tol_;
        if (!improving) {
          continue;
        }
        if (bland) {
          enter = j;
          best_d = d;
          break;
        }
        T a = abs_value(d);
        if (enter == kNonbasic || a > best_abs) {
          enter = j;
          best_abs = a;
          best_d = d;
        }
      }
      if (enter == kNonbasic) {
        return SolveStatus::Optimal;
      }

      const int dir = at_upper_[enter] ? -1 : 1;
      compute_alpha(enter);

      // ratio test; leaving row and whether it leaves at its upper bound
      std::size_t leave_row = kNonbasic;
      bool leave_upper = false;
      T theta(0);
      T leave_pivot_abs(0);
      for (std::size_t i = 0; i < m_; ++i) {
        const T& a = alpha_[i];
        if (abs_value(a) <= pivot_tol_) {
          continue;
        }
        const std::size_t b = head_[i];
        // basic value moves by g * step
        const bool decreasing = (dir > 0) == (a > 0);
        T limit(0);
        if (decreasing) {
          limit = (x_[b] - lower_[b]) / abs_value(a);
        } else if (has_upper_[b]) {
          limit = (upper_[b] - x_[b]) / abs_value(a);
        } else {
          continue;
        }
        if (limit < 0) {
          limit = T(0);
        }
        bool take = false;
        if (leave_row == kNonbasic || limit < theta - tol_) {
          take = true;
        } else if (limit <= theta + tol_) {
          // tie
          if (bland) {
            take = b < head_[leave_row];
          } else {
            const T aa = abs_value(a);
            take = aa > leave_pivot_abs || (aa == leave_pivot_abs && b < head_[leave_row]);
          }
        }
        if (take) {
          leave_row = i;
          leave_upper = !decreasing;
          theta = limit;
          leave_pivot_abs = abs_value(a);
        }
      }

      std::optional<T> own_range;
      if (has_upper_[enter]) {
        own_range = upper_[enter] - lower_[enter];
      }
      if (leave_row == kNonbasic && !own_range) {
        return SolveStatus::Unbounded;
      }

      const bool flip = own_range && (leave_row == kNonbasic || *own_range <= theta);
      if (flip) {
        theta = *own_range;
      }
      const bool degenerate = Traits::exact ? Traits::is_zero(theta) : theta <= tol_;

      // move along the edge
      if (!Traits::is_zero(theta)) {
        const T step = dir > 0 ? theta : T(-theta);
        for (std::size_t i = 0; i < m_; ++i) {
          if (!Traits::is_zero(alpha_[i])) {
            x_[head_[i]] -= step * alpha_[i];
          }
        }
        x_[enter] += step;
      }

      if (flip) {
        at_upper_[enter] = !at_upper_[enter];
        x_[enter] = at_upper_[enter] ? upper_[enter] : lower_[enter];
        ++res.bound_flips;
        log_step("flip", enter, kNonbasic, theta);
      } else {
        const std::size_t leaving = head_[leave_row];
        pivot(leave_row, enter, best_d);
        position_[leaving] = kNonbasic;
        at_upper_[leaving] = leave_upper;
        x_[leaving] = leave_upper ? upper_[leaving] : lower_[leaving];
        ++res.pivots;
        if (degenerate) {
          ++res.degenerate_pivots;
        }
        log_step(bland ? "bland" : "dantzig", enter, leaving, theta);
        if (!Traits::exact && ++pivots_since_refactor_ >= opts_.refactor_interval) {
          refactor();
        }
      }
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
    }
  }

  void pivot(std::size_t p, std::size_t enter, const T& d_enter) {
    const T piv = alpha_[p];
    T* rowp = &binv_[p * m_];
    nz_.clear();
    for (std::size_t c = 0; c < m_; ++c) {
      if (!Traits::is_zero(rowp[c])) {
        rowp[c] /= piv;
        nz_.push_back(c);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p || Traits::is_zero(alpha_[i])) {
        continue;
      }
      const T f = alpha_[i];
      T* rowi = &binv_[i * m_];
      for (std::size_t c : nz_) {
        rowi[c] -= f * rowp[c];
      }
    }
    for (std::size_t c : nz_) {
      y_[c] += d_enter * rowp[c];
    }
    head_[p] = enter;
    position_[enter] = p;
  }

  /// Rebuilds the inverse from the basis columns (Gauss-Jordan with partial
  /// pivoting) and recomputes basic values and duals.
  void refactor() {
    pivots_since_refactor_ = 0;
    std::vector<T> mat(m_ * m_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = head_[i];
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        mat[entries_[p].row * m_ + i] = Traits::from_int(entries_[p].coef);
      }
    }
    std::vector<T> inv(m_ * m_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      inv[i * m_ + i] = T(1);
    }
    std::vector<std::size_t> nz;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < m_; ++r) {
        if (abs_value(mat[r * m_ + col]) > abs_value(mat[best * m_ + col])) {
          best = r;
        }
      }
      if (Traits::is_zero(mat[best * m_ + col])) {
        throw std::runtime_error("simplex: singular basis during refactorization");
      }
      if (best != col) {
        for (std::size_t c = 0; c < m_; ++c) {
          std::swap(mat[best * m_ + c], mat[col * m_ + c]);
          std::swap(inv[best * m_ + c], inv[col * m_ + c]);
        }
      }
      const T piv = mat[col * m_ + col];
      nz.clear();
      for (std::size_t c = 0; c < m_; ++c) {
        if (!Traits::is_zero(mat[col * m_ + c])) {
          mat[col * m_ + c] /= piv;
        }
        if (!Traits::is_zero(inv[col * m_ + c])) {
          inv[col * m_ + c] /= piv;
          nz.push_back(c);
        }
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) {
          continue;
        }
        const T f = mat[r * m_ + col];
        if (Traits::is_zero(f)) {
          continue;
        }
        for (std::size_t c = col; c < m_; ++c) {
          if (!Traits::is_zero(mat[col * m_ + c])) {
            mat[r * m_ + c] -= f * mat[col * m_ + c];
          }
        }
        for (std::size_t c : nz) {
          inv[r * m_ + c] -= f * inv[col * m_ + c];
        }
      }
    }
    // inv is the inverse of the matrix whose column i is basis column i, so
    // row i of inv belongs to basis position i.
    binv_ = std::move(inv);

    std::vector<T> rhs(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      rhs[r] = Traits::from_int(lp_.rows[r].rhs);
    }
    for (std::size_t j = 0; j < total_; ++j) {
      if (position_[j] != kNonbasic || Traits::is_zero(x_[j])) {
        continue;
      }
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        add_scaled(rhs[entries_[p].row], -entries_[p].coef, x_[j]);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      T v(0);
      for (std::size_t r = 0; r < m_; ++r) {
        const T& b = binv_[i * m_ + r];
        if (!Traits::is_zero(b) && !Traits::is_zero(rhs[r])) {
          v += b * rhs[r];
        }
      }
      x_[head_[i]] = v;
    }
    compute_duals();
  }

  void log_step(const char* kind, std::size_t enter, std::size_t leave, const T& theta) const {
    if (!opts_.pivot_log) {
      return;
    }
    *opts_.pivot_log << kind << " enter=" << enter;
    if (leave != kNonbasic) {
      *opts_.pivot_log << " leave=" << leave;
    }
    *opts_.pivot_log << " step=" << Traits::to_string(theta) << "\n";
  }

  SolveResult<T>& finish(SolveResult<T>& res) {
    res.primal.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(nv_));
    res.objective = T(0);
    for (std::size_t j = 0; j < nv_; ++j) {
      if (lp_.objective[j] != 0 && !Traits::is_zero(x_[j])) {
        res.objective += Traits::from_int(lp_.objective[j]) * x_[j];
      }
    }
    res.basis = head_;
    res.at_upper.clear();
    for (std::size_t j = 0; j < nv_; ++j) {
      if (position_[j] == kNonbasic && at_upper_[j]) {
        res.at_upper.push_back(j);
      }
    }
    return res;
  }

  const LpInstance& lp_;
  SolverOptions opts_;
  std::size_t m_ = 0;
  std::size_t nv_ = 0;
  std::size_t total_ = 0;
  std::size_t cap_ = 0;
  T tol_;
  T pivot_tol_;

  std::vector<std::size_t> col_start_;
  std::vector<ColEntry> entries_;
  std::vector<T> lower_, upper_, cost_, x_, y_, alpha_, binv_;
  std::vector<bool> has_upper_, at_upper_;
  std::vector<std::size_t> head_, position_, nz_;
  std::size_t pivots_since_refactor_ = 0;
};

template <class T>
SolveResult<T> solve(const LpInstance& lp, const SolverOptions& opts = {}) {
  SimplexSolver<T> solver(lp, opts);
  return solver.solve();
}

/// Equality residuals and bounds within tol; tol is ignored for exact T.
template <class T>
bool verify_feasible(const LpInstance& lp, const std::vector<T>& primal, double tol = 1e-7) {
  using Traits = ScalarTraits<T>;
  if (primal.size() != lp.num_vars) {
    return false;
  }
  const T t = Traits::exact ? T(0) : T(tol);
  for (const auto& row : lp.rows) {
    T lhs(0);
    for (const auto& e : row.entries) {
      lhs += Traits::from_int(e.coef) * primal[e.col];
    }
    if (abs_value(T(lhs - Traits::from_int(row.rhs))) > t) {
      return false;
    }
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (primal[j] < Traits::from_int(lp.lower[j]) - t) {
      return false;
    }
    if (lp.upper[j] && primal[j] > Traits::from_int(*lp.upper[j]) + t) {
      return false;
    }
  }
  return true;
}

/// Every coordinate within tol of 0 or 1 (exactly 0 or 1 for exact T).
template <class T>
bool verify_integral(const std::vector<T>& primal, double tol = 1e-6) {
  using Traits = ScalarTraits<T>;
  const T t = Traits::exact ? T(0) : T(tol);
  for (const auto& v : primal) {
    if (abs_value(v) > t && abs_value(T(v - T(1))) > t) {
      return false;
    }
  }
  return true;
}

}  // namespace flowsat
