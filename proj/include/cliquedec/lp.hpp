#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquedec/rational.hpp"

namespace cliquedec {

class LpError : public std::runtime_error {
 public:
  explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

/// maximize c'x  subject to  A x = b, x >= 0, all entries exact rationals.
struct LpProblem {
  std::size_t rows = 0, cols = 0;
  std::vector<Rat> a;  // rows x cols, row-major
  std::vector<Rat> b;
  std::vector<Rat> c;
  std::vector<std::string> var_names, row_names;  // optional

  static LpProblem zeros(std::size_t m, std::size_t n) {
    LpProblem p;
    p.rows = m;
    p.cols = n;
    p.a.assign(m * n, Rat(0));
    p.b.assign(m, Rat(0));
    p.c.assign(n, Rat(0));
    return p;
  }
  Rat& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
  const Rat& at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }

  void validate() const {
    if (a.size() != rows * cols || b.size() != rows || c.size() != cols)
      throw LpError("inconsistent LP dimensions");
  }

  std::string var_name(std::size_t j) const {
    return j < var_names.size() ? var_names[j] : "x" + std::to_string(j);
  }
  std::string row_name(std::size_t i) const {
    return i < row_names.size() ? row_names[i] : "r" + std::to_string(i);
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rat value;
  std::vector<Rat> x;  // primal, length cols
  std::vector<Rat> y;  // dual, length rows; valid when optimal
  std::uint64_t pivots = 0;
};

namespace detail {

/// Dense two-phase simplex over rationals, Bland's anti-cycling rule.
/// Artificial columns stay in the tableau (never re-entering) so the final
/// reduced costs over them read off the dual directly.
class ExactSimplex {
 public:
  explicit ExactSimplex(const LpProblem& p)
      : m_(p.rows), n_(p.cols), stride_(p.cols + p.rows + 1), tab_(p.rows * (p.cols + p.rows + 1)),
        cost1_(stride_), cost2_(stride_), basis_(p.rows) {
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = p.b[i] < 0;
      Rat* row = &tab_[i * stride_];
      for (std::size_t j = 0; j < n_; ++j) row[j] = flip ? Rat(-p.a[i * n_ + j]) : p.a[i * n_ + j];
      row[n_ + i] = 1;  // artificial
      row[stride_ - 1] = flip ? Rat(-p.b[i]) : p.b[i];
      basis_[i] = n_ + i;
    }
    // cost rows hold z_j - c_j; rhs slot holds the objective value
    for (std::size_t j = 0; j < n_; ++j) {
      Rat s = 0;
      for (std::size_t i = 0; i < m_; ++i) s += tab_[i * stride_ + j];
      cost1_[j] = -s;
      cost2_[j] = -p.c[j];
    }
    Rat s = 0;
    for (std::size_t i = 0; i < m_; ++i) s += tab_[i * stride_ + stride_ - 1];
    cost1_[stride_ - 1] = -s;
  }

  LpSolution run(const LpProblem& p) {
    LpSolution sol;
    // Phase 1: drive the artificial infeasibility to zero.
    if (!iterate(cost1_)) throw LpError("phase-1 simplex reported unbounded");
    if (cost1_[stride_ - 1] != 0) {
      sol.status = LpStatus::infeasible;
      sol.pivots = pivots_;
      return sol;
    }
    expel_artificials();
    // Phase 2 on the real objective.
    if (!iterate(cost2_)) {
      sol.status = LpStatus::unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = LpStatus::optimal;
    sol.value = cost2_[stride_ - 1];
    sol.pivots = pivots_;
    sol.x.assign(n_, Rat(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = tab_[i * stride_ + stride_ - 1];
    sol.y.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      // reduced cost over artificial i equals y_i; undo any row negation
      Rat yi = cost2_[n_ + i];
      sol.y.push_back(p.b[i] < 0 ? Rat(-yi) : yi);
    }
    return sol;
  }

 private:
  // Bland: entering = lowest-index real column with negative reduced cost;
  // leaving = ratio minimum, ties to the lowest basis index. Artificial
  // columns are never candidates, so they cannot re-enter.
  bool iterate(std::vector<Rat>& cost) {
    for (;;) {
      std::size_t enter = stride_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == stride_) return true;  // optimal for this phase
      std::size_t leave = m_;
      Rat best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rat& piv = tab_[i * stride_ + enter];
        if (piv > 0) {
          Rat ratio = tab_[i * stride_ + stride_ - 1] / piv;
          if (leave == m_ || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m_) return false;  // unbounded direction
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    ++pivots_;
    Rat* prow = &tab_[r * stride_];
    const Rat piv = prow[col];
    for (std::size_t j = 0; j < stride_; ++j)
      if (prow[j] != 0) prow[j] /= piv;
    prow[col] = 1;
    auto eliminate = [&](Rat* row) {
      const Rat f = row[col];
      if (f == 0) return;
      for (std::size_t j = 0; j < stride_; ++j)
        if (prow[j] != 0) row[j] -= f * prow[j];
      row[col] = 0;
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(&tab_[i * stride_]);
    eliminate(cost1_.data());
    eliminate(cost2_.data());
    basis_[r] = col;
  }

  /// After phase 1, pivot basic zero-valued artificials out where a real
  /// column allows it; rows with no real support are redundant and keep
  /// their artificial basic at zero, which later pivots never disturb.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      const Rat* row = &tab_[i * stride_];
      for (std::size_t j = 0; j < n_; ++j) {
        if (row[j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::size_t m_, n_, stride_;
  std::vector<Rat> tab_;
  std::vector<Rat> cost1_, cost2_;
  std::vector<std::size_t> basis_;
  std::uint64_t pivots_ = 0;
};

}  // namespace detail

/// Exact solve with a fixed pivot rule: output is deterministic for a fixed
/// problem, and optimal solutions carry exact primal and dual certificates.
inline LpSolution solve(const LpProblem& p) {
  p.validate();
  if (p.rows == 0) {
    LpSolution sol;
    for (const Rat& cj : p.c)
      if (cj > 0) {
        sol.status = LpStatus::unbounded;
        return sol;
      }
    sol.status = LpStatus::optimal;
    sol.value = 0;
    sol.x.assign(p.cols, Rat(0));
    return sol;
  }
  return detail::ExactSimplex(p).run(p);
}

/// Independent optimality check: primal feasibility, dual feasibility, and
/// exact objective equality (strong duality).
inline bool verify_certificate(const LpProblem& p, const LpSolution& s) {
  p.validate();
  if (s.status != LpStatus::optimal) return false;
  if (s.x.size() != p.cols || s.y.size() != p.rows)
    throw LpError("certificate dimension mismatch");
  for (const Rat& xj : s.x)
    if (xj < 0) return false;
  Rat cx = 0;
  for (std::size_t j = 0; j < p.cols; ++j) cx += p.c[j] * s.x[j];
  if (cx != s.value) return false;
  Rat yb = 0;
  for (std::size_t i = 0; i < p.rows; ++i) {
    Rat ax = 0;
    for (std::size_t j = 0; j < p.cols; ++j) ax += p.at(i, j) * s.x[j];
    if (ax != p.b[i]) return false;
    yb += s.y[i] * p.b[i];
  }
  if (yb != s.value) return false;
  for (std::size_t j = 0; j < p.cols; ++j) {
    Rat ya = 0;
    for (std::size_t i = 0; i < p.rows; ++i) ya += s.y[i] * p.at(i, j);
    if (ya < p.c[j]) return false;
  }
  return true;
}

/// Line-oriented dump for cross-checking against external solvers.
inline std::string dump_lp(const LpProblem& p) {
  std::ostringstream os;
  os << "# cliquedec lp dump v1\n# maximize c'x subject to A x = b, x >= 0\n";
  os << "m " << p.rows << "\nn " << p.cols << "\nc";
  for (const Rat& v : p.c) os << ' ' << to_pq(v);
  os << '\n';
  for (std::size_t i = 0; i < p.rows; ++i) {
    os << "a";
    for (std::size_t j = 0; j < p.cols; ++j) os << ' ' << to_pq(p.at(i, j));
    os << " = " << to_pq(p.b[i]) << "  # " << p.row_name(i) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Floating-point presolve.

namespace detail {

/// Dense double simplex sharing the exact solver's layout. Dantzig rule with
/// tolerances and an iteration cap; any sign of trouble reports failure so a
/// caller can fall back to the exact path. The constraint side (A, b) is
/// fixed at construction: phase 1 runs once, and later objectives warm-start
/// from the current feasible basis.
class FloatSimplex {
 public:
  static constexpr double kTol = 1e-9;

  FloatSimplex(std::size_t rows, std::size_t cols, const double* a, const double* b)
      : m_(rows), n_(cols), stride_(cols + rows + 1), tab_(rows * (cols + rows + 1)),
        cost_(stride_), basis_(rows) {
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      double* row = &tab_[i * stride_];
      for (std::size_t j = 0; j < n_; ++j) row[j] = flip ? -a[i * n_ + j] : a[i * n_ + j];
      row[n_ + i] = 1.0;
      row[stride_ - 1] = flip ? -b[i] : b[i];
      basis_[i] = n_ + i;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < m_; ++i) s += tab_[i * stride_ + j];
      cost_[j] = -s;
    }
    feasible_ = iterate(4000 + 40 * (m_ + n_));
    if (feasible_) {
      double infeas = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n_) infeas += tab_[i * stride_ + stride_ - 1];
      feasible_ = infeas < 1e-7;
    }
    if (feasible_) {
      snapshot_tab_ = tab_;
      snapshot_basis_ = basis_;
    }
  }

  bool feasible() const { return feasible_; }

  void reset_to_snapshot() {
    tab_ = snapshot_tab_;
    basis_ = snapshot_basis_;
  }

  /// Maximizes c'x from the current feasible basis. nullopt means the float
  /// path gave up (cap, instability, unbounded); callers must treat that as
  /// undecided.
  std::optional<double> maximize(std::span<const double> c) {
    if (!feasible_) return std::nullopt;
    load_cost(c);
    if (!iterate(4000 + 40 * (m_ + n_))) {
      // one retry from the clean post-phase-1 snapshot
      reset_to_snapshot();
      load_cost(c);
      if (!iterate(20000 + 40 * (m_ + n_))) return std::nullopt;
    }
    double value = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) value += c[basis_[i]] * tab_[i * stride_ + stride_ - 1];
    return value;
  }

 private:
  void load_cost(std::span<const double> c) {
    for (std::size_t j = 0; j < stride_; ++j) {
      double zc = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        std::size_t bj = basis_[i];
        if (bj < n_ && c[bj] != 0.0) zc += c[bj] * tab_[i * stride_ + j];
      }
      cost_[j] = zc - (j < n_ ? c[j] : 0.0);
    }
  }

  bool iterate(std::size_t max_pivots) {
    for (std::size_t it = 0; it < max_pivots; ++it) {
      std::size_t enter = stride_;
      double most = -kTol;
      for (std::size_t j = 0; j < n_; ++j)
        if (cost_[j] < most) {
          most = cost_[j];
          enter = j;
        }
      if (enter == stride_) return true;
      std::size_t leave = m_;
      double best_ratio = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        double piv = tab_[i * stride_ + enter];
        if (piv > kTol) {
          double ratio = tab_[i * stride_ + stride_ - 1] / piv;
          if (leave == m_ || ratio < best_ratio - kTol ||
              (ratio < best_ratio + kTol && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    return false;
  }

  void pivot(std::size_t r, std::size_t col) {
    double* prow = &tab_[r * stride_];
    const double inv = 1.0 / prow[col];
    for (std::size_t j = 0; j < stride_; ++j) prow[j] *= inv;
    prow[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * stride_];
      const double f = row[col];
      if (std::fabs(f) < kTol) {
        row[col] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j < stride_; ++j) row[j] -= f * prow[j];
      row[col] = 0.0;
    }
    const double fc = cost_[col];
    if (std::fabs(fc) > 0) {
      for (std::size_t j = 0; j < stride_; ++j) cost_[j] -= fc * prow[j];
      cost_[col] = 0.0;
    }
    basis_[r] = col;
  }

  std::size_t m_, n_, stride_;
  std::vector<double> tab_, cost_;
  std::vector<std::size_t> basis_;
  std::vector<double> snapshot_tab_;
  std::vector<std::size_t> snapshot_basis_;
  bool feasible_ = false;
};

}  // namespace detail

enum class PresolveSide { below, above };

struct PresolveOutcome {
  bool decided = false;
  std::vector<PresolveSide> sides;  // one per threshold when decided
  double value = 0;                 // float optimum when available
};

/// Floating filter: decides only when the float optimum is farther than
/// `guard` from every threshold. Anything else, including any numeric
/// trouble, is undecided and must go to the exact solver.
inline PresolveOutcome solve_float_presolve(const LpProblem& p, std::span<const Rat> thresholds,
                                            const Rat& guard) {
  p.validate();
  if (guard <= 0) throw LpError("presolve guard must be positive");
  std::vector<double> a(p.a.size()), b(p.rows), c(p.cols);
  for (std::size_t i = 0; i < p.a.size(); ++i) a[i] = to_double(p.a[i]);
  for (std::size_t i = 0; i < p.rows; ++i) b[i] = to_double(p.b[i]);
  for (std::size_t j = 0; j < p.cols; ++j) c[j] = to_double(p.c[j]);

  PresolveOutcome out;
  detail::FloatSimplex fs(p.rows, p.cols, a.data(), b.data());
  auto value = fs.maximize(c);
  if (!value) return out;
  out.value = *value;
  const double g = to_double(guard);
  for (const Rat& t : thresholds) {
    double tv = to_double(t);
    if (*value > tv + g) out.sides.push_back(PresolveSide::above);
    else if (*value < tv - g) out.sides.push_back(PresolveSide::below);
    else return out;  // inside the guard band: undecided
  }
  out.decided = true;
  return out;
}

inline PresolveOutcome solve_float_presolve(const LpProblem& p, const Rat& threshold,
                                            const Rat& guard) {
  return solve_float_presolve(p, std::span<const Rat>(&threshold, 1), guard);
}

}  // namespace cliquedec
