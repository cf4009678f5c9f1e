#include "lharv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <utility>

namespace lharv {

namespace {

// --------------------------------------------------------------------------
// Shared exact presolve: normalization to <= / < / = rows, Gaussian
// elimination of the equalities, and interval propagation over the closed
// relaxation as a fast infeasibility proof.

struct IneqRow {
  std::map<std::size_t, Rat> terms;  // sum <= rhs, or < when strict
  Rat rhs{0};
  bool strict = false;
};

struct Substitution {
  std::size_t var = 0;
  std::map<std::size_t, Rat> expr;  // var = rhs - sum expr
  Rat rhs{0};
};

struct Presolved {
  bool infeasible = false;
  std::vector<IneqRow> rows;
  std::vector<Substitution> subs;
};

/// Applies the substitutions a row actually touches, lowest index first. A
/// substitution's expression never mentions earlier-eliminated variables, so
/// ascending order reproduces a full sequential pass.
void reduce_by_subs(std::map<std::size_t, Rat>& terms, Rat& rhs,
                    const std::vector<Substitution>& subs,
                    const std::map<std::size_t, std::size_t>& sub_of) {
  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      pending;
  for (const auto& [v, c] : terms) {
    auto it = sub_of.find(v);
    if (it != sub_of.end()) pending.push(it->second);
  }
  while (!pending.empty()) {
    const Substitution& s = subs[pending.top()];
    pending.pop();
    auto it = terms.find(s.var);
    if (it == terms.end()) continue;  // duplicate entry or cancelled term
    Rat c = it->second;
    terms.erase(it);
    rhs -= c * s.rhs;
    for (const auto& [v, k] : s.expr) {
      Rat delta = -(c * k);
      auto [slot, fresh] = terms.emplace(v, delta);
      if (!fresh) {
        slot->second += delta;
        if (slot->second == 0) {
          terms.erase(slot);
          continue;
        }
      }
      auto sit = sub_of.find(v);
      if (sit != sub_of.end()) pending.push(sit->second);
    }
  }
}

/// Opposite non-strict rows (sum <= b and -sum <= -b) are one equality; the
/// merge lets Gaussian elimination absorb fixed-rate flow pairs.
void merge_opposite_rows(std::vector<IneqRow>& rows,
                         std::vector<std::pair<std::map<std::size_t, Rat>, Rat>>& eqs) {
  using Key = std::vector<std::pair<std::size_t, Rat>>;
  std::map<Key, std::vector<std::size_t>> by_terms;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Key k(rows[i].terms.begin(), rows[i].terms.end());
    by_terms[k].push_back(i);
  }
  std::vector<bool> used(rows.size(), false);
  std::vector<IneqRow> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (used[i]) continue;
    if (!rows[i].strict) {
      Key neg;
      neg.reserve(rows[i].terms.size());
      for (const auto& [v, c] : rows[i].terms) neg.emplace_back(v, -c);
      auto it = by_terms.find(neg);
      if (it != by_terms.end()) {
        bool merged = false;
        for (std::size_t j : it->second) {
          if (j == i || used[j] || rows[j].strict) continue;
          if (rows[j].rhs != -rows[i].rhs) continue;
          used[i] = used[j] = true;
          eqs.emplace_back(rows[i].terms, rows[i].rhs);
          merged = true;
          break;
        }
        if (merged) continue;
      }
    }
    used[i] = true;
    kept.push_back(std::move(rows[i]));
  }
  rows = std::move(kept);
}

/// Interval propagation on the closed relaxation; a crossing pair of bounds
/// proves the system empty. Bounds are per original column.
bool bounds_infeasible(const std::vector<IneqRow>& rows) {
  struct Bound {
    std::optional<Rat> lo, hi;
  };
  std::map<std::size_t, Bound> bounds;
  const int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (const auto& r : rows) {
      for (const auto& [j, cj] : r.terms) {
        // Lower bound of the rest of the row's terms.
        Rat rest_lo{0};
        bool have = true;
        for (const auto& [i, ci] : r.terms) {
          if (i == j) continue;
          const Bound& bi = bounds[i];
          if (ci > 0) {
            if (!bi.lo) { have = false; break; }
            rest_lo += ci * *bi.lo;
          } else {
            if (!bi.hi) { have = false; break; }
            rest_lo += ci * *bi.hi;
          }
        }
        if (!have) continue;
        Rat limit = (r.rhs - rest_lo) / cj;
        Bound& bj = bounds[j];
        if (cj > 0) {
          if (!bj.hi || limit < *bj.hi) {
            bj.hi = limit;
            changed = true;
          }
        } else {
          if (!bj.lo || limit > *bj.lo) {
            bj.lo = limit;
            changed = true;
          }
        }
        if (bj.lo && bj.hi && *bj.lo > *bj.hi) return true;
      }
    }
    if (!changed) break;
  }
  return false;
}

Presolved presolve(const LinearSystem& sys) {
  Presolved out;
  std::vector<std::pair<std::map<std::size_t, Rat>, Rat>> eqs;
  for (const Row& row : sys.rows) {
    switch (row.rel) {
      case Relation::EQ:
        eqs.emplace_back(row.terms, row.rhs);
        break;
      case Relation::LE:
        out.rows.push_back({row.terms, row.rhs, false});
        break;
      case Relation::LT:
        out.rows.push_back({row.terms, row.rhs, true});
        break;
      case Relation::GE:
      case Relation::GT: {
        IneqRow r;
        for (const auto& [v, c] : row.terms) r.terms[v] = -c;
        r.rhs = -row.rhs;
        r.strict = row.rel == Relation::GT;
        out.rows.push_back(std::move(r));
        break;
      }
    }
  }
  merge_opposite_rows(out.rows, eqs);

  std::map<std::size_t, std::size_t> sub_of;
  for (auto& [terms, rhs] : eqs) {
    reduce_by_subs(terms, rhs, out.subs, sub_of);
    if (terms.empty()) {
      if (rhs != 0) {
        out.infeasible = true;
        return out;
      }
      continue;
    }
    auto pivot = terms.begin();
    Substitution s;
    s.var = pivot->first;
    Rat pc = pivot->second;
    s.rhs = rhs / pc;
    for (auto it = std::next(terms.begin()); it != terms.end(); ++it) {
      s.expr[it->first] = it->second / pc;
    }
    sub_of[s.var] = out.subs.size();
    out.subs.push_back(std::move(s));
  }

  std::vector<IneqRow> kept;
  for (auto& r : out.rows) {
    reduce_by_subs(r.terms, r.rhs, out.subs, sub_of);
    if (r.terms.empty()) {
      bool ok = r.strict ? Rat(0) < r.rhs : Rat(0) <= r.rhs;
      if (!ok) {
        out.infeasible = true;
        return out;
      }
      continue;
    }
    kept.push_back(std::move(r));
  }
  out.rows = std::move(kept);
  out.infeasible = bounds_infeasible(out.rows);
  return out;
}

// --------------------------------------------------------------------------
// Sparse two-phase simplex, minimization, Bland's rule. Works for exact
// rationals (tol = 0) and doubles (tol > 0). Rows carry only their nonzero
// coefficients; the encoded systems average a handful of terms per row.

template <typename T>
struct SimplexInput {
  std::size_t n_cols = 0;                      // structural columns, all >= 0
  std::vector<std::map<std::size_t, T>> rows;  // nonzero coefficients only
  std::vector<T> rhs;
  std::map<std::size_t, T> objective;          // minimize; nonzero entries
};

template <typename T>
struct SimplexOutput {
  enum class Status { Optimal, Infeasible, IterationLimit };
  Status status = Status::Infeasible;
  std::vector<T> x;
  T objective{};
  T infeas{};  // phase-1 residual left when Infeasible
};

template <typename T>
class Simplex {
 public:
  Simplex(SimplexInput<T> in, T tol, std::size_t max_iters)
      : in_(std::move(in)), tol_(std::move(tol)), max_iters_(max_iters) {}

  SimplexOutput<T> run() {
    SimplexOutput<T> out;
    build();
    if (!phase(true)) {
      out.status = iters_exceeded_ ? SimplexOutput<T>::Status::IterationLimit
                                   : SimplexOutput<T>::Status::Infeasible;
      out.infeas = phase1_residual_;
      return out;
    }
    drop_artificials();
    if (!phase(false)) {
      out.status = iters_exceeded_ ? SimplexOutput<T>::Status::IterationLimit
                                   : SimplexOutput<T>::Status::Infeasible;
      return out;
    }
    out.status = SimplexOutput<T>::Status::Optimal;
    out.x.assign(in_.n_cols, T{});
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < in_.n_cols) out.x[basis_[i]] = rhs_[i];
    }
    out.objective = T{};
    for (const auto& [j, c] : in_.objective) out.objective += c * out.x[j];
    return out;
  }

 private:
  void build() {
    m_ = in_.rows.size();
    n_slack_ = m_;
    // Artificials are allocated per row whose slack cannot start basic.
    std::vector<bool> needs_art(m_, false);
    n_art_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (in_.rhs[i] < T{}) {
        needs_art[i] = true;
        ++n_art_;
      }
    }
    total_ = in_.n_cols + n_slack_ + n_art_;
    rows_.assign(m_, {});
    rhs_.assign(m_, T{});
    basis_.assign(m_, 0);
    std::size_t art = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      T sign = needs_art[i] ? T{-1} : T{1};
      for (const auto& [j, c] : in_.rows[i]) rows_[i][j] = sign * c;
      rows_[i][in_.n_cols + i] = sign;  // slack
      rhs_[i] = sign * in_.rhs[i];
      if (needs_art[i]) {
        std::size_t col = in_.n_cols + n_slack_ + art;
        rows_[i][col] = T{1};
        basis_[i] = col;
        ++art;
      } else {
        basis_[i] = in_.n_cols + i;
      }
    }
  }

  bool is_artificial(std::size_t col) const {
    return col >= in_.n_cols + n_slack_;
  }

  T coeff(std::size_t i, std::size_t j) const {
    auto it = rows_[i].find(j);
    return it == rows_[i].end() ? T{} : it->second;
  }

  void pivot(std::size_t r, std::size_t c) {
    T p = rows_[r].at(c);
    if (p != T{1}) {
      for (auto& [j, a] : rows_[r]) a /= p;
      rhs_[r] /= p;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      auto it = rows_[i].find(c);
      if (it == rows_[i].end()) continue;
      T f = it->second;
      rows_[i].erase(it);
      for (const auto& [j, a] : rows_[r]) {
        if (j == c) continue;
        auto [slot, fresh] = rows_[i].emplace(j, -(f * a));
        if (!fresh) {
          slot->second -= f * a;
          if (slot->second == T{}) rows_[i].erase(slot);
        } else if (slot->second == T{}) {
          rows_[i].erase(slot);
        }
      }
      rhs_[i] -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  T basic_cost(std::size_t col, bool phase1) const {
    if (phase1) return is_artificial(col) ? T{1} : T{};
    auto it = in_.objective.find(col);
    return col < in_.n_cols && it != in_.objective.end() ? it->second : T{};
  }

  /// One simplex phase with Bland's rule. phase1 minimizes the artificial
  /// sum; otherwise in_.objective. Returns false on infeasibility (phase 1
  /// optimum positive) or iteration overrun.
  bool phase(bool phase1) {
    std::vector<T> red(total_);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > max_iters_) {
        iters_exceeded_ = true;
        return false;
      }
      // Reduced costs from scratch keeps the update simple and exact.
      std::fill(red.begin(), red.end(), T{});
      if (phase1) {
        for (std::size_t j = in_.n_cols + n_slack_; j < total_; ++j) {
          red[j] = T{1};
        }
      } else {
        for (const auto& [j, c] : in_.objective) red[j] = c;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        T cb = basic_cost(basis_[i], phase1);
        if (cb == T{}) continue;
        for (const auto& [j, a] : rows_[i]) red[j] -= cb * a;
      }
      std::size_t entering = total_;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!phase1 && is_artificial(j)) continue;
        if (red[j] < -tol_) {
          entering = j;
          break;  // Bland: lowest index
        }
      }
      if (entering == total_) {
        if (phase1) {
          T obj{};
          for (std::size_t i = 0; i < m_; ++i) {
            if (is_artificial(basis_[i])) obj += rhs_[i];
          }
          phase1_residual_ = obj;
          return obj <= tol_;
        }
        return true;
      }
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        T ci = coeff(i, entering);
        if (ci <= tol_) continue;
        if (leave == m_) {
          leave = i;
          continue;
        }
        T lhs = rhs_[i] * coeff(leave, entering);
        T rhs = rhs_[leave] * ci;
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) {
          leave = i;
        }
      }
      if (leave == m_) {
        // Unbounded descent: phase 1 cannot get here; phase 2 objectives are
        // capped by construction. Treat defensively as optimal-enough.
        return true;
      }
      pivot(leave, entering);
    }
  }

  /// After phase 1, force artificials out of the basis or drop their rows.
  void drop_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (!is_artificial(basis_[i])) {
        ++i;
        continue;
      }
      std::size_t c = total_;
      for (const auto& [j, a] : rows_[i]) {
        if (j >= in_.n_cols + n_slack_) continue;
        T mag = a < T{} ? -a : a;
        if (mag > tol_) {
          c = j;
          break;
        }
      }
      if (c != total_) {
        pivot(i, c);
        ++i;
        continue;
      }
      // Dependent row; remove it.
      rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
      rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      --m_;
    }
  }

  SimplexInput<T> in_;
  T tol_{};
  std::size_t max_iters_;
  std::size_t m_ = 0, n_slack_ = 0, n_art_ = 0, total_ = 0;
  std::vector<std::map<std::size_t, T>> rows_;
  std::vector<T> rhs_;
  std::vector<std::size_t> basis_;
  bool iters_exceeded_ = false;
  T phase1_residual_{};
};

// --------------------------------------------------------------------------

/// Compact column map: original column -> dense index among surviving vars.
struct ColumnMap {
  std::map<std::size_t, std::size_t> to_dense;
  std::vector<std::size_t> to_orig;

  explicit ColumnMap(const std::vector<IneqRow>& rows) {
    for (const auto& r : rows) {
      for (const auto& [v, c] : r.terms) {
        (void)c;
        if (to_dense.emplace(v, to_dense.size()).second) {
          to_orig.push_back(v);
        }
      }
    }
  }
};

std::vector<Rat> recover(const LinearSystem& sys, const Presolved& pre,
                         const std::map<std::size_t, Rat>& solved) {
  std::vector<Rat> full(sys.n_vars(), Rat(0));
  for (const auto& [v, val] : solved) full[v] = val;
  for (std::size_t i = pre.subs.size(); i-- > 0;) {
    const Substitution& s = pre.subs[i];
    Rat v = s.rhs;
    for (const auto& [var, c] : s.expr) v -= c * full[var];
    full[s.var] = v;
  }
  return full;
}

SolveOutcome solve_exact(const LinearSystem& sys, const Presolved& pre) {
  SolveOutcome out;
  if (pre.infeasible) return out;
  if (pre.rows.empty()) {
    out.kind = SolveOutcome::Kind::Feasible;
    out.values = recover(sys, pre, {});
    return out;
  }

  ColumnMap cm(pre.rows);
  const std::size_t v = cm.to_orig.size();
  bool any_strict = false;
  for (const auto& r : pre.rows) any_strict |= r.strict;

  // Free columns split into positive and negative parts; one shared strict
  // slack column at the end when needed.
  const std::size_t n = 2 * v + (any_strict ? 1 : 0);
  SimplexInput<Rat> in;
  in.n_cols = n;
  for (const auto& r : pre.rows) {
    std::map<std::size_t, Rat> row;
    for (const auto& [var, c] : r.terms) {
      std::size_t d = cm.to_dense.at(var);
      row[2 * d] = c;
      row[2 * d + 1] = -c;
    }
    if (r.strict) row[2 * v] = 1;
    in.rows.push_back(std::move(row));
    in.rhs.push_back(r.rhs);
  }
  if (any_strict) {
    in.rows.push_back({{2 * v, Rat(1)}});
    in.rhs.push_back(Rat(1));
    in.objective[2 * v] = Rat(-1);  // maximize the strict slack
  }

  const std::size_t iter_cap =
      1000 + 200 * (in.rows.size() + n) * (in.rows.size() + n);
  Simplex<Rat> sx(std::move(in), Rat(0), iter_cap);
  SimplexOutput<Rat> res = sx.run();
  if (res.status == SimplexOutput<Rat>::Status::IterationLimit) {
    throw InternalError("exact simplex exceeded its iteration cap");
  }
  if (res.status != SimplexOutput<Rat>::Status::Optimal) return out;
  if (any_strict && -res.objective <= 0) return out;  // slack stuck at zero

  std::map<std::size_t, Rat> solved;
  for (std::size_t d = 0; d < v; ++d) {
    solved[cm.to_orig[d]] = res.x[2 * d] - res.x[2 * d + 1];
  }
  out.kind = SolveOutcome::Kind::Feasible;
  out.values = recover(sys, pre, solved);
  return out;
}

constexpr double kFloatInfeasMargin = 1e-4;

bool solve_float(const LinearSystem& sys, const Presolved& pre, double eps,
                 SolveOutcome& out) {
  if (pre.infeasible || pre.rows.empty()) return false;
  ColumnMap cm(pre.rows);
  const std::size_t v = cm.to_orig.size();
  const std::size_t n = 2 * v;
  SimplexInput<double> in;
  in.n_cols = n;
  for (const auto& r : pre.rows) {
    std::map<std::size_t, double> row;
    for (const auto& [var, c] : r.terms) {
      std::size_t d = cm.to_dense.at(var);
      row[2 * d] = c.get_d();
      row[2 * d + 1] = -c.get_d();
    }
    in.rows.push_back(std::move(row));
    in.rhs.push_back(r.rhs.get_d() - (r.strict ? eps : 0.0));
  }

  double scale = 1.0;
  for (double b : in.rhs) scale = std::max(scale, std::abs(b));

  const std::size_t iter_cap = 2000 + 50 * (in.rows.size() + n);
  Simplex<double> sx(std::move(in), 1e-9, iter_cap);
  SimplexOutput<double> res = sx.run();
  if (res.status == SimplexOutput<double>::Status::Infeasible) {
    // A large leftover phase-1 residual certifies infeasibility on its own;
    // only marginal outcomes are re-decided exactly.
    if (res.infeas >= kFloatInfeasMargin * scale) {
      out.kind = SolveOutcome::Kind::Infeasible;
      out.from_float = true;
      return true;
    }
    return false;
  }
  if (res.status != SimplexOutput<double>::Status::Optimal) return false;

  std::map<std::size_t, Rat> solved;
  for (std::size_t d = 0; d < v; ++d) {
    solved[cm.to_orig[d]] = rat_of_double(res.x[2 * d] - res.x[2 * d + 1]);
  }
  out.kind = SolveOutcome::Kind::Feasible;
  out.values = recover(sys, pre, solved);
  out.from_float = true;
  return true;
}

}  // namespace

SolveOutcome solve_feasibility(const LinearSystem& sys,
                               const SolveOptions& opt) {
  Presolved pre = presolve(sys);
  if (opt.mode == SolveMode::Float) {
    SolveOutcome out;
    if (solve_float(sys, pre, opt.epsilon.get_d(), out)) return out;
    // Anything but a decisive float answer is re-decided exactly.
  }
  return solve_exact(sys, pre);
}

struct PreparedSystem::Impl {
  LinearSystem base;
  Presolved pre;
  std::map<std::size_t, std::size_t> sub_of;
};

PreparedSystem::PreparedSystem(const LinearSystem& base)
    : impl_(std::make_unique<Impl>()) {
  impl_->base = base;
  impl_->pre = presolve(base);
  for (std::size_t i = 0; i < impl_->pre.subs.size(); ++i) {
    impl_->sub_of[impl_->pre.subs[i].var] = i;
  }
}

PreparedSystem::~PreparedSystem() = default;
PreparedSystem::PreparedSystem(PreparedSystem&&) noexcept = default;
PreparedSystem& PreparedSystem::operator=(PreparedSystem&&) noexcept = default;

SolveOutcome PreparedSystem::solve(const std::vector<Row>& extras,
                                   const SolveOptions& opt) const {
  SolveOutcome infeasible;
  if (impl_->pre.infeasible) return infeasible;

  Presolved local = impl_->pre;
  std::map<std::size_t, std::size_t> sub_of = impl_->sub_of;

  for (const Row& row : extras) {
    std::map<std::size_t, Rat> terms;
    Rat rhs = row.rhs;
    bool strict = row.rel == Relation::LT || row.rel == Relation::GT;
    if (row.rel == Relation::GE || row.rel == Relation::GT) {
      for (const auto& [v, c] : row.terms) terms[v] = -c;
      rhs = -row.rhs;
    } else {
      terms = row.terms;
    }
    reduce_by_subs(terms, rhs, local.subs, sub_of);
    if (row.rel == Relation::EQ) {
      if (terms.empty()) {
        if (rhs != 0) return infeasible;
        continue;
      }
      auto pivot = terms.begin();
      Substitution s;
      s.var = pivot->first;
      Rat pc = pivot->second;
      s.rhs = rhs / pc;
      for (auto it = std::next(terms.begin()); it != terms.end(); ++it) {
        s.expr[it->first] = it->second / pc;
      }
      sub_of[s.var] = local.subs.size();
      std::map<std::size_t, std::size_t> just_new{{s.var, local.subs.size()}};
      local.subs.push_back(std::move(s));
      // The new substitution must also reach rows the shared pass reduced.
      std::vector<IneqRow> kept;
      kept.reserve(local.rows.size());
      for (IneqRow& r : local.rows) {
        reduce_by_subs(r.terms, r.rhs, local.subs, just_new);
        if (r.terms.empty()) {
          bool ok = r.strict ? Rat(0) < r.rhs : Rat(0) <= r.rhs;
          if (!ok) return infeasible;
          continue;
        }
        kept.push_back(std::move(r));
      }
      local.rows = std::move(kept);
    } else {
      if (terms.empty()) {
        bool ok = strict ? Rat(0) < rhs : Rat(0) <= rhs;
        if (!ok) return infeasible;
        continue;
      }
      local.rows.push_back({std::move(terms), std::move(rhs), strict});
    }
  }

  local.infeasible = bounds_infeasible(local.rows);
  if (opt.mode == SolveMode::Float) {
    SolveOutcome out;
    if (solve_float(impl_->base, local, opt.epsilon.get_d(), out)) return out;
  }
  return solve_exact(impl_->base, local);
}

Witness extract_witness(const LinearSystem& sys, const std::vector<Rat>& values,
                        const PathSet& ps, const SyncSkeleton& skel) {
  Witness w;
  for (std::size_t c = 0; c < sys.layout.size(); ++c) {
    const ComponentLayout& lay = sys.layout[c];
    WitnessComponent wc;
    wc.automaton = sys.component_names[c];
    for (std::size_t pos = 0; pos < lay.positions; ++pos) {
      WitnessStep st;
      st.location = ps.paths[c].locations[pos];
      st.dwell = values[lay.dwell(pos)];
      for (std::size_t j = 0; j < lay.locals.size(); ++j) {
        st.entry[lay.locals[j]] = values[lay.entry(pos, j)];
        st.exit[lay.locals[j]] = values[lay.exit(pos, j)];
      }
      wc.steps.push_back(std::move(st));
    }
    w.components.push_back(std::move(wc));
  }
  for (const auto& e : skel.events) {
    auto [c, pos] = *e.positions.begin();
    Rat t = 0;
    for (std::size_t q = 0; q <= pos; ++q) {
      t += w.components[c].steps[q].dwell;
    }
    w.sync_times.push_back(t);
  }
  return w;
}

std::vector<Rat> assignment_from_witness(const LinearSystem& sys,
                                         const Witness& w) {
  std::vector<Rat> values(sys.n_vars(), Rat(0));
  for (std::size_t c = 0; c < sys.layout.size(); ++c) {
    const ComponentLayout& lay = sys.layout[c];
    for (std::size_t pos = 0; pos < lay.positions; ++pos) {
      const WitnessStep& st = w.components[c].steps[pos];
      values[lay.dwell(pos)] = st.dwell;
      for (std::size_t j = 0; j < lay.locals.size(); ++j) {
        values[lay.entry(pos, j)] = st.entry.at(lay.locals[j]);
        values[lay.exit(pos, j)] = st.exit.at(lay.locals[j]);
      }
    }
  }
  return values;
}

}  // namespace lharv
