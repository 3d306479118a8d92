#include "tropcert/lp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tropcert {

LinearConstraint normalize_constraint(IntVector normal, Rational rhs, bool equality) {
  BigInt g = 0;
  for (const auto& x : normal)
    if (sgn(x) != 0) g = sgn(g) == 0 ? BigInt(abs(x)) : gcd_of(g, x);
  if (sgn(g) == 0) throw Error(ErrorCode::InvalidArgument, "constraint with zero normal");
  for (auto& x : normal) x = div_exact(x, g);
  rhs /= g;
  if (equality) {
    auto first = std::find_if(normal.begin(), normal.end(), [](const BigInt& x) { return sgn(x) != 0; });
    if (sgn(*first) < 0) {
      for (auto& x : normal) x = -x;
      rhs = -rhs;
    }
  }
  return {std::move(normal), std::move(rhs)};
}

namespace {

IntVector integer_normal(const RationalVector& normal, Rational& rhs) {
  BigInt den = 1;
  for (const auto& q : normal) den = lcm_of(den, q.get_den());
  IntVector out;
  out.reserve(normal.size());
  for (const auto& q : normal) out.push_back(q.get_num() * (den / q.get_den()));
  rhs *= den;
  return out;
}

}  // namespace

void HPolyhedron::add_equality(IntVector normal, Rational rhs) {
  if (normal.size() != dim_) throw Error(ErrorCode::AmbientMismatch, "equality length mismatch");
  eqs_.push_back(normalize_constraint(std::move(normal), std::move(rhs), true));
}

void HPolyhedron::add_inequality(IntVector normal, Rational rhs) {
  if (normal.size() != dim_) throw Error(ErrorCode::AmbientMismatch, "inequality length mismatch");
  ineqs_.push_back(normalize_constraint(std::move(normal), std::move(rhs), false));
}

void HPolyhedron::add_equality(const RationalVector& normal, const Rational& rhs) {
  Rational r = rhs;
  IntVector n = integer_normal(normal, r);
  add_equality(std::move(n), std::move(r));
}

void HPolyhedron::add_inequality(const RationalVector& normal, const Rational& rhs) {
  Rational r = rhs;
  IntVector n = integer_normal(normal, r);
  add_inequality(std::move(n), std::move(r));
}

bool HPolyhedron::contains(const RationalVector& x) const {
  for (const auto& e : eqs_)
    if (dot(e.normal, x) != e.rhs) return false;
  for (const auto& c : ineqs_)
    if (dot(c.normal, x) > c.rhs) return false;
  return true;
}

bool HPolyhedron::contains_strictly(const RationalVector& x) const {
  for (const auto& e : eqs_)
    if (dot(e.normal, x) != e.rhs) return false;
  for (const auto& c : ineqs_)
    if (dot(c.normal, x) >= c.rhs) return false;
  return true;
}

HPolyhedron HPolyhedron::intersect(const HPolyhedron& other) const {
  if (other.dim_ != dim_) throw Error(ErrorCode::AmbientMismatch, "ambient dimension mismatch");
  HPolyhedron out = *this;
  out.eqs_.insert(out.eqs_.end(), other.eqs_.begin(), other.eqs_.end());
  out.ineqs_.insert(out.ineqs_.end(), other.ineqs_.begin(), other.ineqs_.end());
  return out;
}

std::string HPolyhedron::key() const {
  std::ostringstream os;
  auto put = [&os](const LinearConstraint& c) {
    for (const auto& x : c.normal) os << x.get_str() << ',';
    os << to_string(c.rhs) << ';';
  };
  os << dim_ << "|E:";
  for (const auto& e : eqs_) put(e);
  os << "|I:";
  for (const auto& c : ineqs_) put(c);
  return os.str();
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

template <class Int>
class Tableau {
 public:
  // rows: standard form rows (integer), rhs >= 0; basis gives an initial
  // identity column for every row.
  Tableau(std::vector<std::vector<Int>> rows, std::vector<size_t> basis, size_t ncols)
      : m_(std::move(rows)), basis_(std::move(basis)), ncols_(ncols), obj_(ncols + 1, Int(0)) {}

  std::vector<std::vector<Int>>& rows() { return m_; }
  std::vector<Int>& objective() { return obj_; }
  const std::vector<size_t>& basis() const { return basis_; }
  const Int& denom() const { return d_; }
  size_t rhs_col() const { return ncols_; }

  void pivot(size_t r, size_t c) {
    if (sgn(m_[r][c]) < 0) {
      for (auto& x : m_[r]) x = -x;
    }
    const Int p = m_[r][c];
    auto update = [&](std::vector<Int>& row) {
      const Int f = row[c];
      for (size_t j = 0; j <= ncols_; ++j) {
        if (sgn(f) == 0) {
          if (sgn(row[j]) != 0) row[j] = div_exact(row[j] * p, d_);
        } else {
          row[j] = div_exact(row[j] * p - f * m_[r][j], d_);
        }
      }
    };
    for (size_t i = 0; i < m_.size(); ++i)
      if (i != r) update(m_[i]);
    update(obj_);
    d_ = p;
    basis_[r] = c;
  }

  // Minimizes the objective row with Bland's rule over allowed columns.
  // Returns false when unbounded.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      size_t enter = ncols_;
      for (size_t j = 0; j < ncols_; ++j) {
        if (allowed[j] && sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == ncols_) return true;
      size_t leave = m_.size();
      for (size_t i = 0; i < m_.size(); ++i) {
        if (sgn(m_[i][enter]) <= 0) continue;
        if (leave == m_.size()) {
          leave = i;
          continue;
        }
        // compare rhs_i / a_i with rhs_leave / a_leave
        Int lhs = m_[i][ncols_] * m_[leave][enter];
        Int rhs = m_[leave][ncols_] * m_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == m_.size()) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::vector<std::vector<Int>> m_;
  std::vector<size_t> basis_;
  size_t ncols_;
  std::vector<Int> obj_;
  Int d_ = 1;
};

RationalVector normalize_multipliers(RationalVector v) {
  BigInt den = 1;
  for (const auto& q : v) den = lcm_of(den, q.get_den());
  BigInt g = 0;
  for (auto& q : v) {
    q *= den;
    if (sgn(q) != 0) g = sgn(g) == 0 ? BigInt(abs(q.get_num())) : gcd_of(g, q.get_num());
  }
  if (sgn(g) != 0)
    for (auto& q : v) q /= g;
  return v;
}

template <class Int>
LPSolution solve_lp_impl(const LinearProgram& lp) {
  const size_t n = lp.num_vars;
  const size_t meq = lp.equalities.size();
  const size_t mle = lp.inequalities.size();
  const size_t m = meq + mle;

  // Columns: x+ (n), x- (n), slacks (mle), artificials (one per row that
  // needs one), rhs.
  std::vector<int> sign(m, 1);
  std::vector<BigInt> scale(m, 1);
  std::vector<IntVector> big_rows(m);
  std::vector<BigInt> big_rhs(m);
  for (size_t r = 0; r < m; ++r) {
    const LinearConstraint& c = r < meq ? lp.equalities[r] : lp.inequalities[r - meq];
    if (c.normal.size() != n) throw Error(ErrorCode::AmbientMismatch, "LP row length mismatch");
    scale[r] = c.rhs.get_den();
    big_rows[r] = c.normal;
    for (auto& x : big_rows[r]) x *= scale[r];
    big_rhs[r] = c.rhs.get_num();
    if (sgn(big_rhs[r]) < 0) sign[r] = -1;
  }
  std::vector<bool> needs_art(m);
  size_t nart = 0;
  for (size_t r = 0; r < m; ++r) {
    needs_art[r] = r < meq || sign[r] < 0;
    if (needs_art[r]) ++nart;
  }
  const size_t slack0 = 2 * n, art0 = 2 * n + mle, ncols = art0 + nart;

  std::vector<std::vector<Int>> rows(m, std::vector<Int>(ncols + 1, Int(0)));
  std::vector<size_t> basis(m), init_col(m);
  size_t a = 0;
  for (size_t r = 0; r < m; ++r) {
    const Int s = sign[r];
    for (size_t j = 0; j < n; ++j) {
      Int v = from_big<Int>(big_rows[r][j]) * s;
      rows[r][j] = v;
      rows[r][n + j] = -v;
    }
    if (r >= meq) rows[r][slack0 + (r - meq)] = s;
    rows[r][ncols] = from_big<Int>(big_rhs[r]) * s;
    if (needs_art[r]) {
      rows[r][art0 + a] = 1;
      init_col[r] = art0 + a;
      ++a;
    } else {
      init_col[r] = slack0 + (r - meq);
    }
    basis[r] = init_col[r];
  }

  Tableau<Int> tab(std::move(rows), basis, ncols);
  std::vector<bool> allowed(ncols, true);
  for (size_t j = art0; j < ncols; ++j) allowed[j] = false;

  // Phase 1: minimize the sum of artificials.
  auto& obj = tab.objective();
  for (size_t r = 0; r < m; ++r) {
    if (!needs_art[r]) continue;
    for (size_t j = 0; j <= ncols; ++j) obj[j] -= tab.rows()[r][j];
  }
  // Artificial columns: cost 1 minus their single unit entry.
  for (size_t j = art0; j < ncols; ++j) obj[j] = 0;
  tab.run(allowed);

  auto duals = [&](bool phase1) {
    // y_r = cost(init_col) - reduced_cost(init_col)
    std::vector<Rational> y(m);
    for (size_t r = 0; r < m; ++r) {
      Rational cost = (phase1 && needs_art[r]) ? 1 : 0;
      y[r] = cost - Rational(to_big(tab.objective()[init_col[r]]), to_big(tab.denom()));
    }
    // Multipliers on the original rows, sign flipped to the u convention.
    RationalVector eq(meq), ineq(mle);
    for (size_t r = 0; r < m; ++r) {
      Rational u = -y[r] * sign[r] * scale[r];
      if (r < meq)
        eq[r] = u;
      else
        ineq[r - meq] = u;
    }
    return std::pair{eq, ineq};
  };

  LPSolution sol;
  if (sgn(tab.objective()[ncols]) != 0) {
    sol.status = LPStatus::infeasible;
    auto [eq, ineq] = duals(true);
    RationalVector all = eq;
    all.insert(all.end(), ineq.begin(), ineq.end());
    all = normalize_multipliers(std::move(all));
    sol.eq_multipliers.assign(all.begin(), all.begin() + meq);
    sol.ineq_multipliers.assign(all.begin() + meq, all.end());
    return sol;
  }

  // Drive basic artificials out where possible.
  for (size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < art0) continue;
    for (size_t j = 0; j < art0; ++j) {
      if (sgn(tab.rows()[r][j]) != 0) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2: minimize -objective.
  std::vector<Int> cost(ncols, Int(0));
  bool has_objective = !lp.objective.empty();
  if (has_objective) {
    for (size_t j = 0; j < n; ++j) {
      Int c = from_big<Int>(lp.objective[j]);
      cost[j] = -c;
      cost[n + j] = c;
    }
  }
  auto& obj2 = tab.objective();
  for (size_t j = 0; j <= ncols; ++j) obj2[j] = j < ncols ? cost[j] * tab.denom() : Int(0);
  for (size_t r = 0; r < m; ++r) {
    const Int ck = cost[tab.basis()[r]];
    if (sgn(ck) == 0) continue;
    for (size_t j = 0; j <= ncols; ++j) obj2[j] -= ck * tab.rows()[r][j];
  }
  if (!tab.run(allowed)) {
    sol.status = LPStatus::unbounded;
    return sol;
  }

  sol.status = LPStatus::optimal;
  sol.x.assign(n, Rational(0));
  const BigInt d = to_big(tab.denom());
  for (size_t r = 0; r < m; ++r) {
    size_t b = tab.basis()[r];
    Rational v(to_big(tab.rows()[r][ncols]), d);
    v.canonicalize();
    if (b < n)
      sol.x[b] += v;
    else if (b < 2 * n)
      sol.x[b - n] -= v;
  }
  sol.value = Rational(to_big(tab.objective()[ncols]), d);
  sol.value.canonicalize();
  auto [eq, ineq] = duals(false);
  for (auto& q : eq) q.canonicalize();
  for (auto& q : ineq) q.canonicalize();
  sol.eq_multipliers = std::move(eq);
  sol.ineq_multipliers = std::move(ineq);
  return sol;
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, ArithmeticMode mode) {
  if (mode == ArithmeticMode::big) return solve_lp_impl<BigInt>(lp);
  return solve_lp_impl<Checked64>(lp);
}

LPOutcome lp_feasible(const HPolyhedron& poly, ArithmeticMode mode) {
  if (poly.ambient_dim() < 1) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
  LinearProgram lp;
  lp.num_vars = poly.ambient_dim();
  lp.equalities = poly.equalities();
  lp.inequalities = poly.inequalities();
  LPSolution sol = solve_lp(lp, mode);
  LPOutcome out;
  if (sol.status == LPStatus::infeasible) {
    out.status = LPOutcome::Status::infeasible;
    out.farkas_eq = std::move(sol.eq_multipliers);
    out.farkas_ineq = std::move(sol.ineq_multipliers);
  } else {
    out.status = LPOutcome::Status::feasible;
    out.witness = std::move(sol.x);
  }
  return out;
}

bool verify_outcome(const HPolyhedron& poly, const LPOutcome& outcome) {
  const size_t n = poly.ambient_dim();
  if (outcome.feasible()) return outcome.witness.size() == n && poly.contains(outcome.witness);
  const auto& eqs = poly.equalities();
  const auto& ineqs = poly.inequalities();
  if (outcome.farkas_eq.size() != eqs.size() || outcome.farkas_ineq.size() != ineqs.size()) return false;
  RationalVector combo(n, Rational(0));
  Rational rhs = 0;
  bool nonzero = false;
  auto add = [&](const LinearConstraint& c, const Rational& u) {
    if (sgn(u) == 0) return;
    nonzero = true;
    for (size_t j = 0; j < n; ++j) combo[j] += u * c.normal[j];
    rhs += u * c.rhs;
  };
  for (size_t i = 0; i < eqs.size(); ++i) add(eqs[i], outcome.farkas_eq[i]);
  for (size_t i = 0; i < ineqs.size(); ++i) {
    if (sgn(outcome.farkas_ineq[i]) < 0) return false;
    add(ineqs[i], outcome.farkas_ineq[i]);
  }
  if (!nonzero) return false;
  for (const auto& q : combo)
    if (sgn(q) != 0) return false;
  return sgn(rhs) < 0;
}

namespace {

struct InteriorAnalysis {
  std::vector<size_t> implicit;
  RationalVector point;
};

// Maximizes a common slack t (capped at 1) over the inequalities not yet
// known to be implicit. At t* = 0 the inequalities carrying positive dual
// weight are implicit equalities; they are promoted and the LP repeated.
InteriorAnalysis analyze_interior(const HPolyhedron& poly, ArithmeticMode mode) {
  const size_t n = poly.ambient_dim();
  const auto& ineqs = poly.inequalities();
  std::vector<bool> is_implicit(ineqs.size(), false);
  for (;;) {
    LinearProgram lp;
    lp.num_vars = n + 1;
    for (const auto& e : poly.equalities()) {
      IntVector a = e.normal;
      a.push_back(0);
      lp.equalities.push_back({std::move(a), e.rhs});
    }
    std::vector<size_t> slack_rows;
    for (size_t i = 0; i < ineqs.size(); ++i) {
      IntVector a = ineqs[i].normal;
      if (is_implicit[i]) {
        a.push_back(0);
        lp.equalities.push_back({std::move(a), ineqs[i].rhs});
      } else {
        a.push_back(1);
        slack_rows.push_back(i);
        lp.inequalities.push_back({std::move(a), ineqs[i].rhs});
      }
    }
    IntVector cap(n + 1, 0);
    cap[n] = 1;
    lp.inequalities.push_back({cap, Rational(1)});
    lp.objective = cap;
    LPSolution sol = solve_lp(lp, mode);
    if (sol.status == LPStatus::infeasible)
      throw Error(ErrorCode::InfeasiblePolyhedron, "polyhedron is empty");
    if (sgn(sol.value) > 0 || slack_rows.empty()) {
      InteriorAnalysis out;
      for (size_t i = 0; i < ineqs.size(); ++i)
        if (is_implicit[i]) out.implicit.push_back(i);
      out.point.assign(sol.x.begin(), sol.x.begin() + n);
      return out;
    }
    bool progress = false;
    for (size_t k = 0; k < slack_rows.size(); ++k) {
      if (sgn(sol.ineq_multipliers[k]) > 0) {
        is_implicit[slack_rows[k]] = true;
        progress = true;
      }
    }
    if (!progress) throw Error(ErrorCode::InvalidArgument, "degenerate interior LP made no progress");
  }
}

}  // namespace

std::vector<size_t> implicit_equalities(const HPolyhedron& poly, ArithmeticMode mode) {
  return analyze_interior(poly, mode).implicit;
}

RationalVector relative_interior_point(const HPolyhedron& poly, ArithmeticMode mode) {
  return analyze_interior(poly, mode).point;
}

int dimension(const HPolyhedron& poly, ArithmeticMode mode) {
  auto implicit = analyze_interior(poly, mode).implicit;
  std::vector<IntVector> rows;
  for (const auto& e : poly.equalities()) rows.push_back(e.normal);
  for (size_t i : implicit) rows.push_back(poly.inequalities()[i].normal);
  return static_cast<int>(poly.ambient_dim() - rank_of(std::move(rows)));
}

std::vector<LinearConstraint> canonical_equalities(std::vector<LinearConstraint> eqs, size_t dim) {
  // Work on augmented integer rows [normal * den | rhs * den].
  std::vector<IntVector> rows;
  for (auto& e : eqs) {
    IntVector r = e.normal;
    for (auto& x : r) x *= e.rhs.get_den();
    r.push_back(e.rhs.get_num());
    rows.push_back(std::move(r));
  }
  rows = canonical_row_basis(std::move(rows));
  std::vector<LinearConstraint> out;
  for (auto& r : rows) {
    Rational rhs(r.back());
    r.pop_back();
    if (is_zero_vector(r)) throw Error(ErrorCode::InfeasiblePolyhedron, "inconsistent equalities");
    r.resize(dim);
    out.push_back(normalize_constraint(std::move(r), std::move(rhs), true));
  }
  return out;
}

std::optional<LinearConstraint> reduce_inequality(const LinearConstraint& ineq,
                                                  const std::vector<LinearConstraint>& eqs) {
  RationalVector a(ineq.normal.begin(), ineq.normal.end());
  Rational b = ineq.rhs;
  for (const auto& e : eqs) {
    size_t p = 0;
    while (sgn(e.normal[p]) == 0) ++p;
    if (sgn(a[p]) == 0) continue;
    Rational f = a[p] / Rational(e.normal[p]);
    for (size_t j = 0; j < a.size(); ++j) a[j] -= f * e.normal[j];
    b -= f * e.rhs;
  }
  bool zero = std::all_of(a.begin(), a.end(), [](const Rational& q) { return sgn(q) == 0; });
  if (zero) return std::nullopt;
  HPolyhedron tmp(a.size());
  tmp.add_inequality(a, b);
  return tmp.inequalities()[0];
}

namespace {

bool constraint_less(const LinearConstraint& x, const LinearConstraint& y) {
  if (x.normal != y.normal) return x.normal < y.normal;
  return x.rhs < y.rhs;
}

}  // namespace

HPolyhedron canonical_form(const HPolyhedron& poly, ArithmeticMode mode) {
  const size_t n = poly.ambient_dim();
  auto analysis = analyze_interior(poly, mode);
  std::vector<LinearConstraint> eqs = poly.equalities();
  std::vector<bool> implicit(poly.inequalities().size(), false);
  for (size_t i : analysis.implicit) {
    implicit[i] = true;
    eqs.push_back(poly.inequalities()[i]);
  }
  eqs = canonical_equalities(std::move(eqs), n);

  std::vector<LinearConstraint> ineqs;
  for (size_t i = 0; i < poly.inequalities().size(); ++i) {
    if (implicit[i]) continue;
    auto r = reduce_inequality(poly.inequalities()[i], eqs);
    if (r) ineqs.push_back(std::move(*r));
  }
  std::sort(ineqs.begin(), ineqs.end(), constraint_less);
  // Same normal: only the tightest right-hand side can matter.
  std::vector<LinearConstraint> unique;
  for (auto& c : ineqs)
    if (unique.empty() || unique.back().normal != c.normal) unique.push_back(std::move(c));

  // Drop redundant inequalities one at a time.
  std::vector<bool> keep(unique.size(), true);
  for (size_t i = 0; i < unique.size(); ++i) {
    LinearProgram lp;
    lp.num_vars = n;
    lp.equalities = eqs;
    for (size_t j = 0; j < unique.size(); ++j)
      if (j != i && keep[j]) lp.inequalities.push_back(unique[j]);
    lp.objective = unique[i].normal;
    LPSolution sol = solve_lp(lp, mode);
    if (sol.status == LPStatus::optimal && sol.value <= unique[i].rhs) keep[i] = false;
  }
  HPolyhedron out(n);
  for (auto& e : eqs) out.add_equality(e.normal, e.rhs);
  for (size_t i = 0; i < unique.size(); ++i)
    if (keep[i]) out.add_inequality(unique[i].normal, unique[i].rhs);
  return out;
}

}  // namespace tropcert
