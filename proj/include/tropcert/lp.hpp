#pragma once

// Exact linear programming over the rationals.
//
// The simplex tableau is kept fraction free: every entry is an integer
// subdeterminant of the starting tableau and the common denominator is the
// determinant of the current basis. With Checked64 this gives a bounded,
// overflow-checked 64-bit implementation; with BigInt it never overflows.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/arith.hpp"

namespace tropcert {

struct LinearConstraint {
  IntVector normal;
  Rational rhs;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

// {x : E x = e, C x <= c}. Normals are stored primitive; equalities have a
// positive first nonzero entry. Zero normals are rejected.
class HPolyhedron {
 public:
  HPolyhedron() = default;
  explicit HPolyhedron(size_t ambient_dim) : dim_(ambient_dim) {}

  void add_equality(IntVector normal, Rational rhs);
  void add_inequality(IntVector normal, Rational rhs);
  // Rational normals are scaled to integers first.
  void add_equality(const RationalVector& normal, const Rational& rhs);
  void add_inequality(const RationalVector& normal, const Rational& rhs);

  size_t ambient_dim() const { return dim_; }
  const std::vector<LinearConstraint>& equalities() const { return eqs_; }
  const std::vector<LinearConstraint>& inequalities() const { return ineqs_; }

  bool contains(const RationalVector& x) const;
  // Every equality holds and every inequality holds strictly.
  bool contains_strictly(const RationalVector& x) const;

  // Intersection; ambient dimensions must agree.
  HPolyhedron intersect(const HPolyhedron& other) const;

  // Deterministic text form, used as a deduplication key once canonical.
  std::string key() const;

  friend bool operator==(const HPolyhedron&, const HPolyhedron&) = default;

 private:
  size_t dim_ = 0;
  std::vector<LinearConstraint> eqs_;
  std::vector<LinearConstraint> ineqs_;
};

LinearConstraint normalize_constraint(IntVector normal, Rational rhs, bool equality);

// General LP: maximize objective . x over free variables x.
struct LinearProgram {
  size_t num_vars = 0;
  std::vector<LinearConstraint> equalities;    // a . x == b
  std::vector<LinearConstraint> inequalities;  // a . x <= b
  IntVector objective;                         // empty: feasibility only
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  RationalVector x;
  Rational value;
  // optimal: dual multipliers u (u >= 0 on inequalities) with
  //   sum u_i a_i = objective and sum u_i b_i = value.
  // infeasible: Farkas multipliers with sum u_i a_i = 0, sum u_i b_i < 0.
  RationalVector eq_multipliers;
  RationalVector ineq_multipliers;
};

LPSolution solve_lp(const LinearProgram& lp, ArithmeticMode mode);

struct LPOutcome {
  enum class Status { feasible, infeasible };
  Status status = Status::infeasible;
  RationalVector witness;
  RationalVector farkas_eq;    // free sign
  RationalVector farkas_ineq;  // nonnegative

  bool feasible() const { return status == Status::feasible; }
};

LPOutcome lp_feasible(const HPolyhedron& poly, ArithmeticMode mode = ArithmeticMode::checked64);

// Exact re-check of a witness or a Farkas certificate.
bool verify_outcome(const HPolyhedron& poly, const LPOutcome& outcome);

std::vector<size_t> implicit_equalities(const HPolyhedron& poly,
                                        ArithmeticMode mode = ArithmeticMode::checked64);
RationalVector relative_interior_point(const HPolyhedron& poly,
                                       ArithmeticMode mode = ArithmeticMode::checked64);
int dimension(const HPolyhedron& poly, ArithmeticMode mode = ArithmeticMode::checked64);

// Implicit equalities promoted, affine hull in reduced echelon form,
// redundant inequalities dropped, facets reduced modulo the affine hull,
// everything sorted. Two feasible polyhedra are equal as point sets iff
// their canonical forms are equal.
HPolyhedron canonical_form(const HPolyhedron& poly, ArithmeticMode mode = ArithmeticMode::checked64);

// Canonical affine hull {x : E x = e} given by rows (normal, rhs).
std::vector<LinearConstraint> canonical_equalities(std::vector<LinearConstraint> eqs, size_t dim);

// Reduces an inequality modulo canonical equalities and normalizes it.
// Returns nullopt when the normal vanishes on the affine hull.
std::optional<LinearConstraint> reduce_inequality(const LinearConstraint& ineq,
                                                  const std::vector<LinearConstraint>& canonical_eqs);

// Runs fn<Checked64>() and reruns fn<BigInt>() on overflow when mode is
// checked64. `escalations` counts reruns.
template <class Fn>
auto with_mode(ArithmeticMode mode, Fn&& fn, size_t* escalations = nullptr) {
  if (mode == ArithmeticMode::big) return fn.template operator()<BigInt>();
  try {
    return fn.template operator()<Checked64>();
  } catch (const ArithmeticOverflow&) {
    if (escalations) ++*escalations;
    return fn.template operator()<BigInt>();
  }
}

// Non-templated variant: calls fn(mode), and fn(big) after an overflow.
template <class Fn>
auto escalate(ArithmeticMode mode, Fn&& fn, size_t* escalations = nullptr) {
  if (mode == ArithmeticMode::big) return fn(ArithmeticMode::big);
  try {
    return fn(ArithmeticMode::checked64);
  } catch (const ArithmeticOverflow&) {
    if (escalations) ++*escalations;
    return fn(ArithmeticMode::big);
  }
}

}  // namespace tropcert
