#pragma once

// Polynomial systems for planar central configurations in the mutual
// distances r_ij: Albouy-Chenciner equations g_ij, their symmetrizations
// f_ij = g_ij + g_ji, and the 4-point Cayley-Menger determinants.
// Coefficients are linear forms q0 + q1 m1 + ... + qn mn in the masses.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tropcert/arith.hpp"

namespace tropcert {

using Exponents = std::vector<int>;

class VariableOrder {
 public:
  explicit VariableOrder(int n);

  int bodies() const { return n_; }
  size_t size() const { return static_cast<size_t>(n_ * (n_ - 1) / 2); }
  // Position of r_ij (1-based bodies, i != j, either order).
  size_t index(int i, int j) const;
  std::string name(size_t pos) const;  // e.g. "r12"

 private:
  int n_;
};

class MassLinearCoefficient {
 public:
  MassLinearCoefficient() = default;
  explicit MassLinearCoefficient(int n) : q_(n + 1, Rational(0)) {}
  static MassLinearCoefficient constant(int n, const Rational& c);
  static MassLinearCoefficient mass(int n, int k, const Rational& c);  // c * m_k

  int bodies() const { return static_cast<int>(q_.size()) - 1; }
  const Rational& constant_part() const { return q_[0]; }
  const Rational& mass_part(int k) const { return q_[k]; }
  const RationalVector& coefficients() const { return q_; }
  bool is_zero() const;

  MassLinearCoefficient& operator+=(const MassLinearCoefficient& o);
  friend bool operator==(const MassLinearCoefficient&, const MassLinearCoefficient&) = default;

 private:
  RationalVector q_;
};

struct LaurentTerm {
  MassLinearCoefficient coefficient;
  Exponents exponents;
};

class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(std::string label, int bodies, size_t nvars)
      : label_(std::move(label)), n_(bodies), nvars_(nvars) {}

  const std::string& label() const { return label_; }
  int bodies() const { return n_; }
  size_t num_vars() const { return nvars_; }
  size_t size() const { return terms_.size(); }
  // Terms in increasing exponent order.
  std::vector<LaurentTerm> terms() const;
  const std::map<Exponents, MassLinearCoefficient>& term_map() const { return terms_; }

  // Adds c * x^e, merging like terms and dropping exact zeros.
  void add_term(const Exponents& e, const MassLinearCoefficient& c);
  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  // Multiplication by the monomial x^e.
  LaurentPolynomial shifted(const Exponents& e) const;
  bool has_negative_exponents() const;
  void set_label(std::string label) { label_ = std::move(label); }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::string label_;
  int n_ = 0;
  size_t nvars_ = 0;
  std::map<Exponents, MassLinearCoefficient> terms_;
};

enum class EquationFamily { ac, sac, cm };
using FamilySelection = std::set<EquationFamily>;

FamilySelection parse_families(const std::string& csv);
const char* family_name(EquationFamily f) noexcept;  // "ac", "sac", "cm"
FamilySelection all_families();

// g_ij before clearing denominators (negative exponents allowed).
LaurentPolynomial build_g_laurent(int i, int j, const VariableOrder& order);
// Monomial prod_{k != i} r_ik^3 that clears g_ij.
Exponents g_clearing_monomial(int i, const VariableOrder& order);

LaurentPolynomial build_g(int i, int j, const VariableOrder& order);
LaurentPolynomial build_f(int i, int j, const VariableOrder& order);
LaurentPolynomial build_cm(const std::vector<int>& quad, const VariableOrder& order);

// AC over ordered pairs (lexicographic), then SAC over i < j, then CM over
// sorted quadruples, filtered by `selection`.
std::vector<LaurentPolynomial> build_system(int n, const FamilySelection& selection);

// Evaluates with every mass set to `masses[k-1]` at the point r.
Rational evaluate(const LaurentPolynomial& p, const RationalVector& masses, const RationalVector& r);

std::string to_text(const LaurentPolynomial& p, const VariableOrder& order);
std::string equations_json(const std::vector<LaurentPolynomial>& system);
std::string equations_text(const std::vector<LaurentPolynomial>& system, const VariableOrder& order);
// "sha256:" followed by the hex digest.
std::string sha256_digest(std::string_view data);
// SHA-256 of equations_json.
std::string system_digest(const std::vector<LaurentPolynomial>& system);

}  // namespace tropcert
