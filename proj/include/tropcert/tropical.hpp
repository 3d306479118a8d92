#pragma once

// Tropicalization under the min convention: a coefficient's valuation is the
// lowest exponent of its Puiseux expansion, and the tropical hypersurface of
// a polynomial is where min_a (val_a + e_a . w) is attained at least twice.

#include <string>
#include <vector>

#include "tropcert/equations.hpp"
#include "tropcert/lp.hpp"

namespace tropcert {

struct MassValuation {
  RationalVector v;

  // Throws DistinctValuationsRequired on repeated entries unless
  // allow_repeated is set.
  void validate(size_t bodies, bool allow_repeated) const;
  bool distinct() const;
};

struct TropicalTerm {
  Rational valuation;
  Exponents exponents;

  friend bool operator==(const TropicalTerm&, const TropicalTerm&) = default;
};

struct TropicalPolynomial {
  std::string label;
  std::vector<TropicalTerm> terms;

  size_t num_vars() const { return terms.empty() ? 0 : terms[0].exponents.size(); }
};

Rational coefficient_valuation(const MassLinearCoefficient& c, const MassValuation& v);
TropicalPolynomial tropicalize(const LaurentPolynomial& p, const MassValuation& v);

struct MinEvaluation {
  Rational value;
  std::vector<size_t> argmin;
};

MinEvaluation min_evaluate(const TropicalPolynomial& tp, const RationalVector& w);

// The region {w : term a attains the minimum together with every term in
// `tied`} as an H-polyhedron.
HPolyhedron argmin_region(const TropicalPolynomial& tp, const std::vector<size_t>& tied);

struct Hypersurface {
  TropicalPolynomial polynomial;
  std::vector<HPolyhedron> cells;               // canonical, dimension N-1
  std::vector<std::vector<size_t>> provenance;  // terms tied on each cell
};

// Pair enumeration: one candidate per term pair, kept when of dimension N-1.
Hypersurface build_hypersurface(const TropicalPolynomial& tp, ArithmeticMode mode = ArithmeticMode::checked64);

std::string tropical_json(const std::vector<TropicalPolynomial>& system);

}  // namespace tropcert
