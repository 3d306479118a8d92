#include "tropcert/tropical.hpp"

#include <algorithm>
#include "json.hpp"
#include <optional>
#include <set>

namespace tropcert {

bool MassValuation::distinct() const {
  std::set<Rational> seen(v.begin(), v.end());
  return seen.size() == v.size();
}

void MassValuation::validate(size_t bodies, bool allow_repeated) const {
  if (v.size() != bodies)
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(bodies) + " mass valuations, got " +
                                                std::to_string(v.size()));
  if (!allow_repeated && !distinct())
    throw Error(ErrorCode::DistinctValuationsRequired, "mass valuations must be pairwise distinct");
}

Rational coefficient_valuation(const MassLinearCoefficient& c, const MassValuation& v) {
  if (c.is_zero()) throw Error(ErrorCode::ZeroCoefficient, "zero coefficient has no valuation");
  bool found = false;
  Rational best;
  auto consider = [&](const Rational& x) {
    if (!found || x < best) best = x;
    found = true;
  };
  if (sgn(c.constant_part()) != 0) consider(Rational(0));
  for (int k = 1; k <= c.bodies(); ++k)
    if (sgn(c.mass_part(k)) != 0) consider(v.v.at(static_cast<size_t>(k - 1)));
  return best;
}

TropicalPolynomial tropicalize(const LaurentPolynomial& p, const MassValuation& v) {
  TropicalPolynomial tp;
  tp.label = p.label();
  for (const auto& [e, c] : p.term_map()) tp.terms.push_back({coefficient_valuation(c, v), e});
  return tp;
}

MinEvaluation min_evaluate(const TropicalPolynomial& tp, const RationalVector& w) {
  MinEvaluation out;
  for (size_t a = 0; a < tp.terms.size(); ++a) {
    Rational val = tp.terms[a].valuation;
    const auto& e = tp.terms[a].exponents;
    for (size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) val += e[k] * w[k];
    if (out.argmin.empty() || val < out.value) {
      out.value = val;
      out.argmin.assign(1, a);
    } else if (val == out.value) {
      out.argmin.push_back(a);
    }
  }
  return out;
}

HPolyhedron argmin_region(const TropicalPolynomial& tp, const std::vector<size_t>& tied) {
  const size_t n = tp.num_vars();
  HPolyhedron poly(n);
  const auto& ta = tp.terms.at(tied.at(0));
  auto diff = [&](const TropicalTerm& x, IntVector& normal, Rational& rhs) {
    // (val_a + a.w) - (val_x + x.w) = (a - x).w - (val_x - val_a)
    normal.assign(n, 0);
    for (size_t k = 0; k < n; ++k) normal[k] = ta.exponents[k] - x.exponents[k];
    rhs = x.valuation - ta.valuation;
  };
  std::set<size_t> tied_set(tied.begin(), tied.end());
  for (size_t b : tied) {
    if (b == tied[0]) continue;
    IntVector normal;
    Rational rhs;
    diff(tp.terms.at(b), normal, rhs);
    if (is_zero_vector(normal)) {
      if (sgn(rhs) != 0) throw Error(ErrorCode::InvalidArgument, "terms with equal exponents cannot tie");
      continue;
    }
    poly.add_equality(std::move(normal), rhs);
  }
  for (size_t c = 0; c < tp.terms.size(); ++c) {
    if (tied_set.count(c)) continue;
    IntVector normal;
    Rational rhs;
    diff(tp.terms[c], normal, rhs);
    if (is_zero_vector(normal)) continue;  // exponents are unique within a polynomial
    poly.add_inequality(std::move(normal), rhs);
  }
  return poly;
}

Hypersurface build_hypersurface(const TropicalPolynomial& tp, ArithmeticMode mode) {
  if (tp.terms.size() < 2)
    throw Error(ErrorCode::EmptyHypersurface, "tropical polynomial '" + tp.label + "' has fewer than two terms");
  const int n = static_cast<int>(tp.num_vars());
  Hypersurface hs;
  hs.polynomial = tp;
  std::set<std::string> seen;
  for (size_t a = 0; a < tp.terms.size(); ++a) {
    for (size_t b = a + 1; b < tp.terms.size(); ++b) {
      HPolyhedron cand = argmin_region(tp, {a, b});
      auto cell = escalate(mode, [&](ArithmeticMode m) -> std::optional<HPolyhedron> {
        if (!lp_feasible(cand, m).feasible()) return std::nullopt;
        if (dimension(cand, m) != n - 1) return std::nullopt;
        return canonical_form(cand, m);
      });
      if (!cell) continue;
      if (!seen.insert(cell->key()).second) continue;
      RationalVector sample = escalate(mode, [&](ArithmeticMode m) { return relative_interior_point(*cell, m); });
      hs.provenance.push_back(min_evaluate(tp, sample).argmin);
      hs.cells.push_back(std::move(*cell));
    }
  }
  return hs;
}

std::string tropical_json(const std::vector<TropicalPolynomial>& system) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& tp : system) {
    nlohmann::ordered_json poly;
    poly["label"] = tp.label;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : tp.terms) {
      nlohmann::ordered_json j;
      j["exponents"] = t.exponents;
      j["valuation"] = to_string(t.valuation);
      terms.push_back(std::move(j));
    }
    poly["terms"] = std::move(terms);
    arr.push_back(std::move(poly));
  }
  return arr.dump();
}

}  // namespace tropcert
