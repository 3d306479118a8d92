#include <map>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace tropcert;

namespace {

// Minimal symbolic algebra kept separate from the library: a polynomial is a
// map from exponent vectors to coefficient vectors (constant, m_1..m_n).
using Coeffs = std::vector<Rational>;
using Poly = std::map<Exponents, Coeffs>;

struct Expansion {
  Poly terms;
  size_t raw_products = 0;  // summands before like terms are merged
};

Poly monomial(size_t nvars, int n, std::vector<std::pair<size_t, int>> powers, Rational c) {
  Exponents e(nvars, 0);
  for (auto [v, p] : powers) e[v] += p;
  Coeffs q(n + 1, Rational(0));
  q[0] = c;
  return {{e, q}};
}

Poly add(Poly a, const Poly& b) {
  for (const auto& [e, q] : b) {
    auto& t = a[e];
    if (t.empty()) t.assign(q.size(), Rational(0));
    for (size_t k = 0; k < q.size(); ++k) t[k] += q[k];
  }
  return a;
}

// Multiply two polynomials whose second factor has only constant coefficients.
Poly mul(const Poly& a, const Poly& b, size_t* products = nullptr) {
  Poly out;
  for (const auto& [ea, qa] : a) {
    for (const auto& [eb, qb] : b) {
      Exponents e = ea;
      for (size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
      Coeffs q(qa.size());
      for (size_t k = 0; k < qa.size(); ++k) q[k] = qa[k] * qb[0];
      out = add(out, Poly{{e, q}});
      if (products) ++*products;
    }
  }
  return out;
}

Poly times_mass(Poly p, int k) {
  for (auto& [e, q] : p) {
    q[k] = q[0];
    q[0] = 0;
  }
  return p;
}

Poly drop_zeros(Poly p) {
  for (auto it = p.begin(); it != p.end();) {
    bool zero = std::all_of(it->second.begin(), it->second.end(), [](const Rational& x) { return sgn(x) == 0; });
    it = zero ? p.erase(it) : std::next(it);
  }
  return p;
}

// g_{i,j} = sum_{k != i} m_k (r_ik^-3 - 1)(r_jk^2 - r_ik^2 - r_ij^2), with r_jj = 0.
Expansion expand_g(int n, int i, int j) {
  VariableOrder order(n);
  const size_t N = order.size();
  auto var = [&](int a, int b) { return a < b ? order.index(a, b) : order.index(b, a); };
  Expansion ex;
  for (int k = 1; k <= n; ++k) {
    if (k == i) continue;
    Poly s = add(monomial(N, n, {{var(i, k), -3}}, 1), monomial(N, n, {}, -1));
    Poly d = add(monomial(N, n, {{var(i, k), 2}}, -1), monomial(N, n, {{var(i, j), 2}}, -1));
    if (k != j) d = add(d, monomial(N, n, {{var(j, k), 2}}, 1));
    ex.terms = add(ex.terms, times_mass(mul(s, d, &ex.raw_products), k));
  }
  ex.terms = drop_zeros(ex.terms);
  return ex;
}

Poly shift(const Poly& p, const Exponents& by) {
  Poly out;
  for (const auto& [e, q] : p) {
    Exponents f = e;
    for (size_t v = 0; v < f.size(); ++v) f[v] += by[v];
    out[f] = q;
  }
  return out;
}

Poly as_poly(const LaurentPolynomial& p) {
  Poly out;
  for (const auto& [e, c] : p.term_map()) out[e] = c.coefficients();
  return out;
}

// Evaluate a polynomial in even powers of the distances from squared distances.
Rational evaluate_squared(const LaurentPolynomial& p, const RationalVector& sq) {
  Rational total = 0;
  for (const auto& [e, c] : p.term_map()) {
    Rational mono = c.constant_part();
    for (size_t v = 0; v < e.size(); ++v) {
      REQUIRE(e[v] % 2 == 0);
      for (int t = 0; t < e[v] / 2; ++t) mono *= sq[v];
    }
    total += mono;
  }
  return total;
}

Rational numeric_determinant(std::vector<RationalVector> m) {
  const size_t n = m.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

using Point3 = std::array<Rational, 3>;

Rational squared_distance(const Point3& a, const Point3& b) {
  Rational s = 0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Squared distances of four points placed as bodies 1..4 of an n=4 system.
RationalVector squared_distances(const std::array<Point3, 4>& pts) {
  VariableOrder order(4);
  RationalVector sq(order.size());
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b) sq[order.index(a, b)] = squared_distance(pts[a - 1], pts[b - 1]);
  return sq;
}

Rational bordered_determinant(const RationalVector& sq) {
  VariableOrder order(4);
  std::vector<RationalVector> m(5, RationalVector(5, Rational(1)));
  m[0][0] = 0;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      m[a][b] = a == b ? Rational(0) : sq[order.index(std::min(a, b), std::max(a, b))];
  return numeric_determinant(m);
}

Rational random_rational(std::mt19937_64& rng) {
  Rational q(std::uniform_int_distribution<int>(-20, 20)(rng), std::uniform_int_distribution<int>(1, 6)(rng));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_SUITE("nbody-equations") {

TEST_CASE("variable order is lexicographic") {
  VariableOrder order(5);
  CHECK(order.size() == 10);
  CHECK(order.index(1, 2) == 0);
  CHECK(order.index(1, 5) == 3);
  CHECK(order.index(2, 3) == 4);
  CHECK(order.index(4, 5) == 9);
  CHECK(order.name(0) == "r12");
  CHECK(order.name(9) == "r45");
}

TEST_CASE("g_12 for three bodies matches an independent expansion") {
  VariableOrder order(3);
  const auto ex = expand_g(3, 1, 2);
  CHECK(ex.raw_products == 8);
  CHECK(as_poly(build_g_laurent(1, 2, order)) == ex.terms);

  const auto g = build_g(1, 2, order);
  CHECK(g.size() == 7);
  CHECK(g_clearing_monomial(1, order) == Exponents{3, 3, 0});
  CHECK(as_poly(g) == shift(ex.terms, {3, 3, 0}));

  const auto& terms = g.term_map();
  REQUIRE(terms.count({2, 3, 0}) == 1);
  CHECK(terms.at({2, 3, 0}) == MassLinearCoefficient::mass(3, 2, -2));
  REQUIRE(terms.count({5, 3, 0}) == 1);
  auto expected = MassLinearCoefficient::mass(3, 2, 2);
  expected += MassLinearCoefficient::mass(3, 3, 1);
  CHECK(terms.at({5, 3, 0}) == expected);
}

TEST_CASE("every g matches the expansion oracle for four and five bodies") {
  for (int n : {4, 5}) {
    VariableOrder order(n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        CAPTURE(i);
        CAPTURE(j);
        CHECK(as_poly(build_g_laurent(i, j, order)) == expand_g(n, i, j).terms);
      }
  }
}

TEST_CASE("clearing multiplies by a single monomial") {
  VariableOrder order(5);
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j) {
      if (i == j) continue;
      const auto laurent = build_g_laurent(i, j, order);
      const auto cleared = build_g(i, j, order);
      CHECK(cleared.size() == laurent.size());
      CHECK_FALSE(cleared.has_negative_exponents());
      CHECK(laurent.shifted(g_clearing_monomial(i, order)) == cleared);
    }
}

TEST_CASE("g evaluates like its defining sum") {
  std::mt19937_64 rng(5);
  const int n = 4;
  VariableOrder order(n);
  for (int trial = 0; trial < 10; ++trial) {
    RationalVector masses(n), r(order.size());
    for (auto& m : masses) m = random_rational(rng);
    for (auto& x : r) {
      do x = random_rational(rng);
      while (sgn(x) == 0);
    }
    auto dist = [&](int a, int b) -> Rational {
      if (a == b) return 0;
      return r[order.index(std::min(a, b), std::max(a, b))];
    };
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        Rational direct = 0;
        for (int k = 1; k <= n; ++k) {
          if (k == i) continue;
          Rational d = dist(i, k);
          Rational s = 1 / (d * d * d) - 1;
          direct += masses[k - 1] * s * (dist(j, k) * dist(j, k) - d * d - dist(i, j) * dist(i, j));
        }
        CHECK(evaluate(build_g_laurent(i, j, order), masses, r) == direct);
      }
  }
}

TEST_CASE("g vanishes when all distances are one") {
  VariableOrder order(5);
  RationalVector masses{Rational(2), Rational(3, 7), Rational(5), Rational(-1), Rational(11, 3)};
  RationalVector ones(order.size(), Rational(1));
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      if (i != j) CHECK(sgn(evaluate(build_g(i, j, order), masses, ones)) == 0);
}

TEST_CASE("f is the merged sum of the cleared g polynomials") {
  for (int n : {3, 4, 5}) {
    VariableOrder order(n);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const auto gi = g_clearing_monomial(i, order);
        const auto gj = g_clearing_monomial(j, order);
        Exponents lcm(order.size()), ci(order.size()), cj(order.size());
        for (size_t v = 0; v < lcm.size(); ++v) {
          lcm[v] = std::max(gi[v], gj[v]);
          ci[v] = lcm[v] - gi[v];
          cj[v] = lcm[v] - gj[v];
        }
        Poly expected = drop_zeros(
            add(shift(as_poly(build_g(i, j, order)), ci), shift(as_poly(build_g(j, i, order)), cj)));
        const auto f = build_f(i, j, order);
        CHECK(as_poly(f) == expected);
        CHECK_FALSE(f.has_negative_exponents());
      }
  }
}

TEST_CASE("f is symmetric under swapping its two bodies") {
  const int n = 5;
  VariableOrder order(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto swap_body = [&](int b) { return b == i ? j : b == j ? i : b; };
      const auto f = build_f(i, j, order);
      Poly relabeled;
      for (const auto& [e, c] : f.term_map()) {
        Exponents e2(e.size());
        for (int a = 1; a <= n; ++a)
          for (int b = a + 1; b <= n; ++b) {
            int x = swap_body(a), y = swap_body(b);
            e2[order.index(std::min(x, y), std::max(x, y))] = e[order.index(a, b)];
          }
        Coeffs q = c.coefficients();
        std::swap(q[i], q[j]);
        relabeled[e2] = q;
      }
      CHECK(relabeled == as_poly(f));
    }
}

TEST_CASE("coefficient shapes per family") {
  const auto system = build_system(5, all_families());
  for (const auto& p : system) {
    const bool cm = p.label().rfind("CM", 0) == 0;
    for (const auto& [e, c] : p.term_map()) {
      CHECK_FALSE(c.is_zero());
      if (cm) {
        for (int k = 1; k <= 5; ++k) CHECK(sgn(c.mass_part(k)) == 0);
      } else {
        CHECK(sgn(c.constant_part()) == 0);
      }
      for (int x : e) CHECK(x >= 0);
    }
  }
}

TEST_CASE("Cayley-Menger vanishes on the unit square") {
  VariableOrder order(4);
  RationalVector sq(order.size());
  sq[order.index(1, 2)] = 1;
  sq[order.index(2, 3)] = 1;
  sq[order.index(3, 4)] = 1;
  sq[order.index(1, 4)] = 1;
  sq[order.index(1, 3)] = 2;
  sq[order.index(2, 4)] = 2;
  CHECK(sgn(evaluate_squared(build_cm({1, 2, 3, 4}, order), sq)) == 0);
}

TEST_CASE("Cayley-Menger of the regular unit tetrahedron has magnitude 4") {
  VariableOrder order(4);
  RationalVector sq(order.size(), Rational(1));
  const auto cm = build_cm({1, 2, 3, 4}, order);
  CHECK(abs(evaluate_squared(cm, sq)) == 4);
  CHECK(abs(bordered_determinant(sq)) == 4);
}

TEST_CASE("Cayley-Menger on random coplanar and spatial points") {
  std::mt19937_64 rng(8);
  VariableOrder order(4);
  const auto cm = build_cm({1, 2, 3, 4}, order);
  for (int trial = 0; trial < 50; ++trial) {
    const Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    std::array<Point3, 4> plane, space;
    for (auto& p : plane) {
      p[0] = random_rational(rng);
      p[1] = random_rational(rng);
      p[2] = a * p[0] + b * p[1] + c;
    }
    for (auto& p : space)
      for (auto& x : p) x = random_rational(rng);
    CHECK(sgn(evaluate_squared(cm, squared_distances(plane))) == 0);
    const auto sq = squared_distances(space);
    CHECK(evaluate_squared(cm, sq) == bordered_determinant(sq));
  }
}

TEST_CASE("system sizes and order") {
  CHECK(build_system(5, all_families()).size() == 35);
  CHECK(build_system(4, all_families()).size() == 19);
  CHECK(build_system(3, {EquationFamily::cm}).empty());
  CHECK(build_system(5, {EquationFamily::ac}).size() == 20);
  CHECK(build_system(5, {EquationFamily::sac}).size() == 10);
  CHECK(build_system(5, {EquationFamily::cm}).size() == 5);

  const auto s = build_system(4, all_families());
  CHECK(s.front().label() == "g_{12}");
  CHECK(s[1].label() == "g_{13}");
  CHECK(s[3].label() == "g_{21}");
  CHECK(s[12].label() == "f_{12}");
  CHECK(s.back().label() == "CM_{1234}");
}

TEST_CASE("equation errors") {
  VariableOrder order(4);
  CHECK_THROWS_AS(build_system(2, all_families()), Error);
  try {
    build_g(2, 2, order);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidIndexPair);
  }
  try {
    build_f(3, 2, order);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidIndexPair);
  }
  try {
    build_cm({1, 2, 2, 3}, order);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidQuadruple);
  }
  try {
    build_system(2, all_families());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedBodyCount);
  }
  CHECK_THROWS_AS(parse_families("ac,xyz"), Error);
  CHECK(parse_families("cm,ac") == FamilySelection{EquationFamily::ac, EquationFamily::cm});
}

TEST_CASE("equation dumps and digest are stable") {
  const auto s = build_system(4, all_families());
  CHECK(system_digest(s) == system_digest(build_system(4, all_families())));
  CHECK(system_digest(s) != system_digest(build_system(4, {EquationFamily::ac})));
  CHECK(system_digest(s).rfind("sha256:", 0) == 0);
  CHECK(sha256_digest("abc") == "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto text = equations_text(build_system(3, {EquationFamily::ac}), VariableOrder(3));
  CHECK(text.find("g_{12} = ") == 0);
}

}  // TEST_SUITE
