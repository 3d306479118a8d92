#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tropcert::testing {

namespace {

// Scale so the first nonzero coefficient has absolute value one.
void normalize_row(OracleRow& r) {
  for (const auto& x : r.a) {
    if (sgn(x) != 0) {
      Rational s = abs(x);
      for (auto& y : r.a) y /= s;
      r.b /= s;
      return;
    }
  }
}

std::string row_key(const OracleRow& r) {
  std::ostringstream os;
  for (const auto& x : r.a) os << x.get_str() << ',';
  os << '|' << r.b.get_str() << '|' << r.strict;
  return os.str();
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

IntVector random_int_vector(std::mt19937_64& rng, size_t dim, int coeff) {
  IntVector v(dim);
  do {
    for (auto& x : v) x = uniform(rng, -coeff, coeff);
  } while (is_zero_vector(v));
  return v;
}

std::string complex_digest(const Complex& c) { return sha256_digest(complex_json(c)); }

std::vector<std::string> cell_keys(const Hypersurface& h) {
  std::vector<std::string> keys;
  for (const auto& c : h.cells) keys.push_back(c.key());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

bool fm_feasible(std::vector<OracleRow> rows, size_t dim) {
  for (size_t k = 0; k < dim; ++k) {
    std::vector<OracleRow> pos, neg, next;
    for (auto& r : rows) {
      int s = sgn(r.a[k]);
      if (s > 0)
        pos.push_back(r);
      else if (s < 0)
        neg.push_back(r);
      else
        next.push_back(r);
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        OracleRow c;
        const Rational wp = -q.a[k], wq = p.a[k];
        c.a.resize(dim);
        for (size_t j = 0; j < dim; ++j) c.a[j] = wp * p.a[j] + wq * q.a[j];
        c.b = wp * p.b + wq * q.b;
        c.strict = p.strict || q.strict;
        next.push_back(std::move(c));
      }
    }
    std::set<std::string> seen;
    rows.clear();
    for (auto& r : next) {
      normalize_row(r);
      if (seen.insert(row_key(r)).second) rows.push_back(std::move(r));
    }
  }
  for (const auto& r : rows) {
    if (sgn(r.b) < 0) return false;
    if (r.strict && sgn(r.b) == 0) return false;
  }
  return true;
}

std::vector<OracleRow> oracle_rows(const HPolyhedron& p) {
  std::vector<OracleRow> rows;
  auto add = [&](const IntVector& a, const Rational& b, bool negate) {
    OracleRow r;
    for (const auto& x : a) r.a.push_back(negate ? Rational(-x) : Rational(x));
    r.b = negate ? Rational(-b) : b;
    rows.push_back(std::move(r));
  };
  for (const auto& e : p.equalities()) {
    add(e.normal, e.rhs, false);
    add(e.normal, e.rhs, true);
  }
  for (const auto& c : p.inequalities()) add(c.normal, c.rhs, false);
  return rows;
}

std::vector<size_t> fm_implicit(const HPolyhedron& p) {
  std::vector<size_t> out;
  const size_t offset = 2 * p.equalities().size();
  for (size_t i = 0; i < p.inequalities().size(); ++i) {
    auto rows = oracle_rows(p);
    rows[offset + i].strict = true;
    if (!fm_feasible(rows, p.ambient_dim())) out.push_back(i);
  }
  return out;
}

HPolyhedron random_polyhedron(std::mt19937_64& rng, size_t dim, size_t rows, int coeff) {
  HPolyhedron p(dim);
  for (size_t i = 0; i < rows; ++i) {
    IntVector a = random_int_vector(rng, dim, coeff);
    Rational b = uniform(rng, -coeff, coeff);
    switch (uniform(rng, 0, 9)) {
      case 0:
        p.add_equality(a, b);
        break;
      case 1: {
        // A pair of opposite inequalities forces a hidden equality.
        IntVector m = a;
        for (auto& x : m) x = -x;
        p.add_inequality(a, b);
        p.add_inequality(m, -b);
        ++i;
        break;
      }
      default:
        p.add_inequality(a, b);
    }
  }
  return p;
}

HPolyhedron random_cone(std::mt19937_64& rng, size_t dim, size_t rows, int coeff) {
  HPolyhedron p(dim);
  for (size_t i = 0; i < rows; ++i) {
    IntVector a = random_int_vector(rng, dim, coeff);
    if (uniform(rng, 0, 11) == 0)
      p.add_equality(a, 0);
    else
      p.add_inequality(a, 0);
  }
  return p;
}

bool in_conic_hull(const std::vector<IntVector>& gens, const IntVector& v) {
  LinearProgram lp;
  lp.num_vars = gens.size();
  for (size_t j = 0; j < v.size(); ++j) {
    LinearConstraint row;
    for (const auto& g : gens) row.normal.push_back(g[j]);
    row.rhs = Rational(v[j]);
    lp.equalities.push_back(std::move(row));
  }
  for (size_t i = 0; i < gens.size(); ++i) {
    LinearConstraint row;
    row.normal.assign(gens.size(), 0);
    row.normal[i] = -1;
    row.rhs = 0;
    lp.inequalities.push_back(std::move(row));
  }
  if (gens.empty()) return is_zero_vector(v);
  return solve_lp(lp, ArithmeticMode::big).status == LPStatus::optimal;
}

std::vector<IntVector> brute_force_cone_generators(const HPolyhedron& cone) {
  const size_t d = cone.ambient_dim();
  std::vector<IntVector> all_rows, eq_rows, ineq_rows;
  for (const auto& e : cone.equalities()) eq_rows.push_back(e.normal);
  for (const auto& c : cone.inequalities()) ineq_rows.push_back(c.normal);
  all_rows = eq_rows;
  all_rows.insert(all_rows.end(), ineq_rows.begin(), ineq_rows.end());
  const auto lineality = nullspace_basis(all_rows, d);

  std::vector<IntVector> out;
  for (const auto& l : lineality) {
    out.push_back(l);
    IntVector m = l;
    for (auto& x : m) x = -x;
    out.push_back(std::move(m));
  }
  auto in_cone = [&](const IntVector& v) {
    for (const auto& e : eq_rows)
      if (sgn(dot(e, v)) != 0) return false;
    for (const auto& c : ineq_rows)
      if (sgn(dot(c, v)) > 0) return false;
    return true;
  };
  const size_t m = ineq_rows.size();
  for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
    std::vector<IntVector> rows = eq_rows;
    for (size_t i = 0; i < m; ++i)
      if (mask >> i & 1) rows.push_back(ineq_rows[i]);
    rows.insert(rows.end(), lineality.begin(), lineality.end());
    if (rank_of(rows) + 1 != d) continue;
    IntVector v = nullspace_basis(rows, d).at(0);
    for (int s = 0; s < 2; ++s) {
      if (in_cone(v)) out.push_back(v);
      for (auto& x : v) x = -x;
    }
  }
  return out;
}

TropicalPolynomial random_tropical(std::mt19937_64& rng, size_t nvars, size_t terms, int max_exp, int max_val,
                                   const std::string& label) {
  TropicalPolynomial tp;
  tp.label = label;
  std::set<Exponents> used;
  size_t guard = 0;
  while (tp.terms.size() < terms && guard++ < 1000) {
    Exponents e(nvars);
    for (auto& x : e) x = uniform(rng, -max_exp, max_exp);
    if (!used.insert(e).second) continue;
    Rational val(uniform(rng, -2 * max_val, 2 * max_val), 2);
    val.canonicalize();
    tp.terms.push_back({val, e});
  }
  return tp;
}

PropertyResult lp_vs_fourier_motzkin(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t dim = uniform(rng, 1, 4);
    auto p = random_polyhedron(rng, dim, uniform(rng, 1, 8), 5);
    const bool expected = fm_feasible(oracle_rows(p), dim);
    ++res.cases;
    for (auto mode : {ArithmeticMode::checked64, ArithmeticMode::big}) {
      auto out = lp_feasible(p, mode);
      if (out.feasible() != expected)
        res.fail("case " + std::to_string(k) + ": LP says " + (out.feasible() ? "feasible" : "infeasible"));
      else if (!verify_outcome(p, out))
        res.fail("case " + std::to_string(k) + ": certificate does not verify");
    }
  }
  return res;
}

PropertyResult implicit_vs_fourier_motzkin(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  while (res.cases < cases) {
    const size_t dim = uniform(rng, 1, 4);
    auto p = random_polyhedron(rng, dim, uniform(rng, 1, 7), 4);
    if (!fm_feasible(oracle_rows(p), dim)) continue;
    ++res.cases;
    auto expected = fm_implicit(p);
    auto got = implicit_equalities(p);
    std::sort(got.begin(), got.end());
    if (got != expected) {
      res.fail("case " + std::to_string(res.cases) + ": implicit equality sets differ");
      continue;
    }
    auto x = relative_interior_point(p);
    if (!p.contains(x)) res.fail("case " + std::to_string(res.cases) + ": interior point outside");
    for (size_t i = 0; i < p.inequalities().size(); ++i) {
      const auto& c = p.inequalities()[i];
      const bool tight = dot(c.normal, x) == c.rhs;
      const bool implicit = std::binary_search(expected.begin(), expected.end(), i);
      if (tight != implicit) res.fail("case " + std::to_string(res.cases) + ": interior point not relative");
    }
  }
  return res;
}

PropertyResult dd_double_inclusion(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t dim = uniform(rng, 1, 4);
    auto cone = random_cone(rng, dim, uniform(rng, 1, 7), 4);
    ++res.cases;
    const auto rays = recession_rays(cone).rays;
    if (recession_rays(cone, ArithmeticMode::big).rays != rays) {
      res.fail("case " + std::to_string(k) + ": modes disagree");
      continue;
    }
    const auto truth = brute_force_cone_generators(cone);
    for (const auto& r : rays) {
      if (!in_conic_hull(truth, r)) {
        res.fail("case " + std::to_string(k) + ": ray outside the cone");
        break;
      }
    }
    for (const auto& g : truth) {
      if (!in_conic_hull(rays, g)) {
        res.fail("case " + std::to_string(k) + ": cone generator not covered by the rays");
        break;
      }
    }
  }
  return res;
}

PropertyResult monomial_invariance(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t nvars = uniform(rng, 1, 4);
    auto tp = random_tropical(rng, nvars, uniform(rng, 2, 6), 2, 3, "p");
    auto shifted = tp;
    Exponents e(nvars);
    for (auto& x : e) x = uniform(rng, -3, 3);
    const Rational c(uniform(rng, -5, 5));
    for (auto& t : shifted.terms) {
      for (size_t j = 0; j < nvars; ++j) t.exponents[j] += e[j];
      t.valuation += c;
    }
    std::shuffle(shifted.terms.begin(), shifted.terms.end(), rng);
    ++res.cases;
    if (cell_keys(build_hypersurface(tp)) != cell_keys(build_hypersurface(shifted)))
      res.fail("case " + std::to_string(k) + ": cells differ after a monomial shift");
  }
  return res;
}

PropertyResult oracle_equivalence(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t nvars = uniform(rng, 1, 4);
    const size_t polys = uniform(rng, 1, 3);
    std::vector<TropicalPolynomial> system;
    std::vector<Hypersurface> hs;
    for (size_t i = 0; i < polys; ++i) {
      system.push_back(random_tropical(rng, nvars, uniform(rng, 2, 6), 2, 3, "p" + std::to_string(i)));
      hs.push_back(build_hypersurface(system.back()));
    }
    ++res.cases;
    const Complex engine = compute_prevariety(hs);
    const OracleSupport oracle = run_oracle(system);
    if (engine.cells.empty() != oracle.cells.empty())
      res.fail("case " + std::to_string(k) + ": emptiness differs");
    else if (!same_support(engine, oracle))
      res.fail("case " + std::to_string(k) + ": supports differ");
  }
  return res;
}

PropertyResult schedule_invariance(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t nvars = uniform(rng, 2, 4);
    std::vector<Hypersurface> hs;
    for (size_t i = 0; i < 3; ++i)
      hs.push_back(build_hypersurface(random_tropical(rng, nvars, uniform(rng, 3, 5), 2, 3, "p" + std::to_string(i))));
    std::vector<size_t> order{0, 1, 2};
    const std::string reference = complex_digest(compute_prevariety(hs, order));
    ++res.cases;
    while (std::next_permutation(order.begin(), order.end())) {
      if (complex_digest(compute_prevariety(hs, order)) != reference) {
        res.fail("case " + std::to_string(k) + ": order " + std::to_string(order[0]) + std::to_string(order[1]) +
                 std::to_string(order[2]) + " differs");
        break;
      }
    }
  }
  return res;
}

PropertyResult mode_agreement_lp(size_t cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult res;
  for (size_t k = 0; k < cases; ++k) {
    const size_t dim = uniform(rng, 1, 4);
    auto p = random_polyhedron(rng, dim, uniform(rng, 1, 8), 6);
    ++res.cases;
    const bool a = lp_feasible(p, ArithmeticMode::checked64).feasible();
    const bool b = lp_feasible(p, ArithmeticMode::big).feasible();
    if (a != b) {
      res.fail("case " + std::to_string(k) + ": feasibility differs");
      continue;
    }
    if (a && canonical_form(p, ArithmeticMode::checked64) != canonical_form(p, ArithmeticMode::big))
      res.fail("case " + std::to_string(k) + ": canonical forms differ");
  }
  return res;
}

PropertyResult membership_coherence(const Complex& c, const std::vector<TropicalPolynomial>& system) {
  PropertyResult res;
  for (size_t i = 0; i < c.cells.size(); ++i) {
    const auto& cell = c.cells[i];
    ++res.cases;
    if (!cell.poly.contains_strictly(cell.sample)) res.fail("cell " + std::to_string(i) + ": sample not interior");
    for (const auto& tp : system) {
      if (min_evaluate(tp, cell.sample).argmin.size() < 2) {
        res.fail("cell " + std::to_string(i) + ": sample off " + tp.label);
        break;
      }
    }
  }
  return res;
}

PropertyResult pointedness_reverification(const ComplexVerdict& v) {
  PropertyResult res;
  ++res.cases;
  if (!verify_certificate(v.global)) res.fail("global certificate");
  for (const auto& c : v.components) {
    ++res.cases;
    if (!verify_certificate(c.certificate)) res.fail("component " + std::to_string(c.component.id));
  }
  return res;
}

namespace {

using nlohmann::json;

void negate(json& x) {
  if (x.is_string())
    x = to_string(-parse_rational(x.get<std::string>()));
  else if (x.is_number_integer())
    x = -x.get<long>();
  else
    throw std::runtime_error("unexpected witness entry");
}

bool flip(json& entry) {
  if (entry.value("verdict", "") != "Pointed" || entry.at("rays").empty()) return false;
  for (auto& x : entry.at("witness")) negate(x);
  return true;
}

}  // namespace

std::string tamper_flip_witness(const std::string& certificate) {
  json c = json::parse(certificate);
  bool done = false;
  if (c.contains("components"))
    for (auto& comp : c["components"])
      if (!done) done = flip(comp);
  if (!done) done = flip(c["recession"]["global"]);
  if (!done) throw std::runtime_error("no witness to flip");
  return c.dump(1);
}

std::string tamper_delete_component(const std::string& certificate) {
  json c = json::parse(certificate);
  if (!c.contains("components") || c["components"].empty()) throw std::runtime_error("no component to delete");
  c["components"].erase(c["components"].begin());
  return c.dump(1);
}

std::string tamper_f_vector(const std::string& certificate) {
  json c = json::parse(certificate);
  auto& fv = c["complex"]["f_vector"];
  fv[0] = fv[0].get<size_t>() + 1;
  return c.dump(1);
}

std::string first_failed_check(const VerifyReport& report) {
  for (const auto& c : report.checks)
    if (!c.passed) return c.name;
  return {};
}

}  // namespace tropcert::testing
