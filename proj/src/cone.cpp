#include "tropcert/cone.hpp"

#include <algorithm>
#include <set>

#include "tropcert/dd.hpp"

namespace tropcert {

RaySet RaySet::from(std::vector<IntVector> rays) {
  std::set<IntVector> unique;
  for (auto& r : rays) {
    if (is_zero_vector(r)) throw Error(ErrorCode::InvalidArgument, "zero ray");
    make_primitive(r);
    unique.insert(std::move(r));
  }
  return RaySet{std::vector<IntVector>(unique.begin(), unique.end())};
}

namespace {

template <class Int>
RaySet recession_impl(const HPolyhedron& poly) {
  const size_t n = poly.ambient_dim();
  DoubleDescription<Int> dd(n);
  for (const auto& e : poly.equalities()) {
    auto h = from_big<Int>(e.normal);
    dd.add(h);
    for (auto& x : h) x = -x;
    dd.add(h);
  }
  for (const auto& c : poly.inequalities()) {
    auto h = from_big<Int>(c.normal);
    for (auto& x : h) x = -x;
    dd.add(h);
  }
  std::vector<IntVector> lin;
  for (const auto& l : dd.lineality()) lin.push_back(to_big(l));
  lin = canonical_row_basis(std::move(lin));
  std::vector<IntVector> out;
  for (const auto& r : dd.rays()) {
    IntVector v = to_big(r);
    // Canonical representative modulo the lineality space.
    for (const auto& l : lin) {
      size_t p = 0;
      while (sgn(l[p]) == 0) ++p;
      if (sgn(v[p]) == 0) continue;
      BigInt a = l[p], b = v[p];
      for (size_t j = 0; j < n; ++j) v[j] = v[j] * a - l[j] * b;
    }
    if (!is_zero_vector(v)) out.push_back(std::move(v));
  }
  for (const auto& l : lin) {
    out.push_back(l);
    IntVector m = l;
    for (auto& x : m) x = -x;
    out.push_back(std::move(m));
  }
  return RaySet::from(std::move(out));
}

}  // namespace

RaySet recession_rays(const HPolyhedron& cone_input, ArithmeticMode mode) {
  if (mode == ArithmeticMode::big) return recession_impl<BigInt>(cone_input);
  return recession_impl<Checked64>(cone_input);
}

PointednessCertificate check_pointed(const RaySet& rays, ArithmeticMode mode) {
  PointednessCertificate cert;
  cert.rays = rays;
  if (rays.empty()) {
    cert.verdict = PointednessCertificate::Verdict::pointed;
    return cert;
  }
  const size_t n = rays.rays[0].size();
  // Find c with v . c >= 1, written as -v . c <= -1.
  LinearProgram lp;
  lp.num_vars = n;
  for (const auto& v : rays.rays) {
    IntVector a = v;
    for (auto& x : a) x = -x;
    lp.inequalities.push_back({std::move(a), Rational(-1)});
  }
  LPSolution sol = solve_lp(lp, mode);
  if (sol.status == LPStatus::infeasible) {
    cert.verdict = PointednessCertificate::Verdict::not_pointed;
    cert.lineality = std::move(sol.ineq_multipliers);
  } else {
    cert.verdict = PointednessCertificate::Verdict::pointed;
    cert.witness = std::move(sol.x);
  }
  return cert;
}

bool verify_certificate(const PointednessCertificate& cert) {
  const auto& rays = cert.rays.rays;
  if (cert.pointed()) {
    if (rays.empty()) return true;
    const size_t n = rays[0].size();
    if (cert.witness.size() != n) return false;
    for (const auto& v : rays) {
      if (v.size() != n) return false;
      if (dot(v, cert.witness) < 1) return false;
    }
    return true;
  }
  if (cert.lineality.size() != rays.size() || rays.empty()) return false;
  const size_t n = rays[0].size();
  RationalVector sum(n, Rational(0));
  bool nonzero = false;
  for (size_t i = 0; i < rays.size(); ++i) {
    const Rational& l = cert.lineality[i];
    if (sgn(l) < 0) return false;
    if (sgn(l) == 0) continue;
    nonzero = true;
    for (size_t j = 0; j < n; ++j) sum[j] += l * rays[i][j];
  }
  if (!nonzero) return false;
  return std::all_of(sum.begin(), sum.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace tropcert
