#include "doctest.h"
#include "support.hpp"

using namespace tropcert;
using namespace tropcert::testing;

namespace {

RationalVector rv(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_SUITE("exact-core") {

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational(" 1/+2 ") == Rational(1, 2));
  CHECK(to_string(Rational(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(parse_rational_list("1,4,9") == rv({1, 4, 9}));
}

TEST_CASE("checked arithmetic reports overflow") {
  Checked64 big(INT64_MAX);
  CHECK_THROWS_AS(big + Checked64(1), ArithmeticOverflow);
  CHECK_THROWS_AS(big * Checked64(2), ArithmeticOverflow);
  CHECK_THROWS_AS(-Checked64(INT64_MIN), ArithmeticOverflow);
  CHECK((Checked64(6) * Checked64(7)).value() == 42);
  CHECK_THROWS_AS(from_big<Checked64>(BigInt("100000000000000000000")), ArithmeticOverflow);
}

TEST_CASE("rank and nullspace") {
  std::vector<IntVector> rows{iv({1, 2, 3}), iv({2, 4, 6}), iv({0, 1, 1})};
  CHECK(rank_of(rows) == 2);
  auto ns = nullspace_basis(rows, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& r : rows) CHECK(sgn(dot(r, ns[0])) == 0);
  CHECK(nullspace_basis({}, 2).size() == 2);
}

TEST_CASE("lp_feasible on an interval") {
  HPolyhedron p(1);
  p.add_inequality(iv({1}), 1);
  p.add_inequality(iv({-1}), 0);
  auto out = lp_feasible(p);
  REQUIRE(out.feasible());
  CHECK(p.contains(out.witness));
  CHECK(verify_outcome(p, out));
}

TEST_CASE("lp_feasible gives a Farkas certificate for contradictory bounds") {
  HPolyhedron p(1);
  p.add_inequality(iv({1}), -1);
  p.add_inequality(iv({-1}), -1);
  auto out = lp_feasible(p);
  REQUIRE_FALSE(out.feasible());
  REQUIRE(out.farkas_ineq.size() == 2);
  CHECK(out.farkas_ineq[0] == out.farkas_ineq[1]);
  CHECK(sgn(out.farkas_ineq[0]) > 0);
  CHECK(verify_outcome(p, out));
}

TEST_CASE("relative interior points") {
  SUBCASE("segment") {
    HPolyhedron p(1);
    p.add_inequality(iv({1}), 1);
    p.add_inequality(iv({-1}), 0);
    auto x = relative_interior_point(p);
    CHECK(x[0] > 0);
    CHECK(x[0] < 1);
  }
  SUBCASE("single point") {
    HPolyhedron p(1);
    p.add_equality(iv({1}), 3);
    CHECK(relative_interior_point(p) == rv({3}));
  }
  SUBCASE("diagonal ray") {
    HPolyhedron p(2);
    p.add_equality(iv({1, -1}), 0);
    p.add_inequality(iv({1, 0}), 0);
    auto x = relative_interior_point(p);
    CHECK(x[0] == x[1]);
    CHECK(x[0] < 0);
  }
  SUBCASE("infeasible") {
    HPolyhedron p(1);
    p.add_inequality(iv({1}), -1);
    p.add_inequality(iv({-1}), -1);
    CHECK_THROWS_AS(relative_interior_point(p), Error);
    CHECK_THROWS_AS(implicit_equalities(p), Error);
  }
}

TEST_CASE("implicit equalities") {
  HPolyhedron p(1);
  p.add_inequality(iv({1}), 0);
  p.add_inequality(iv({-1}), 0);
  CHECK(implicit_equalities(p) == std::vector<size_t>{0, 1});

  HPolyhedron q(2);
  q.add_inequality(iv({1, 0}), 1);
  q.add_inequality(iv({0, 1}), 1);
  CHECK(implicit_equalities(q).empty());
}

TEST_CASE("dimension") {
  HPolyhedron a(2);
  a.add_equality(iv({1, 0}), 0);
  CHECK(dimension(a) == 1);

  HPolyhedron b(2);
  b.add_inequality(iv({1, 0}), 0);
  b.add_inequality(iv({-1, 0}), 0);
  b.add_equality(iv({0, 1}), 0);
  CHECK(dimension(b) == 0);
  CHECK(dimension(HPolyhedron(3)) == 3);
}

TEST_CASE("canonical form is independent of the presentation") {
  HPolyhedron a(2);
  a.add_inequality(iv({2, 0}), 2);
  a.add_inequality(iv({-1, 0}), 0);
  a.add_inequality(iv({0, 1}), 5);
  a.add_inequality(iv({0, -1}), -5);
  HPolyhedron b(2);
  b.add_equality(iv({0, 3}), 15);
  b.add_inequality(iv({-1, 0}), 0);
  b.add_inequality(iv({1, 0}), 1);
  b.add_inequality(iv({1, 1}), 100);
  CHECK(canonical_form(a).key() == canonical_form(b).key());
  CHECK(canonical_form(a, ArithmeticMode::big) == canonical_form(a));
}

TEST_CASE("recession rays of small cones") {
  HPolyhedron quadrant(2);
  quadrant.add_inequality(iv({1, 0}), 0);
  quadrant.add_inequality(iv({0, 1}), 0);
  CHECK(recession_rays(quadrant).rays == std::vector<IntVector>{iv({-1, 0}), iv({0, -1})});

  HPolyhedron line(2);
  line.add_equality(iv({1, 0}), 0);
  CHECK(recession_rays(line).rays == std::vector<IntVector>{iv({0, -1}), iv({0, 1})});

  // The right-hand side does not matter for the recession cone.
  HPolyhedron shifted(2);
  shifted.add_inequality(iv({1, 0}), 7);
  shifted.add_inequality(iv({0, 1}), -3);
  CHECK(recession_rays(shifted) == recession_rays(quadrant));
}

TEST_CASE("check_pointed") {
  auto cert = check_pointed(RaySet::from({iv({1, 0}), iv({0, 1})}));
  REQUIRE(cert.pointed());
  CHECK(cert.witness == rv({1, 1}));
  CHECK(verify_certificate(cert));

  auto line = check_pointed(RaySet::from({iv({1, 0}), iv({-1, 0})}));
  REQUIRE_FALSE(line.pointed());
  CHECK(line.lineality == rv({1, 1}));
  CHECK(verify_certificate(line));

  auto plane = check_pointed(RaySet::from({iv({1, 1}), iv({1, -1}), iv({-1, 0})}));
  CHECK_FALSE(plane.pointed());
  CHECK(verify_certificate(plane));

  auto empty = check_pointed(RaySet{});
  CHECK(empty.pointed());
  CHECK(verify_certificate(empty));

  CHECK(check_pointed(plane.rays, ArithmeticMode::big).lineality == plane.lineality);
}

TEST_CASE("tampered pointedness certificates fail") {
  auto cert = check_pointed(RaySet::from({iv({1, 0}), iv({0, 1})}));
  for (auto& x : cert.witness) x = -x;
  CHECK_FALSE(verify_certificate(cert));

  auto line = check_pointed(RaySet::from({iv({1, 0}), iv({-1, 0})}));
  line.lineality[0] = 2;
  CHECK_FALSE(verify_certificate(line));
  line.lineality = rv({0, 0});
  CHECK_FALSE(verify_certificate(line));
}

TEST_CASE("Fourier-Motzkin oracle sanity") {
  // x > 0, x < 0 is infeasible only because of strictness.
  std::vector<OracleRow> rows{{rv({1}), 0, false}, {rv({-1}), 0, false}};
  CHECK(fm_feasible(rows, 1));
  rows[0].strict = true;
  CHECK_FALSE(fm_feasible(rows, 1));
}

TEST_CASE("LP agrees with Fourier-Motzkin on random systems") {
  auto r = lp_vs_fourier_motzkin(200, 11);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("implicit equalities agree with Fourier-Motzkin") {
  auto r = implicit_vs_fourier_motzkin(120, 12);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("recession rays pass double inclusion on random cones") {
  auto r = dd_double_inclusion(60, 13);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("checked and big modes agree on random LPs") {
  auto r = mode_agreement_lp(100, 14);
  INFO(r.first_failure);
  CHECK(r.ok());
}

}  // TEST_SUITE
