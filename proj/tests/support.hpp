#pragma once

// Independent oracles and randomized property checks shared by the unit
// tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "tropcert/certificate.hpp"

namespace tropcert::testing {

// a . x <= b, or a . x < b when strict.
struct OracleRow {
  RationalVector a;
  Rational b;
  bool strict = false;
};

// Fourier-Motzkin elimination with strictness tracking.
bool fm_feasible(std::vector<OracleRow> rows, size_t dim);

// Rows of an H-polyhedron (equalities as two inequalities).
std::vector<OracleRow> oracle_rows(const HPolyhedron& p);

// Implicit equalities by Fourier-Motzkin: i is implicit iff making it
// strict is infeasible.
std::vector<size_t> fm_implicit(const HPolyhedron& p);

HPolyhedron random_polyhedron(std::mt19937_64& rng, size_t dim, size_t rows, int coeff);

// Random cone {x : C x <= 0} in dimension dim.
HPolyhedron random_cone(std::mt19937_64& rng, size_t dim, size_t rows, int coeff);

// Conic hull of `gens` contains v (exact LP).
bool in_conic_hull(const std::vector<IntVector>& gens, const IntVector& v);

// Generators of {x : C x <= 0} by brute force over constraint subsets:
// the lineality basis (both signs) and the extreme rays of the pointed part.
std::vector<IntVector> brute_force_cone_generators(const HPolyhedron& cone);

TropicalPolynomial random_tropical(std::mt19937_64& rng, size_t nvars, size_t terms, int max_exp, int max_val,
                                   const std::string& label);

struct PropertyResult {
  size_t cases = 0;
  size_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

PropertyResult lp_vs_fourier_motzkin(size_t cases, uint64_t seed);
PropertyResult implicit_vs_fourier_motzkin(size_t cases, uint64_t seed);
PropertyResult dd_double_inclusion(size_t cases, uint64_t seed);
PropertyResult monomial_invariance(size_t cases, uint64_t seed);
PropertyResult oracle_equivalence(size_t cases, uint64_t seed);
PropertyResult schedule_invariance(size_t cases, uint64_t seed);
PropertyResult mode_agreement_lp(size_t cases, uint64_t seed);

// Mechanical certificate tampering. Each returns modified certificate text.
std::string tamper_flip_witness(const std::string& certificate);
std::string tamper_delete_component(const std::string& certificate);
std::string tamper_f_vector(const std::string& certificate);

// Name of the first failing verification check, empty when all pass.
std::string first_failed_check(const VerifyReport& report);

// Membership of every cell sample of `c` in every hypersurface.
PropertyResult membership_coherence(const Complex& c, const std::vector<TropicalPolynomial>& system);
// Exact re-verification of every pointedness certificate.
PropertyResult pointedness_reverification(const ComplexVerdict& v);

}  // namespace tropcert::testing
