#pragma once

// End-to-end runs: configuration, certificate emission, substitution-only
// re-verification and the brute-force support oracle.
//
// certificate.json holds only data that is a function of the configuration
// (so it is byte-identical across worker counts and arithmetic modes);
// timings, mode, worker count and escalations go to run_info.json.

#include <string>
#include <vector>

#include "tropcert/analysis.hpp"
#include "tropcert/equations.hpp"
#include "tropcert/tropical.hpp"

namespace tropcert {

inline constexpr const char* kCertificateSchema = "tropcert.certificate/1";

struct RunConfig {
  int n = 5;
  MassValuation valuations;
  FamilySelection equations = all_families();
  ArithmeticMode mode = ArithmeticMode::checked64;
  size_t jobs = 1;
  bool unsafe_valuations = false;
  bool force_components = false;  // decompose even when the global cone is pointed
  std::string out_dir;  // empty: nothing is written

  void validate() const;
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0;
};

struct RunResult {
  Verdict verdict = Verdict::certified;
  Complex complex;
  FVector f_vector;
  ComplexVerdict analysis;
  std::string certificate_json;
  std::string complex_json;
  std::string run_info_json;
  std::vector<PhaseTiming> timings;
  size_t escalations = 0;

  int exit_code() const { return verdict == Verdict::certified ? 0 : 2; }
};

// The tropical system of a configuration, in build_system order.
std::vector<TropicalPolynomial> tropical_system(int n, const FamilySelection& families, const MassValuation& v);

RunResult run_certify(const RunConfig& cfg);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const;
  std::string to_json() const;
};

// Re-checks a certificate against a complex dump using substitution and
// exact linear algebra only. Throws SchemaMismatch on unreadable input and
// DigestMismatch when the regenerated equations differ from the recorded
// digest.
VerifyReport verify_certificate_text(const std::string& certificate, const std::string& complex);
VerifyReport run_verify(const std::string& cert_path, const std::string& complex_path);

// Naive prevariety: every tuple of term pairs, one polyhedron per feasible
// tuple. Limited to 3 polynomials of at most 6 terms.
struct OracleSupport {
  std::vector<Cell> cells;  // canonical, possibly overlapping
  bool contains(const RationalVector& w) const;
};
OracleSupport run_oracle(const std::vector<TropicalPolynomial>& system,
                         ArithmeticMode mode = ArithmeticMode::checked64);

// Both-way sample containment between an engine complex and the oracle.
bool same_support(const Complex& engine, const OracleSupport& oracle);

// Coordinates of every cell projected onto the chosen axes (0-based).
std::string projection_json(const Complex& c, const std::vector<size_t>& axes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tropcert
