#pragma once

#include <vector>

#include "tropcert/arith.hpp"
#include "tropcert/lp.hpp"

namespace tropcert {

// Primitive integer directions, pairwise non-parallel, none zero.
struct RaySet {
  std::vector<IntVector> rays;

  bool empty() const { return rays.empty(); }
  size_t size() const { return rays.size(); }
  // Canonical order and primitive, deduplicated entries.
  static RaySet from(std::vector<IntVector> rays);
  friend bool operator==(const RaySet&, const RaySet&) = default;
};

// Generators of the cone {x : E x = 0, C x <= 0} built from the normals of
// `cone_input` (right-hand sides are ignored, so any polyhedron yields its
// recession cone). A lineality direction l is reported as the pair l, -l.
RaySet recession_rays(const HPolyhedron& cone_input, ArithmeticMode mode = ArithmeticMode::checked64);

struct PointednessCertificate {
  enum class Verdict { pointed, not_pointed };
  Verdict verdict = Verdict::pointed;
  RationalVector witness;    // pointed: witness . v >= 1 for every ray
  RationalVector lineality;  // not pointed: lambda >= 0, sum lambda_i v_i = 0
  RaySet rays;

  bool pointed() const { return verdict == Verdict::pointed; }
};

PointednessCertificate check_pointed(const RaySet& rays, ArithmeticMode mode = ArithmeticMode::checked64);

// Substitution-only re-check of a certificate against its own ray list.
bool verify_certificate(const PointednessCertificate& cert);

}  // namespace tropcert
