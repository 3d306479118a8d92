#pragma once

// Connected components of a prevariety complex and the pointedness test on
// their recession cones. A pointed recession cone everywhere rules out a
// balanced tropical curve; anything else is reported as inconclusive.

#include <string>
#include <vector>

#include "tropcert/cone.hpp"
#include "tropcert/prevariety.hpp"

namespace tropcert {

struct Component {
  size_t id = 0;
  std::vector<size_t> cell_ids;  // indices into Complex::cells, sorted
};

// Cells meet iff they share a vertex (faces of a polyhedral complex meet in
// a common face). Components are ordered by their least cell index.
std::vector<Component> components(const Complex& c);
// Same partition from pairwise LP intersection tests (for cross-checks).
std::vector<Component> components_by_lp(const Complex& c, ArithmeticMode mode = ArithmeticMode::checked64);

// Recession directions of one cell: its ray generators plus both signs of
// every lineality direction.
std::vector<IntVector> cell_recession_rays(const Complex& c, const Cell& cell);
RaySet component_recession_rays(const Complex& c, const Component& comp);
PointednessCertificate certify_component(const RaySet& rays, ArithmeticMode mode = ArithmeticMode::checked64);

enum class Verdict { certified, inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct ComponentResult {
  Component component;
  PointednessCertificate certificate;
};

struct ComplexVerdict {
  Verdict verdict = Verdict::certified;
  PointednessCertificate global;  // recession cone of the whole complex
  bool decided_globally = false;
  std::vector<ComponentResult> components;  // empty when decided globally
  std::vector<size_t> offending;            // component ids that are not pointed
};

struct AnalysisOptions {
  ArithmeticMode mode = ArithmeticMode::checked64;
  size_t jobs = 1;
  // Decompose into components even when the global cone is pointed.
  bool force_components = false;
};

ComplexVerdict certify_complex(const Complex& c, const AnalysisOptions& opt = {});

}  // namespace tropcert
