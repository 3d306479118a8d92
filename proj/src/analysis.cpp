#include "tropcert/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "tropcert/parallel.hpp"

namespace tropcert {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  size_t find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

std::vector<Component> collect(DisjointSets& sets, size_t n) {
  std::vector<Component> out;
  std::unordered_map<size_t, size_t> slot;
  for (size_t i = 0; i < n; ++i) {
    size_t root = sets.find(i);
    auto [it, fresh] = slot.try_emplace(root, out.size());
    if (fresh) out.push_back({out.size(), {}});
    out[it->second].cell_ids.push_back(i);
  }
  return out;
}

// Coordinate intervals implied by single-variable constraints; disjoint
// intervals rule out an intersection without an LP.
struct Box {
  std::vector<std::optional<Rational>> lo, hi;
};

Box bounding_box(const HPolyhedron& p) {
  const size_t n = p.ambient_dim();
  Box b{std::vector<std::optional<Rational>>(n), std::vector<std::optional<Rational>>(n)};
  auto tighten = [&](const LinearConstraint& c, bool equality) {
    size_t nz = 0, k = 0;
    for (size_t j = 0; j < n; ++j)
      if (sgn(c.normal[j]) != 0) {
        ++nz;
        k = j;
      }
    if (nz != 1) return;
    Rational bound = c.rhs / Rational(c.normal[k]);
    bool upper = sgn(c.normal[k]) > 0;
    if (upper || equality)
      if (!b.hi[k] || bound < *b.hi[k]) b.hi[k] = bound;
    if (!upper || equality)
      if (!b.lo[k] || bound > *b.lo[k]) b.lo[k] = bound;
  };
  for (const auto& e : p.equalities()) tighten(e, true);
  for (const auto& c : p.inequalities()) tighten(c, false);
  return b;
}

bool boxes_disjoint(const Box& a, const Box& b) {
  for (size_t k = 0; k < a.lo.size(); ++k) {
    if (a.hi[k] && b.lo[k] && *a.hi[k] < *b.lo[k]) return true;
    if (b.hi[k] && a.lo[k] && *b.hi[k] < *a.lo[k]) return true;
  }
  return false;
}

}  // namespace

std::vector<Component> components(const Complex& c) {
  const size_t n = c.ambient_dim;
  DisjointSets sets(c.cells.size());
  std::unordered_map<IntVector, size_t, VectorHash> owner;
  for (size_t i = 0; i < c.cells.size(); ++i) {
    if (!c.cells[i].has_vrep()) throw Error(ErrorCode::InvalidArgument, "components need generator data");
    for (const auto& g : c.cells[i].generators) {
      if (sgn(g[n]) <= 0) continue;
      auto [it, fresh] = owner.try_emplace(g, i);
      if (!fresh) sets.unite(it->second, i);
    }
  }
  return collect(sets, c.cells.size());
}

std::vector<Component> components_by_lp(const Complex& c, ArithmeticMode mode) {
  DisjointSets sets(c.cells.size());
  std::vector<Box> boxes;
  for (const auto& cell : c.cells) boxes.push_back(bounding_box(cell.poly));
  for (size_t i = 0; i < c.cells.size(); ++i)
    for (size_t j = i + 1; j < c.cells.size(); ++j) {
      if (sets.find(i) == sets.find(j) || boxes_disjoint(boxes[i], boxes[j])) continue;
      if (lp_feasible(c.cells[i].poly.intersect(c.cells[j].poly), mode).feasible()) sets.unite(i, j);
    }
  return collect(sets, c.cells.size());
}

std::vector<IntVector> cell_recession_rays(const Complex& c, const Cell& cell) {
  const size_t n = c.ambient_dim;
  std::vector<IntVector> out;
  for (const auto& g : cell.generators)
    if (sgn(g[n]) == 0) out.emplace_back(g.begin(), g.begin() + static_cast<long>(n));
  for (const auto& l : c.lineality) {
    out.push_back(l);
    IntVector neg = l;
    for (auto& x : neg) x = -x;
    out.push_back(std::move(neg));
  }
  return out;
}

RaySet component_recession_rays(const Complex& c, const Component& comp) {
  std::vector<IntVector> rays;
  for (size_t i : comp.cell_ids) {
    auto r = cell_recession_rays(c, c.cells.at(i));
    rays.insert(rays.end(), r.begin(), r.end());
  }
  return RaySet::from(std::move(rays));
}

PointednessCertificate certify_component(const RaySet& rays, ArithmeticMode mode) {
  return escalate(mode, [&](ArithmeticMode m) { return check_pointed(rays, m); });
}

const char* verdict_name(Verdict v) noexcept { return v == Verdict::certified ? "Certified" : "Inconclusive"; }

ComplexVerdict certify_complex(const Complex& c, const AnalysisOptions& opt) {
  ComplexVerdict out;
  std::vector<IntVector> all;
  for (const auto& cell : c.cells) {
    auto r = cell_recession_rays(c, cell);
    all.insert(all.end(), r.begin(), r.end());
  }
  out.global = certify_component(RaySet::from(std::move(all)), opt.mode);
  if (out.global.pointed() && !opt.force_components) {
    out.decided_globally = true;
    out.verdict = Verdict::certified;
    return out;
  }
  auto comps = components(c);
  out.components.resize(comps.size());
  parallel_for(comps.size(), opt.jobs, [&](size_t i) {
    out.components[i] = {comps[i], certify_component(component_recession_rays(c, comps[i]), opt.mode)};
  });
  for (const auto& r : out.components)
    if (!r.certificate.pointed()) out.offending.push_back(r.component.id);
  out.verdict = out.offending.empty() ? Verdict::certified : Verdict::inconclusive;
  return out;
}

}  // namespace tropcert
