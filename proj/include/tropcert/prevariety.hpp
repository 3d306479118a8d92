#pragma once

// Tropical prevariety as a polyhedral complex, built by common refinement.
//
// Cells are stored both ways. The H-representation is canonical and serves
// as identity. The V-representation is the generator list of the
// homogenization {(t w, t) : w in cell, t >= 0} in R^{N+1}, taken modulo the
// lineality space shared by every cell; a generator with last coordinate
// t > 0 is a vertex, one with t = 0 a recession ray.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/lp.hpp"
#include "tropcert/tropical.hpp"

namespace tropcert {

struct Cell {
  HPolyhedron poly;  // canonical form
  int dim = -1;
  RationalVector sample;

  // Homogenized generators, primitive, sorted. Empty for cells that were
  // built from H-data alone.
  std::vector<IntVector> generators;
  // Homogenized facet normals h with h . (w, t) >= 0 on the cell.
  std::vector<IntVector> facets;

  bool has_vrep() const { return !generators.empty(); }
};

struct Complex {
  size_t ambient_dim = 0;
  // Basis of the common lineality space in w-coordinates (reduced echelon).
  std::vector<IntVector> lineality;
  std::vector<Cell> cells;  // maximal cells, sorted by canonical key

  bool empty() const { return cells.empty(); }
};

struct FVector {
  int min_dim = 0;            // dimension of the first entry
  std::vector<size_t> counts;

  friend bool operator==(const FVector&, const FVector&) = default;
};

// Whole-space complex: one cell R^N.
Complex full_space(size_t ambient_dim);

// Canonical cell for a ∩ b computed with LPs, nullopt when empty.
std::optional<Cell> intersect_cells(const Cell& a, const HPolyhedron& b,
                                    ArithmeticMode mode = ArithmeticMode::checked64);
// Cell from an arbitrary feasible H-polyhedron (no V-representation).
// A complex assembled from explicit H-polyhedra, with generator data and
// the common lineality space filled in. Cells are taken as given: no
// refinement or maximality filtering happens.
Complex complex_from_cells(size_t ambient_dim, const std::vector<HPolyhedron>& polys);

Cell make_cell(const HPolyhedron& poly, ArithmeticMode mode = ArithmeticMode::checked64);

struct EngineOptions {
  ArithmeticMode mode = ArithmeticMode::checked64;
  size_t jobs = 1;
  // Called after each refinement step with (step, polynomial label, cells).
  std::function<void(size_t, const std::string&, size_t)> progress;
};

struct EngineStats {
  size_t escalations = 0;
  std::vector<size_t> stage_cells;  // cell count after each step
};

Complex refine(const Complex& c, const Hypersurface& h, const EngineOptions& opt = {},
               EngineStats* stats = nullptr);

enum class Schedule { by_cell_count, given_order };

// Processing order of the hypersurfaces: increasing cell count with ties
// broken by position, or the given order.
std::vector<size_t> schedule_order(const std::vector<Hypersurface>& hs, Schedule schedule);

Complex compute_prevariety(const std::vector<Hypersurface>& hs, Schedule schedule = Schedule::by_cell_count,
                           const EngineOptions& opt = {}, EngineStats* stats = nullptr);
// Same, with an explicit processing order (a permutation of indices).
Complex compute_prevariety(const std::vector<Hypersurface>& hs, const std::vector<size_t>& order,
                           const EngineOptions& opt = {}, EngineStats* stats = nullptr);

// All nonempty faces of a cell (including the cell), canonical, via LPs.
std::vector<Cell> faces(const Cell& cell, ArithmeticMode mode = ArithmeticMode::checked64);

// Deduplicated faces of all maximal cells bucketed by dimension, computed
// from the V-representation and facet incidences.
FVector f_vector(const Complex& c);
// Same count driven only by H-data and faces() (slow; for small complexes).
FVector f_vector_by_lp(const Complex& c, ArithmeticMode mode = ArithmeticMode::checked64);

// Containment of canonical cells (exact, via V-data when present).
bool cell_contains(const Cell& outer, const Cell& inner, ArithmeticMode mode = ArithmeticMode::checked64);

std::string complex_json(const Complex& c);
Complex complex_from_json(const std::string& text);

}  // namespace tropcert
