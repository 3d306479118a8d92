#include "tropcert/prevariety.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "tropcert/bits.hpp"
#include "tropcert/dd.hpp"
#include "tropcert/parallel.hpp"

namespace tropcert {

namespace {

using IdList = std::vector<uint32_t>;

struct IdListHash {
  size_t operator()(const IdList& v) const noexcept {
    size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

size_t leading_index(const IntVector& row) {
  size_t c = 0;
  while (sgn(row[c]) == 0) ++c;
  return c;
}

// Lineality basis in homogenized coordinates (t = 0 appended).
std::vector<IntVector> homogenize(const std::vector<IntVector>& lin) {
  std::vector<IntVector> out = lin;
  for (auto& v : out) v.push_back(0);
  return out;
}

template <class Int>
void reduce_modulo(std::vector<Int>& v, const std::vector<std::vector<Int>>& basis,
                   const std::vector<size_t>& pivots) {
  for (size_t i = 0; i < basis.size(); ++i) {
    const size_t c = pivots[i];
    if (sgn(v[c]) == 0) continue;
    const Int a = basis[i][c], b = v[c];
    for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] * a - basis[i][j] * b;
  }
  make_primitive(v);
}

template <class Int>
std::vector<std::vector<Int>> convert(const std::vector<IntVector>& rows) {
  std::vector<std::vector<Int>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(from_big<Int>(r));
  return out;
}

// Facet-defining constraints among `constraints` for the generators
// `members`: constraints whose tight set is nonempty, proper and maximal. Tight sets
// come from zero_sets[member].test(j).
std::vector<size_t> maximal_tight(const std::vector<size_t>& members, const std::vector<Bits>& zero_sets,
                                  size_t num_constraints) {
  std::vector<Bits> tight(num_constraints);
  std::vector<size_t> sizes(num_constraints, 0);
  for (size_t j = 0; j < num_constraints; ++j)
    for (size_t k = 0; k < members.size(); ++k)
      if (zero_sets[members[k]].test(j)) {
        tight[j].set(k);
        ++sizes[j];
      }
  std::vector<size_t> cand;
  for (size_t j = 0; j < num_constraints; ++j)
    if (sizes[j] > 0 && sizes[j] < members.size()) cand.push_back(j);
  std::vector<size_t> out;
  for (size_t x = 0; x < cand.size(); ++x) {
    const size_t j = cand[x];
    bool maximal = true;
    for (size_t y = 0; y < cand.size() && maximal; ++y) {
      const size_t k = cand[y];
      if (k == j || !tight[j].subset_of(tight[k])) continue;
      // Strictly larger, or equal with a smaller index: j is redundant.
      if (sizes[k] > sizes[j] || y < x) maximal = false;
    }
    if (maximal) out.push_back(j);
  }
  return out;
}

IntVector unit_t(size_t n) {
  IntVector v(n + 1, 0);
  v[n] = 1;
  return v;
}

// ---------------------------------------------------------------------------
// Refinement state

struct TermData {
  std::vector<IntVector> exps;  // D * e_a
  IntVector vals;               // D * val_a
};

TermData term_data(const TropicalPolynomial& p) {
  BigInt D = 1;
  for (const auto& t : p.terms) D = lcm_of(D, t.valuation.get_den());
  TermData td;
  for (const auto& t : p.terms) {
    IntVector e(t.exponents.size());
    for (size_t k = 0; k < e.size(); ++k) e[k] = BigInt(t.exponents[k]) * D;
    td.exps.push_back(std::move(e));
    td.vals.push_back(BigInt(t.valuation * D));
  }
  return td;
}

struct Piece {
  std::vector<IntVector> gens;  // sorted
  std::vector<IntVector> facets;
};

struct Stage {
  size_t n = 0;
  std::vector<IntVector> lineality;  // w-space, reduced echelon
  std::vector<IntVector> gens;
  std::unordered_map<IntVector, uint32_t, VectorHash> gen_index;
  std::vector<IntVector> cons;
  std::unordered_map<IntVector, uint32_t, VectorHash> con_index;
  struct StageCell {
    IdList gens;
    IdList facets;
  };
  std::vector<StageCell> cells;

  uint32_t gen_id(const IntVector& v) {
    auto [it, fresh] = gen_index.try_emplace(v, static_cast<uint32_t>(gens.size()));
    if (fresh) gens.push_back(v);
    return it->second;
  }
  uint32_t con_id(const IntVector& v) {
    auto [it, fresh] = con_index.try_emplace(v, static_cast<uint32_t>(cons.size()));
    if (fresh) cons.push_back(v);
    return it->second;
  }
};

template <class Int>
std::vector<Piece> refine_cell(const std::vector<IntVector>& cell_gens, const std::vector<IntVector>& cell_facets,
                               const std::vector<IntVector>& lin_now, const std::vector<IntVector>& lin_next,
                               const std::vector<size_t>& next_pivots, const TermData& td) {
  using Vec = std::vector<Int>;
  const size_t dim = cell_gens.empty() ? 0 : cell_gens[0].size();
  const size_t T = td.exps.size();
  const auto G = convert<Int>(cell_gens);
  const auto L = convert<Int>(lin_now);
  const auto Lnext = convert<Int>(lin_next);
  const auto F0 = convert<Int>(cell_facets);
  std::vector<Vec> hom(T);
  for (size_t a = 0; a < T; ++a) {
    hom[a] = from_big<Int>(td.exps[a]);
    hom[a].push_back(from_big<Int>(td.vals[a]));
  }
  // value[a][g] = affine function of term a on generator g
  std::vector<std::vector<Int>> value(T, std::vector<Int>(G.size()));
  std::vector<std::vector<Int>> on_lin(T, std::vector<Int>(L.size()));
  for (size_t a = 0; a < T; ++a) {
    for (size_t g = 0; g < G.size(); ++g) value[a][g] = dot(hom[a], G[g]);
    for (size_t l = 0; l < L.size(); ++l) on_lin[a][l] = dot(hom[a], L[l]);
  }

  std::vector<Piece> pieces;
  std::vector<size_t> index(T);
  for (size_t a = 0; a < T; ++a) {
    // Skip a when some other term is strictly below it on the whole cell.
    bool hopeless = false;
    std::vector<std::pair<size_t, size_t>> order;  // (generators not cut, c)
    for (size_t c = 0; c < T && !hopeless; ++c) {
      if (c == a) continue;
      bool flat = true;
      for (size_t l = 0; l < L.size() && flat; ++l) flat = on_lin[c][l] == on_lin[a][l];
      size_t negative = 0;
      bool all_below = flat;
      for (size_t g = 0; g < G.size(); ++g) {
        const Int d = value[c][g] - value[a][g];
        const int s = sgn(d);
        if (s < 0) ++negative;
        if (sgn(G[g].back()) > 0 ? s >= 0 : s > 0) all_below = false;
      }
      if (all_below) hopeless = true;
      order.emplace_back(G.size() - negative, c);
    }
    if (hopeless) continue;
    std::sort(order.begin(), order.end());

    DoubleDescription<Int> dd(dim, G, L, F0);
    for (const auto& [unused, c] : order) {
      Vec h(dim);
      for (size_t k = 0; k < dim; ++k) h[k] = hom[c][k] - hom[a][k];
      make_primitive(h);
      index[c] = dd.add(std::move(h));
    }
    const auto& rays = dd.rays();
    const auto& zeros = dd.zero_sets();
    if (std::none_of(rays.begin(), rays.end(), [](const Vec& r) { return sgn(r.back()) > 0; })) continue;

    for (size_t b = a + 1; b < T; ++b) {
      std::vector<size_t> members;
      bool bounded_part = false;
      for (size_t r = 0; r < rays.size(); ++r) {
        if (!zeros[r].test(index[b])) continue;
        members.push_back(r);
        if (sgn(rays[r].back()) > 0) bounded_part = true;
      }
      if (!bounded_part) continue;
      Piece piece;
      for (size_t r : members) {
        Vec v = rays[r];
        reduce_modulo(v, Lnext, next_pivots);
        piece.gens.push_back(to_big(v));
      }
      std::sort(piece.gens.begin(), piece.gens.end());
      if (members.size() == 1 && !Lnext.empty()) {
        // A vertex plus lineality: the only facet is the face at infinity.
        piece.facets.push_back(unit_t(dim - 1));
      } else {
        for (size_t j : maximal_tight(members, zeros, dd.constraints().size()))
          piece.facets.push_back(to_big(dd.constraints()[j]));
      }
      pieces.push_back(std::move(piece));
    }
  }

  // Keep the maximal pieces of this cell.
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    if (x.gens.size() != y.gens.size()) return x.gens.size() > y.gens.size();
    return x.gens < y.gens;
  });
  std::vector<Piece> kept;
  for (auto& p : pieces) {
    bool covered = false;
    for (const auto& k : kept) {
      if (std::includes(k.gens.begin(), k.gens.end(), p.gens.begin(), p.gens.end())) {
        covered = true;
        break;
      }
    }
    if (!covered) kept.push_back(std::move(p));
  }
  return kept;
}


std::vector<size_t> pivots_of(const std::vector<IntVector>& rref) {
  std::vector<size_t> out;
  for (const auto& r : rref) out.push_back(leading_index(r));
  return out;
}

// Lineality after also requiring every exponent difference of `p` to vanish.
std::vector<IntVector> next_lineality(const std::vector<IntVector>& lineality, size_t n,
                                      const TropicalPolynomial& p) {
  std::vector<IntVector> rows;
  if (lineality.empty()) {
    for (size_t k = 0; k < n; ++k) {
      IntVector e(n, 0);
      e[k] = 1;
      rows.push_back(std::move(e));
    }
  } else {
    rows = nullspace_basis(lineality, n);
  }
  for (size_t a = 1; a < p.terms.size(); ++a) {
    IntVector d(n);
    for (size_t k = 0; k < n; ++k) d[k] = p.terms[a].exponents[k] - p.terms[0].exponents[k];
    rows.push_back(std::move(d));
  }
  return nullspace_basis(rows, n);
}

void keep_maximal(Stage& s) {
  std::vector<std::vector<uint32_t>> cells_of(s.gens.size());
  for (uint32_t i = 0; i < s.cells.size(); ++i)
    for (auto g : s.cells[i].gens) cells_of[g].push_back(i);
  std::vector<bool> keep(s.cells.size(), true);
  for (uint32_t i = 0; i < s.cells.size(); ++i) {
    const auto& gi = s.cells[i].gens;
    uint32_t rare = gi[0];
    for (auto g : gi)
      if (cells_of[g].size() < cells_of[rare].size()) rare = g;
    for (auto j : cells_of[rare]) {
      const auto& gj = s.cells[j].gens;
      if (j == i || gj.size() <= gi.size()) continue;
      if (std::includes(gj.begin(), gj.end(), gi.begin(), gi.end())) {
        keep[i] = false;
        break;
      }
    }
  }
  // Compact cells, generators and constraints.
  Stage out;
  out.n = s.n;
  out.lineality = std::move(s.lineality);
  for (uint32_t i = 0; i < s.cells.size(); ++i) {
    if (!keep[i]) continue;
    Stage::StageCell c;
    for (auto g : s.cells[i].gens) c.gens.push_back(out.gen_id(s.gens[g]));
    for (auto f : s.cells[i].facets) c.facets.push_back(out.con_id(s.cons[f]));
    std::sort(c.gens.begin(), c.gens.end());
    out.cells.push_back(std::move(c));
  }
  s = std::move(out);
}

void refine_stage(Stage& s, const TropicalPolynomial& p, const EngineOptions& opt, EngineStats* stats) {
  if (p.terms.size() < 2)
    throw Error(ErrorCode::EmptyHypersurface, "tropical polynomial '" + p.label + "' has fewer than two terms");
  if (p.num_vars() != s.n)
    throw Error(ErrorCode::AmbientMismatch, "polynomial '" + p.label + "' lives in dimension " +
                                                std::to_string(p.num_vars()) + ", complex in " +
                                                std::to_string(s.n));
  const TermData td = term_data(p);
  const auto lin_now = homogenize(s.lineality);
  Stage next;
  next.n = s.n;
  next.lineality = next_lineality(s.lineality, s.n, p);
  const auto lin_next = homogenize(next.lineality);
  const auto next_pivots = pivots_of(lin_next);

  std::atomic<size_t> escalations{0};
  constexpr size_t chunk = 2048;
  std::unordered_map<IdList, uint32_t, IdListHash> seen;
  for (size_t start = 0; start < s.cells.size(); start += chunk) {
    const size_t count = std::min(chunk, s.cells.size() - start);
    std::vector<std::vector<Piece>> results(count);
    parallel_for(count, opt.jobs, [&](size_t k) {
      const auto& cell = s.cells[start + k];
      std::vector<IntVector> gens, facets;
      for (auto g : cell.gens) gens.push_back(s.gens[g]);
      for (auto f : cell.facets) facets.push_back(s.cons[f]);
      size_t esc = 0;
      results[k] = with_mode(
          opt.mode,
          [&]<class Int>() { return refine_cell<Int>(gens, facets, lin_now, lin_next, next_pivots, td); }, &esc);
      escalations += esc;
    });
    for (auto& pieces : results) {
      for (auto& piece : pieces) {
        Stage::StageCell c;
        for (const auto& g : piece.gens) c.gens.push_back(next.gen_id(g));
        std::sort(c.gens.begin(), c.gens.end());
        auto [it, fresh] = seen.try_emplace(c.gens, static_cast<uint32_t>(next.cells.size()));
        if (!fresh) continue;
        for (const auto& f : piece.facets) c.facets.push_back(next.con_id(f));
        next.cells.push_back(std::move(c));
      }
    }
  }
  keep_maximal(next);
  s = std::move(next);
  if (stats) {
    stats->escalations += escalations.load();
    stats->stage_cells.push_back(s.cells.size());
  }
}

Stage stage_from(const Complex& c) {
  Stage s;
  s.n = c.ambient_dim;
  s.lineality = c.lineality;
  for (const auto& cell : c.cells) {
    if (!cell.has_vrep())
      throw Error(ErrorCode::InvalidArgument, "complex cell lacks a generator representation");
    Stage::StageCell sc;
    for (const auto& g : cell.generators) sc.gens.push_back(s.gen_id(g));
    for (const auto& f : cell.facets) sc.facets.push_back(s.con_id(f));
    std::sort(sc.gens.begin(), sc.gens.end());
    s.cells.push_back(std::move(sc));
  }
  return s;
}

bool constraint_order(const LinearConstraint& x, const LinearConstraint& y) {
  if (x.normal != y.normal) return x.normal < y.normal;
  return x.rhs < y.rhs;
}

// Canonical H-data, dimension and sample from the V-data of a cell.
void complete_cell(Cell& cell, const std::vector<IntVector>& lin_hom, size_t n) {
  std::vector<IntVector> rows = cell.generators;
  rows.insert(rows.end(), lin_hom.begin(), lin_hom.end());
  cell.dim = static_cast<int>(rank_of(rows)) - 1;

  std::vector<LinearConstraint> eqs;
  for (auto& a : nullspace_basis(rows, n + 1)) {
    Rational rhs(-a[n]);
    a.resize(n);
    eqs.push_back({std::move(a), std::move(rhs)});
  }
  eqs = canonical_equalities(std::move(eqs), n);
  std::vector<LinearConstraint> ineqs;
  bool at_infinity = false;  // the face {t = 0} is a facet
  for (const auto& h : cell.facets) {
    LinearConstraint c{IntVector(h.begin(), h.begin() + static_cast<long>(n)), Rational(h[n])};
    for (auto& x : c.normal) x = -x;
    auto r = is_zero_vector(c.normal) ? std::nullopt : reduce_inequality(c, eqs);
    if (r)
      ineqs.push_back(std::move(*r));
    else
      at_infinity = true;
  }
  std::sort(ineqs.begin(), ineqs.end(), constraint_order);
  ineqs.erase(std::unique(ineqs.begin(), ineqs.end()), ineqs.end());

  // Facet normals rebuilt from the canonical inequalities: rhs t - a . w >= 0.
  cell.facets.clear();
  for (const auto& c : ineqs) {
    IntVector h(n + 1);
    for (size_t k = 0; k < n; ++k) h[k] = -c.normal[k] * c.rhs.get_den();
    h[n] = c.rhs.get_num();
    make_primitive(h);
    cell.facets.push_back(std::move(h));
  }
  if (at_infinity) cell.facets.push_back(unit_t(n));
  std::sort(cell.facets.begin(), cell.facets.end());
  HPolyhedron poly(n);
  for (auto& e : eqs) poly.add_equality(std::move(e.normal), e.rhs);
  for (auto& c : ineqs) poly.add_inequality(std::move(c.normal), c.rhs);
  cell.poly = std::move(poly);

  IntVector sum(n + 1, 0);
  for (const auto& g : cell.generators)
    for (size_t k = 0; k <= n; ++k) sum[k] += g[k];
  cell.sample.assign(n, Rational(0));
  for (size_t k = 0; k < n; ++k) {
    cell.sample[k] = Rational(sum[k], sum[n]);
    cell.sample[k].canonicalize();
  }
}

Complex finish(Stage& s) {
  Complex out;
  out.ambient_dim = s.n;
  out.lineality = s.lineality;
  const auto lin_hom = homogenize(s.lineality);
  for (const auto& sc : s.cells) {
    Cell cell;
    for (auto g : sc.gens) cell.generators.push_back(s.gens[g]);
    for (auto f : sc.facets) cell.facets.push_back(s.cons[f]);
    std::sort(cell.generators.begin(), cell.generators.end());
    complete_cell(cell, lin_hom, s.n);
    out.cells.push_back(std::move(cell));
  }
  std::vector<std::string> keys;
  for (const auto& c : out.cells) keys.push_back(c.poly.key());
  std::vector<size_t> perm(out.cells.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) { return keys[a] < keys[b]; });
  std::vector<Cell> sorted;
  for (size_t i : perm) sorted.push_back(std::move(out.cells[i]));
  out.cells = std::move(sorted);
  return out;
}

}  // namespace

Complex full_space(size_t ambient_dim) {
  if (ambient_dim == 0) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");
  Stage s;
  s.n = ambient_dim;
  for (size_t k = 0; k < ambient_dim; ++k) {
    IntVector e(ambient_dim, 0);
    e[k] = 1;
    s.lineality.push_back(std::move(e));
  }
  Stage::StageCell c;
  c.gens.push_back(s.gen_id(unit_t(ambient_dim)));
  c.facets.push_back(s.con_id(unit_t(ambient_dim)));
  s.cells.push_back(std::move(c));
  return finish(s);
}

Complex complex_from_cells(size_t ambient_dim, const std::vector<HPolyhedron>& polys) {
  if (ambient_dim == 0) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");
  const size_t n = ambient_dim;
  std::vector<IntVector> normals;
  for (const auto& p : polys) {
    if (p.ambient_dim() != n) throw Error(ErrorCode::AmbientMismatch, "cell lives in a different ambient dimension");
    if (!lp_feasible(p, ArithmeticMode::big).feasible())
      throw Error(ErrorCode::InfeasiblePolyhedron, "cell is empty");
    for (const auto& e : p.equalities()) normals.push_back(e.normal);
    for (const auto& c : p.inequalities()) normals.push_back(c.normal);
  }
  Stage s;
  s.n = n;
  s.lineality = nullspace_basis(normals, n);
  const auto lin_hom = homogenize(s.lineality);
  const auto pivots = pivots_of(lin_hom);
  for (const auto& p : polys) {
    DoubleDescription<BigInt> dd(n + 1);
    auto lift = [n](const IntVector& a, const Rational& b) {
      // b t - a . w >= 0, scaled to integers
      IntVector h(n + 1);
      for (size_t k = 0; k < n; ++k) h[k] = -a[k] * b.get_den();
      h[n] = b.get_num();
      make_primitive(h);
      return h;
    };
    dd.add(unit_t(n));
    for (const auto& e : p.equalities()) {
      IntVector h = lift(e.normal, e.rhs);
      dd.add(h);
      for (auto& x : h) x = -x;
      dd.add(h);
    }
    for (const auto& c : p.inequalities()) dd.add(lift(c.normal, c.rhs));

    std::set<IntVector> gens;
    auto keep = [&](IntVector v) {
      reduce_modulo(v, lin_hom, pivots);
      if (!is_zero_vector(v)) gens.insert(std::move(v));
    };
    for (const auto& r : dd.rays()) keep(r);
    for (const auto& l : dd.lineality()) {
      IntVector m = l;
      for (auto& x : m) x = -x;
      keep(l);
      keep(std::move(m));
    }
    Stage::StageCell sc;
    std::vector<IntVector> list(gens.begin(), gens.end());
    for (const auto& g : list) sc.gens.push_back(s.gen_id(g));
    std::sort(sc.gens.begin(), sc.gens.end());
    // Facets: constraints with a nonempty, proper, inclusion-maximal tight set.
    std::map<std::vector<size_t>, IntVector> by_tight;
    for (const auto& h : dd.constraints()) {
      std::vector<size_t> tight;
      for (size_t k = 0; k < list.size(); ++k)
        if (sgn(dot(h, list[k])) == 0) tight.push_back(k);
      if (!tight.empty() && tight.size() < list.size()) by_tight.emplace(std::move(tight), h);
    }
    for (const auto& [tight, h] : by_tight) {
      bool maximal = true;
      for (const auto& [other, unused] : by_tight) {
        if (other.size() > tight.size() && std::includes(other.begin(), other.end(), tight.begin(), tight.end())) {
          maximal = false;
          break;
        }
      }
      if (maximal) sc.facets.push_back(s.con_id(h));
    }
    if (list.size() == 1 && !s.lineality.empty()) sc.facets = {s.con_id(unit_t(n))};
    s.cells.push_back(std::move(sc));
  }
  return finish(s);
}

Cell make_cell(const HPolyhedron& poly, ArithmeticMode mode) {
  Cell c;
  c.poly = canonical_form(poly, mode);
  c.dim = dimension(c.poly, mode);
  c.sample = relative_interior_point(c.poly, mode);
  return c;
}

std::optional<Cell> intersect_cells(const Cell& a, const HPolyhedron& b, ArithmeticMode mode) {
  if (a.poly.ambient_dim() != b.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "cells live in different ambient dimensions");
  HPolyhedron joint = a.poly.intersect(b);
  if (!lp_feasible(joint, mode).feasible()) return std::nullopt;
  return make_cell(joint, mode);
}

Complex refine(const Complex& c, const Hypersurface& h, const EngineOptions& opt, EngineStats* stats) {
  if (h.polynomial.num_vars() != c.ambient_dim)
    throw Error(ErrorCode::AmbientMismatch, "hypersurface and complex live in different ambient dimensions");
  Stage s = stage_from(c);
  if (!s.cells.empty()) refine_stage(s, h.polynomial, opt, stats);
  return finish(s);
}

std::vector<size_t> schedule_order(const std::vector<Hypersurface>& hs, Schedule schedule) {
  std::vector<size_t> order(hs.size());
  std::iota(order.begin(), order.end(), 0);
  if (schedule == Schedule::by_cell_count)
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return hs[a].cells.size() < hs[b].cells.size(); });
  return order;
}

Complex compute_prevariety(const std::vector<Hypersurface>& hs, Schedule schedule, const EngineOptions& opt,
                           EngineStats* stats) {
  return compute_prevariety(hs, schedule_order(hs, schedule), opt, stats);
}

Complex compute_prevariety(const std::vector<Hypersurface>& hs, const std::vector<size_t>& order,
                           const EngineOptions& opt, EngineStats* stats) {
  if (hs.empty()) throw Error(ErrorCode::InvalidArgument, "at least one hypersurface is required");
  std::vector<size_t> check = order;
  std::sort(check.begin(), check.end());
  for (size_t i = 0; i < check.size(); ++i)
    if (check.size() != hs.size() || check[i] != i)
      throw Error(ErrorCode::InvalidArgument, "processing order is not a permutation");
  const size_t n = hs[0].polynomial.num_vars();
  Stage s = stage_from(full_space(n));
  for (size_t step = 0; step < order.size(); ++step) {
    const auto& tp = hs[order[step]].polynomial;
    if (tp.num_vars() != n)
      throw Error(ErrorCode::AmbientMismatch, "hypersurfaces live in different ambient dimensions");
    if (!s.cells.empty()) refine_stage(s, tp, opt, stats);
    else if (stats) stats->stage_cells.push_back(0);
    if (opt.progress) opt.progress(step, tp.label, s.cells.size());
  }
  return finish(s);
}

// ---------------------------------------------------------------------------
// Faces

std::vector<Cell> faces(const Cell& cell, ArithmeticMode mode) {
  std::vector<Cell> out;
  std::set<std::string> seen;
  std::vector<HPolyhedron> queue{cell.poly};
  seen.insert(cell.poly.key());
  while (!queue.empty()) {
    HPolyhedron f = std::move(queue.back());
    queue.pop_back();
    out.push_back(make_cell(f, mode));
    const auto& ineqs = f.inequalities();
    for (size_t i = 0; i < ineqs.size(); ++i) {
      HPolyhedron g(f.ambient_dim());
      for (const auto& e : f.equalities()) g.add_equality(e.normal, e.rhs);
      g.add_equality(ineqs[i].normal, ineqs[i].rhs);
      for (size_t j = 0; j < ineqs.size(); ++j)
        if (j != i) g.add_inequality(ineqs[j].normal, ineqs[j].rhs);
      if (!lp_feasible(g, mode).feasible()) continue;
      HPolyhedron canon = canonical_form(g, mode);
      if (seen.insert(canon.key()).second) queue.push_back(std::move(canon));
    }
  }
  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) { return a.poly.key() < b.poly.key(); });
  return out;
}

FVector f_vector(const Complex& c) {
  const size_t n = c.ambient_dim;
  const auto lin_hom = homogenize(c.lineality);
  std::unordered_map<IntVector, uint32_t, VectorHash> ids;
  std::vector<IntVector> table;
  auto id_of = [&](const IntVector& v) {
    auto [it, fresh] = ids.try_emplace(v, static_cast<uint32_t>(table.size()));
    if (fresh) table.push_back(v);
    return it->second;
  };
  std::unordered_map<IdList, int, IdListHash> all;
  for (const auto& cell : c.cells) {
    if (!cell.has_vrep()) throw Error(ErrorCode::InvalidArgument, "f-vector needs generator data");
    const size_t m = cell.generators.size();
    IdList local_ids;
    for (const auto& g : cell.generators) local_ids.push_back(id_of(g));
    std::vector<std::vector<size_t>> tight;
    for (const auto& h : cell.facets) {
      std::vector<size_t> t;
      for (size_t k = 0; k < m; ++k)
        if (sgn(dot(h, cell.generators[k])) == 0) t.push_back(k);
      tight.push_back(std::move(t));
    }
    std::set<std::vector<size_t>> local;
    std::vector<std::vector<size_t>> queue(1);
    for (size_t k = 0; k < m; ++k) queue[0].push_back(k);
    local.insert(queue[0]);
    while (!queue.empty()) {
      std::vector<size_t> f = std::move(queue.back());
      queue.pop_back();
      IdList key;
      bool vertex = false;
      for (size_t k : f) {
        key.push_back(local_ids[k]);
        if (sgn(cell.generators[k][n]) > 0) vertex = true;
      }
      if (!vertex) continue;
      std::sort(key.begin(), key.end());
      all.try_emplace(std::move(key), -1);
      for (const auto& t : tight) {
        std::vector<size_t> g;
        std::set_intersection(f.begin(), f.end(), t.begin(), t.end(), std::back_inserter(g));
        if (g.size() < f.size() && local.insert(g).second) queue.push_back(std::move(g));
      }
    }
  }
  std::map<int, size_t> by_dim;
  for (auto& [key, dim] : all) {
    std::vector<IntVector> rows;
    for (auto id : key) rows.push_back(table[id]);
    rows.insert(rows.end(), lin_hom.begin(), lin_hom.end());
    dim = static_cast<int>(rank_of(std::move(rows))) - 1;
    ++by_dim[dim];
  }
  FVector fv;
  if (by_dim.empty()) return fv;
  fv.min_dim = by_dim.begin()->first;
  fv.counts.assign(static_cast<size_t>(by_dim.rbegin()->first - fv.min_dim + 1), 0);
  for (const auto& [d, k] : by_dim) fv.counts[static_cast<size_t>(d - fv.min_dim)] = k;
  return fv;
}

FVector f_vector_by_lp(const Complex& c, ArithmeticMode mode) {
  std::map<std::string, int> all;
  for (const auto& cell : c.cells)
    for (const auto& f : faces(cell, mode)) all.emplace(f.poly.key(), f.dim);
  std::map<int, size_t> by_dim;
  for (const auto& [key, d] : all) ++by_dim[d];
  FVector fv;
  if (by_dim.empty()) return fv;
  fv.min_dim = by_dim.begin()->first;
  fv.counts.assign(static_cast<size_t>(by_dim.rbegin()->first - fv.min_dim + 1), 0);
  for (const auto& [d, k] : by_dim) fv.counts[static_cast<size_t>(d - fv.min_dim)] = k;
  return fv;
}

bool cell_contains(const Cell& outer, const Cell& inner, ArithmeticMode mode) {
  if (outer.poly.ambient_dim() != inner.poly.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "cells live in different ambient dimensions");
  // inner lies in outer iff every constraint of outer is valid on inner.
  auto max_over_inner = [&](const IntVector& objective) {
    LinearProgram lp;
    lp.num_vars = inner.poly.ambient_dim();
    lp.equalities = inner.poly.equalities();
    lp.inequalities = inner.poly.inequalities();
    lp.objective = objective;
    return solve_lp(lp, mode);
  };
  auto bounded_by = [&](const IntVector& normal, const Rational& rhs) {
    LPSolution s = max_over_inner(normal);
    return s.status == LPStatus::optimal && s.value <= rhs;
  };
  for (const auto& e : outer.poly.equalities()) {
    IntVector neg = e.normal;
    for (auto& x : neg) x = -x;
    if (!bounded_by(e.normal, e.rhs) || !bounded_by(neg, -e.rhs)) return false;
  }
  for (const auto& c : outer.poly.inequalities())
    if (!bounded_by(c.normal, c.rhs)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using json = nlohmann::ordered_json;

json int_vector_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(x.get_si());
    else
      a.push_back(x.get_str());
  }
  return a;
}

IntVector int_vector_from(const json& a) {
  IntVector v;
  for (const auto& x : a) {
    if (x.is_number_integer())
      v.emplace_back(static_cast<long>(x.get<int64_t>()));
    else if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      throw Error(ErrorCode::SchemaMismatch, "integer expected");
  }
  return v;
}

json constraints_json(const std::vector<LinearConstraint>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(json{{"normal", int_vector_json(c.normal)}, {"rhs", to_string(c.rhs)}});
  return a;
}

}  // namespace

std::string complex_json(const Complex& c) {
  json j;
  j["schema"] = "tropcert.complex/1";
  j["ambient_dim"] = c.ambient_dim;
  json lin = json::array();
  for (const auto& l : c.lineality) lin.push_back(int_vector_json(l));
  j["lineality"] = std::move(lin);
  json cells = json::array();
  for (const auto& cell : c.cells) {
    json x;
    x["dim"] = cell.dim;
    x["equalities"] = constraints_json(cell.poly.equalities());
    x["inequalities"] = constraints_json(cell.poly.inequalities());
    json sample = json::array();
    for (const auto& q : cell.sample) sample.push_back(to_string(q));
    x["sample"] = std::move(sample);
    json gens = json::array();
    for (const auto& g : cell.generators) gens.push_back(int_vector_json(g));
    x["generators"] = std::move(gens);
    json facets = json::array();
    for (const auto& f : cell.facets) facets.push_back(int_vector_json(f));
    x["facets"] = std::move(facets);
    cells.push_back(std::move(x));
  }
  j["cells"] = std::move(cells);
  return j.dump();
}

Complex complex_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("complex dump is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("schema", "") != "tropcert.complex/1")
      throw Error(ErrorCode::SchemaMismatch, "unknown complex schema");
    Complex c;
    c.ambient_dim = j.at("ambient_dim").get<size_t>();
    for (const auto& l : j.at("lineality")) c.lineality.push_back(int_vector_from(l));
    for (const auto& x : j.at("cells")) {
      Cell cell;
      cell.dim = x.at("dim").get<int>();
      HPolyhedron poly(c.ambient_dim);
      for (const auto& e : x.at("equalities"))
        poly.add_equality(int_vector_from(e.at("normal")), parse_rational(e.at("rhs").get<std::string>()));
      for (const auto& e : x.at("inequalities"))
        poly.add_inequality(int_vector_from(e.at("normal")), parse_rational(e.at("rhs").get<std::string>()));
      cell.poly = std::move(poly);
      for (const auto& q : x.at("sample")) cell.sample.push_back(parse_rational(q.get<std::string>()));
      for (const auto& g : x.at("generators")) cell.generators.push_back(int_vector_from(g));
      for (const auto& f : x.at("facets")) cell.facets.push_back(int_vector_from(f));
      c.cells.push_back(std::move(cell));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("malformed complex dump: ") + e.what());
  }
}

}  // namespace tropcert
