#pragma once

// Double description method for polyhedral cones {x : h . x >= 0}.
//
// The cone is kept as lineality basis + extreme rays modulo the lineality.
// Each ray carries its zero set over the constraint list, and adjacency is
// decided combinatorially: rays p, q are adjacent iff no third ray vanishes
// on every constraint that vanishes on both.

#include <vector>

#include "tropcert/arith.hpp"
#include "tropcert/bits.hpp"

namespace tropcert {

template <class Int>
size_t rank_in_place(std::vector<std::vector<Int>>& rows) {
  if (rows.empty()) return 0;
  const size_t cols = rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      const Int a = rows[r][c], b = rows[i][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] = rows[i][j] * a - rows[r][j] * b;
      make_primitive(rows[i]);
    }
    ++r;
  }
  return r;
}

template <class Int>
class DoubleDescription {
 public:
  using Vec = std::vector<Int>;

  // The whole space R^dim.
  explicit DoubleDescription(size_t dim) : dim_(dim) {
    for (size_t i = 0; i < dim; ++i) {
      Vec e(dim, Int(0));
      e[i] = 1;
      lineality_.push_back(std::move(e));
    }
  }

  // A cone given by generators and a constraint list that defines it.
  DoubleDescription(size_t dim, std::vector<Vec> rays, std::vector<Vec> lineality,
                    std::vector<Vec> constraints)
      : dim_(dim), rays_(std::move(rays)), lineality_(std::move(lineality)) {
    zeros_.resize(rays_.size());
    for (auto& h : constraints) {
      size_t idx = constraints_.size();
      for (size_t r = 0; r < rays_.size(); ++r)
        if (sgn(dot(h, rays_[r])) == 0) zeros_[r].set(idx);
      constraints_.push_back(std::move(h));
    }
  }

  size_t dim() const { return dim_; }
  const std::vector<Vec>& rays() const { return rays_; }
  const std::vector<Bits>& zero_sets() const { return zeros_; }
  const std::vector<Vec>& lineality() const { return lineality_; }
  const std::vector<Vec>& constraints() const { return constraints_; }

  // Intersects with {h . x >= 0}; returns the index of h in constraints().
  size_t add(Vec h) {
    const size_t idx = constraints_.size();
    constraints_.push_back(h);

    for (size_t li = 0; li < lineality_.size(); ++li) {
      Int hl = dot(h, lineality_[li]);
      if (sgn(hl) == 0) continue;
      Vec l = std::move(lineality_[li]);
      lineality_.erase(lineality_.begin() + li);
      if (sgn(hl) < 0) {
        for (auto& x : l) x = -x;
        hl = -hl;
      }
      for (auto& other : lineality_) project(other, h, l, hl);
      for (size_t r = 0; r < rays_.size(); ++r) {
        project(rays_[r], h, l, hl);
        zeros_[r].set(idx);
      }
      Bits z;
      for (size_t k = 0; k < idx; ++k) z.set(k);
      rays_.push_back(std::move(l));
      zeros_.push_back(std::move(z));
      return idx;
    }

    std::vector<Int> val(rays_.size());
    std::vector<size_t> pos, neg;
    for (size_t r = 0; r < rays_.size(); ++r) {
      val[r] = dot(h, rays_[r]);
      int s = sgn(val[r]);
      if (s > 0)
        pos.push_back(r);
      else if (s < 0)
        neg.push_back(r);
      else
        zeros_[r].set(idx);
    }
    if (neg.empty()) return idx;

    std::vector<Vec> new_rays;
    std::vector<Bits> new_zeros;
    if (!pos.empty()) {
      size_t need = 0;
      {
        std::vector<Vec> m = rays_;
        m.insert(m.end(), lineality_.begin(), lineality_.end());
        size_t d = rank_in_place(m) - lineality_.size();
        need = d >= 2 ? d - 2 : 0;
      }
      for (size_t p : pos) {
        for (size_t q : neg) {
          Bits common = zeros_[p] & zeros_[q];
          if (common.count() < need) continue;
          bool adjacent = true;
          for (size_t r = 0; r < rays_.size() && adjacent; ++r) {
            if (r == p || r == q) continue;
            if (common.subset_of(zeros_[r])) adjacent = false;
          }
          if (!adjacent) continue;
          Vec v(dim_);
          for (size_t j = 0; j < dim_; ++j) v[j] = val[p] * rays_[q][j] - val[q] * rays_[p][j];
          make_primitive(v);
          common.set(idx);
          new_rays.push_back(std::move(v));
          new_zeros.push_back(std::move(common));
        }
      }
    }
    std::vector<Vec> kept;
    std::vector<Bits> kept_zeros;
    for (size_t r = 0; r < rays_.size(); ++r) {
      if (sgn(val[r]) >= 0) {
        kept.push_back(std::move(rays_[r]));
        kept_zeros.push_back(std::move(zeros_[r]));
      }
    }
    for (size_t k = 0; k < new_rays.size(); ++k) {
      kept.push_back(std::move(new_rays[k]));
      kept_zeros.push_back(std::move(new_zeros[k]));
    }
    rays_ = std::move(kept);
    zeros_ = std::move(kept_zeros);
    return idx;
  }

 private:
  // v <- hl * v - (h . v) * l, which lies in {h . x = 0}.
  void project(Vec& v, const Vec& h, const Vec& l, const Int& hl) {
    Int hv = dot(h, v);
    if (sgn(hv) == 0) return;
    for (size_t j = 0; j < dim_; ++j) v[j] = hl * v[j] - hv * l[j];
    make_primitive(v);
  }

  size_t dim_;
  std::vector<Vec> rays_;
  std::vector<Bits> zeros_;
  std::vector<Vec> lineality_;
  std::vector<Vec> constraints_;
};

}  // namespace tropcert
