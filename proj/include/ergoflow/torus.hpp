#pragma once

#include <string>
#include <vector>

#include "ergoflow/rational.hpp"

namespace ergoflow {

struct TorusPoint {
  Rat x;      // in [0,1)
  int level;  // 0 or 1

  TorusPoint() : x(0), level(0) {}
  TorusPoint(Rat x_, int level_) : x(frac(x_)), level(level_) {}
};

// || x - y || on the circle.
Rat circle_dist(const Rat& x, const Rat& y);

// Product metric on T x Z2: || x - y || plus 1 when the levels differ.
Rat product_dist(const TorusPoint& a, const TorusPoint& b);

enum class SetOp { Union, Intersect, Difference, SymDiff };

// Finite disjoint union of half-open arcs [left, right) x {level} with exact
// rational endpoints.  Canonical form: arcs split at 0, sorted by
// (level, left), adjacent arcs merged; the reported component count re-merges
// the split halves of arcs passing through 0.
class TorusIntervalSet {
 public:
  struct Arc {
    Rat left, right;  // 0 <= left < right <= 1 in canonical storage
    int level;
  };

  TorusIntervalSet() = default;

  // Single arc [left, right) on one level; wrapping through 1 == 0 is allowed
  // (right may exceed 1, or right < left meaning wrap).
  static TorusIntervalSet arc(const Rat& left, const Rat& right, int level);
  // Same base arc on both levels.
  static TorusIntervalSet arc_both_levels(const Rat& left, const Rat& right);
  // Union of many (possibly overlapping, possibly wrapping) arcs in one pass.
  struct RawArc { Rat left, right; int level; };
  static TorusIntervalSet union_arcs(const std::vector<RawArc>& raw);
  // A full level, or the whole space.
  static TorusIntervalSet full_level(int level);
  static TorusIntervalSet full_space();

  const std::vector<Arc>& components() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }

  // Normalized measure (each level carries mass 1/2).
  Rat measure() const;
  // Plain length of the level's arcs (lambda' of the projection per level).
  Rat level_length(int level) const;

  // Circle components per level, merging halves split at 0.
  size_t component_count() const;

  bool contains(const TorusPoint& p) const;

  TorusIntervalSet combine(const TorusIntervalSet& other, SetOp op) const;
  TorusIntervalSet complement() const;  // within T x Z2
  TorusIntervalSet translate(const Rat& shift) const;
  // Swap the two levels (the involution (x,j) -> (x,j+1)).
  TorusIntervalSet swap_levels() const;
  // Keep only the given level.
  TorusIntervalSet restrict_level(int level) const;
  // Projection to the circle: arcs of any level, returned on level 0.
  TorusIntervalSet project() const;

  // True iff the open interval (left, right) x {level} is contained in the
  // set; for half-open unions this coincides with containment of
  // [left, right).
  bool contains_open_arc(const Rat& left, const Rat& right, int level) const;

  bool operator==(const TorusIntervalSet& o) const { return arcs_ == o.arcs_; }
  bool operator!=(const TorusIntervalSet& o) const { return !(*this == o); }

  // Endpoints (as circle points) at which the indicator of the set restricted
  // to `level` is discontinuous.
  std::vector<Rat> discontinuities(int level) const;

  std::string to_json() const;

 private:
  void insert_raw(Rat left, Rat right, int level);  // splits wraps
  void canonicalize();

  std::vector<Arc> arcs_;
};

inline bool operator==(const TorusIntervalSet::Arc& a, const TorusIntervalSet::Arc& b) {
  return a.level == b.level && a.left == b.left && a.right == b.right;
}

TorusIntervalSet set_combine(const TorusIntervalSet& a, const TorusIntervalSet& b, SetOp op);
TorusIntervalSet set_translate(const TorusIntervalSet& s, const Rat& shift);

}  // namespace ergoflow
