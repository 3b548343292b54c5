#pragma once

#include <optional>
#include <vector>

#include "ergoflow/logsum.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/torus.hpp"

namespace ergoflow {

// A closed-form summand on a circle piece.  All kinds except Constant have a
// pole; pieces are arranged so the pole sits on a piece boundary when present.
struct Term {
  enum class Kind {
    Constant,   // coeff
    InvDist,    // coeff / ||x - center||
    InvDistSq,  // coeff / ||x - center||^2
    InvGap,     // coeff / (center - x), defined for x < center
    InvGapSq,   // coeff / (center - x)^2
  };
  Kind kind = Kind::Constant;
  Rat coeff;
  Rat center;
};

// Piecewise closed-form function on the circle: sorted breakpoints
// b_0 < ... < b_{K-1} in [0,1), piece i live on [b_i, b_{i+1}) with the last
// piece wrapping to b_0 + 1.  Right-continuous by construction.  An optional
// level mask restricts the function to one level of T x Z2 (it evaluates to
// zero on the other level).
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  static PiecewiseFunction constant(const Rat& c);
  // coeff / ||x - center||^power  on the whole circle (power 1 or 2).
  static PiecewiseFunction inv_dist(const Rat& coeff, const Rat& center, int power);
  // Indicator of a circle set times coeff / ||x - center||^power.
  static PiecewiseFunction indicator_over_dist(const TorusIntervalSet& circle_set,
                                               const Rat& coeff, const Rat& center,
                                               int power);
  // Plain step function: sum of coeff * indicator of [l, r).
  struct Step { Rat left, right; Rat value; };
  static PiecewiseFunction step_function(const std::vector<Step>& steps);
  // A single term supported on [left, right) (wrap allowed), zero elsewhere.
  static PiecewiseFunction from_arc_term(const Rat& left, const Rat& right, Term t);

  PiecewiseFunction& add(const PiecewiseFunction& other);  // pointwise sum

  std::optional<int> level_mask;

  size_t piece_count() const { return breaks_.size(); }
  const std::vector<Rat>& breakpoints() const { return breaks_; }
  const std::vector<Term>& piece_terms(size_t i) const { return pieces_[i]; }

  bool singular_at(const Rat& x) const;
  // Exact value; throws Error("singular-point") at a pole.
  Rat eval(const Rat& x) const;
  // Value honoring the level mask.
  Rat eval_at(const TorusPoint& z) const;

  // Integral over the circle against lambda'; throws if a pole carries mass.
  LogSum integral() const;

  // Total variation over the circle.  Exact; sets *infinite when a pole lies
  // in the closure of a supporting piece.
  Rat variation(bool* infinite) const;

  // Largest |value| over [l, r) computed per-term from monotone envelopes
  // (upper bound, exact at piece endpoints).  Used by grid certificates.
  Rat sup_abs_on(const Rat& l, const Rat& r) const;

 private:
  size_t piece_index(const Rat& x) const;
  void set_breaks(std::vector<Rat> breaks);
  friend PiecewiseFunction merge_breaks(const PiecewiseFunction& a,
                                        const PiecewiseFunction& b);

  std::vector<Rat> breaks_;
  std::vector<std::vector<Term>> pieces_;
};

Rat eval_term(const Term& t, const Rat& x);  // throws on pole

}  // namespace ergoflow
