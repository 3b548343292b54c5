#include "ergoflow/piecewise.hpp"

#include <algorithm>
#include <map>

namespace ergoflow {

Rat eval_term(const Term& t, const Rat& x) {
  switch (t.kind) {
    case Term::Kind::Constant:
      return t.coeff;
    case Term::Kind::InvDist: {
      Rat d = unit_dist(x - t.center);
      if (d == 0) throw Error("singular-point", "pole of 1/||x-a||");
      return t.coeff / d;
    }
    case Term::Kind::InvDistSq: {
      Rat d = unit_dist(x - t.center);
      if (d == 0) throw Error("singular-point", "pole of 1/||x-a||^2");
      return t.coeff / (d * d);
    }
    case Term::Kind::InvGap: {
      Rat g = t.center - x;
      if (g <= 0) throw Error("singular-point", "gap term evaluated past its pole");
      return t.coeff / g;
    }
    case Term::Kind::InvGapSq: {
      Rat g = t.center - x;
      if (g <= 0) throw Error("singular-point", "gap term evaluated past its pole");
      return t.coeff / (g * g);
    }
  }
  throw Error("internal", "unknown term kind");
}

void PiecewiseFunction::set_breaks(std::vector<Rat> breaks) {
  breaks.push_back(Rat(0));  // anchor at 0 so no piece wraps past 1
  for (Rat& b : breaks) b = frac(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks_ = std::move(breaks);
  pieces_.assign(breaks_.size(), {});
}

size_t PiecewiseFunction::piece_index(const Rat& x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.begin()) return breaks_.size() - 1;
  return static_cast<size_t>(std::distance(breaks_.begin(), it)) - 1;
}

PiecewiseFunction PiecewiseFunction::constant(const Rat& c) {
  PiecewiseFunction f;
  f.set_breaks({});
  if (c != 0)
    for (auto& p : f.pieces_) p.push_back(Term{Term::Kind::Constant, c, Rat(0)});
  return f;
}

PiecewiseFunction PiecewiseFunction::inv_dist(const Rat& coeff, const Rat& center,
                                              int power) {
  PiecewiseFunction f;
  Rat c0 = frac(center);
  f.set_breaks({c0, frac(c0 + Rat(1, 2))});
  Term t{power == 1 ? Term::Kind::InvDist : Term::Kind::InvDistSq, coeff, c0};
  for (auto& p : f.pieces_) p.push_back(t);
  return f;
}

PiecewiseFunction PiecewiseFunction::indicator_over_dist(
    const TorusIntervalSet& circle_set, const Rat& coeff, const Rat& center,
    int power) {
  PiecewiseFunction f;
  Rat c0 = frac(center);
  std::vector<Rat> breaks{c0, frac(c0 + Rat(1, 2))};
  TorusIntervalSet proj = circle_set.project();
  for (const auto& arc : proj.components()) {
    breaks.push_back(arc.left);
    if (arc.right < 1) breaks.push_back(arc.right);
  }
  f.set_breaks(std::move(breaks));
  Term t{power == 1 ? Term::Kind::InvDist : Term::Kind::InvDistSq, coeff, c0};
  for (size_t i = 0; i < f.breaks_.size(); ++i) {
    if (proj.contains(TorusPoint(f.breaks_[i], 0))) f.pieces_[i].push_back(t);
  }
  return f;
}

PiecewiseFunction PiecewiseFunction::step_function(const std::vector<Step>& steps) {
  PiecewiseFunction f;
  std::vector<Rat> breaks;
  for (const Step& s : steps) {
    breaks.push_back(frac(s.left));
    breaks.push_back(frac(s.right));
  }
  f.set_breaks(std::move(breaks));
  for (size_t i = 0; i < f.breaks_.size(); ++i) {
    Rat total = 0;
    const Rat& x = f.breaks_[i];
    for (const Step& s : steps) {
      Rat l = frac(s.left), r = frac(s.right);
      bool inside = (l < r) ? (x >= l && x < r) : (x >= l || x < r);  // wrap
      if (l == r) inside = false;
      if (inside) total += s.value;
    }
    if (total != 0)
      f.pieces_[i].push_back(Term{Term::Kind::Constant, total, Rat(0)});
  }
  return f;
}

PiecewiseFunction PiecewiseFunction::from_arc_term(const Rat& left, const Rat& right,
                                                   Term t) {
  PiecewiseFunction f;
  TorusIntervalSet support = TorusIntervalSet::arc(left, right, 0);
  std::vector<Rat> breaks{frac(left), frac(right)};
  if (t.kind == Term::Kind::InvDist || t.kind == Term::Kind::InvDistSq) {
    breaks.push_back(frac(t.center));
    breaks.push_back(frac(t.center + Rat(1, 2)));
  }
  f.set_breaks(std::move(breaks));
  for (size_t i = 0; i < f.breaks_.size(); ++i)
    if (support.contains(TorusPoint(f.breaks_[i], 0))) f.pieces_[i].push_back(t);
  return f;
}

PiecewiseFunction merge_breaks(const PiecewiseFunction& a, const PiecewiseFunction& b) {
  PiecewiseFunction f;
  std::vector<Rat> breaks = a.breaks_;
  breaks.insert(breaks.end(), b.breaks_.begin(), b.breaks_.end());
  f.set_breaks(std::move(breaks));
  for (size_t i = 0; i < f.breaks_.size(); ++i) {
    const Rat& x = f.breaks_[i];
    const auto& ta = a.pieces_[a.piece_index(x)];
    const auto& tb = b.pieces_[b.piece_index(x)];
    f.pieces_[i] = ta;
    f.pieces_[i].insert(f.pieces_[i].end(), tb.begin(), tb.end());
  }
  f.level_mask = a.level_mask;
  return f;
}

PiecewiseFunction& PiecewiseFunction::add(const PiecewiseFunction& other) {
  if (level_mask != other.level_mask)
    throw Error("unsupported", "cannot add functions with different level masks");
  *this = merge_breaks(*this, other);
  return *this;
}

bool PiecewiseFunction::singular_at(const Rat& x) const {
  for (const Term& t : pieces_[piece_index(x)]) {
    switch (t.kind) {
      case Term::Kind::Constant:
        break;
      case Term::Kind::InvDist:
      case Term::Kind::InvDistSq:
        if (unit_dist(x - t.center) == 0) return true;
        break;
      case Term::Kind::InvGap:
      case Term::Kind::InvGapSq:
        if (t.center - x <= 0) return true;
        break;
    }
  }
  return false;
}

Rat PiecewiseFunction::eval(const Rat& x) const {
  Rat total = 0;
  for (const Term& t : pieces_[piece_index(x)]) total += eval_term(t, x);
  return total;
}

Rat PiecewiseFunction::eval_at(const TorusPoint& z) const {
  if (level_mask && z.level != *level_mask) return Rat(0);
  return eval(z.x);
}

namespace {

using Kind = Term::Kind;

// Consolidate same-kind same-center terms, dropping cancellations.
std::vector<Term> consolidate(const std::vector<Term>& terms) {
  std::map<std::pair<int, Rat>, Rat> acc;
  for (const Term& t : terms) acc[{static_cast<int>(t.kind), t.center}] += t.coeff;
  std::vector<Term> out;
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    out.push_back(Term{static_cast<Kind>(key.first), c, key.second});
  }
  return out;
}

// Integral of a single term over [l, r) inside [0,1), pole-free or throwing.
LogSum term_integral(const Term& t, const Rat& l, const Rat& r) {
  LogSum out;
  switch (t.kind) {
    case Kind::Constant:
      out += Rat(t.coeff * (r - l));
      return out;
    case Kind::InvDist:
    case Kind::InvDistSq: {
      // split at points congruent to center or center + 1/2
      std::vector<Rat> cuts{l, r};
      for (int k = -1; k <= 1; ++k) {
        Rat p1 = t.center + k;
        Rat p2 = t.center + Rat(1, 2) + k;
        if (p1 > l && p1 < r) cuts.push_back(p1);
        if (p2 > l && p2 < r) cuts.push_back(p2);
      }
      std::sort(cuts.begin(), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rat& s = cuts[i];
        const Rat& e = cuts[i + 1];
        if (e <= s) continue;
        Rat us = frac(s - t.center);
        Rat ue = us + (e - s);
        if (us < Rat(1, 2)) {
          if (us == 0) throw Error("infinite-integral", "pole carries mass");
          if (t.kind == Kind::InvDist)
            out += LogSum::log(ue / us, t.coeff);
          else
            out += Rat(t.coeff * (1 / us - 1 / ue));
        } else {
          Rat vs = 1 - us, ve = 1 - ue;  // distances to the far lift
          if (ve == 0) throw Error("infinite-integral", "pole carries mass");
          if (t.kind == Kind::InvDist)
            out += LogSum::log(vs / ve, t.coeff);
          else
            out += Rat(t.coeff * (1 / ve - 1 / vs));
        }
      }
      return out;
    }
    case Kind::InvGap: {
      Rat gl = t.center - l, gr = t.center - r;
      if (gr < 0 || gl <= 0) throw Error("domain-error", "gap term off its support");
      if (gr == 0) throw Error("infinite-integral", "pole carries mass");
      out += LogSum::log(gl / gr, t.coeff);
      return out;
    }
    case Kind::InvGapSq: {
      Rat gl = t.center - l, gr = t.center - r;
      if (gr <= 0 || gl <= 0) throw Error("infinite-integral", "pole carries mass");
      out += Rat(t.coeff * (1 / gr - 1 / gl));
      return out;
    }
  }
  throw Error("internal", "unknown term kind");
}

}  // namespace

LogSum PiecewiseFunction::integral() const {
  LogSum total;
  for (size_t i = 0; i < breaks_.size(); ++i) {
    Rat l = breaks_[i];
    Rat r = (i + 1 < breaks_.size()) ? breaks_[i + 1] : breaks_[0] + 1;
    for (const Term& t : consolidate(pieces_[i])) total += term_integral(t, l, r);
  }
  if (level_mask) total = total.scaled(Rat(1, 2));  // the masked level carries mass 1/2
  return total;
}

Rat PiecewiseFunction::variation(bool* infinite) const {
  if (infinite) *infinite = false;
  const size_t K = breaks_.size();
  Rat var = 0;

  // Right-limit value at a piece start and left-limit at a piece end.
  auto value_at = [&](size_t piece, const Rat& x) -> Rat {
    Rat total = 0;
    for (const Term& t : consolidate(pieces_[piece])) total += eval_term(t, x);
    return total;
  };

  std::vector<Rat> start_vals(K), end_vals(K);
  for (size_t i = 0; i < K; ++i) {
    Rat l = breaks_[i];
    Rat r = (i + 1 < K) ? breaks_[i + 1] : breaks_[0] + 1;
    auto terms = consolidate(pieces_[i]);
    size_t heavy = 0;
    for (const Term& t : terms)
      if (t.kind != Kind::Constant) ++heavy;
    if (heavy > 1)
      throw Error("unsupported", "variation needs at most one singular term per piece");

    // poles in the closure of a supported piece make the variation infinite
    for (const Term& t : terms) {
      bool pole = false;
      if (t.kind == Kind::InvDist || t.kind == Kind::InvDistSq) {
        Rat dl = unit_dist(l - t.center);
        Rat dr = unit_dist(r - t.center);
        pole = (dl == 0) || (dr == 0) ||
               (frac(t.center) > l && frac(t.center) < r) ||
               (frac(t.center) + 1 > l && frac(t.center) + 1 < r);
      } else if (t.kind == Kind::InvGap || t.kind == Kind::InvGapSq) {
        pole = (t.center - r < 0) || (t.center - r == 0) || (t.center - l <= 0);
      }
      if (pole) {
        if (infinite) { *infinite = true; return Rat(0); }
        throw Error("infinite-variation", "pole in the closure of a supported piece");
      }
    }

    // interior kink of the circle distance: x = center + 1/2
    std::vector<Rat> cuts{l, r};
    for (const Term& t : terms) {
      if (t.kind == Kind::InvDist || t.kind == Kind::InvDistSq) {
        for (int k = -1; k <= 1; ++k) {
          Rat p = t.center + Rat(1, 2) + k;
          if (p > l && p < r) cuts.push_back(p);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
      if (cuts[j + 1] <= cuts[j]) continue;
      var += rat_abs(value_at(i, frac(cuts[j + 1])) - value_at(i, cuts[j]));
    }
    start_vals[i] = value_at(i, l);
    end_vals[i] = value_at(i, frac(r));
  }
  for (size_t i = 0; i < K; ++i) {
    size_t prev = (i + K - 1) % K;
    var += rat_abs(start_vals[i] - end_vals[prev]);
  }
  return var;
}

Rat PiecewiseFunction::sup_abs_on(const Rat& l, const Rat& r) const {
  if (l > r) {  // wrap: max over the two halves
    Rat a = sup_abs_on(l, Rat(1));
    Rat b = sup_abs_on(Rat(0), r);
    return std::max(a, b);
  }
  std::vector<Rat> cuts{l, r};
  for (const Rat& b : breaks_)
    if (b > l && b < r) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  Rat best = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rat& s = cuts[i];
    const Rat& e = cuts[i + 1];
    if (e <= s) continue;
    Rat bound = 0;
    for (const Term& t : consolidate(pieces_[piece_index(s)])) {
      switch (t.kind) {
        case Kind::Constant:
          bound += rat_abs(t.coeff);
          break;
        case Kind::InvDist:
        case Kind::InvDistSq: {
          Rat ds = unit_dist(s - t.center);
          Rat de = unit_dist(e - t.center);
          Rat dmin = std::min(ds, de);
          bool pole_inside = (frac(t.center) > s && frac(t.center) < e);
          if (dmin == 0 || pole_inside)
            throw Error("singular-point", "pole inside certificate interval");
          bound += t.kind == Kind::InvDist ? Rat(rat_abs(t.coeff) / dmin)
                                           : Rat(rat_abs(t.coeff) / (dmin * dmin));
          break;
        }
        case Kind::InvGap:
        case Kind::InvGapSq: {
          Rat g = t.center - e;
          if (g <= 0) throw Error("singular-point", "pole inside certificate interval");
          bound += t.kind == Kind::InvGap ? Rat(rat_abs(t.coeff) / g)
                                          : Rat(rat_abs(t.coeff) / (g * g));
          break;
        }
      }
    }
    best = std::max(best, bound);
  }
  return best;
}

}  // namespace ergoflow
