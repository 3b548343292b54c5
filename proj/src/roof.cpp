#include "ergoflow/roof.hpp"

namespace ergoflow {

RoofSpec RoofSpec::from_config(const SkewConfig& cfg, const Rat& a) {
  if (a <= 1) throw Error("invalid-roof", "the extra-singularity weight must exceed 1");
  RoofSpec spec;
  spec.log_coeff = a;
  spec.alpha = cfg.alpha;
  spec.x0 = 1 - cfg.alpha.value;
  Rat l = slit_length(cfg, cfg.effective_s());
  spec.x1 = frac(l - cfg.alpha.value);
  return spec;
}

std::vector<TorusPoint> RoofSpec::singularities() const {
  return {TorusPoint(x0, 0), TorusPoint(x0, 1), TorusPoint(x1, 0),
          TorusPoint(x1, 1), TorusPoint(Rat(0), 1)};
}

LogSum eval_roof(const RoofSpec& spec, const TorusPoint& z, RoofPart part) {
  LogSum out;
  if (part == RoofPart::F || part == RoofPart::G) {
    Rat d0 = unit_dist(z.x - spec.x0);
    Rat d1 = unit_dist(z.x - spec.x1);
    if (d0 == 0 || d1 == 0)
      throw Error("singular-point", "roof evaluated at a singularity");
    out += Rat(1);
    out -= LogSum::log(d0, Rat(2));       // |log d| = -log d for d <= 1/2
    Rat gap = spec.x0 - z.x;              // representative convention
    if (gap > 0) out -= LogSum::log(gap);
    out -= LogSum::log(d1);
  }
  if (part == RoofPart::F || part == RoofPart::H) {
    if (z.level == 1) {
      Rat d = unit_dist(z.x);
      if (d == 0) throw Error("singular-point", "roof evaluated at a singularity");
      out -= LogSum::log(d, spec.log_coeff);
    }
  }
  return out;
}

PiecewiseFunction gamma_deriv(const RoofSpec& spec, int order) {
  using K = Term::Kind;
  const Rat& x0 = spec.x0;
  const Rat& x1 = spec.x1;
  PiecewiseFunction f;
  if (order == 1) {
    f = PiecewiseFunction::from_arc_term(x0, x0 + Rat(1, 2),
                                         Term{K::InvDist, Rat(-2), x0});
    f.add(PiecewiseFunction::from_arc_term(x0 + Rat(1, 2), x0 + 1,
                                           Term{K::InvDist, Rat(2), x0}));
    f.add(PiecewiseFunction::from_arc_term(Rat(0), x0, Term{K::InvGap, Rat(1), x0}));
    f.add(PiecewiseFunction::from_arc_term(x1, x1 + Rat(1, 2),
                                           Term{K::InvDist, Rat(-1), x1}));
    f.add(PiecewiseFunction::from_arc_term(x1 + Rat(1, 2), x1 + 1,
                                           Term{K::InvDist, Rat(1), x1}));
  } else if (order == 2) {
    f = PiecewiseFunction::inv_dist(Rat(2), x0, 2);
    f.add(PiecewiseFunction::from_arc_term(Rat(0), x0, Term{K::InvGapSq, Rat(1), x0}));
    f.add(PiecewiseFunction::inv_dist(Rat(1), x1, 2));
  } else {
    throw Error("unsupported", "derivative order must be 1 or 2");
  }
  return f;
}

std::vector<PiecewiseFunction> gamma_deriv_split(const RoofSpec& spec) {
  using K = Term::Kind;
  const Rat& x0 = spec.x0;
  const Rat& x1 = spec.x1;
  std::vector<PiecewiseFunction> parts;
  parts.push_back(PiecewiseFunction::from_arc_term(x0, x0 + Rat(1, 2),
                                                   Term{K::InvDist, Rat(-2), x0}));
  parts.push_back(PiecewiseFunction::from_arc_term(x0 + Rat(1, 2), x0 + 1,
                                                   Term{K::InvDist, Rat(2), x0}));
  parts.push_back(
      PiecewiseFunction::from_arc_term(Rat(0), x0, Term{K::InvGap, Rat(1), x0}));
  parts.push_back(PiecewiseFunction::from_arc_term(x1, x1 + Rat(1, 2),
                                                   Term{K::InvDist, Rat(-1), x1}));
  parts.push_back(PiecewiseFunction::from_arc_term(x1 + Rat(1, 2), x1 + 1,
                                                   Term{K::InvDist, Rat(1), x1}));
  return parts;
}

PiecewiseFunction h1_deriv(int order) {
  using K = Term::Kind;
  PiecewiseFunction f;
  if (order == 1) {
    f = PiecewiseFunction::from_arc_term(Rat(0), Rat(1, 2),
                                         Term{K::InvDist, Rat(-1), Rat(0)});
    f.add(PiecewiseFunction::from_arc_term(Rat(1, 2), Rat(1),
                                           Term{K::InvDist, Rat(1), Rat(0)}));
  } else if (order == 2) {
    f = PiecewiseFunction::inv_dist(Rat(1), Rat(0), 2);
  } else {
    throw Error("unsupported", "derivative order must be 1 or 2");
  }
  f.level_mask = 1;
  return f;
}

Rat eval_roof_deriv(const RoofSpec& spec, const TorusPoint& z, int order,
                    RoofPart part) {
  Rat out = 0;
  if (part == RoofPart::F || part == RoofPart::G)
    out += gamma_deriv(spec, order).eval(z.x);
  if (part == RoofPart::F || part == RoofPart::H)
    out += spec.log_coeff * h1_deriv(order).eval_at(z);
  return out;
}

RegionFamily build_regions(const SkewConfig& cfg,
                           const std::vector<TowerLevel>& levels, size_t m) {
  if (m <= 1) throw Error("region-undefined", "regions need a level m > 1");
  if (levels.size() <= m)
    throw Error("region-undefined", "tower levels not built through m");
  const TorusIntervalSet& u_prev = levels[m - 1].u;
  const TorusIntervalSet& u_cur = levels[m].u;
  RegionFamily r;
  r.window = cfg.checkpoint_dist[m - 2];  // ||q_{n_{m-1}} alpha||

  TorusIntervalSet win1 = TorusIntervalSet::arc(r.window, Rat(1, 2), 1);
  TorusIntervalSet win2 = TorusIntervalSet::arc(Rat(1, 2), 1 - r.window, 1);
  TorusIntervalSet level1 = TorusIntervalSet::full_level(1);

  r.a = u_prev.combine(win1, SetOp::Intersect).project();
  r.b = u_prev.combine(win2, SetOp::Intersect).project();
  r.c = u_cur.combine(u_prev, SetOp::Difference).combine(win1, SetOp::Intersect).project();
  r.d = u_prev.combine(u_cur, SetOp::Difference).combine(win2, SetOp::Intersect).project();
  r.e = u_cur.combine(u_prev, SetOp::SymDiff).combine(level1, SetOp::Intersect).project();
  r.f = TorusIntervalSet::arc(Rat(0), r.window, 0);
  return r;
}

PiecewiseFunction phi_function(const TowerLevel& level_m) {
  TorusIntervalSet u1 = level_m.u.restrict_level(1).project();
  TorusIntervalSet lo = u1.combine(TorusIntervalSet::arc(Rat(0), Rat(1, 2), 0),
                                   SetOp::Intersect);
  TorusIntervalSet hi = u1.combine(TorusIntervalSet::arc(Rat(1, 2), Rat(1), 0),
                                   SetOp::Intersect);
  PiecewiseFunction f = PiecewiseFunction::indicator_over_dist(lo, Rat(-1), Rat(0), 1);
  f.add(PiecewiseFunction::indicator_over_dist(hi, Rat(1), Rat(0), 1));
  return f;
}

namespace {

Rat decomposition_value(const RegionFamily& r, const Rat& x) {
  Rat d = unit_dist(x);
  if (d == 0) throw Error("singular-point", "decomposition undefined at 0");
  Rat count = 0;
  auto ind = [&](const TorusIntervalSet& s) {
    return s.contains(TorusPoint(x, 0)) ? Rat(1) : Rat(0);
  };
  count -= ind(r.f);
  count += ind(r.e);
  count -= ind(r.a);
  count -= 2 * ind(r.c);
  count += ind(r.b);
  count -= 2 * ind(r.d);
  return count / d;
}

}  // namespace

VerificationReport psi_decompose_check(const SkewConfig& cfg,
                                       const std::vector<TowerLevel>& levels,
                                       size_t m, const std::vector<Rat>& samples) {
  RegionFamily regions = build_regions(cfg, levels, m);
  PiecewiseFunction phi = phi_function(levels[m]);

  VerificationReport rep;
  rep.title = "pointwise decomposition of the level-1 derivative transfer";

  std::vector<Rat> points = samples;
  for (const TorusIntervalSet* s :
       {&regions.a, &regions.b, &regions.c, &regions.d, &regions.e, &regions.f}) {
    for (const auto& arc : s->components()) {
      points.push_back(arc.left);
      if (arc.right < 1) points.push_back(arc.right);
    }
  }

  size_t mismatches = 0, checked = 0, skipped = 0;
  for (const Rat& x0 : points) {
    Rat x = frac(x0);
    if (x == 0) { ++skipped; continue; }  // excluded point
    ++checked;
    Rat lhs = phi.eval(x);
    Rat rhs = decomposition_value(regions, x);
    if (lhs != rhs) ++mismatches;
  }
  rep.add_exact("pointwise equality at " + std::to_string(checked) + " points",
                Rat(static_cast<long>(mismatches)), Rat(0),
                -Rat(static_cast<long>(mismatches)),
                skipped ? std::to_string(skipped) + " samples at 0 skipped" : "");
  return rep;
}

LogSum phi_constant(const SkewConfig& cfg, const std::vector<TowerLevel>& levels,
                    size_t m) {
  if (m <= 1) throw Error("region-undefined", "constant needs a level m > 1");
  Rat window = cfg.checkpoint_dist[m - 2];
  PiecewiseFunction integrand = phi_function(levels[m]);
  integrand.add(PiecewiseFunction::indicator_over_dist(
      TorusIntervalSet::arc(Rat(0), window, 0), Rat(1), Rat(0), 1));
  LogSum phi = integrand.integral();
  phi -= LogSum::log(window);
  return phi;
}

}  // namespace ergoflow
