#include "doctest.h"

#include "desk_params.hpp"
#include "ergoflow/roof.hpp"

using namespace ergoflow;

namespace {

RoofSpec toy_spec() {
  // x0 = x1 = 1/4 gives the cleanest closed-form values for the g part
  RoofSpec spec;
  spec.log_coeff = Rat(60) / Rat(59);
  spec.alpha = AngleRep{Rat(3, 4), 0};
  spec.x0 = Rat(1, 4);
  spec.x1 = Rat(1, 4);
  return spec;
}

}  // namespace

TEST_CASE("roof values in closed form") {
  RoofSpec spec = toy_spec();

  // level-0 points carry no contribution from the extra singularity
  CHECK(eval_roof(spec, TorusPoint(Rat(1, 3), 0), RoofPart::H).is_zero());

  // at distance 1/2 from both singular abscissae, past the one-sided term:
  // 1 + 2 log 2 + 0 + log 2
  LogSum g = eval_roof(spec, TorusPoint(Rat(3, 4), 0), RoofPart::G);
  LogSum expected = LogSum(Rat(1)) + LogSum::log(Rat(2), Rat(3));
  CHECK(g == expected);

  // the one-sided term appears on the other side of x0:
  // 1 + 2 log 8 + log 8 + log 8
  LogSum g_left = eval_roof(spec, TorusPoint(Rat(1, 8), 0), RoofPart::G);
  LogSum expected_left = LogSum(Rat(1)) + LogSum::log(Rat(8), Rat(4));
  CHECK(g_left == expected_left);

  // additivity
  for (int lv = 0; lv <= 1; ++lv) {
    TorusPoint z(Rat(5, 8), lv);
    CHECK(eval_roof(spec, z, RoofPart::F) ==
          eval_roof(spec, z, RoofPart::G) + eval_roof(spec, z, RoofPart::H));
  }

  CHECK_THROWS_AS(eval_roof(spec, TorusPoint(Rat(1, 4), 0), RoofPart::G), Error);
  CHECK_THROWS_AS(eval_roof(spec, TorusPoint(Rat(0), 1), RoofPart::H), Error);
}

TEST_CASE("right-continuous one-sided derivatives") {
  RoofSpec spec = toy_spec();

  // the level-1 derivative of the extra term
  CHECK(h1_deriv(1).eval_at(TorusPoint(Rat(3, 4), 1)) == 4);
  CHECK(h1_deriv(1).eval_at(TorusPoint(Rat(1, 4), 0)) == 0);
  CHECK(h1_deriv(1).eval_at(TorusPoint(Rat(1, 2), 1)) == 2);

  // hand-expanded first derivative at sample points
  auto gamma1 = [&](const Rat& x) {
    Rat u = frac(x - spec.x0);
    Rat total = (u < Rat(1, 2)) ? Rat(Rat(-2) / u) : Rat(Rat(2) / (1 - u));
    if (x < spec.x0) total += 1 / (spec.x0 - x);
    Rat v = frac(x - spec.x1);
    total += (v < Rat(1, 2)) ? Rat(Rat(-1) / v) : Rat(Rat(1) / (1 - v));
    return total;
  };
  PiecewiseFunction gd = gamma_deriv(spec, 1);
  for (long i = 1; i < 32; ++i) {
    Rat x(i, 32);
    if (unit_dist(x - spec.x0) == 0) continue;
    CHECK(gd.eval(x) == gamma1(x));
  }

  // second derivative closed form
  PiecewiseFunction gdd = gamma_deriv(spec, 2);
  Rat x(1, 8);
  Rat d0 = unit_dist(x - spec.x0);
  Rat expected = 2 / (d0 * d0) + 1 / ((spec.x0 - x) * (spec.x0 - x)) +
                 1 / (unit_dist(x - spec.x1) * unit_dist(x - spec.x1));
  CHECK(gdd.eval(x) == expected);

  // full first derivative assembles the two parts
  TorusPoint z(Rat(7, 8), 1);
  CHECK(eval_roof_deriv(spec, z, 1) ==
        gd.eval(z.x) + spec.log_coeff * h1_deriv(1).eval_at(z));
}

TEST_CASE("derivative matches a symmetric difference quotient") {
  RoofSpec spec = toy_spec();
  // (g(x+h) - g(x-h)) / 2h approaches gamma'(x); verified through enclosures
  Rat x(5, 8);
  Rat h(1, 1 << 18);
  LogSum num = eval_roof(spec, TorusPoint(frac(x + h), 0), RoofPart::G) -
               eval_roof(spec, TorusPoint(frac(x - h), 0), RoofPart::G);
  Enclosure quotient = num.scaled(1 / (2 * h)).enclose(256);
  Rat exact = gamma_deriv(spec, 1).eval(x);
  double err = std::abs(quotient.lo_d() - mpq_get_d(exact.get_mpq_t()));
  CHECK(err < 1e-3);
}

TEST_CASE("regions of a desk tower") {
  SkewConfig cfg = SkewConfig::make(testing::desk_schedule_m2());
  auto levels = build_tower_levels(cfg, 2);
  RegionFamily r = build_regions(cfg, levels, 2);

  CHECK(r.window == cfg.checkpoint_dist[0]);
  CHECK(r.f == TorusIntervalSet::arc(Rat(0), r.window, 0));

  // the window regions avoid both ends of the circle
  TorusIntervalSet ends =
      TorusIntervalSet::arc(Rat(0), r.window, 0)
          .combine(TorusIntervalSet::arc(1 - r.window, Rat(1), 0), SetOp::Union);
  for (const TorusIntervalSet* s : {&r.a, &r.b, &r.c, &r.d})
    CHECK(s->combine(ends, SetOp::Intersect).empty());

  // the fresh region carries the symmetric-difference mass on level 1
  const Int& q = cfg.checkpoint_q[1];
  Rat expected = Rat(q) * cfg.checkpoint_dist[1];
  CHECK(r.e.level_length(0) == expected);

  CHECK_THROWS_AS(build_regions(cfg, levels, 1), Error);
}

TEST_CASE("pointwise decomposition identity") {
  SkewConfig cfg = SkewConfig::make(testing::desk_schedule_m2());
  auto levels = build_tower_levels(cfg, 2);
  Rng rng(17);
  std::vector<Rat> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(rng.rat_below_one(1 << 16));
  samples.push_back(Rat(1, 2));  // the convention point
  VerificationReport rep = psi_decompose_check(cfg, levels, 2, samples);
  CHECK(rep.all_passed());
}

TEST_CASE("integral building block and centering constant bounds") {
  // integral of 1/x over [1/8, 1/4)
  PiecewiseFunction block = PiecewiseFunction::indicator_over_dist(
      TorusIntervalSet::arc(Rat(1, 8), Rat(1, 4), 0), Rat(1), Rat(0), 1);
  CHECK(block.integral() == LogSum::log(Rat(2)));

  SkewConfig cfg = SkewConfig::make(testing::desk_schedule_m2());
  auto levels = build_tower_levels(cfg, 2);
  LogSum phi = phi_constant(cfg, levels, 2);

  // two-sided bound with the top digit in place of the cap
  DigitSchedule padded = padded_schedule(cfg.schedule, 6);
  Int a_top = padded.digits[4];  // digit after the top checkpoint
  Convergent prev_next = convergent_at(padded, 3);
  const Int& q_top = cfg.checkpoint_q[1];
  LogSum lo = LogSum::log(Rat(q_top), Rat(1) / (2 * (Rat(a_top) + 2))) -
              LogSum(Rat(18) * Rat(prev_next.q));
  LogSum hi = LogSum::log(Rat(q_top), Rat(4) / Rat(a_top)) +
              LogSum(Rat(18) * Rat(prev_next.q));
  CHECK((phi - lo).ge_zero() == Verdict::True);
  CHECK((hi - phi).ge_zero() == Verdict::True);
}
