#include "doctest.h"

#include "ergoflow/skew.hpp"

using namespace ergoflow;

namespace {

// toy system: rotation by 4/7, single checkpoint at index 2 (q_2 = 2)
SkewConfig toy_config() {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3)};
  s.even_checkpoints = {2};
  return SkewConfig::make(s, std::nullopt, AngleRep{Rat(4, 7), 3});
}

}  // namespace

TEST_CASE("slit interval") {
  SkewConfig cfg = toy_config();
  CHECK(cfg.checkpoint_q[0] == 2);
  CHECK(cfg.checkpoint_dist[0] == Rat(1, 7));
  CHECK(slit_interval(cfg) == TorusIntervalSet::arc(Rat(0), Rat(2, 7), 0));
  CHECK(slit_interval(cfg.with_truncation(0)).empty());
}

TEST_CASE("skew application") {
  SkewConfig cfg = toy_config();
  SkewConfig rotation_only = cfg.with_truncation(0);

  // pure rotation when the slit is empty
  TorusPoint z = skew_apply(rotation_only, TorusPoint(Rat(0), 0), Int(3));
  CHECK(z.x == Rat(5, 7));
  CHECK(z.level == 0);

  // base advances; level flips only when the image lands in the slit
  TorusPoint a = skew_apply(cfg, TorusPoint(Rat(0), 0), Int(1));
  CHECK(a.x == Rat(4, 7));
  CHECK(a.level == 0);

  TorusPoint b = skew_apply(cfg, TorusPoint(Rat(5, 7), 1), Int(1));
  CHECK(b.x == Rat(2, 7));  // 2/7 is outside [0, 2/7)
  CHECK(b.level == 1);

  TorusPoint c = skew_apply(cfg, TorusPoint(Rat(4, 7), 1), Int(1));
  CHECK(c.x == Rat(1, 7));
  CHECK(c.level == 0);

  // inverse undoes forward steps
  Rng rng(3);
  for (int it = 0; it < 30; ++it) {
    TorusPoint p(rng.rat_below_one(49), static_cast<int>(rng.below(2)));
    TorusPoint fwd = skew_apply(cfg, p, Int(5));
    TorusPoint back = skew_apply(cfg, fwd, Int(5), true);
    CHECK(back.x == p.x);
    CHECK(back.level == p.level);
  }
}

TEST_CASE("tower construction matches the hand-derived first level") {
  SkewConfig cfg = toy_config();
  auto levels = build_tower_levels(cfg, 1);

  CHECK(levels[0].u == TorusIntervalSet::full_level(0));
  CHECK(levels[0].v == TorusIntervalSet::full_level(1));

  const TowerLevel& t1 = levels[1];
  CHECK(t1.j_prime == TorusIntervalSet::arc_both_levels(Rat(0), Rat(1, 7)));

  TorusIntervalSet expected_u =
      TorusIntervalSet::arc(Rat(1, 7), Rat(4, 7), 0)
          .combine(TorusIntervalSet::arc(Rat(5, 7), Rat(1), 0), SetOp::Union)
          .combine(TorusIntervalSet::arc(Rat(0), Rat(1, 7), 1), SetOp::Union)
          .combine(TorusIntervalSet::arc(Rat(4, 7), Rat(5, 7), 1), SetOp::Union);
  CHECK(t1.u == expected_u);
  CHECK(t1.u.measure() == Rat(1, 2));
  CHECK(t1.v == t1.u.swap_levels());

  // symmetric difference identity and measure
  TorusIntervalSet sym = t1.u.combine(levels[0].u, SetOp::SymDiff);
  CHECK(sym.measure() == Rat(2, 7));
  TorusIntervalSet orbit =
      TorusIntervalSet::arc_both_levels(Rat(0), Rat(1, 7))
          .combine(TorusIntervalSet::arc_both_levels(Rat(4, 7), Rat(5, 7)),
                   SetOp::Union);
  CHECK(sym == orbit);
}

TEST_CASE("structure report on the toy tower") {
  SkewConfig cfg = toy_config();
  auto levels = build_tower_levels(cfg, 1);
  VerificationReport rep = structure_report(levels, cfg);
  for (const auto& item : rep.items) {
    CAPTURE(item.name);
    CHECK(item.passed == Verdict::True);
  }

  // the near-zero inclusions named explicitly
  CHECK(levels[1].u.contains_open_arc(Rat(6, 7), Rat(1), 0));
  CHECK(levels[1].u.contains_open_arc(Rat(0), Rat(1, 7), 1));
}

TEST_CASE("structure report on a deeper desk tower") {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3), Int(1), Int(3), Int(1), Int(3), Int(1)};
  s.even_checkpoints = {2, 4, 6};
  SkewConfig cfg = SkewConfig::make(s);
  auto levels = build_tower_levels(cfg, 3);
  VerificationReport rep = structure_report(levels, cfg);
  for (const auto& item : rep.items) {
    CAPTURE(item.name);
    CHECK(item.passed == Verdict::True);
  }
  for (size_t m = 0; m <= 3; ++m) {
    CHECK(levels[m].u.measure() == Rat(1, 2));
    CHECK(levels[m].u.combine(levels[m].v, SetOp::Intersect).empty());
  }
}

TEST_CASE("coincidence of the full and truncated maps") {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3), Int(1), Int(3), Int(1)};
  s.even_checkpoints = {2, 4};
  SkewConfig cfg = SkewConfig::make(s);

  CHECK(coincidence_set(cfg, 2, 5) == TorusIntervalSet::full_space());
  CHECK(coincidence_set(cfg, 0, 0) == TorusIntervalSet::full_space());

  size_t K = 2;
  TorusIntervalSet good = coincidence_set(cfg, 1, K);
  Rat tail = cfg.checkpoint_dist[1];
  CHECK(good.measure() >= 1 - 2 * Rat(static_cast<long>(K)) * tail);

  // pointwise test agrees with the set and with brute-force orbit comparison
  Rng rng(5);
  for (int it = 0; it < 40; ++it) {
    Rat x = rng.rat_below_one(1 << 10);
    bool in_set = good.contains(TorusPoint(x, 0));
    CHECK(in_set == coincides_pointwise(cfg, 1, x, Int(static_cast<long>(K))));
    if (in_set) {
      TorusPoint full = skew_apply(cfg, TorusPoint(x, 0), Int(static_cast<long>(K)));
      TorusPoint trunc = skew_apply(cfg.with_truncation(1), TorusPoint(x, 0),
                                    Int(static_cast<long>(K)));
      CHECK(full.x == trunc.x);
      CHECK(full.level == trunc.level);
    }
  }
}
