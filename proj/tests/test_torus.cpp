#include "doctest.h"

#include "ergoflow/torus.hpp"

using namespace ergoflow;

TEST_CASE("circle and product metric") {
  CHECK(circle_dist(Rat(1, 4), Rat(3, 4)) == Rat(1, 2));
  CHECK(circle_dist(Rat(2, 5), Rat(2, 5)) == 0);
  CHECK(circle_dist(Rat(1, 10), Rat(9, 10)) == Rat(1, 5));

  CHECK(product_dist(TorusPoint(Rat(3, 10), 0), TorusPoint(Rat(2, 5), 0)) ==
        Rat(1, 10));
  CHECK(product_dist(TorusPoint(Rat(1, 3), 0), TorusPoint(Rat(1, 3), 1)) == 1);
  CHECK(product_dist(TorusPoint(Rat(1, 4), 1), TorusPoint(Rat(3, 4), 0)) ==
        Rat(3, 2));

  // distance below one forces equal levels; equal levels reduce to the circle
  std::vector<TorusPoint> pts;
  for (long i = 0; i < 8; ++i)
    for (int j = 0; j <= 1; ++j) pts.emplace_back(Rat(i, 8), j);
  for (const auto& a : pts)
    for (const auto& b : pts) {
      Rat d = product_dist(a, b);
      CHECK(d == product_dist(b, a));
      CHECK((d == 0) == (a.x == b.x && a.level == b.level));
      if (d < 1) CHECK(a.level == b.level);
      if (a.level == b.level) CHECK(d == circle_dist(a.x, b.x));
      for (const auto& c : pts)
        CHECK(product_dist(a, c) <= d + product_dist(b, c));
    }
}

TEST_CASE("boolean algebra of interval sets") {
  TorusIntervalSet a = TorusIntervalSet::arc(Rat(0), Rat(1, 2), 0);
  TorusIntervalSet b = TorusIntervalSet::arc(Rat(1, 4), Rat(3, 4), 0);

  TorusIntervalSet sym = a.combine(b, SetOp::SymDiff);
  CHECK(sym.measure() == Rat(1, 4));
  CHECK(sym ==
        TorusIntervalSet::arc(Rat(0), Rat(1, 4), 0)
            .combine(TorusIntervalSet::arc(Rat(1, 2), Rat(3, 4), 0), SetOp::Union));

  CHECK(a.combine(a, SetOp::Difference).empty());

  TorusIntervalSet wrap =
      TorusIntervalSet::arc(Rat(6, 7), Rat(1), 0)
          .combine(TorusIntervalSet::arc(Rat(0), Rat(1, 7), 0), SetOp::Union);
  CHECK(wrap.measure() == Rat(1, 7));       // one level, length 2/7, normalized
  CHECK(wrap.level_length(0) == Rat(2, 7));
  CHECK(wrap.component_count() == 1);       // split halves merge on the circle
  CHECK(wrap == TorusIntervalSet::arc(Rat(6, 7), Rat(8, 7), 0));

  // measure additivity on seeded random sets
  Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    auto random_set = [&]() {
      TorusIntervalSet s;
      for (int i = 0; i < 3; ++i) {
        Rat l = rng.rat_below_one(64);
        Rat r = rng.rat_below_one(64);
        if (l == r) continue;
        s = s.combine(TorusIntervalSet::arc(l, r, static_cast<int>(rng.below(2))),
                      SetOp::Union);
      }
      return s;
    };
    TorusIntervalSet x = random_set(), y = random_set();
    TorusIntervalSet u = x.combine(y, SetOp::Union);
    TorusIntervalSet i = x.combine(y, SetOp::Intersect);
    TorusIntervalSet s = x.combine(y, SetOp::SymDiff);
    CHECK(u.measure() + i.measure() == x.measure() + y.measure());
    CHECK(s.measure() == x.measure() + y.measure() - 2 * i.measure());
    CHECK(u.combine(i, SetOp::Difference) == s);
    // commutativity
    CHECK(u == y.combine(x, SetOp::Union));
    CHECK(i == y.combine(x, SetOp::Intersect));
    // membership agrees pointwise on a grid
    for (long g = 0; g < 32; ++g) {
      for (int lv = 0; lv <= 1; ++lv) {
        TorusPoint p(Rat(g, 32), lv);
        CHECK(u.contains(p) == (x.contains(p) || y.contains(p)));
        CHECK(i.contains(p) == (x.contains(p) && y.contains(p)));
        CHECK(s.contains(p) == (x.contains(p) != y.contains(p)));
      }
    }
  }
}

TEST_CASE("translation") {
  TorusIntervalSet s = TorusIntervalSet::arc_both_levels(Rat(0), Rat(1, 7));
  TorusIntervalSet t = s.translate(Rat(4, 7));
  CHECK(t == TorusIntervalSet::arc_both_levels(Rat(4, 7), Rat(5, 7)));
  CHECK(s.translate(Rat(0)) == s);
  CHECK(TorusIntervalSet::arc(Rat(6, 7), Rat(1), 0).translate(Rat(1, 7)) ==
        TorusIntervalSet::arc(Rat(0), Rat(1, 7), 0));
  CHECK(t.measure() == s.measure());
}

TEST_CASE("level swap, complement, open-arc containment") {
  TorusIntervalSet s = TorusIntervalSet::arc(Rat(1, 8), Rat(5, 8), 0);
  CHECK(s.swap_levels() == TorusIntervalSet::arc(Rat(1, 8), Rat(5, 8), 1));
  TorusIntervalSet c = s.complement();
  CHECK(c.measure() + s.measure() == 1);
  CHECK(s.contains_open_arc(Rat(1, 8), Rat(5, 8), 0));
  CHECK(s.contains_open_arc(Rat(1, 4), Rat(1, 2), 0));
  CHECK_FALSE(s.contains_open_arc(Rat(1, 4), Rat(3, 4), 0));
  CHECK_FALSE(s.contains_open_arc(Rat(1, 4), Rat(1, 2), 1));
}

TEST_CASE("discontinuities merge through zero") {
  TorusIntervalSet wrap = TorusIntervalSet::arc(Rat(6, 7), Rat(8, 7), 0);
  auto d = wrap.discontinuities(0);
  CHECK(d == std::vector<Rat>{Rat(1, 7), Rat(6, 7)});
  CHECK(TorusIntervalSet::full_level(0).discontinuities(0).empty());
  TorusIntervalSet ends_at_one = TorusIntervalSet::arc(Rat(1, 2), Rat(1), 0);
  auto d2 = ends_at_one.discontinuities(0);
  CHECK(d2 == std::vector<Rat>{Rat(0), Rat(1, 2)});
}

TEST_CASE("json export uses exact fraction strings") {
  TorusIntervalSet s = TorusIntervalSet::arc(Rat(1, 3), Rat(1, 2), 1);
  CHECK(s.to_json() ==
        "[{\"level\":1,\"left\":\"1/3\",\"right\":\"1/2\"}]");
}
