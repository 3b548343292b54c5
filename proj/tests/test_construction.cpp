#include "doctest.h"

#include "desk_params.hpp"
#include "ergoflow/construction.hpp"

using namespace ergoflow;

TEST_CASE("faithful base stage emits magnitude certificates") {
  ConstructionParams params;  // faithful defaults
  ConstructionState st = base_stage(params);
  CHECK(st.partial);
  CHECK(st.stage == 0);

  // the seed quantities are materialized exactly
  REQUIRE(st.schedule.digits.size() >= 5);
  CHECK(st.schedule.digits[2] == 3);   // a_3
  CHECK(st.schedule.digits[4] == 3);   // minimal admissible a_5
  CHECK(st.schedule.even_checkpoints[0] == 2);
  CHECK(st.schedule.even_checkpoints[1] == 4);

  // minimal fifth digit satisfies the sandwich exactly: 22 <= 27 < 34
  auto cs = convergents(st.schedule, 5);
  Int lhs = 2 * (cs[1].q + cs[3].q);
  CHECK(lhs <= st.schedule.digits[4] * cs[3].q);
  CHECK(st.schedule.digits[4] * cs[3].q < cs[4].q);

  // the certificate names a lower bound at least 270 q_5
  REQUIRE(!st.magnitude_certs.empty());
  CHECK(st.magnitude_certs[0].lower_bound >= 270 * Rat(cs[4].q));
}

TEST_CASE("relaxed base stage materializes and verifies") {
  ConstructionState st = base_stage(testing::relaxed_desk_params());
  CHECK_FALSE(st.partial);
  CHECK(st.stage == 1);
  REQUIRE(st.schedule.odd_checkpoints.size() == 1);

  size_t t1 = st.schedule.odd_checkpoints[0];
  size_t n3 = st.schedule.even_checkpoints[2];
  CHECK(t1 > n3 + 1);
  CHECK(st.schedule.digits[n3] == 3);  // digit after the odd-position checkpoint

  VerificationReport rep = conditions_report(st);
  for (const auto& item : rep.items) {
    CAPTURE(item.name);
    CHECK(item.passed == Verdict::True);
  }

  // deterministic replay
  ConstructionState again = base_stage(testing::relaxed_desk_params());
  CHECK(again.to_json() == st.to_json());
}

TEST_CASE("relaxed second stage extends the schedule") {
  ConstructionState st = base_stage(testing::relaxed_desk_params());
  ConstructionState st2 = extend_stage(st);
  CHECK(st2.stage == 2);
  CHECK(st2.schedule.even_checkpoints.size() == 5);
  CHECK(st2.schedule.odd_checkpoints.size() == 2);
  CHECK(st2.schedule.odd_checkpoints[0] < st2.schedule.even_checkpoints[3]);

  VerificationReport rep = conditions_report(st2);
  for (const auto& item : rep.items) {
    CAPTURE(item.name);
    CHECK(item.passed == Verdict::True);
  }
}

TEST_CASE("witnesses carry re-checkable certificates") {
  ConstructionState st = base_stage(testing::relaxed_desk_params());
  auto [point, cert] = witness_points(st, 1);

  SkewConfig cfg = st.config();
  auto levels = build_tower_levels(cfg, 3);
  CHECK(levels[3].u.contains(point));

  // independent re-verification of every certificate claim
  const Int& q_t = st.stages[0].q_t;
  CHECK(cert.buffer == unit_dist(Rat(q_t) * cfg.alpha.value));
  CHECK(cert.omega_clearance >=
        Rat(1) / (st.params.clearance_den * Rat(q_t)));

  Rat x0 = 1 - cfg.alpha.value;
  Rat x1 = frac(slit_length(cfg, cfg.effective_s()) - cfg.alpha.value);
  Rat clearance = 1;
  Rat pos = frac(point.x - cfg.alpha.value);
  for (Int w = 0; w <= q_t; ++w) {
    clearance = std::min(clearance, unit_dist(pos - x0));
    clearance = std::min(clearance, unit_dist(pos - x1));
    pos = frac(pos + cfg.alpha.value);
  }
  CHECK(clearance == cert.omega_clearance);

  TorusPoint back = skew_apply(cfg, point, q_t);
  CHECK(back.level == point.level);
  CHECK(product_dist(point, back) == unit_dist(Rat(q_t) * cfg.alpha.value));
  CHECK(product_dist(point, back) < 1);

  // buffered membership in the certified component (extended coordinates for
  // the component that wraps through zero)
  Rat y_ext = point.x >= cert.component_left ? point.x : Rat(point.x + 1);
  CHECK(y_ext > cert.component_left + cert.buffer);
  CHECK(y_ext < cert.component_right - cert.buffer);
}

TEST_CASE("window search reports magnitude when capped") {
  ConstructionParams p = testing::relaxed_desk_params();
  p.cap_bits = 6;  // no admissible denominator fits below 2^6
  ConstructionState st = base_stage(p);
  CHECK(st.partial);
  CHECK_FALSE(st.magnitude_certs.empty());
}
