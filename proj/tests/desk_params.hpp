#pragma once

#include "ergoflow/construction.hpp"

namespace ergoflow::testing {

// Relaxed-mode knobs used across the test suites: chosen so both stages
// materialize at desk scale (denominators around 10^2 and 10^5) while every
// substituted-constant check stays meaningful.
inline ConstructionParams relaxed_desk_params() {
  ConstructionParams p;
  p.faithful = false;
  p.tau = Rat(6, 5);
  p.lower_c18 = Rat(18) / Rat(1000000000);
  p.kappa = Rat(9, 8);
  p.cap_bits = 64;
  return p;
}

// Desk schedule with three even checkpoints (denominators 2, 9, 43).
inline DigitSchedule desk_schedule_m3() {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3), Int(1), Int(3), Int(1), Int(3), Int(1),
              Int(1), Int(1), Int(1), Int(1), Int(1), Int(1)};
  s.even_checkpoints = {2, 4, 6};
  s.digit_cap_m = 3;
  return s;
}

// Two-checkpoint variant (denominators 2, 9).
inline DigitSchedule desk_schedule_m2() {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3), Int(1), Int(3), Int(1), Int(1), Int(1),
              Int(1), Int(1)};
  s.even_checkpoints = {2, 4};
  s.digit_cap_m = 3;
  return s;
}

}  // namespace ergoflow::testing
