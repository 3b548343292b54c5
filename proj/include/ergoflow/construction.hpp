#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergoflow/birkhoff.hpp"
#include "ergoflow/cf.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/skew.hpp"

namespace ergoflow {

// Knobs of the stage construction.  Faithful mode runs the literal constants
// (materializable only up to the stage-1 fragments; past that the binding
// inequalities are certified by magnitude instead of materialized).  Relaxed
// mode substitutes the configured constants consistently in the construction
// and in every downstream verifier.
struct ConstructionParams {
  bool faithful = true;
  Rat tau = 60;            // window multiplier; the roof weight is tau/(tau-1)
  Rat lower_c18 = 18;      // coefficient of the growth-forcing term
  Rat gap_lo = Rat(1, 10);
  Rat gap_hi = Rat(1, 15);
  Rat clearance_den = 16;  // orbit clearance 1/(clearance_den * q)
  Rat kappa = 2;           // checkpoint growth exponent: q_t > q_n^kappa
  Rat rigidity_c = Rat(1, 32);  // seed-interval constant for the rigidity set
  unsigned long cap_bits = 64;  // materialization cap on q sizes
  std::uint64_t seed = 1;

  std::map<std::string, std::string> describe() const;
};

struct MagnitudeCertificate {
  std::string quantity;   // e.g. "log q at the third checkpoint"
  Rat lower_bound;        // certified lower bound for that logarithm
  std::string binding;    // the constraint that forces it
};

struct WitnessCertificate {
  size_t component_index = 0;
  Rat component_left, component_right;
  int level = 0;
  Rat buffer;              // ||q_t alpha||
  Rat omega_clearance;     // exact min orbit distance to the two singular abscissae
  Int coincidence_horizon; // verified 2 q_t
  bool level_return = false;
};

struct StageRecord {
  size_t index = 0;     // k
  size_t t_checkpoint = 0;
  LogSum phi;           // the centering constant at level 2k+1
  Int q_t;
  std::optional<TorusPoint> witness;
  std::optional<WitnessCertificate> certificate;
};

struct ConstructionState {
  ConstructionParams params;
  DigitSchedule schedule;   // digits through t_N + 1
  size_t stage = 0;         // completed stages
  std::vector<StageRecord> stages;
  std::vector<MagnitudeCertificate> magnitude_certs;
  bool partial = false;     // faithful run stopped at a non-materializable bound

  Rat roof_weight() const { return params.tau / (params.tau - 1); }
  SkewConfig config(std::optional<size_t> truncate = std::nullopt) const;

  std::string to_json() const;
  static ConstructionState from_json(const std::string& text);
};

// Stage 1 from the canonical seed (first checkpoints 2 and 4, digit pattern
// 1,1,3,1, minimal admissible fifth digit).
ConstructionState base_stage(const ConstructionParams& params);

// Stage N -> N+1.
ConstructionState extend_stage(const ConstructionState& state);

// Finitary condition checks plus decay diagnostics across available stages.
VerificationReport conditions_report(const ConstructionState& state);

// Certified witness for stage k (1-based): a buffered component point with
// orbit clearance, coincidence horizon and level return.
std::pair<TorusPoint, WitnessCertificate> witness_points(
    const ConstructionState& state, size_t k);

// Smallest t past the given checkpoint satisfying the growth condition and
// the window |log q_t - tau * phi| < log 2.
struct WindowSearchResult {
  size_t t = 0;
  Int q_t;
  bool materialized = false;
  double log2_q_estimate = 0;  // when beyond cap
};
WindowSearchResult phi_window_search(const DigitSchedule& digits_so_far,
                                     size_t after_index, const Int& q_growth_base,
                                     const LogSum& phi, const ConstructionParams& p,
                                     size_t k);

}  // namespace ergoflow
