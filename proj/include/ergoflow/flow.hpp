#pragma once

#include "ergoflow/birkhoff.hpp"
#include "ergoflow/construction.hpp"
#include "ergoflow/roof.hpp"

namespace ergoflow {

struct FlowPoint {
  TorusPoint base;
  LogSum height;  // in [0, roof(base))
};

// Advance the suspension flow by time t (exact symbolic time), rolling the
// height over the roof as needed.  Comparisons are decided symbolically when
// possible and by enclosure escalation otherwise.
FlowPoint flow_advance(const RoofSpec& spec, const SkewConfig& cfg, FlowPoint p,
                       const LogSum& t, size_t max_crossings = 1u << 20);

struct RigiditySet {
  size_t stage = 0;
  Int q_t;
  Rat interval_left, interval_right;  // the seed interval around the witness
  // translated pieces: base arc plus carried level, one per step
  std::vector<TorusIntervalSet::RawArc> pieces;
  Rat measure;          // exact
  Rat displacement;     // || q_t alpha ||, attained by every point
  bool translates_disjoint = false;
  bool sweep_clear = false;        // no discontinuity met along the sweep
  bool displacement_exact = false; // paired sweep certifies the rigid move
  // The doubled-interval connectedness needs ||q_t a|| < c/(2 q_t), which
  // only enters the asymptotic regime; reported for the record.
  bool hull_connected = false;
};

// Materializes the rigidity set of a certified stage witness and verifies
// the measure floor, translate disjointness and the rigid displacement.
RigiditySet build_rigidity_set(const ConstructionState& state, size_t k,
                               const Rat& c);

struct CriterionParams {
  Rat c = Rat(1, 32);
  std::optional<Rat> big_c;  // bound constant; measured when absent
  size_t grid = 5;           // sample points across the witness interval
};

// The five finite-stage margin checks behind the non-mixing criterion at one
// stage, with measured-or-given constants, reported per condition.
VerificationReport criterion_check(const ConstructionState& state, size_t k,
                                   const CriterionParams& params = {});

struct CorrelationRow {
  std::string time;
  double estimate;
  double stderr_;
  std::uint64_t seed;
};

// Seeded stratified Monte-Carlo estimate of the correlation
// lambda(O intersect flow_{-t} O') for indicator observables below a height
// cap.  Diagnostic only.
std::vector<CorrelationRow> correlation_probe(
    const RoofSpec& spec, const SkewConfig& cfg, const TorusIntervalSet& obs_a,
    const TorusIntervalSet& obs_b, const Rat& height_cap,
    const std::vector<Rat>& times, std::uint64_t seed, size_t samples_per_stratum);

// Finite-stage unique-ergodicity ingredients: exact deviation measure of the
// indicator averages over the even tower, the odd-step symmetric-difference
// sandwich and the even-step decay.
VerificationReport ue_probe(const SkewConfig& cfg, size_t k,
                            const TorusIntervalSet& observable, const Rat& eps);

// Exact deviation measure (helper exposed for tests).
Rat ue_deviation_measure(const SkewConfig& cfg,
                         const std::vector<TowerLevel>& levels, size_t k,
                         const TorusIntervalSet& observable, const Rat& eps);

}  // namespace ergoflow
