#pragma once

#include <optional>
#include <vector>

#include "ergoflow/cf.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/torus.hpp"

namespace ergoflow {

// Rotation number, checkpoint data and slit truncation for the two-level
// skew product over the rotation.
struct SkewConfig {
  DigitSchedule schedule;
  AngleRep alpha;
  std::optional<size_t> truncate_s;  // slit sums checkpoints 1..s; nullopt = all

  std::vector<Int> checkpoint_q;     // q_{n_k} for k = 1..K
  std::vector<Rat> checkpoint_dist;  // || q_{n_k} * alpha ||

  size_t checkpoints() const { return checkpoint_q.size(); }
  size_t effective_s() const {
    return truncate_s ? std::min(*truncate_s, checkpoints()) : checkpoints();
  }

  static SkewConfig make(const DigitSchedule& schedule,
                         std::optional<size_t> truncate = std::nullopt,
                         std::optional<AngleRep> alpha = std::nullopt);
  SkewConfig with_truncation(std::optional<size_t> s) const;
};

// Total slit length for truncation level s: 2 * sum_{k<=s} ||q_{n_k} alpha||.
Rat slit_length(const SkewConfig& cfg, size_t s);

// The base slit [0, L) as a circle interval (level-0 projection).
TorusIntervalSet slit_interval(const SkewConfig& cfg);

// k-fold application of the skew map (or its inverse).
TorusPoint skew_apply(const SkewConfig& cfg, TorusPoint z, const Int& k,
                      bool inverse = false);

// Exact image of an interval set under one application of the skew map.
TorusIntervalSet skew_image(const SkewConfig& cfg, const TorusIntervalSet& s);

struct TowerLevel {
  size_t m = 0;
  TorusIntervalSet j_prime;  // the inducing interval, both levels
  TorusIntervalSet u;
  TorusIntervalSet v;
  std::vector<Rat> delta;    // admissible discontinuity abscissae k*alpha
};

// Levels 0..m of the recursive partition tower.
std::vector<TowerLevel> build_tower_levels(const SkewConfig& cfg, size_t m);
TowerLevel build_tower(const SkewConfig& cfg, size_t m);

// Structural verification of a built level: invariance under the matching
// truncated map, discontinuity sets, the level involution, the near-zero
// inclusions, and the partition/symmetric-difference identities.
VerificationReport structure_report(const std::vector<TowerLevel>& levels,
                                    const SkewConfig& cfg);

// Points whose first K iterates under the full map agree with the
// s-truncated map (complement of the union of pulled-back slit tails).
TorusIntervalSet coincidence_set(const SkewConfig& cfg, size_t s, size_t K);

// Pointwise version of the same test for a single base point.
bool coincides_pointwise(const SkewConfig& cfg, size_t s, const Rat& x, const Int& K);

// Rigid-displacement certificate: sweep the interval [left, left+len) x
// {level} and its image at time `ret` side by side for `ret` steps.  When
// both sweeps stay clear of the discontinuity abscissae and their levels
// agree at every step, every point of every translate is moved by exactly
// the base distance of the return time.
struct PairedSweep {
  bool pieces_clear = false;   // the seed sweep meets no discontinuity
  bool partner_clear = false;  // neither does the image sweep
  bool levels_match = false;   // levels agree stepwise
  std::vector<TorusIntervalSet::RawArc> pieces;  // seed translates with levels
  bool certified() const { return pieces_clear && partner_clear && levels_match; }
};
PairedSweep paired_displacement_sweep(const SkewConfig& cfg, const Rat& left,
                                      const Rat& len, int level, const Int& ret,
                                      bool keep_pieces = false);

}  // namespace ergoflow
