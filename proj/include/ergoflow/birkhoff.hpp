#pragma once

#include <functional>
#include <optional>

#include "ergoflow/piecewise.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/roof.hpp"
#include "ergoflow/skew.hpp"

namespace ergoflow {

enum class MapKind { Rotation, Skew };

struct SumReport {
  Int n;
  std::string value;
  std::string bound;
  std::string margin;
  Verdict passed = Verdict::Undecided;
  Rat closest_approach;
};

// Exact ergodic sum of F along the orbit of the rotation (base only) or the
// skew product.  Throws Error("singular-orbit") naming the hitting index when
// the orbit lands on a pole of F.
Rat birkhoff_sum(const SkewConfig& cfg, MapKind kind, const PiecewiseFunction& f,
                 const Int& n, TorusPoint start);

// Same orbit walk, also reporting max_j |S_j| over partial sums j <= n.
struct SumWithPartials {
  Rat total;
  Rat max_abs_partial;
};
SumWithPartials birkhoff_sum_partials(const SkewConfig& cfg, MapKind kind,
                                      const PiecewiseFunction& f, const Int& n,
                                      TorusPoint start);

// Symbolic roof sum along the skew orbit (for the suspension flow).
LogSum birkhoff_sum_roof(const RoofSpec& spec, const SkewConfig& cfg, const Int& n,
                         TorusPoint start, RoofPart part = RoofPart::F);

// Denjoy-Koksma: |S_{q_n}(F)(x) - q_n Int F| <= Var(F) at every sample.
VerificationReport dk_check(const PiecewiseFunction& f, const AngleRep& alpha,
                            size_t n, const std::vector<TorusPoint>& samples);

// Total variation (spec op); sets *infinite instead of throwing.
Rat variation(const PiecewiseFunction& f, bool* infinite);

struct GammaCheckParams {
  Rat k_first = 64;    // remainder constant for the first-derivative bound
  Rat k_second = 64;   // remainder constant for the second-derivative bound
  Rat gate = Rat(1, 16);  // closest-approach gate c: applies when closest > c/q_n
};

// The explicit one-sided display inequalities for the derivative sums over
// the rotation, the closest-return remainder forms, the partial-sum bound
// 7 q_n log q_n, and the five-way split identity.
VerificationReport gamma_bounds_check(const RoofSpec& spec, const SkewConfig& cfg,
                                      size_t n, const Rat& x,
                                      const GammaCheckParams& params = {});

enum class PhiSumMode { CenteredBound, ClassBound, Discrepancy };

struct PhiSumParams {
  // ClassBound: the class-level constant (from the minimal class member).
  std::optional<LogSum> phi_ref;
  // Discrepancy: the other member's constant.
  std::optional<LogSum> phi_other;
  Rat digit_cap_m = 3;  // M
};

// Centered bound |S_{q_n}(T_m, h1')(z) + q_n log q_n - q_n Phi| against
// 43 q_n + 64 q_{n_m}^2 (CenteredBound), the class-level 155 q_n form
// (ClassBound), or the 12(M+1) constant-difference bound (Discrepancy).
VerificationReport phi_sum_check(const SkewConfig& cfg,
                                 const std::vector<TowerLevel>& levels, size_t m,
                                 size_t n, const TorusPoint& z, PhiSumMode mode,
                                 const PhiSumParams& params = {});

// Exact minimum of ||x + k alpha - target|| over k < n.
Rat min_orbit_dist(const Rat& x, const Rat& alpha, const Int& n, const Rat& target);

}  // namespace ergoflow
