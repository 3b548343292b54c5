#pragma once

#include "ergoflow/piecewise.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/skew.hpp"

namespace ergoflow {

enum class RoofPart { F, G, H };

// The return-time function f = g + h over the skew product: symmetric log
// singularities over x1 (both levels) and 0 (level 1), an asymmetric pair
// over x0 from the one-sided extra term.
struct RoofSpec {
  Rat log_coeff;  // A > 1, weight of the level-1 singularity at 0
  AngleRep alpha;
  Rat x0;  // representative of -alpha, i.e. 1 - alpha
  Rat x1;  // representative of |J| - alpha

  static RoofSpec from_config(const SkewConfig& cfg, const Rat& a);
  std::vector<TorusPoint> singularities() const;  // z1..z4 and (0,1)
};

// Exact symbolic roof value; throws Error("singular-point") on the singular set.
LogSum eval_roof(const RoofSpec& spec, const TorusPoint& z, RoofPart part);

// Right-continuous one-sided derivative of order 1 or 2; exact rational.
Rat eval_roof_deriv(const RoofSpec& spec, const TorusPoint& z, int order,
                    RoofPart part = RoofPart::F);

// Derivative families as piecewise closed forms (exact evaluation along orbits).
PiecewiseFunction gamma_deriv(const RoofSpec& spec, int order);
// The five single-signed summands of the first derivative (their coefficients
// sum to one).
std::vector<PiecewiseFunction> gamma_deriv_split(const RoofSpec& spec);
PiecewiseFunction h1_deriv(int order);  // level-1 masked, unit coefficient

struct RegionFamily {
  // circle projections (level-0 interval sets)
  TorusIntervalSet a, b, c, d, e, f;
  Rat window;  // ||q_{n_{m-1}} alpha||
};

RegionFamily build_regions(const SkewConfig& cfg,
                           const std::vector<TowerLevel>& levels, size_t m);

// chi_[1/2,1) - chi_(0,1/2) over ||x||, restricted to the level-1 part of u_m.
PiecewiseFunction phi_function(const TowerLevel& level_m);

// Pointwise identity between phi and its six-region decomposition at the
// given samples and at every region endpoint.
VerificationReport psi_decompose_check(const SkewConfig& cfg,
                                       const std::vector<TowerLevel>& levels,
                                       size_t m, const std::vector<Rat>& samples);

// The centering constant: integral of (phi + chi_F/||x||) minus log of the
// window length.  Exact symbolic value with numeric shadow.
LogSum phi_constant(const SkewConfig& cfg, const std::vector<TowerLevel>& levels,
                    size_t m);

}  // namespace ergoflow
