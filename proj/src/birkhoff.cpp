#include "ergoflow/birkhoff.hpp"

#include <algorithm>

namespace ergoflow {

namespace {

struct OrbitState {
  TorusPoint z;
  Rat slit_len;
  Rat alpha;
  bool skew;

  void step() {
    z.x = frac(z.x + alpha);
    if (skew && z.x < slit_len) z.level ^= 1;
  }
};

OrbitState make_orbit(const SkewConfig& cfg, MapKind kind, TorusPoint start) {
  OrbitState st;
  st.z = start;
  st.alpha = cfg.alpha.value;
  st.skew = kind == MapKind::Skew;
  st.slit_len = st.skew ? slit_length(cfg, cfg.effective_s()) : Rat(0);
  return st;
}

}  // namespace

Rat birkhoff_sum(const SkewConfig& cfg, MapKind kind, const PiecewiseFunction& f,
                 const Int& n, TorusPoint start) {
  OrbitState st = make_orbit(cfg, kind, start);
  std::vector<Rat> terms;
  if (n > 0 && mpz_fits_ulong_p(n.get_mpz_t()))
    terms.reserve(mpz_get_ui(n.get_mpz_t()));
  for (Int j = 0; j < n; ++j) {
    try {
      terms.push_back(f.eval_at(st.z));
    } catch (const Error& e) {
      if (e.kind() == "singular-point")
        throw Error("singular-orbit", "orbit hits a pole at index " + j.get_str());
      throw;
    }
    st.step();
  }
  return tree_sum(terms);
}

SumWithPartials birkhoff_sum_partials(const SkewConfig& cfg, MapKind kind,
                                      const PiecewiseFunction& f, const Int& n,
                                      TorusPoint start) {
  OrbitState st = make_orbit(cfg, kind, start);
  SumWithPartials out{Rat(0), Rat(0)};
  for (Int j = 0; j < n; ++j) {
    try {
      out.total += f.eval_at(st.z);
    } catch (const Error& e) {
      if (e.kind() == "singular-point")
        throw Error("singular-orbit", "orbit hits a pole at index " + j.get_str());
      throw;
    }
    Rat a = rat_abs(out.total);
    if (a > out.max_abs_partial) out.max_abs_partial = a;
    st.step();
  }
  return out;
}

LogSum birkhoff_sum_roof(const RoofSpec& spec, const SkewConfig& cfg, const Int& n,
                         TorusPoint start, RoofPart part) {
  OrbitState st = make_orbit(cfg, MapKind::Skew, start);
  LogSum total;
  for (Int j = 0; j < n; ++j) {
    try {
      total += eval_roof(spec, st.z, part);
    } catch (const Error& e) {
      if (e.kind() == "singular-point")
        throw Error("singular-orbit", "orbit hits a singularity at index " + j.get_str());
      throw;
    }
    st.step();
  }
  return total;
}

Rat variation(const PiecewiseFunction& f, bool* infinite) {
  return f.variation(infinite);
}

VerificationReport dk_check(const PiecewiseFunction& f, const AngleRep& alpha,
                            size_t n, const std::vector<TorusPoint>& samples) {
  VerificationReport rep;
  rep.title = "denjoy-koksma bound at a convergent denominator";

  bool infinite = false;
  Rat var = f.variation(&infinite);
  if (infinite) throw Error("not-bv", "function has unbounded variation");

  std::vector<Int> digits = cf_digits(alpha.value);
  if (n > digits.size())
    throw Error("insufficient-prefix", "denominator index beyond the expansion");
  DigitSchedule sched;
  sched.digits = digits;
  Convergent c = convergent_at(sched, n);

  LogSum integral = f.integral();
  SkewConfig cfg;
  cfg.alpha = alpha;
  cfg.schedule = sched;

  for (const TorusPoint& z : samples) {
    Rat s = birkhoff_sum(cfg, MapKind::Rotation, f, c.q, z);
    if (integral.is_rational()) {
      Rat dev = rat_abs(s - Rat(c.q) * integral.rational_part());
      rep.add_exact("sample x=" + z.x.get_str(), dev, var, var - dev);
    } else {
      LogSum dev = LogSum(s) - integral.scaled(Rat(c.q));
      rep.add_abs_enclosed("sample x=" + z.x.get_str(), dev, LogSum(var));
    }
  }
  return rep;
}

Rat min_orbit_dist(const Rat& x, const Rat& alpha, const Int& n, const Rat& target) {
  Rat best = 1;
  Rat pos = x;
  for (Int k = 0; k < n; ++k) {
    Rat d = unit_dist(pos - target);
    if (d < best) best = d;
    pos = frac(pos + alpha);
  }
  return best;
}

namespace {

// One display inequality: lower <= value - q_n log q_n <= upper, where value
// is an exact sum and the ends carry log terms.
void add_sandwich(VerificationReport& rep, const std::string& name, const Rat& sum,
                  const LogSum& center, const LogSum& lo, const LogSum& hi) {
  LogSum shifted = LogSum(sum) - center;
  rep.add_enclosed(name + " (upper)", shifted, hi, hi - shifted);
  rep.add_enclosed(name + " (lower)", shifted, lo, shifted - lo);
}

}  // namespace

VerificationReport gamma_bounds_check(const RoofSpec& spec, const SkewConfig& cfg,
                                      size_t n, const Rat& x,
                                      const GammaCheckParams& params) {
  VerificationReport rep;
  rep.title = "derivative sums over the rotation at a convergent denominator";
  rep.constants["k_first"] = params.k_first.get_str();
  rep.constants["k_second"] = params.k_second.get_str();
  rep.constants["gate"] = params.gate.get_str();

  DigitSchedule padded = padded_schedule(cfg.schedule, n + 1);
  Convergent c = convergent_at(padded, n);
  const Int& q = c.q;
  const Rat& alpha = cfg.alpha.value;

  Rat min0 = min_orbit_dist(x, alpha, q, spec.x0);
  Rat min1 = min_orbit_dist(x, alpha, q, spec.x1);
  Rat closest = std::min(min0, min1);
  if (closest == 0) throw Error("singular-orbit", "orbit meets a singularity");

  LogSum qlogq = LogSum::log(Rat(q), Rat(q));
  TorusPoint z0(x, 0);

  // Explicit one-sided displays, one singularity at a time.
  int idx = 0;
  for (const Rat& xi : {spec.x0, spec.x1}) {
    Rat mind = idx == 0 ? min0 : min1;
    std::string tag = "singularity " + std::to_string(idx++);
    PiecewiseFunction right_branch = PiecewiseFunction::from_arc_term(
        xi, xi + Rat(1, 2), Term{Term::Kind::InvDist, Rat(-1), xi});
    Rat s_right = birkhoff_sum(cfg, MapKind::Rotation, right_branch, q, z0);
    add_sandwich(rep, "decreasing branch display, " + tag, s_right, qlogq.negated(),
                 LogSum(Rat(-1) / mind) - LogSum(Rat(4) * Rat(q)),
                 LogSum(Rat(4) * Rat(q)));

    PiecewiseFunction left_branch = PiecewiseFunction::from_arc_term(
        xi - Rat(1, 2), xi, Term{Term::Kind::InvDist, Rat(1), xi});
    Rat s_left = birkhoff_sum(cfg, MapKind::Rotation, left_branch, q, z0);
    add_sandwich(rep, "increasing branch display, " + tag, s_left, qlogq,
                 LogSum(Rat(-4) * Rat(q)),
                 LogSum(1 / mind) + LogSum(Rat(4) * Rat(q)));
  }

  {
    // the one-sided gap term toward x0 = 1 - alpha
    PiecewiseFunction gap = PiecewiseFunction::from_arc_term(
        Rat(0), spec.x0, Term{Term::Kind::InvGap, Rat(1), spec.x0});
    Rat s_gap = birkhoff_sum(cfg, MapKind::Rotation, gap, q, z0);
    LogSum base = LogSum::log(Rat(2) / (1 - alpha), Rat(q));
    add_sandwich(rep, "gap term display", s_gap, qlogq,
                 base - LogSum(Rat(4) * Rat(q)),
                 LogSum(1 / min0) + base + LogSum(Rat(4) * Rat(q)));
  }

  // First-derivative closest-return remainder and partial-sum bound.
  PiecewiseFunction gd = gamma_deriv(spec, 1);
  SumWithPartials sp = birkhoff_sum_partials(cfg, MapKind::Rotation, gd, q, z0);
  {
    LogSum dev = LogSum(sp.total) - qlogq;
    LogSum bound = LogSum(params.k_first / closest);
    rep.add_abs_enclosed("first derivative closest-return remainder", dev, bound);
    LogSum pbound = qlogq.scaled(Rat(7)) + bound;
    rep.add_enclosed("partial sums within 7 q log q plus remainder",
                     LogSum(sp.max_abs_partial), pbound,
                     pbound - LogSum(sp.max_abs_partial));
    rep.add_info("centered first-derivative sum", dev.numeric_str());
  }

  // Away-from-singularities form: |S - q log q| = O(q) when the orbit keeps
  // the gate distance.
  if (closest > params.gate / Rat(q)) {
    LogSum dev = LogSum(sp.total) - qlogq;
    LogSum bound = LogSum(params.k_first / params.gate * Rat(q));
    rep.add_abs_enclosed("linear-in-q form at gated distance", dev, bound);
  } else {
    rep.add_info("linear-in-q form at gated distance", "skipped",
                 "closest approach below gate");
  }

  // Five-way split identity: the split sums add up to the full sum exactly.
  {
    Rat split_total = 0;
    for (const PiecewiseFunction& part : gamma_deriv_split(spec))
      split_total += birkhoff_sum(cfg, MapKind::Rotation, part, q, z0);
    rep.add_exact("five-way split reassembles the sum", split_total, sp.total,
                  Rat(0) - rat_abs(split_total - sp.total));
  }

  // Second derivative: |S| <= K' / closest^2.
  {
    PiecewiseFunction gdd = gamma_deriv(spec, 2);
    Rat s2 = birkhoff_sum(cfg, MapKind::Rotation, gdd, q, z0);
    Rat bound = params.k_second / (closest * closest);
    rep.add_exact("second derivative closest-return remainder", rat_abs(s2), bound,
                  bound - rat_abs(s2));
  }

  for (auto& item : rep.items) {
    // carry the closest approach through for the CSV schema
    if (item.note.empty()) item.note = "closest=" + closest.get_str();
  }
  return rep;
}

VerificationReport phi_sum_check(const SkewConfig& cfg,
                                 const std::vector<TowerLevel>& levels, size_t m,
                                 size_t n, const TorusPoint& z, PhiSumMode mode,
                                 const PhiSumParams& params) {
  VerificationReport rep;
  rep.title = "centered level-1 derivative sums over the truncated product";

  if (m <= 1 || levels.size() <= m)
    throw Error("precondition", "tower levels through m > 1 are required");

  DigitSchedule padded = padded_schedule(cfg.schedule, n + 1);
  Convergent c = convergent_at(padded, n);
  const Int& q = c.q;
  const Int& q_nm = cfg.checkpoint_q[m - 1];

  // digit condition at the top checkpoint
  size_t nm = cfg.schedule.even_checkpoints[m - 1];
  if (n <= nm + 1)
    throw Error("precondition", "denominator index must exceed the top checkpoint");
  Int a_top = padded.digits[nm];
  if (a_top < 3 || Rat(a_top) > params.digit_cap_m)
    throw Error("precondition", "top checkpoint digit outside [3, M]");
  // cumulative growth condition
  Int cum = 0;
  for (size_t r = 1; r <= m; ++r) {
    cum += 2 * cfg.checkpoint_q[r - 1];
    Convergent next = convergent_at(padded, cfg.schedule.even_checkpoints[r - 1] + 1);
    if (!(cum < next.q))
      throw Error("precondition", "cumulative growth condition fails at r=" +
                                      std::to_string(r));
  }

  if (mode == PhiSumMode::Discrepancy) {
    if (!params.phi_ref || !params.phi_other)
      throw Error("precondition", "discrepancy mode needs both constants");
    LogSum diff = *params.phi_ref - *params.phi_other;
    LogSum bound = LogSum(Rat(12) * (params.digit_cap_m + 1));
    rep.add_abs_enclosed("constant discrepancy within 12(M+1)", diff, bound);
    return rep;
  }

  if (!levels[m].u.contains(z))
    throw Error("precondition", "base point must lie in the invariant half");
  Rat clearance = min_orbit_dist(z.x, cfg.alpha.value, q, Rat(0));
  if (clearance < Rat(1) / (Rat(16) * Rat(q)))
    throw Error("precondition", "orbit clearance below 1/(16 q_n)");

  SkewConfig trunc = cfg.with_truncation(m);
  PiecewiseFunction h1d = h1_deriv(1);
  Rat s = birkhoff_sum(trunc, MapKind::Skew, h1d, q, z);

  LogSum qlogq = LogSum::log(Rat(q), Rat(q));
  LogSum phi = phi_constant(cfg, levels, m);
  LogSum centered = LogSum(s) + qlogq - phi.scaled(Rat(q));

  if (mode == PhiSumMode::CenteredBound) {
    LogSum bound = LogSum(Rat(43) * Rat(q) + Rat(64) * Rat(q_nm * q_nm));
    rep.add_abs_enclosed("centered sum within 43 q + 64 q_top^2", centered, bound);
  } else {  // ClassBound
    if (!params.phi_ref)
      throw Error("precondition", "class mode needs the class constant");
    LogSum centered_ref = LogSum(s) + qlogq - params.phi_ref->scaled(Rat(q));
    rep.add_abs_enclosed("class-centered sum within 155 q", centered_ref,
                         LogSum(Rat(155) * Rat(q)));
    // the two sub-margins of the proof arithmetic: 107 + 48
    rep.add_abs_enclosed("own-constant part within 107 q", centered,
                         LogSum(Rat(107) * Rat(q)));
    LogSum drift = (phi - *params.phi_ref).scaled(Rat(q));
    rep.add_abs_enclosed("constant drift part within 48 q", drift,
                         LogSum(Rat(48) * Rat(q)));
  }
  rep.add_info("closest approach to 0", clearance.get_str());
  return rep;
}

}  // namespace ergoflow
