#include "ergoflow/construction.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ergoflow {

namespace {

// Incremental denominator tracker: q[i] = q_i with q_0 = 1, q_{-1} = 0.
struct QSeq {
  std::vector<Int> digits;
  std::vector<Int> q{Int(1)};

  explicit QSeq(const std::vector<Int>& d = {}) {
    for (const Int& a : d) push(a);
  }
  void push(const Int& a) {
    Int prev = q.size() >= 2 ? q[q.size() - 2] : Int(0);
    q.push_back(a * q.back() + prev);
    digits.push_back(a);
  }
  size_t len() const { return digits.size(); }
  const Int& q_at(size_t i) const { return q[i]; }  // q_i, i <= len
};

// minimal integer a with a > k * log(q); exact via enclosure refinement
Int min_digit_above_log(const Int& q, const Rat& k) {
  Enclosure lg = Enclosure::log_int(q, 192);
  Enclosure scaled = lg.mul_rat(k, 192);
  double hint = scaled.hi_d();
  Int a(static_cast<long>(hint) > 1 ? static_cast<long>(hint) - 1 : 1);
  auto above = [&](const Int& cand) {
    // cand > k log q  <=>  cand - k log q > 0
    LogSum diff{Rat(cand)};
    diff -= LogSum::log(Rat(q), k);
    bool und = false;
    int s = diff.sign(&und);
    if (und) throw Error("undecided", "digit threshold comparison undecided");
    return s > 0;
  };
  while (!above(a)) a += 1;
  while (a > 1 && above(a - 1)) a -= 1;
  return a;
}

constexpr size_t kSearchCap = 200000;

}  // namespace

std::map<std::string, std::string> ConstructionParams::describe() const {
  std::map<std::string, std::string> m;
  m["mode"] = faithful ? "faithful" : "relaxed";
  m["tau"] = tau.get_str();
  m["lower_c18"] = lower_c18.get_str();
  m["gap_lo"] = gap_lo.get_str();
  m["gap_hi"] = gap_hi.get_str();
  m["clearance_den"] = clearance_den.get_str();
  m["kappa"] = kappa.get_str();
  m["rigidity_c"] = rigidity_c.get_str();
  m["cap_bits"] = std::to_string(cap_bits);
  m["seed"] = std::to_string(seed);
  return m;
}

SkewConfig ConstructionState::config(std::optional<size_t> truncate) const {
  return SkewConfig::make(schedule, truncate);
}

WindowSearchResult phi_window_search(const DigitSchedule& digits_so_far,
                                     size_t after_index, const Int& q_growth_base,
                                     const LogSum& phi, const ConstructionParams& p,
                                     size_t k) {
  (void)k;
  QSeq seq(digits_so_far.digits);
  while (seq.len() < after_index) seq.push(Int(1));

  LogSum window_center = phi.scaled(p.tau);
  LogSum log2 = LogSum::log(Rat(2));

  // infeasible if the window top is already below 0 (q >= 1 always)
  {
    bool und = false;
    if ((window_center + log2).sign(&und) < 0)
      throw Error("stage-infeasible",
                  "binding constraint: checkpoint window lies below every denominator");
  }

  WindowSearchResult res;
  for (size_t t = after_index + 1; t < after_index + 1 + kSearchCap; ++t) {
    while (seq.len() < t) seq.push(Int(1));
    const Int& qt = seq.q_at(t);
    if (mpz_sizeinbase(qt.get_mpz_t(), 2) > p.cap_bits) {
      res.materialized = false;
      res.t = t;
      res.log2_q_estimate =
          static_cast<double>(mpz_sizeinbase(qt.get_mpz_t(), 2));
      return res;
    }
    if (!int_pow_less(q_growth_base, p.kappa, qt)) continue;  // growth gate

    LogSum w = window_center - LogSum::log(Rat(qt));
    bool und = false;
    int above = (w - log2).sign(&und);  // > 0: q_t still below the window
    if (und) throw Error("undecided", "window comparison undecided");
    if (above > 0) continue;
    int below = (w + log2).sign(&und);  // < 0: q_t already beyond the window
    if (und) throw Error("undecided", "window comparison undecided");
    if (below < 0)
      throw Error("stage-infeasible",
                  "binding constraint: growth gate pushes past the window");
    res.t = t;
    res.q_t = qt;
    res.materialized = true;
    return res;
  }
  throw Error("stage-infeasible", "binding constraint: window not reached in cap");
}

namespace {

// Threshold for the gap condition: log q > c18 * q_ref / (gap_lo - gap_hi).
Rat gap_threshold(const ConstructionParams& p, const Int& q_ref) {
  Rat gap = p.gap_lo - p.gap_hi;
  if (gap <= 0) throw Error("invalid-params", "gap constants out of order");
  return p.lower_c18 * Rat(q_ref) / gap;
}

bool log_exceeds(const Int& q, const Rat& threshold) {
  LogSum diff = LogSum::log(Rat(q)) - LogSum(threshold);
  bool und = false;
  int s = diff.sign(&und);
  if (und) throw Error("undecided", "gap threshold comparison undecided");
  return s > 0;
}

bool threshold_materializable(const Rat& threshold, unsigned long cap_bits) {
  // need some q with log q > threshold and q below 2^cap_bits
  LogSum cap = LogSum::log(Rat(2), Rat(static_cast<long>(cap_bits)));
  bool und = false;
  return (cap - LogSum(threshold)).sign(&und) > 0;
}

// The centering constant of the class determined by the digits through the
// top checkpoint, evaluated at a canonical member past the growth gate.
LogSum stage_phi(const std::vector<Int>& digits,
                 const std::vector<size_t>& even_checkpoints,
                 const ConstructionParams& p) {
  size_t m = even_checkpoints.size();
  QSeq seq(digits);
  const Int q_top = seq.q_at(even_checkpoints.back());
  size_t ell = digits.size();
  while (true) {
    while (seq.len() < ell) seq.push(Int(1));
    if (int_pow_less(q_top, p.kappa, seq.q_at(ell))) break;
    ++ell;
    if (ell > digits.size() + kSearchCap)
      throw Error("stage-infeasible", "growth gate unreachable");
  }
  DigitSchedule sched;
  sched.digits = seq.digits;
  sched.digits.resize(ell);
  sched.even_checkpoints = even_checkpoints;
  SkewConfig cfg = SkewConfig::make(sched);
  auto levels = build_tower_levels(cfg, m);
  return phi_constant(cfg, levels, m);
}

}  // namespace

ConstructionState base_stage(const ConstructionParams& params) {
  ConstructionState st;
  st.params = params;
  st.schedule.digit_cap_m = 3;

  QSeq seq;
  seq.push(Int(1));  // a1
  seq.push(Int(1));  // a2
  seq.push(Int(3));  // a3
  seq.push(Int(1));  // a4
  const size_t n1 = 2, n2 = 4;

  // fifth digit: minimal >= 3 with 2(q_{n1} + q_{n2}) <= a * q_4
  Int target = 2 * (seq.q_at(n1) + seq.q_at(n2));
  Int a5(3);
  while (Rat(a5) * Rat(seq.q_at(4)) < Rat(target)) a5 += 1;
  seq.push(a5);

  // third checkpoint: minimal even index with both growth conditions
  Rat threshold = gap_threshold(params, seq.q_at(n2 + 1));
  if (!threshold_materializable(threshold, params.cap_bits)) {
    st.partial = true;
    st.magnitude_certs.push_back(MagnitudeCertificate{
        "log q at the third even checkpoint", threshold,
        "gap condition with coefficient " + params.lower_c18.get_str()});
    st.schedule.digits = seq.digits;
    st.schedule.even_checkpoints = {n1, n2};
    st.schedule.odd_checkpoints = {};
    st.schedule.validate();
    return st;
  }

  Int sum12 = seq.q_at(n1) + seq.q_at(n2);
  size_t n3 = 0;
  for (size_t n = 6; n < 6 + kSearchCap; n += 2) {
    while (seq.len() < n) seq.push(Int(1));
    if (!(3 * sum12 < seq.q_at(n))) continue;
    if (!log_exceeds(seq.q_at(n), threshold)) continue;
    n3 = n;
    break;
  }
  if (n3 == 0) throw Error("stage-infeasible", "binding constraint: third checkpoint");
  seq.digits.resize(n3);
  seq.q.resize(n3 + 1);
  seq.push(Int(3));  // a_{n3+1} = 3

  LogSum phi1 = stage_phi(seq.digits, {n1, n2, n3}, params);

  DigitSchedule sofar;
  sofar.digits = seq.digits;
  WindowSearchResult win =
      phi_window_search(sofar, n3 + 1, seq.q_at(n3), phi1, params, 1);
  if (!win.materialized) {
    st.partial = true;
    st.magnitude_certs.push_back(MagnitudeCertificate{
        "log2 q at the first odd checkpoint", Rat(static_cast<long>(win.log2_q_estimate)),
        "window target beyond the materialization cap"});
    st.schedule.digits = seq.digits;
    st.schedule.even_checkpoints = {n1, n2, n3};
    st.schedule.validate();
    return st;
  }
  size_t t1 = win.t;
  while (seq.len() < t1) seq.push(Int(1));
  Int a_next = min_digit_above_log(win.q_t, Rat(1));
  seq.push(a_next);

  st.schedule.digits = seq.digits;
  st.schedule.even_checkpoints = {n1, n2, n3};
  st.schedule.odd_checkpoints = {t1};
  st.schedule.validate();
  st.stage = 1;
  StageRecord rec;
  rec.index = 1;
  rec.t_checkpoint = t1;
  rec.phi = phi1;
  rec.q_t = win.q_t;
  st.stages.push_back(rec);
  return st;
}

ConstructionState extend_stage(const ConstructionState& state) {
  if (state.partial)
    throw Error("stage-infeasible", "cannot extend a partially materialized state");
  if (state.stage == 0) throw Error("precondition", "no completed base stage");

  ConstructionState st = state;
  const ConstructionParams& params = st.params;
  size_t n_stage = st.stage;  // N
  QSeq seq(st.schedule.digits);

  std::vector<size_t> evens = st.schedule.even_checkpoints;
  size_t t_prev = st.schedule.odd_checkpoints.back();

  Int sum_q = 0;
  for (size_t n : evens) sum_q += seq.q_at(n);

  // next even checkpoint: minimal even > t_N + 1 with the ratio condition
  long factor = static_cast<long>(2 * n_stage + 2);
  size_t n_even = 0;
  for (size_t n = t_prev + 2; n < t_prev + 2 + kSearchCap; ++n) {
    if (n % 2 != 0) continue;
    while (seq.len() < n) seq.push(Int(1));
    if (factor * sum_q < seq.q_at(n)) { n_even = n; break; }
  }
  if (n_even == 0) throw Error("stage-infeasible", "binding constraint: even checkpoint");
  seq.digits.resize(n_even);
  seq.q.resize(n_even + 1);

  // digit after it: minimal > 2N+2 with the cumulative condition
  Int cum = 2 * (sum_q + seq.q_at(n_even));
  Int a_even(factor + 1);
  while (!(cum < a_even * seq.q_at(n_even) + seq.q_at(n_even - 1))) a_even += 1;
  seq.push(a_even);
  evens.push_back(n_even);
  sum_q += seq.q_at(n_even);

  // next odd-position checkpoint with ratio + gap conditions
  Rat threshold = gap_threshold(params, seq.q_at(n_even + 1));
  if (!threshold_materializable(threshold, params.cap_bits)) {
    st.partial = true;
    st.magnitude_certs.push_back(MagnitudeCertificate{
        "log q at the next odd-position checkpoint", threshold,
        "gap condition with coefficient " + params.lower_c18.get_str()});
    st.schedule.digits = seq.digits;
    st.schedule.even_checkpoints = evens;
    st.schedule.validate();
    return st;
  }
  long factor_odd = static_cast<long>(2 * n_stage + 3);
  size_t n_odd = 0;
  for (size_t n = n_even + 2; n < n_even + 2 + kSearchCap; ++n) {
    if (n % 2 != 0) continue;
    while (seq.len() < n) seq.push(Int(1));
    if (!(factor_odd * sum_q < seq.q_at(n))) continue;
    if (!log_exceeds(seq.q_at(n), threshold)) continue;
    n_odd = n;
    break;
  }
  if (n_odd == 0) throw Error("stage-infeasible", "binding constraint: odd checkpoint");
  seq.digits.resize(n_odd);
  seq.q.resize(n_odd + 1);
  seq.push(Int(3));
  evens.push_back(n_odd);

  LogSum phi = stage_phi(seq.digits, evens, params);

  DigitSchedule sofar;
  sofar.digits = seq.digits;
  WindowSearchResult win =
      phi_window_search(sofar, n_odd + 1, seq.q_at(n_odd), phi, params, n_stage + 1);
  if (!win.materialized) {
    st.partial = true;
    st.magnitude_certs.push_back(MagnitudeCertificate{
        "log2 q at the next odd checkpoint", Rat(static_cast<long>(win.log2_q_estimate)),
        "window target beyond the materialization cap"});
    st.schedule.digits = seq.digits;
    st.schedule.even_checkpoints = evens;
    st.schedule.validate();
    return st;
  }
  while (seq.len() < win.t) seq.push(Int(1));
  Int a_next = min_digit_above_log(win.q_t, Rat(static_cast<long>(n_stage + 1)));
  seq.push(a_next);

  st.schedule.digits = seq.digits;
  st.schedule.even_checkpoints = evens;
  st.schedule.odd_checkpoints.push_back(win.t);
  st.schedule.validate();
  st.stage = n_stage + 1;
  StageRecord rec;
  rec.index = st.stage;
  rec.t_checkpoint = win.t;
  rec.phi = phi;
  rec.q_t = win.q_t;
  st.stages.push_back(rec);
  return st;
}

VerificationReport conditions_report(const ConstructionState& state) {
  VerificationReport rep;
  rep.title = "stage conditions";
  rep.constants = state.params.describe();

  const DigitSchedule& sched = state.schedule;
  QSeq seq(sched.digits);
  SkewConfig cfg = state.config();

  auto q_of = [&](size_t n) { return seq.q_at(n); };

  // digits after odd-position checkpoints equal 3 (and lie within the cap)
  for (size_t i = 0; 2 * i < sched.even_checkpoints.size(); ++i) {
    size_t n = sched.even_checkpoints[2 * i];
    if (n < sched.digits.size()) {
      rep.add_bool("digit 3 after odd checkpoint #" + std::to_string(i + 1),
                   sched.digits[n] == 3);
    }
  }

  // growth ratios at every checkpoint: k-th ratio below 1/k
  for (size_t k = 2; k <= sched.even_checkpoints.size(); ++k) {
    Int sum_prev = 0;
    for (size_t s = 0; s + 1 < k; ++s) sum_prev += q_of(sched.even_checkpoints[s]);
    Rat ratio = Rat(sum_prev) / Rat(q_of(sched.even_checkpoints[k - 1]));
    Rat bound = Rat(1, static_cast<long>(k));
    rep.add_exact("checkpoint mass ratio #" + std::to_string(k), ratio, bound,
                  bound - ratio);
  }

  // doubling condition at even-position checkpoints
  for (size_t k = 1; 2 * k <= sched.even_checkpoints.size(); ++k) {
    size_t n = sched.even_checkpoints[2 * k - 1];
    Int cum = 0;
    for (size_t s = 0; s < 2 * k; ++s) cum += q_of(sched.even_checkpoints[s]);
    if (n + 1 <= seq.len()) {
      Rat lhs = 2 * Rat(cum);
      Rat rhs = Rat(q_of(n + 1));
      rep.add_exact("cumulative growth at even checkpoint #" + std::to_string(k), lhs,
                    rhs, rhs - lhs);
    }
    // digit escape: a_{n_{2k}+1} > k
    if (n < sched.digits.size())
      rep.add_bool("digit escape at even checkpoint #" + std::to_string(k),
                   sched.digits[n] > static_cast<long>(k));
  }

  // gap condition at odd-position checkpoints (with the substituted constant):
  // gap_lo - c18 q / log(q_odd) > gap_hi  <=>  (gap_lo - gap_hi) log q > c18 q
  for (size_t k = 1; 2 * k + 1 <= sched.even_checkpoints.size(); ++k) {
    size_t n_ev = sched.even_checkpoints[2 * k - 1];
    size_t n_od = sched.even_checkpoints[2 * k];
    LogSum cond = LogSum::log(Rat(q_of(n_od)),
                              state.params.gap_lo - state.params.gap_hi) -
                  LogSum(state.params.lower_c18 * Rat(q_of(n_ev + 1)));
    rep.add_enclosed("gap condition at odd checkpoint #" + std::to_string(k),
                     cond, LogSum(Rat(0)), cond);
  }

  // window and growth conditions at the recorded stages
  for (const StageRecord& srec : state.stages) {
    size_t t = srec.t_checkpoint;
    size_t n_od = sched.even_checkpoints[2 * srec.index];
    rep.add_bool("growth gate at stage " + std::to_string(srec.index),
                 int_pow_less(q_of(n_od), state.params.kappa, srec.q_t));
    LogSum w = srec.phi.scaled(state.params.tau) - LogSum::log(Rat(srec.q_t));
    rep.add_abs_enclosed("window at stage " + std::to_string(srec.index), w,
                         LogSum::log(Rat(2)));
    // digit condition after t_k: log(q_t)/a < 1/k
    if (t < sched.digits.size()) {
      Rat scaled = Rat(sched.digits[t]) / Rat(static_cast<long>(srec.index));
      LogSum cond = LogSum(scaled) - LogSum::log(Rat(srec.q_t));
      rep.add_enclosed("post-checkpoint digit at stage " + std::to_string(srec.index),
                       cond, LogSum(Rat(0)), cond);
    }
    // ordering: t_{k-1} < n_{2k}
    if (srec.index >= 2) {
      size_t t_prev = sched.odd_checkpoints[srec.index - 2];
      size_t n_even = sched.even_checkpoints[2 * srec.index - 1];
      rep.add_bool("checkpoint ordering at stage " + std::to_string(srec.index),
                   t_prev < n_even);
    }
  }

  // tail bound and its decay: sum_{s>k} ||q_{n_s} a|| < 2 / q_{n_{k+1}+1}.
  // The weighted bounds decay along the even-position and odd-position
  // checkpoint subsequences separately.
  size_t kmax = sched.even_checkpoints.size();
  std::vector<Rat> decay;
  for (size_t k = 0; k + 1 < kmax; ++k) {
    Rat tail = 0;
    for (size_t s = k + 1; s <= kmax - 1; ++s) tail += cfg.checkpoint_dist[s];
    Rat bound = Rat(2) / Rat(q_of(sched.even_checkpoints[k + 1] + 1));
    rep.add_exact("tail bound past checkpoint #" + std::to_string(k + 1), tail, bound,
                  bound - tail);
    decay.push_back(Rat(q_of(sched.even_checkpoints[k])) * bound);
  }
  for (size_t k = 0; k + 2 < decay.size(); ++k)
    rep.add_exact("tail decay step #" + std::to_string(k + 1), decay[k + 2], decay[k],
                  decay[k] - decay[k + 2]);
  return rep;
}

std::pair<TorusPoint, WitnessCertificate> witness_points(
    const ConstructionState& state, size_t k) {
  if (k == 0 || k > state.stage)
    throw Error("precondition", "stage index out of range");
  size_t m = 2 * k + 1;
  SkewConfig cfg = state.config();
  auto levels = build_tower_levels(cfg, m);
  const TowerLevel& top = levels[m];

  QSeq seq(state.schedule.digits);
  size_t t = state.schedule.odd_checkpoints[k - 1];
  const Int& q_t = seq.q_at(t);
  Rat buffer = unit_dist(Rat(q_t) * cfg.alpha.value);
  Rat clearance_floor = Rat(1) / (state.params.clearance_den * Rat(q_t));

  Rat x0 = 1 - cfg.alpha.value;
  Rat l_full = slit_length(cfg, cfg.effective_s());
  Rat x1 = frac(l_full - cfg.alpha.value);

  // Sorted index of the points whose orbit step comes near a singular
  // abscissa: clearance of y is its distance to the nearest of these.
  std::vector<Rat> bad;
  bad.reserve(2 * (mpz_get_ui(q_t.get_mpz_t()) + 1));
  {
    Rat p0 = frac(x0 + cfg.alpha.value);
    Rat p1 = frac(x1 + cfg.alpha.value);
    for (Int w = 0; w <= q_t; ++w) {
      bad.push_back(p0);
      bad.push_back(p1);
      p0 = frac(p0 - cfg.alpha.value);
      p1 = frac(p1 - cfg.alpha.value);
    }
    std::sort(bad.begin(), bad.end());
  }
  auto clearance_of = [&](const Rat& y) {
    auto it = std::lower_bound(bad.begin(), bad.end(), y);
    Rat best = 1;
    if (it != bad.end()) best = std::min(best, unit_dist(*it - y));
    if (it != bad.begin()) best = std::min(best, unit_dist(*(it - 1) - y));
    best = std::min(best, unit_dist(bad.front() - y));  // wrap neighbours
    best = std::min(best, unit_dist(bad.back() - y));
    return best;
  };

  // circle components between consecutive admissible points
  const std::vector<Rat>& cuts = top.delta;
  struct Comp { Rat left, right; size_t index; };
  std::vector<Comp> comps;
  for (size_t i = 0; i < cuts.size(); ++i) {
    Rat l = cuts[i];
    Rat r = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + 1;
    if (r > l) comps.push_back({l, r, i});
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const Comp& a, const Comp& b) {
                     return (a.right - a.left) > (b.right - b.left);
                   });

  Rat coincidence_defect = 0;
  for (size_t s = m; s < cfg.checkpoints(); ++s)
    coincidence_defect += cfg.checkpoint_dist[s];
  coincidence_defect *= 2 * Rat(q_t);
  Rat omega_bound = 4 * (Rat(q_t) + 1) / (state.params.clearance_den * Rat(q_t));
  Rat short_defect = 2 * Rat(static_cast<long>(comps.size())) * buffer;

  // Probe offsets inside each component: the midpoint first, then two points
  // whose denominators are coprime to it.  A pure-midpoint rule resonates
  // with the orbit lattice (midpoints of lattice cuts are half-lattice
  // points, and their orbits return within ||q_t alpha|| of the singular
  // abscissae), so whole length classes of components can fail at once.
  const Rat offsets[] = {Rat(1, 2), Rat(1, 3), Rat(2, 5)};

  for (const Comp& comp : comps) {
    if (comp.right - comp.left <= 2 * buffer) break;  // sorted by length
    for (const Rat& offset : offsets) {
      Rat len = comp.right - comp.left;
      Rat u = len * offset;  // position within the component
      if (!(u > buffer && u < len - buffer)) continue;
      Rat y = frac(comp.left + u);
      TorusPoint z(y, 0);
      if (!top.u.contains(z)) z.level = 1;
      if (!top.u.contains(z)) continue;  // should not happen

      Rat clearance = clearance_of(y);
      if (clearance < clearance_floor) continue;

      // coincidence of the full and truncated maps along 2 q_t steps
      if (!coincides_pointwise(cfg, m, y, 2 * q_t - 1)) continue;

      // level return at time q_t
      TorusPoint back = skew_apply(cfg, z, q_t);
      if (back.level != z.level) continue;

      // the induced rigidity interval must move rigidly at time q_t
      {
        Rat half = state.params.rigidity_c / (2 * Rat(q_t));
        PairedSweep sweep = paired_displacement_sweep(
            cfg, frac(y - half), state.params.rigidity_c / Rat(q_t), z.level, q_t);
        if (!sweep.certified()) continue;
      }

      WitnessCertificate cert;
      cert.component_index = comp.index;
      cert.component_left = comp.left;
      cert.component_right = comp.right;
      cert.level = z.level;
      cert.buffer = buffer;
      cert.omega_clearance = clearance;
      cert.coincidence_horizon = 2 * q_t;
      cert.level_return = true;
      return {z, cert};
    }
  }
  std::ostringstream os;
  os << "no admissible witness at stage " << k
     << "; diagnostics: coincidence defect <= " << coincidence_defect.get_str()
     << ", clearance-excluded measure <= " << omega_bound.get_str()
     << ", buffer-excluded measure <= " << short_defect.get_str();
  throw Error("witness-not-found", os.str());
}

std::string ConstructionState::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["params"] = params.describe();
  j["partial"] = partial;
  j["stage"] = stage;
  nlohmann::json digits = nlohmann::json::array();
  for (const Int& d : schedule.digits) digits.push_back(d.get_str());
  j["schedule"]["digits"] = digits;
  j["schedule"]["even_checkpoints"] = schedule.even_checkpoints;
  j["schedule"]["odd_checkpoints"] = schedule.odd_checkpoints;
  j["schedule"]["M"] = schedule.digit_cap_m.get_str();
  nlohmann::json stages_json = nlohmann::json::array();
  for (const StageRecord& s : stages) {
    nlohmann::json e;
    e["index"] = s.index;
    e["t_checkpoint"] = s.t_checkpoint;
    e["q_t"] = s.q_t.get_str();
    e["phi_symbolic"] = s.phi.str();
    e["phi_numeric"] = s.phi.numeric_str();
    e["phi_precision_bits"] = 256;
    if (s.witness) {
      e["witness"]["x"] = s.witness->x.get_str();
      e["witness"]["level"] = s.witness->level;
    }
    if (s.certificate) {
      const WitnessCertificate& c = *s.certificate;
      e["certificate"]["component_index"] = c.component_index;
      e["certificate"]["component_left"] = c.component_left.get_str();
      e["certificate"]["component_right"] = c.component_right.get_str();
      e["certificate"]["level"] = c.level;
      e["certificate"]["buffer"] = c.buffer.get_str();
      e["certificate"]["omega_clearance"] = c.omega_clearance.get_str();
      e["certificate"]["coincidence_horizon"] = c.coincidence_horizon.get_str();
      e["certificate"]["level_return"] = c.level_return;
    }
    stages_json.push_back(e);
  }
  j["stages"] = stages_json;
  nlohmann::json certs = nlohmann::json::array();
  for (const MagnitudeCertificate& c : magnitude_certs) {
    nlohmann::json e;
    e["quantity"] = c.quantity;
    e["lower_bound"] = c.lower_bound.get_str();
    e["binding"] = c.binding;
    certs.push_back(e);
  }
  j["magnitude_certificates"] = certs;
  return j.dump(2);
}

ConstructionState ConstructionState::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ConstructionState st;
  auto p = j["params"];
  st.params.faithful = p["mode"] == "faithful";
  st.params.tau = rat_from_str(p["tau"]);
  st.params.lower_c18 = rat_from_str(p["lower_c18"]);
  st.params.gap_lo = rat_from_str(p["gap_lo"]);
  st.params.gap_hi = rat_from_str(p["gap_hi"]);
  st.params.clearance_den = rat_from_str(p["clearance_den"]);
  st.params.kappa = rat_from_str(p["kappa"]);
  st.params.rigidity_c = rat_from_str(p["rigidity_c"]);
  st.params.cap_bits = std::stoul(p["cap_bits"].get<std::string>());
  st.params.seed = std::stoull(p["seed"].get<std::string>());
  st.partial = j["partial"];
  st.stage = j["stage"];
  for (const auto& d : j["schedule"]["digits"])
    st.schedule.digits.emplace_back(d.get<std::string>());
  st.schedule.even_checkpoints =
      j["schedule"]["even_checkpoints"].get<std::vector<size_t>>();
  st.schedule.odd_checkpoints =
      j["schedule"]["odd_checkpoints"].get<std::vector<size_t>>();
  st.schedule.digit_cap_m = Int(j["schedule"]["M"].get<std::string>());
  for (const auto& e : j["stages"]) {
    StageRecord s;
    s.index = e["index"];
    s.t_checkpoint = e["t_checkpoint"];
    s.q_t = Int(e["q_t"].get<std::string>());
    // phi is re-derivable; keep the numeric shadow out of the state round trip
    if (e.contains("witness")) {
      s.witness = TorusPoint(rat_from_str(e["witness"]["x"]), e["witness"]["level"]);
    }
    st.stages.push_back(s);
  }
  return st;
}

}  // namespace ergoflow
