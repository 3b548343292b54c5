// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "desk_params.hpp"
#include "ergoflow/birkhoff.hpp"
#include "ergoflow/construction.hpp"
#include "ergoflow/flow.hpp"
#include "ergoflow/roof.hpp"

using namespace ergoflow;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s — %s\n", criterion, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

DigitSchedule desk_b() {
  DigitSchedule s;
  s.digits = {Int(1), Int(1), Int(3), Int(1), Int(3), Int(1), Int(1), Int(1),
              Int(3), Int(1), Int(1), Int(1)};
  s.even_checkpoints = {2, 4, 8};
  s.digit_cap_m = 3;
  return s;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  auto start = Clock::now();
  Rng rng(101);
  size_t violations = 0;
  for (int it = 0; it < 100; ++it) {
    DigitSchedule s;
    for (size_t i = 0; i < 20; ++i) s.digits.emplace_back(1 + rng.below(9));
    auto cs = convergents(s, 20);
    AngleRep alpha = angle_from_schedule(s, 20);
    Int q_prev2 = 0, q_prev = 1;
    for (size_t n = 1; n <= 19; ++n) {
      if (cs[n - 1].q != s.digits[n - 1] * q_prev + q_prev2) ++violations;
      if (n >= 2 && !(cs[n - 1].q > cs[n - 2].q)) ++violations;
      q_prev2 = q_prev;
      q_prev = cs[n - 1].q;
      ApproxGap g = approx_gap(s, n);
      Rat err = rat_abs(alpha.value - Rat(cs[n - 1].p) / Rat(cs[n - 1].q));
      if (!(g.lower < err && err < g.upper)) ++violations;
    }
  }
  double secs = elapsed(start);
  report(1, violations == 0 && secs < 1.0,
         "100 random schedules, recursion and approximation sandwich exact, " +
             std::to_string(secs).substr(0, 5) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
  auto start = Clock::now();
  Rng rng(202);
  size_t pairs_done = 0, violations = 0;
  while (pairs_done < 50) {
    DigitSchedule shared;
    size_t len = 4 + rng.below(8);
    for (size_t i = 0; i < len; ++i) shared.digits.emplace_back(1 + rng.below(4));
    auto cs = convergents(shared, len);
    size_t n = 0;
    for (size_t i = len; i >= 1; --i)
      if (cs[i - 1].q <= 1000) { n = i; break; }
    if (n < 2) continue;
    DigitSchedule a = shared, b = shared;
    a.digits.resize(n);
    b.digits.resize(n);
    for (int i = 0; i < 5; ++i) {
      a.digits.emplace_back(1 + rng.below(5));
      b.digits.emplace_back(1 + rng.below(5));
    }
    try {
      SameCellResult res = same_cell_indices(a, b, n);
      if (!res.surjective) ++violations;
      AngleRep alpha = angle_from_schedule(a, n);
      AngleRep beta = angle_from_schedule(b, n);
      const Int& qn = cs[n - 1].q;
      Rat fa = 0, fb = 0;
      for (long kk = 1; kk < qn.get_si(); ++kk) {
        fa = frac(fa + alpha.value);
        fb = frac(fb + beta.value);
        Rat lo = make_rat(res.cells[kk - 1], qn.get_si());
        Rat hi = make_rat(res.cells[kk - 1] + 1, qn.get_si());
        if (!(fa > lo && fa < hi && fb > lo && fb < hi)) ++violations;
      }
      ++pairs_done;
    } catch (const Error&) {
      ++violations;
      ++pairs_done;
    }
  }
  double secs = elapsed(start);
  report(2, violations == 0 && secs < 10.0,
         "50 shared-prefix pairs, exhaustive cell membership and surjectivity, " +
             std::to_string(secs).substr(0, 5) + " s");
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
  Rng rng(303);
  size_t violations = 0, done = 0;
  while (done < 500) {
    DigitSchedule s;
    size_t len = 5 + rng.below(11);  // up to 15
    for (size_t i = 0; i < len; ++i) s.digits.emplace_back(1 + rng.below(3));
    size_t n = 1 + rng.below(std::min<size_t>(len, 15));
    auto cs = convergents(s, n);
    if (cs[n - 1].q > 40000) continue;  // keep the exhaustive sums quick
    AngleRep alpha = angle_from_schedule(s, len);
    std::vector<PiecewiseFunction::Step> steps;
    size_t jumps = 1 + rng.below(10);  // up to 20 jump points
    for (size_t j = 0; j < jumps; ++j) {
      Rat l = rng.rat_below_one(1 << 12);
      Rat r = rng.rat_below_one(1 << 12);
      if (l == r) continue;
      if (l > r) std::swap(l, r);
      steps.push_back({l, r, make_rat(static_cast<long>(rng.below(9)) - 4)});
    }
    PiecewiseFunction f = PiecewiseFunction::step_function(steps);
    VerificationReport rep =
        dk_check(f, alpha, n, {TorusPoint(rng.rat_below_one(1 << 12), 0)});
    if (!rep.all_passed()) ++violations;
    ++done;
  }
  report(3, violations == 0,
         "500 randomized bounded-variation instances, deviation within the "
         "variation exactly");
}

// ------------------------------------------------------------- criteria 4-6
void criteria_4_5_6() {
  // toy: rotation by 4/7, single checkpoint
  bool ok4 = true;
  {
    DigitSchedule s;
    s.digits = {Int(1), Int(1), Int(3)};
    s.even_checkpoints = {2};
    SkewConfig cfg = SkewConfig::make(s, std::nullopt, AngleRep{Rat(4, 7), 3});
    auto levels = build_tower_levels(cfg, 1);
    TorusIntervalSet expected =
        TorusIntervalSet::arc(Rat(1, 7), Rat(4, 7), 0)
            .combine(TorusIntervalSet::arc(Rat(5, 7), Rat(1), 0), SetOp::Union)
            .combine(TorusIntervalSet::arc(Rat(0), Rat(1, 7), 1), SetOp::Union)
            .combine(TorusIntervalSet::arc(Rat(4, 7), Rat(5, 7), 1), SetOp::Union);
    ok4 = ok4 && levels[1].u == expected;
    ok4 = ok4 && structure_report(levels, cfg).all_passed();
  }

  bool ok5 = true, ok6 = true;
  size_t towers_checked = 0;
  for (const DigitSchedule& sched : {testing::desk_schedule_m3(), desk_b()}) {
    SkewConfig cfg = SkewConfig::make(sched);
    size_t m_max = cfg.checkpoints();
    auto levels = build_tower_levels(cfg, m_max);
    VerificationReport rep = structure_report(levels, cfg);
    ok4 = ok4 && rep.all_passed();

    for (size_t m = 2; m <= m_max; ++m) {
      ++towers_checked;
      // criterion 5: decomposition identity at 10^4 samples plus endpoints
      Rng rng(505 + m);
      std::vector<Rat> samples;
      for (int i = 0; i < 10000; ++i) samples.push_back(rng.rat_below_one(1 << 20));
      ok5 = ok5 && psi_decompose_check(cfg, levels, m, samples).all_passed();

      // criterion 6: variation and integral bounds, 256-bit enclosures
      RegionFamily regions = build_regions(cfg, levels, m);
      DigitSchedule padded =
          padded_schedule(sched, sched.even_checkpoints.back() + 2);
      Int a_top = padded.digits[sched.even_checkpoints[m - 1]];
      const Int& q_top = cfg.checkpoint_q[m - 1];
      Convergent prev_next =
          convergent_at(padded, sched.even_checkpoints[m - 2] + 1);
      Rat v1_bound = 8 * Rat(q_top) * Rat(prev_next.q);
      for (const TorusIntervalSet* set :
           {&regions.a, &regions.b, &regions.c, &regions.d}) {
        PiecewiseFunction f =
            PiecewiseFunction::indicator_over_dist(*set, Rat(1), Rat(0), 1);
        bool infinite = false;
        Rat var = f.variation(&infinite);
        ok6 = ok6 && !infinite && var <= v1_bound;
      }
      PiecewiseFunction fe =
          PiecewiseFunction::indicator_over_dist(regions.e, Rat(1), Rat(0), 1);
      bool infinite = false;
      Rat var_e = fe.variation(&infinite);
      Convergent top_next =
          convergent_at(padded, sched.even_checkpoints[m - 1] + 1);
      LogSum v2_bound = LogSum(Rat(8) * (Rat(top_next.q) + Rat(q_top)));
      v2_bound += LogSum::log(Rat(q_top), Rat(8) * Rat(q_top));
      ok6 = ok6 && !infinite &&
            (v2_bound - LogSum(var_e)).ge_zero(256) == Verdict::True;
      LogSum integral = fe.integral();
      LogSum lo = LogSum::log(Rat(q_top), Rat(1) / (2 * (Rat(a_top) + 2)));
      LogSum hi = LogSum(Rat(2)) + (LogSum(Rat(1)) + LogSum::log(Rat(q_top)))
                                       .scaled(Rat(4) / Rat(a_top));
      ok6 = ok6 && (integral - lo).ge_zero(256) == Verdict::True;
      ok6 = ok6 && (hi - integral).ge_zero(256) == Verdict::True;
    }
  }
  report(4, ok4, "hand-derived first level byte-exact; structure items exact on "
                 "desk towers");
  report(5, ok5, "decomposition identity exact at 10^4 samples plus endpoints, " +
                     std::to_string(towers_checked) + " towers");
  report(6, ok6, "variation and integral bounds sign-definite at 256 bits");
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
  bool ok = true;
  for (const DigitSchedule& sched :
       {testing::desk_schedule_m2(), testing::desk_schedule_m3()}) {
    size_t m = sched.even_checkpoints.size();
    SkewConfig base_cfg = SkewConfig::make(sched);
    const Int& q_top = base_cfg.checkpoint_q[m - 1];

    size_t ell = sched.even_checkpoints.back() + 1;
    {
      DigitSchedule probe = sched;
      while (true) {
        probe = padded_schedule(probe, ell + 1);
        if (convergent_at(probe, ell).q > q_top * q_top) break;
        ++ell;
      }
    }
    auto member = [&](size_t tail_seed) {
      DigitSchedule s = padded_schedule(sched, ell);
      if (tail_seed > 0) {
        Rng trng(tail_seed);
        for (size_t i = 0; i < 6; ++i) s.digits.emplace_back(1 + trng.below(4));
      }
      AngleRep alpha = angle_from_schedule(s, ell, 8);
      return SkewConfig::make(s, std::nullopt, alpha);
    };

    SkewConfig ref_cfg = member(0);
    auto ref_levels = build_tower_levels(ref_cfg, m);
    LogSum phi_ref = phi_constant(ref_cfg, ref_levels, m);

    size_t n = ell + 1;
    Rng rng(707);
    for (size_t mem = 0; mem < 5; ++mem) {
      SkewConfig cfg = mem == 0 ? ref_cfg : member(mem);
      auto levels = mem == 0 ? ref_levels : build_tower_levels(cfg, m);
      DigitSchedule padded = padded_schedule(cfg.schedule, n + 1);
      Convergent c = convergent_at(padded, n);

      size_t want = mem == 0 ? 100 : 20;
      size_t found = 0;
      while (found < want) {
        Rat x = rng.rat_below_one(static_cast<unsigned long>(16 * c.q.get_ui()));
        if (min_orbit_dist(x, cfg.alpha.value, c.q, Rat(0)) <
            Rat(1) / (16 * Rat(c.q)))
          continue;
        TorusPoint z(x, 0);
        if (!levels[m].u.contains(z)) z.level = 1;
        PhiSumParams params;
        params.phi_ref = phi_ref;
        VerificationReport r1 =
            phi_sum_check(cfg, levels, m, n, z, PhiSumMode::CenteredBound, params);
        VerificationReport r2 =
            phi_sum_check(cfg, levels, m, n, z, PhiSumMode::ClassBound, params);
        ok = ok && r1.all_passed() && !r1.any_undecided();
        ok = ok && r2.all_passed() && !r2.any_undecided();
        ++found;
      }

      if (mem > 0) {
        LogSum phi_mem = phi_constant(cfg, levels, m);
        PhiSumParams params;
        params.phi_ref = phi_ref;
        params.phi_other = phi_mem;
        VerificationReport rd =
            phi_sum_check(cfg, levels, m, n, TorusPoint(Rat(0), 0),
                          PhiSumMode::Discrepancy, params);
        ok = ok && rd.all_passed() && !rd.any_undecided();
      }
    }
  }
  report(7, ok, "centered bound at 100 admissible samples, class bound across 5 "
                "members, constant discrepancy under 12(M+1)");
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
  bool ok = true;
  for (const DigitSchedule& sched :
       {testing::desk_schedule_m2(), testing::desk_schedule_m3()}) {
    SkewConfig cfg = SkewConfig::make(sched);
    RoofSpec spec = RoofSpec::from_config(cfg, Rat(60) / Rat(59));
    size_t n = 6;  // q_6 = 43
    DigitSchedule padded = padded_schedule(sched, n + 1);
    Convergent c = convergent_at(padded, n);
    Rng rng(808);
    size_t found = 0;
    while (found < 200) {
      Rat x = rng.rat_below_one(static_cast<unsigned long>(64 * c.q.get_ui()));
      if (min_orbit_dist(x, cfg.alpha.value, c.q, spec.x0) == 0) continue;
      if (min_orbit_dist(x, cfg.alpha.value, c.q, spec.x1) == 0) continue;
      VerificationReport rep = gamma_bounds_check(spec, cfg, n, x);
      ok = ok && rep.all_passed() && !rep.any_undecided();
      ++found;
    }
  }
  report(8, ok, "one-sided displays and the 7 q log q partial-sum bound at 200 "
                "admissible samples per rotation number");
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
  bool ok = true;
  ConstructionParams faithful;  // defaults are the literal constants
  ConstructionState st = base_stage(faithful);
  ok = ok && st.partial;
  auto cs = convergents(st.schedule, 5);
  Int lhs = 2 * (cs[1].q + cs[3].q);
  ok = ok && st.schedule.digits[4] == 3;
  ok = ok && lhs <= st.schedule.digits[4] * cs[3].q;
  ok = ok && st.schedule.digits[4] * cs[3].q < cs[4].q;
  ok = ok && !st.magnitude_certs.empty() &&
       st.magnitude_certs[0].lower_bound >= 270 * Rat(cs[4].q);
  report(9, ok, "seed checkpoints exact, minimal fifth digit 3, magnitude "
                "certificate above 270 q_5");
}

// -------------------------------------------------------- criteria 10 and 11
ConstructionState pipeline_state;

void criterion_10() {
  auto start = Clock::now();
  bool ok = true;
  std::ostringstream note;
  try {
    ConstructionState st = base_stage(testing::relaxed_desk_params());
    st = extend_stage(st);
    ok = ok && st.stage == 2 && !st.partial;

    VerificationReport conds = conditions_report(st);
    ok = ok && conds.all_passed() && !conds.any_undecided();

    for (size_t k = 1; k <= 2; ++k) {
      auto [point, cert] = witness_points(st, k);
      st.stages[k - 1].witness = point;
      st.stages[k - 1].certificate = cert;
      ok = ok && cert.level_return;

      RigiditySet rig = build_rigidity_set(st, k, Rat(1, 32));
      ok = ok && rig.translates_disjoint && rig.sweep_clear &&
           rig.displacement_exact;
      ok = ok && rig.measure >= Rat(1, 128);  // min{1, c}/4 with c = 1/32
      ok = ok && rig.displacement ==
                     unit_dist(Rat(st.stages[k - 1].q_t) * st.config().alpha.value);

      VerificationReport crit = criterion_check(st, k);
      ok = ok && crit.all_passed() && !crit.any_undecided();
      note << " C_" << k << "=" << crit.constants.at("C");
    }
    pipeline_state = st;
  } catch (const Error& e) {
    ok = false;
    note << " error: " << e.what();
  }
  double secs = elapsed(start);
  ok = ok && secs < 300.0;
  report(10, ok, "two-stage relaxed pipeline, certified witnesses, rigidity "
                 "sets and margin checks in " +
                     std::to_string(secs).substr(0, 6) + " s," + note.str());
}

void criterion_11() {
  bool ok = true;
  std::ostringstream note;
  try {
    SkewConfig cfg = pipeline_state.config();
    auto levels = build_tower_levels(cfg, 5);

    // odd-step sandwich at both built odd checkpoints
    Rat m_cap = Rat(pipeline_state.schedule.digit_cap_m);
    for (size_t k = 1; k <= 2; ++k) {
      Rat sym =
          levels[2 * k + 1].u.combine(levels[2 * k].u, SetOp::SymDiff).measure();
      ok = ok && Rat(1) / (m_cap + 2) < sym && sym < Rat(1, 3);
    }
    // even-step strict decay
    Rat even1 = levels[2].u.combine(levels[1].u, SetOp::SymDiff).measure();
    Rat even2 = levels[4].u.combine(levels[3].u, SetOp::SymDiff).measure();
    ok = ok && even2 < even1;

    // deviation measures decreasing across the built stages
    TorusIntervalSet obs = TorusIntervalSet::arc(Rat(1, 10), Rat(2, 5), 0);
    Rat dev1 = ue_deviation_measure(cfg, levels, 1, obs, Rat(1, 10));
    Rat dev2 = ue_deviation_measure(cfg, levels, 2, obs, Rat(1, 10));
    ok = ok && (dev2 < dev1 || (dev2 == 0 && dev1 == 0));
    note << "dev1=" << dev1.get_str() << " dev2~" << mpq_get_d(dev2.get_mpq_t());
  } catch (const Error& e) {
    ok = false;
    note << " error: " << e.what();
  }
  report(11, ok, "symmetric-difference sandwich, even-step decay, deviation "
                 "measures decreasing; " +
                     note.str());
}

// --------------------------------------------------------------- criterion 12
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void criterion_12() {
  bool ok = true;
  std::string cli = "./ergoflow";
  if (const char* env = std::getenv("ERGOFLOW_CLI")) cli = env;
  std::string base = cli +
      " construct --stages 2 --mode relaxed --tau 6/5 --theta 1000000000"
      " --kappa 9/8 --seed 7 --output ";
  int rc1 = std::system((base + "accept_det1 > /dev/null 2>&1").c_str());
  int rc2 = std::system((base + "accept_det2 > /dev/null 2>&1").c_str());
  ok = ok && rc1 == 0 && rc2 == 0;
  for (const char* name : {"state.json", "conditions.json", "conditions.csv"}) {
    std::string a = slurp(std::string("accept_det1/") + name);
    std::string b = slurp(std::string("accept_det2/") + name);
    ok = ok && !a.empty() && a == b;
  }
  report(12, ok, "two seeded runs produce byte-identical state and reports");
}

}  // namespace

int main() {
  auto start = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_5_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("acceptance total: %s in %.1f s\n", failures ? "FAIL" : "PASS",
              elapsed(start));
  return failures == 0 ? 0 : 1;
}
