#include "ergoflow/skew.hpp"

#include <algorithm>

namespace ergoflow {

SkewConfig SkewConfig::make(const DigitSchedule& schedule,
                            std::optional<size_t> truncate,
                            std::optional<AngleRep> alpha) {
  schedule.validate();
  SkewConfig cfg;
  cfg.schedule = schedule;
  size_t max_n = 0;
  for (size_t n : schedule.even_checkpoints) max_n = std::max(max_n, n);
  if (alpha) {
    cfg.alpha = *alpha;
  } else {
    size_t ell = std::max(schedule.digits.size(), max_n + 1);
    cfg.alpha = angle_from_schedule(schedule, ell);
  }
  cfg.truncate_s = truncate;
  DigitSchedule padded = padded_schedule(schedule, max_n + 1);
  for (size_t n : schedule.even_checkpoints) {
    Convergent c = convergent_at(padded, n);
    cfg.checkpoint_q.push_back(c.q);
    cfg.checkpoint_dist.push_back(unit_dist(Rat(c.q) * cfg.alpha.value));
  }
  return cfg;
}

SkewConfig SkewConfig::with_truncation(std::optional<size_t> s) const {
  SkewConfig cfg = *this;
  cfg.truncate_s = s;
  return cfg;
}

Rat slit_length(const SkewConfig& cfg, size_t s) {
  Rat total = 0;
  for (size_t k = 0; k < std::min(s, cfg.checkpoints()); ++k)
    total += 2 * cfg.checkpoint_dist[k];
  return total;
}

TorusIntervalSet slit_interval(const SkewConfig& cfg) {
  Rat len = slit_length(cfg, cfg.effective_s());
  if (len >= 1) throw Error("invalid-schedule", "slit length reaches full circle");
  if (len == 0) return TorusIntervalSet();
  return TorusIntervalSet::arc(Rat(0), len, 0);
}

TorusPoint skew_apply(const SkewConfig& cfg, TorusPoint z, const Int& k,
                      bool inverse) {
  Rat len = slit_length(cfg, cfg.effective_s());
  if (len >= 1) throw Error("invalid-schedule", "slit length reaches full circle");
  const Rat& a = cfg.alpha.value;
  for (Int i = 0; i < k; ++i) {
    if (!inverse) {
      z.x = frac(z.x + a);
      if (z.x < len) z.level ^= 1;
    } else {
      if (z.x < len) z.level ^= 1;
      z.x = frac(z.x - a);
    }
  }
  return z;
}

TorusIntervalSet skew_image(const SkewConfig& cfg, const TorusIntervalSet& s) {
  Rat len = slit_length(cfg, cfg.effective_s());
  const Rat& a = cfg.alpha.value;
  // The level flips exactly when x + alpha lands in [0, len), i.e. when
  // x lies in [1 - alpha, 1 - alpha + len) mod 1.
  Rat p1 = frac(1 - a);
  Rat p2 = frac(1 - a + len);
  std::vector<TorusIntervalSet::RawArc> raw;
  for (const auto& arc : s.components()) {
    // split [left, right) at p1, p2
    std::vector<Rat> cuts{arc.left, arc.right};
    if (p1 > arc.left && p1 < arc.right) cuts.push_back(p1);
    if (p2 > arc.left && p2 < arc.right) cuts.push_back(p2);
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      Rat nl = frac(cuts[i] + a);
      bool flips = nl < len;  // image of the piece start decides for the piece
      raw.push_back({nl, nl + (cuts[i + 1] - cuts[i]),
                     flips ? 1 - arc.level : arc.level});
    }
  }
  return TorusIntervalSet::union_arcs(raw);
}

namespace {

// Left endpoints of the inducing interval tower: 2 sum_{s<m} ||q_{n_s} a||.
Rat j_prime_left(const SkewConfig& cfg, size_t m) {
  Rat left = 0;
  for (size_t s = 0; s + 1 < m; ++s) left += 2 * cfg.checkpoint_dist[s];
  return left;
}

}  // namespace

std::vector<TowerLevel> build_tower_levels(const SkewConfig& cfg, size_t m) {
  if (m > cfg.checkpoints())
    throw Error("insufficient-prefix", "tower level exceeds available checkpoints");
  if (slit_length(cfg, m) >= 1)
    throw Error("tower-degenerate", "slit sums exceed the circle");

  std::vector<TowerLevel> levels;
  TowerLevel base;
  base.m = 0;
  base.u = TorusIntervalSet::full_level(0);
  base.v = TorusIntervalSet::full_level(1);
  levels.push_back(base);

  std::vector<Rat> orbit_points;  // k*alpha for k < 2 sum_{s<=m} q_{n_s}
  Rat next_point = 0;
  for (size_t level = 1; level <= m; ++level) {
    const Int& q = cfg.checkpoint_q[level - 1];
    const Rat& step_len = cfg.checkpoint_dist[level - 1];
    Rat left = j_prime_left(cfg, level);

    TowerLevel t;
    t.m = level;
    t.j_prime = TorusIntervalSet::arc_both_levels(left, left + step_len);

    // Orbit of the inducing interval under the (level-1)-truncated map is a
    // plain rotation orbit of the base arc, carried on both levels.
    std::vector<TorusIntervalSet::RawArc> raw;
    Rat pos = left;
    for (Int i = 0; i < q; ++i) {
      raw.push_back({pos, pos + step_len, 0});
      raw.push_back({pos, pos + step_len, 1});
      pos = frac(pos + cfg.alpha.value);
    }
    TorusIntervalSet orbit = TorusIntervalSet::union_arcs(raw);

    t.u = levels.back().u.combine(orbit, SetOp::SymDiff);
    t.v = levels.back().v.combine(orbit, SetOp::SymDiff);

    for (Int k = 0; k < 2 * q; ++k) {
      orbit_points.push_back(next_point);
      next_point = frac(next_point + cfg.alpha.value);
    }
    t.delta = orbit_points;
    std::sort(t.delta.begin(), t.delta.end());
    levels.push_back(std::move(t));
  }
  return levels;
}

TowerLevel build_tower(const SkewConfig& cfg, size_t m) {
  return build_tower_levels(cfg, m).back();
}

VerificationReport structure_report(const std::vector<TowerLevel>& levels,
                                    const SkewConfig& cfg) {
  VerificationReport rep;
  rep.title = "tower structure";
  DigitSchedule padded = padded_schedule(
      cfg.schedule,
      (cfg.schedule.even_checkpoints.empty() ? 0 : cfg.schedule.even_checkpoints.back()) + 2);

  for (size_t m = 0; m + 1 <= levels.size(); ++m) {
    const TowerLevel& t = levels[m];
    std::string tag = "m=" + std::to_string(m);
    SkewConfig trunc = cfg.with_truncation(m);

    // invariance under the matching truncated map
    rep.add_bool("invariance of u, " + tag, skew_image(trunc, t.u) == t.u);
    rep.add_bool("invariance of v, " + tag, skew_image(trunc, t.v) == t.v);

    // partition
    rep.add_bool("partition, " + tag,
                 t.u.combine(t.v, SetOp::Intersect).empty() &&
                     t.u.combine(t.v, SetOp::Union) == TorusIntervalSet::full_space());
    rep.add_exact("equal halves, " + tag, t.u.measure(), Rat(1, 2),
                  Rat(1, 2) - rat_abs(t.u.measure() - Rat(1, 2)));

    // involution
    rep.add_bool("involution exchanges halves, " + tag, t.u.swap_levels() == t.v);

    if (m == 0) continue;

    // discontinuity sets match the admissible points on both levels
    bool delta_ok = true;
    for (int level = 0; level <= 1; ++level) {
      auto du = t.u.discontinuities(level);
      auto dv = t.v.discontinuities(level);
      if (du != t.delta || dv != t.delta) delta_ok = false;
    }
    rep.add_bool("discontinuity set matches orbit points, " + tag, delta_ok);

    // symmetric difference identity and its exact measure
    const TowerLevel& prev = levels[m - 1];
    TorusIntervalSet sym = t.u.combine(prev.u, SetOp::SymDiff);
    const Int& q = cfg.checkpoint_q[m - 1];
    const Rat& d = cfg.checkpoint_dist[m - 1];
    rep.add_exact("symdiff measure = q*dist, " + tag, sym.measure(), Rat(q) * d,
                  Rat(q) * d - rat_abs(sym.measure() - Rat(q) * d));

    // sandwich around the symmetric difference measure
    size_t n_m = cfg.schedule.even_checkpoints[m - 1];
    Int a_next = padded.digits[n_m];  // a_{n_m + 1}
    Rat lo = Rat(1) / Rat(a_next + 2);
    Rat hi = Rat(1) / Rat(a_next);
    bool sandwich = lo < sym.measure() && sym.measure() < hi;
    rep.add_bool("symdiff sandwich 1/(a+2) < . < 1/a, " + tag, sandwich);

    // near-zero inclusions under the cumulative growth hypothesis
    bool hyp = true;
    Int cum = 0;
    DigitSchedule full = padded_schedule(cfg.schedule, n_m + 2);
    for (size_t r = 1; r <= m; ++r) {
      cum += 2 * cfg.checkpoint_q[r - 1];
      Convergent next = convergent_at(full, cfg.schedule.even_checkpoints[r - 1] + 1);
      if (!(cum < next.q)) hyp = false;
    }
    if (hyp) {
      rep.add_bool("inclusion near 1 on level 0, " + tag,
                   t.u.contains_open_arc(1 - d, Rat(1), 0));
      rep.add_bool("inclusion near 0 on level 1, " + tag,
                   t.u.contains_open_arc(Rat(0), d, 1));
    } else {
      rep.add_info("near-zero inclusions, " + tag, "skipped",
                   "cumulative growth hypothesis fails");
    }
  }
  return rep;
}

TorusIntervalSet coincidence_set(const SkewConfig& cfg, size_t s, size_t K) {
  Rat l_s = slit_length(cfg, s);
  Rat l_full = slit_length(cfg, cfg.effective_s());
  if (l_full >= 1) throw Error("invalid-schedule", "slit length reaches full circle");
  if (l_s >= l_full || K == 0) return TorusIntervalSet::full_space();
  TorusIntervalSet tail = TorusIntervalSet::arc_both_levels(l_s, l_full);
  TorusIntervalSet bad;
  TorusIntervalSet cur = tail;
  for (size_t w = 1; w <= K; ++w) {
    cur = cur.translate(-cfg.alpha.value);
    bad = bad.combine(cur, SetOp::Union);
  }
  return bad.complement();
}

PairedSweep paired_displacement_sweep(const SkewConfig& cfg, const Rat& left,
                                      const Rat& len, int level, const Int& ret,
                                      bool keep_pieces) {
  PairedSweep out;
  Rat l_full = slit_length(cfg, cfg.effective_s());
  Rat x0 = frac(1 - cfg.alpha.value);
  Rat x1 = frac(l_full - cfg.alpha.value);
  const Rat& a = cfg.alpha.value;

  auto arc_contains = [&](const Rat& al, const Rat& alen, const Rat& pt) {
    return frac(pt - al) < alen;
  };

  // first pass: the seed interval, collecting its level track
  std::vector<int> levels;
  levels.reserve(ret > 0 && mpz_fits_ulong_p(ret.get_mpz_t())
                     ? mpz_get_ui(ret.get_mpz_t()) + 1
                     : 0);
  out.pieces_clear = true;
  Rat pos = frac(left);
  int lv = level;
  for (Int j = 0; j < ret; ++j) {
    if (arc_contains(pos, len, x0) || arc_contains(pos, len, x1))
      out.pieces_clear = false;
    levels.push_back(lv);
    if (keep_pieces)
      out.pieces.push_back(TorusIntervalSet::RawArc{pos, pos + len, lv});
    Rat np = frac(pos + a);
    if (np < l_full) lv ^= 1;
    pos = np;
  }
  levels.push_back(lv);  // level of the image interval at time ret

  // second pass: the image interval, comparing levels stepwise
  out.partner_clear = true;
  out.levels_match = true;
  Rat ppos = pos;
  int plv = lv;
  for (Int j = 0; j < ret; ++j) {
    if (arc_contains(ppos, len, x0) || arc_contains(ppos, len, x1))
      out.partner_clear = false;
    if (plv != levels[static_cast<size_t>(mpz_get_ui(j.get_mpz_t()))])
      out.levels_match = false;
    Rat np = frac(ppos + a);
    if (np < l_full) plv ^= 1;
    ppos = np;
  }
  return out;
}

bool coincides_pointwise(const SkewConfig& cfg, size_t s, const Rat& x, const Int& K) {
  Rat l_s = slit_length(cfg, s);
  Rat l_full = slit_length(cfg, cfg.effective_s());
  if (l_s >= l_full) return true;
  Rat pos = x;
  for (Int w = 1; w <= K; ++w) {
    pos = frac(pos + cfg.alpha.value);
    if (pos >= l_s && pos < l_full) return false;
  }
  return true;
}

}  // namespace ergoflow
