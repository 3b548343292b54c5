#include "ergoflow/torus.hpp"

#include <algorithm>
#include <sstream>

namespace ergoflow {

Rat circle_dist(const Rat& x, const Rat& y) { return unit_dist(x - y); }

Rat product_dist(const TorusPoint& a, const TorusPoint& b) {
  Rat d = circle_dist(a.x, b.x);
  if (a.level != b.level) d += 1;
  return d;
}

void TorusIntervalSet::insert_raw(Rat left, Rat right, int level) {
  if (right <= left) return;
  Rat len = right - left;
  if (len >= 1) {  // covers the whole circle
    arcs_.push_back(Arc{Rat(0), Rat(1), level});
    return;
  }
  left = frac(left);
  right = left + len;
  if (right <= 1) {
    arcs_.push_back(Arc{left, right, level});
  } else {  // wraps through 0: split
    arcs_.push_back(Arc{left, Rat(1), level});
    arcs_.push_back(Arc{Rat(0), right - 1, level});
  }
}

void TorusIntervalSet::canonicalize() {
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.left < b.left;
  });
  std::vector<Arc> merged;
  for (const Arc& a : arcs_) {
    if (a.right <= a.left) continue;
    if (!merged.empty() && merged.back().level == a.level &&
        a.left <= merged.back().right) {
      if (a.right > merged.back().right) merged.back().right = a.right;
    } else {
      merged.push_back(a);
    }
  }
  arcs_ = std::move(merged);
}

TorusIntervalSet TorusIntervalSet::arc(const Rat& left, const Rat& right, int level) {
  TorusIntervalSet s;
  Rat l = left, r = right;
  if (r < l) r += 1;  // wrap notation [l, r) with r < l
  s.insert_raw(l, r, level);
  s.canonicalize();
  return s;
}

TorusIntervalSet TorusIntervalSet::arc_both_levels(const Rat& left, const Rat& right) {
  TorusIntervalSet s;
  Rat l = left, r = right;
  if (r < l) r += 1;
  s.insert_raw(l, r, 0);
  s.insert_raw(l, r, 1);
  s.canonicalize();
  return s;
}

TorusIntervalSet TorusIntervalSet::union_arcs(const std::vector<RawArc>& raw) {
  TorusIntervalSet s;
  for (const RawArc& a : raw) {
    Rat l = a.left, r = a.right;
    if (r < l) r += 1;
    s.insert_raw(l, r, a.level);
  }
  s.canonicalize();
  return s;
}

TorusIntervalSet TorusIntervalSet::full_level(int level) {
  TorusIntervalSet s;
  s.arcs_.push_back(Arc{Rat(0), Rat(1), level});
  return s;
}

TorusIntervalSet TorusIntervalSet::full_space() {
  TorusIntervalSet s;
  s.arcs_.push_back(Arc{Rat(0), Rat(1), 0});
  s.arcs_.push_back(Arc{Rat(0), Rat(1), 1});
  return s;
}

Rat TorusIntervalSet::measure() const {
  Rat total = 0;
  for (const Arc& a : arcs_) total += a.right - a.left;
  return total / 2;
}

Rat TorusIntervalSet::level_length(int level) const {
  Rat total = 0;
  for (const Arc& a : arcs_)
    if (a.level == level) total += a.right - a.left;
  return total;
}

size_t TorusIntervalSet::component_count() const {
  size_t count = 0;
  for (int level = 0; level <= 1; ++level) {
    std::vector<const Arc*> lv;
    for (const Arc& a : arcs_)
      if (a.level == level) lv.push_back(&a);
    if (lv.empty()) continue;
    count += lv.size();
    // Halves split at 0 form one circle arc unless the level is full.
    if (lv.size() >= 2 && lv.front()->left == 0 && lv.back()->right == 1)
      --count;
  }
  return count;
}

bool TorusIntervalSet::contains(const TorusPoint& p) const {
  for (const Arc& a : arcs_)
    if (a.level == p.level && p.x >= a.left && p.x < a.right) return true;
  return false;
}

namespace {

// One-level boolean sweep over half-open interval unions inside [0,1).
std::vector<std::pair<Rat, Rat>> combine_level(
    const std::vector<std::pair<Rat, Rat>>& a,
    const std::vector<std::pair<Rat, Rat>>& b, SetOp op) {
  // Event sweep: collect all endpoints, evaluate membership on each cell.
  std::vector<Rat> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (auto& iv : a) { cuts.push_back(iv.first); cuts.push_back(iv.second); }
  for (auto& iv : b) { cuts.push_back(iv.first); cuts.push_back(iv.second); }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto member = [](const std::vector<std::pair<Rat, Rat>>& set, const Rat& x,
                   size_t* hint) {
    while (*hint < set.size() && set[*hint].second <= x) ++*hint;
    return *hint < set.size() && set[*hint].first <= x && x < set[*hint].second;
  };

  std::vector<std::pair<Rat, Rat>> out;
  size_t ha = 0, hb = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rat& l = cuts[i];
    const Rat& r = cuts[i + 1];
    bool in_a = member(a, l, &ha);
    bool in_b = member(b, l, &hb);
    bool keep = false;
    switch (op) {
      case SetOp::Union: keep = in_a || in_b; break;
      case SetOp::Intersect: keep = in_a && in_b; break;
      case SetOp::Difference: keep = in_a && !in_b; break;
      case SetOp::SymDiff: keep = in_a != in_b; break;
    }
    if (keep) {
      if (!out.empty() && out.back().second == l)
        out.back().second = r;
      else
        out.emplace_back(l, r);
    }
  }
  return out;
}

}  // namespace

TorusIntervalSet TorusIntervalSet::combine(const TorusIntervalSet& other, SetOp op) const {
  TorusIntervalSet res;
  for (int level = 0; level <= 1; ++level) {
    std::vector<std::pair<Rat, Rat>> a, b;
    for (const Arc& c : arcs_)
      if (c.level == level) a.emplace_back(c.left, c.right);
    for (const Arc& c : other.arcs_)
      if (c.level == level) b.emplace_back(c.left, c.right);
    for (auto& iv : combine_level(a, b, op))
      res.arcs_.push_back(Arc{iv.first, iv.second, level});
  }
  res.canonicalize();
  return res;
}

TorusIntervalSet TorusIntervalSet::complement() const {
  return full_space().combine(*this, SetOp::Difference);
}

TorusIntervalSet TorusIntervalSet::translate(const Rat& shift) const {
  TorusIntervalSet res;
  for (const Arc& a : arcs_) res.insert_raw(a.left + shift, a.right + shift, a.level);
  res.canonicalize();
  return res;
}

TorusIntervalSet TorusIntervalSet::swap_levels() const {
  TorusIntervalSet res;
  for (const Arc& a : arcs_) res.arcs_.push_back(Arc{a.left, a.right, 1 - a.level});
  res.canonicalize();
  return res;
}

TorusIntervalSet TorusIntervalSet::restrict_level(int level) const {
  TorusIntervalSet res;
  for (const Arc& a : arcs_)
    if (a.level == level) res.arcs_.push_back(a);
  return res;
}

TorusIntervalSet TorusIntervalSet::project() const {
  TorusIntervalSet res;
  for (const Arc& a : arcs_) res.arcs_.push_back(Arc{a.left, a.right, 0});
  res.canonicalize();
  return res;
}

bool TorusIntervalSet::contains_open_arc(const Rat& left, const Rat& right, int level) const {
  TorusIntervalSet probe = arc(left, right, level);
  return probe.combine(*this, SetOp::Difference).empty();
}

std::vector<Rat> TorusIntervalSet::discontinuities(int level) const {
  // Endpoints of the circle components (split halves at 0 merged first).
  std::vector<std::pair<Rat, Rat>> lv;
  for (const Arc& a : arcs_)
    if (a.level == level) lv.emplace_back(a.left, a.right);
  std::vector<Rat> out;
  if (lv.empty()) return out;
  if (lv.size() == 1 && lv[0].first == 0 && lv[0].second == 1) return out;  // full circle
  bool wraps = lv.front().first == 0 && lv.back().second == 1;
  for (size_t i = 0; i < lv.size(); ++i) {
    if (wraps && i == 0) {
      out.push_back(lv.back().first);       // merged arc starts at the last piece
      out.push_back(lv.front().second);
    } else if (wraps && i + 1 == lv.size()) {
      continue;  // already accounted for
    } else {
      out.push_back(lv[i].first);
      out.push_back(lv[i].second == 1 ? Rat(0) : lv[i].second);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string TorusIntervalSet::to_json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < arcs_.size(); ++i) {
    if (i) os << ",";
    os << "{\"level\":" << arcs_[i].level << ",\"left\":\"" << arcs_[i].left.get_str()
       << "\",\"right\":\"" << arcs_[i].right.get_str() << "\"}";
  }
  os << "]";
  return os.str();
}

TorusIntervalSet set_combine(const TorusIntervalSet& a, const TorusIntervalSet& b, SetOp op) {
  return a.combine(b, op);
}

TorusIntervalSet set_translate(const TorusIntervalSet& s, const Rat& shift) {
  return s.translate(shift);
}

}  // namespace ergoflow
