#include "ergoflow/cf.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ergoflow {

void DigitSchedule::validate() const {
  for (const Int& d : digits)
    if (d < 1) throw Error("invalid-schedule", "partial quotients must be >= 1");
  for (size_t i = 0; i < even_checkpoints.size(); ++i) {
    if (even_checkpoints[i] % 2 != 0)
      throw Error("invalid-schedule", "checkpoint n_k must be even");
    if (i > 0 && even_checkpoints[i] <= even_checkpoints[i - 1])
      throw Error("invalid-schedule", "checkpoints n_k must be strictly increasing");
  }
  for (size_t i = 1; i < odd_checkpoints.size(); ++i)
    if (odd_checkpoints[i] <= odd_checkpoints[i - 1])
      throw Error("invalid-schedule", "checkpoints t_k must be strictly increasing");
  if (digit_cap_m < 3)
    throw Error("invalid-schedule", "digit cap M must be >= 3");
  // Digits right after odd-indexed checkpoints stay in [3, M] when present.
  for (size_t k = 0; 2 * k < even_checkpoints.size(); ++k) {
    size_t n = even_checkpoints[2 * k];  // n_{2k+1} (1-based odd position)
    if (n < digits.size()) {
      const Int& d = digits[n];  // a_{n+1} (digits are 1-based)
      if (d < 3 || d > digit_cap_m)
        throw Error("invalid-schedule",
                    "digit after odd checkpoint must lie in [3, M]");
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DigitSchedule DigitSchedule::parse(std::istream& in) {
  DigitSchedule s;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("parse-error", "expected 'key = value' in schedule file");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "digits") {
      for (const std::string& t : split(val, ','))
        if (!trim(t).empty()) s.digits.emplace_back(trim(t));
    } else if (key == "even_checkpoints") {
      for (const std::string& t : split(val, ','))
        if (!trim(t).empty()) s.even_checkpoints.push_back(std::stoul(trim(t)));
    } else if (key == "odd_checkpoints") {
      for (const std::string& t : split(val, ','))
        if (!trim(t).empty()) s.odd_checkpoints.push_back(std::stoul(trim(t)));
    } else if (key == "M") {
      s.digit_cap_m = Int(val);
    } else {
      throw Error("parse-error", "unknown schedule key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

DigitSchedule DigitSchedule::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("io-error", "cannot open schedule file " + path);
  return parse(f);
}

std::string DigitSchedule::serialize() const {
  std::ostringstream os;
  os << "digits = ";
  for (size_t i = 0; i < digits.size(); ++i)
    os << (i ? "," : "") << digits[i].get_str();
  os << "\neven_checkpoints = ";
  for (size_t i = 0; i < even_checkpoints.size(); ++i)
    os << (i ? "," : "") << even_checkpoints[i];
  os << "\nodd_checkpoints = ";
  for (size_t i = 0; i < odd_checkpoints.size(); ++i)
    os << (i ? "," : "") << odd_checkpoints[i];
  os << "\nM = " << digit_cap_m.get_str() << "\n";
  return os.str();
}

std::vector<Convergent> convergents(const DigitSchedule& s, size_t upto) {
  if (upto > s.digits.size())
    throw Error("insufficient-prefix",
                "need " + std::to_string(upto) + " digits, schedule has " +
                    std::to_string(s.digits.size()));
  std::vector<Convergent> out;
  out.reserve(upto);
  Int p_prev = 1, p_cur = 0;  // p_{-1}, p_0 (a_0 = 0)
  Int q_prev = 0, q_cur = 1;  // q_{-1}, q_0
  for (size_t n = 1; n <= upto; ++n) {
    const Int& a = s.digits[n - 1];
    Int p_next = a * p_cur + p_prev;
    Int q_next = a * q_cur + q_prev;
    p_prev = p_cur; p_cur = p_next;
    q_prev = q_cur; q_cur = q_next;
    out.push_back(Convergent{p_cur, q_cur, n});
  }
  return out;
}

Convergent convergent_at(const DigitSchedule& s, size_t n) {
  if (n == 0) return Convergent{Int(0), Int(1), 0};
  auto cs = convergents(s, n);
  return cs.back();
}

ApproxGap approx_gap(const DigitSchedule& s, size_t n) {
  if (n + 1 > s.digits.size())
    throw Error("insufficient-prefix", "approx_gap needs digit n+1");
  auto cs = convergents(s, n + 1);
  Int qn = n == 0 ? Int(1) : cs[n - 1].q;
  Int qn1 = cs[n].q;
  ApproxGap g;
  g.lower = Rat(1) / Rat(qn * (qn + qn1));
  g.upper = Rat(1) / Rat(qn * qn1);
  g.positive = (n % 2 == 0);
  return g;
}

Rat dist_to_int(const Int& k, const AngleRep& alpha) {
  return unit_dist(Rat(k) * alpha.value);
}

std::vector<Int> cf_digits(const Rat& value) {
  if (value <= 0 || value >= 1)
    throw Error("degenerate-angle", "continued fraction expected value in (0,1)");
  std::vector<Int> out;
  Int num = value.get_num();
  Int den = value.get_den();
  // value = [0; a1, a2, ...]: Euclid on (den, num).
  Int a, r;
  while (num != 0) {
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    out.push_back(a);
    den = num;
    num = r;
  }
  return out;
}

bool class_check(const AngleRep& alpha, const DigitSchedule& s, size_t ell) {
  if (alpha.value == 0) throw Error("degenerate-angle", "angle is zero");
  if (ell == 0) return true;
  if (ell > s.digits.size()) return false;
  // The Euclidean expansion of a reduced rational already ends with a digit
  // >= 2, so it is the canonical form.
  std::vector<Int> d = cf_digits(alpha.value);
  auto matches = [&](const std::vector<Int>& dig) {
    if (dig.size() < ell) return false;
    for (size_t i = 0; i < ell; ++i)
      if (dig[i] != s.digits[i]) return false;
    return true;
  };
  if (matches(d)) return true;
  // The terminating identification [..., a] = [..., a-1, 1] is admitted only
  // when the compared prefix consumes the glued pair entirely; a prefix that
  // cuts inside it would compare half of an artifact digit.
  if (!d.empty() && d.back() >= 2 && ell == d.size() + 1) {
    std::vector<Int> alt = d;
    alt.back() -= 1;
    alt.push_back(Int(1));
    if (matches(alt)) return true;
  }
  return false;
}

DigitSchedule padded_schedule(const DigitSchedule& s, size_t len) {
  DigitSchedule out = s;
  while (out.digits.size() < len) out.digits.emplace_back(1);
  return out;
}

AngleRep angle_from_schedule(const DigitSchedule& s, size_t ell, size_t padding) {
  size_t len = std::max(s.digits.size(), ell + padding);
  DigitSchedule padded = padded_schedule(s, len);
  Convergent c = convergent_at(padded, len);
  AngleRep rep{Rat(c.p) / Rat(c.q), ell};
  rep.value.canonicalize();
  if (!class_check(rep, padded, ell))
    throw Error("class-violation", "representative does not match schedule prefix");
  return rep;
}

SameCellResult same_cell_indices(const DigitSchedule& a, const DigitSchedule& b,
                                 size_t n) {
  if (n > a.digits.size() || n > b.digits.size())
    throw Error("insufficient-prefix", "same_cell_indices needs n digits in both");
  for (size_t i = 0; i < n; ++i)
    if (a.digits[i] != b.digits[i])
      throw Error("class-violation", "schedules disagree within the shared prefix");

  Convergent cn = convergent_at(a, n);
  const Int& qn = cn.q;
  AngleRep alpha = angle_from_schedule(a, n);
  AngleRep beta = angle_from_schedule(b, n);

  SameCellResult res;
  if (qn <= 1) {
    res.surjective = true;  // single cell, hit by k = 0
    return res;
  }
  if (qn > 20'000'000)
    throw Error("materialization-cap", "q_n too large for exhaustive cell check");
  long qn_l = static_cast<long>(qn.get_si());
  std::vector<bool> hit(static_cast<size_t>(qn_l), false);
  // k = 0 lands at 0, which belongs to the closed cells [0, 1/q_n] and
  // [(q_n-1)/q_n, 1] (1 == 0 mod 1).
  hit[0] = true;
  hit[static_cast<size_t>(qn_l - 1)] = true;
  Rat fa = 0, fb = 0;
  for (long k = 1; k < qn_l; ++k) {
    fa = frac(fa + alpha.value);
    fb = frac(fb + beta.value);
    // cell index: floor(fa * q_n)
    Rat scaled = fa * Rat(qn);
    Int c;
    mpz_fdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    long cl = static_cast<long>(c.get_si());
    Rat lo = Rat(c) / Rat(qn);
    Rat hi = Rat(c + 1) / Rat(qn);
    if (!(fa > lo && fa < hi && fb > lo && fb < hi))
      throw Error("class-violation",
                  "orbit points escape the shared cell at k=" + std::to_string(k));
    res.cells.push_back(cl);
    hit[static_cast<size_t>(cl)] = true;
    // Closed-cell membership for surjectivity may also touch neighbours at
    // the boundary, but interior membership already marks this cell.
  }
  res.surjective = std::all_of(hit.begin(), hit.end(), [](bool v) { return v; });
  return res;
}

}  // namespace ergoflow
