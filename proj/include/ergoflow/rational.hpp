#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergoflow {

using Int = mpz_class;
using Rat = mpq_class;

// Error with a stable machine-readable kind (used by the CLI exit-code logic
// and by tests that assert on specific failure modes).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// x - floor(x), result in [0,1).
inline Rat frac(const Rat& x) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rat r = x - Rat(fl);
  r.canonicalize();
  return r;
}

// Distance from x to the nearest integer, in [0, 1/2].
inline Rat unit_dist(const Rat& x) {
  Rat f = frac(x);
  Rat g = 1 - f;
  return f <= g ? f : g;
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline Rat rat_from_str(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw Error("parse-error", "bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

// q^e for a rational exponent e = p/r, compared against rhs: q^(p/r) < rhs
// iff q^p < rhs^r (all quantities positive integers).  Used for the
// checkpoint growth conditions with a configurable exponent.
inline bool int_pow_less(const Int& base, const Rat& expo, const Int& rhs) {
  // base^(p/r) < rhs  <=>  base^p < rhs^r   (base,rhs >= 1, expo > 0)
  Int lhs_pow, rhs_pow;
  unsigned long p = mpz_get_ui(expo.get_num_mpz_t());
  unsigned long r = mpz_get_ui(expo.get_den_mpz_t());
  mpz_pow_ui(lhs_pow.get_mpz_t(), base.get_mpz_t(), p);
  mpz_pow_ui(rhs_pow.get_mpz_t(), rhs.get_mpz_t(), r);
  return lhs_pow < rhs_pow;
}

// Exact sum by balanced reduction.  Sequential accumulation of many terms
// with unrelated denominators makes the running denominator grow linearly
// and each addition superlinear; pairwise reduction keeps the work near the
// size of the final result.
inline Rat tree_sum(std::vector<Rat>& terms) {
  if (terms.empty()) return Rat(0);
  size_t n = terms.size();
  while (n > 1) {
    size_t half = n / 2;
    for (size_t i = 0; i < half; ++i) terms[i] += terms[n - 1 - i];
    n -= half;
  }
  return terms[0];
}

// Small deterministic PRNG for randomized suites (xorshift64*); avoids any
// dependence on libstdc++ distribution internals so seeded runs are
// bit-stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dull;
  }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // uniform rational in [0,1) with the given denominator
  Rat rat_below_one(unsigned long den) {
    Rat r(static_cast<unsigned long>(below(den)), den);
    r.canonicalize();
    return r;
  }

 private:
  std::uint64_t s_;
};

}  // namespace ergoflow
