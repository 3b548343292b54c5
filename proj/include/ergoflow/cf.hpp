#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergoflow/rational.hpp"

namespace ergoflow {

// Combinatorial identity of the rotation number: a finite prefix of partial
// quotients plus the two checkpoint sequences and the odd-stage digit cap.
struct DigitSchedule {
  std::vector<Int> digits;               // a_1, a_2, ...
  std::vector<size_t> even_checkpoints;  // n_1 < n_2 < ..., all even
  std::vector<size_t> odd_checkpoints;   // t_1 < t_2 < ...
  Int digit_cap_m = 3;                   // cap M for odd-stage digits

  void validate() const;  // throws Error("invalid-schedule", ...) on violation

  static DigitSchedule parse(std::istream& in);
  static DigitSchedule load(const std::string& path);
  std::string serialize() const;
};

struct Convergent {
  Int p;
  Int q;
  size_t index = 0;            // n
  bool even_index() const { return index % 2 == 0; }
};

// Rational stand-in for the rotation number; its continued fraction agrees
// with the target schedule through matched_prefix_len digits.
struct AngleRep {
  Rat value;                   // in (0,1)
  size_t matched_prefix_len = 0;
};

struct ApproxGap {
  Rat lower;   // 1 / (q_n (q_n + q_{n+1}))
  Rat upper;   // 1 / (q_n q_{n+1})
  bool positive;  // sign of alpha - p_n/q_n
};

// Convergents (p_n, q_n) for n = 1..upto by the exact recursion with seeds
// p_-1 = 1, p_0 = 0, q_-1 = 0, q_0 = 1.
std::vector<Convergent> convergents(const DigitSchedule& s, size_t upto);

// Single convergent at index n (n >= 0; n = 0 gives (0, 1)).
Convergent convergent_at(const DigitSchedule& s, size_t n);

ApproxGap approx_gap(const DigitSchedule& s, size_t n);

// || k * alpha ||, exact.
Rat dist_to_int(const Int& k, const AngleRep& alpha);

// Continued fraction digits of a rational in (0,1): value = [0; a_1, ..., a_L].
// The expansion ends with a_L >= 2 except for the single-digit value 1/1... not
// applicable here since value < 1; for value = p/q in lowest terms the plain
// Euclidean expansion is returned.
std::vector<Int> cf_digits(const Rat& value);

// True iff the continued fraction of alpha agrees with the schedule digits
// for i = 1..ell; both terminating representations are accepted.
bool class_check(const AngleRep& alpha, const DigitSchedule& s, size_t ell);

// Rational class representative whose CF prefix matches the schedule through
// at least ell digits: the schedule is padded with 1-digits and a convergent
// is taken past the needed prefix.
AngleRep angle_from_schedule(const DigitSchedule& s, size_t ell, size_t padding = 10);

// Schedule with digits replaced/extended: digits of `s` through its length,
// then 1s up to total length `len`.
DigitSchedule padded_schedule(const DigitSchedule& s, size_t len);

struct SameCellResult {
  std::vector<long> cells;        // c_k for k = 1..q_n-1
  bool surjective = false;        // every cell [l/q_n,(l+1)/q_n] is hit
};

// Shared-cell certificate for two schedules agreeing through digit n: for
// each k < q_n both k*alpha and k*beta lie strictly inside cell
// (c_k/q_n, (c_k+1)/q_n), and the orbit {k*alpha : k < q_n} meets every
// closed cell.
SameCellResult same_cell_indices(const DigitSchedule& a, const DigitSchedule& b,
                                 size_t n);

}  // namespace ergoflow
