#pragma once

#include <map>
#include <string>
#include <vector>

#include "ergoflow/enclosure.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

// Exact symbolic value of the form  rational + sum_i coeff_i * log(base_i)
// with integer bases >= 2.  Logs of rationals are split into integer bases
// and bases are reduced by small-prime factoring so that algebraically equal
// expressions cancel symbolically whenever possible; what does not cancel is
// decided by enclosure at escalating precision.
class LogSum {
 public:
  LogSum() : rational_(0) {}
  explicit LogSum(const Rat& r) : rational_(r) {}
  explicit LogSum(long r) : rational_(r) {}

  static LogSum log(const Rat& arg, const Rat& coeff = Rat(1));

  const Rat& rational_part() const { return rational_; }
  const std::map<Int, Rat>& log_terms() const { return logs_; }

  bool is_rational() const { return logs_.empty(); }
  bool is_zero() const { return logs_.empty() && rational_ == 0; }

  LogSum& operator+=(const LogSum& o);
  LogSum& operator-=(const LogSum& o);
  LogSum& operator+=(const Rat& r) { rational_ += r; return *this; }
  LogSum& operator-=(const Rat& r) { rational_ -= r; return *this; }

  friend LogSum operator+(LogSum a, const LogSum& b) { a += b; return a; }
  friend LogSum operator-(LogSum a, const LogSum& b) { a -= b; return a; }

  LogSum scaled(const Rat& c) const;
  LogSum negated() const { return scaled(Rat(-1)); }

  bool operator==(const LogSum& o) const {
    return rational_ == o.rational_ && logs_ == o.logs_;
  }

  Enclosure enclose(mpfr_prec_t prec) const;

  // Sign with precision escalation.  Exact when no log terms survive;
  // otherwise enclosures from start_prec doubling up to max_prec.
  // Returns +1 / -1 / 0 (exactly zero) and sets *undecided when the cap is
  // reached without a definite sign.
  int sign(bool* undecided, mpfr_prec_t start_prec = 128,
           mpfr_prec_t max_prec = 4096) const;

  Verdict ge_zero(mpfr_prec_t start_prec = 128, mpfr_prec_t max_prec = 4096) const {
    bool und = false;
    int s = sign(&und, start_prec, max_prec);
    if (und) return Verdict::Undecided;
    return s >= 0 ? Verdict::True : Verdict::False;
  }

  LogSum abs(bool* undecided, mpfr_prec_t start_prec = 128) const {
    int s = sign(undecided, start_prec);
    return s >= 0 ? *this : negated();
  }

  std::string str() const;          // symbolic rendering
  std::string numeric_str(mpfr_prec_t prec = 256) const { return enclose(prec).str(); }

 private:
  void add_log_int(const Int& base, const Rat& coeff);
  void prune();

  Rat rational_;
  std::map<Int, Rat> logs_;
};

}  // namespace ergoflow
