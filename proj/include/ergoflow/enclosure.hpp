#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "ergoflow/rational.hpp"

namespace ergoflow {

// Three-valued verdict of a verified comparison.
enum class Verdict { True, False, Undecided };

// RAII wrapper for a single mpfr number.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  BigFloat& operator=(BigFloat o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// Closed interval [lo, hi] with outward (directed) rounding.  All binary
// operations take the working precision explicitly so that verification
// loops can replay a computation at escalating precision.
class Enclosure {
 public:
  Enclosure() : lo_(2), hi_(2) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
  }

  static Enclosure from_rat(const Rat& x, mpfr_prec_t prec) {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_set_q(e.lo_.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e.hi_.get(), x.get_mpq_t(), MPFR_RNDU);
    return e;
  }

  static Enclosure from_long(long x, mpfr_prec_t prec) {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_set_si(e.lo_.get(), x, MPFR_RNDD);
    mpfr_set_si(e.hi_.get(), x, MPFR_RNDU);
    return e;
  }

  // log of a positive rational, outward rounded.
  static Enclosure log_rat(const Rat& x, mpfr_prec_t prec) {
    if (x <= 0) throw Error("domain-error", "log of non-positive rational");
    BigFloat t(prec + 16);
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_set_q(t.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(e.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_set_q(t.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(e.hi_.get(), t.get(), MPFR_RNDU);
    return e;
  }

  // log of a positive integer, outward rounded.
  static Enclosure log_int(const Int& x, mpfr_prec_t prec) {
    return log_rat(Rat(x), prec);
  }

  Enclosure add(const Enclosure& o, mpfr_prec_t prec) const {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_add(e.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(e.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return e;
  }

  Enclosure sub(const Enclosure& o, mpfr_prec_t prec) const {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_sub(e.lo_.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(e.hi_.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    return e;
  }

  Enclosure neg(mpfr_prec_t prec) const {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_neg(e.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(e.hi_.get(), lo_.get(), MPFR_RNDU);
    return e;
  }

  Enclosure abs(mpfr_prec_t prec) const {
    if (mpfr_sgn(lo_.get()) >= 0) return *this;
    if (mpfr_sgn(hi_.get()) <= 0) return neg(prec);
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    mpfr_set_zero(e.lo_.get(), 1);
    BigFloat na(prec);
    mpfr_neg(na.get(), lo_.get(), MPFR_RNDU);
    if (mpfr_cmp(na.get(), hi_.get()) > 0)
      mpfr_set(e.hi_.get(), na.get(), MPFR_RNDU);
    else
      mpfr_set(e.hi_.get(), hi_.get(), MPFR_RNDU);
    return e;
  }

  // Multiply by an exact rational.
  Enclosure mul_rat(const Rat& c, mpfr_prec_t prec) const {
    Enclosure e{BigFloat(prec), BigFloat(prec)};
    if (c >= 0) {
      mpfr_mul_q(e.lo_.get(), lo_.get(), c.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(e.hi_.get(), hi_.get(), c.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(e.lo_.get(), hi_.get(), c.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(e.hi_.get(), lo_.get(), c.get_mpq_t(), MPFR_RNDU);
    }
    return e;
  }

  int sign() const {  // +1 certainly positive, -1 certainly negative, 0 undecided
    if (mpfr_sgn(lo_.get()) > 0) return 1;
    if (mpfr_sgn(hi_.get()) < 0) return -1;
    return 0;
  }

  bool contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
  }

  // Decimal rendering of the midpoint (deterministic), for reports.
  std::string str(size_t digits = 20) const {
    mpfr_prec_t p = mpfr_get_prec(lo_.get());
    BigFloat mid(p);
    mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_ui(mid.get(), mid.get(), 2, MPFR_RNDN);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), mid.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  double lo_d() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  double hi_d() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }

 private:
  Enclosure(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}
  BigFloat lo_, hi_;
};

}  // namespace ergoflow
