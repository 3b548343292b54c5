#include "ergoflow/logsum.hpp"

#include <sstream>

namespace ergoflow {

namespace {

// Primes used to split log bases into a coarse canonical form.
const unsigned long kSmallPrimes[] = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

}  // namespace

void LogSum::add_log_int(const Int& base, const Rat& coeff) {
  if (coeff == 0) return;
  if (base <= 0) throw Error("domain-error", "log of non-positive value");
  if (base == 1) return;
  Int rest = base;
  for (unsigned long p : kSmallPrimes) {
    if (rest == 1) break;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e) logs_[Int(p)] += coeff * Rat(static_cast<long>(e));
  }
  if (rest > 1) logs_[rest] += coeff;
}

void LogSum::prune() {
  for (auto it = logs_.begin(); it != logs_.end();) {
    if (it->second == 0)
      it = logs_.erase(it);
    else
      ++it;
  }
}

LogSum LogSum::log(const Rat& arg, const Rat& coeff) {
  if (arg <= 0) throw Error("domain-error", "log of non-positive rational");
  LogSum s;
  s.add_log_int(Int(arg.get_num()), coeff);
  s.add_log_int(Int(arg.get_den()), -coeff);
  s.prune();
  return s;
}

LogSum& LogSum::operator+=(const LogSum& o) {
  rational_ += o.rational_;
  for (const auto& [base, c] : o.logs_) logs_[base] += c;
  prune();
  return *this;
}

LogSum& LogSum::operator-=(const LogSum& o) {
  rational_ -= o.rational_;
  for (const auto& [base, c] : o.logs_) logs_[base] -= c;
  prune();
  return *this;
}

LogSum LogSum::scaled(const Rat& c) const {
  LogSum s;
  if (c == 0) return s;
  s.rational_ = rational_ * c;
  for (const auto& [base, k] : logs_) s.logs_[base] = k * c;
  return s;
}

Enclosure LogSum::enclose(mpfr_prec_t prec) const {
  Enclosure acc = Enclosure::from_rat(rational_, prec);
  for (const auto& [base, c] : logs_) {
    Enclosure lg = Enclosure::log_int(base, prec);
    acc = acc.add(lg.mul_rat(c, prec), prec);
  }
  return acc;
}

int LogSum::sign(bool* undecided, mpfr_prec_t start_prec, mpfr_prec_t max_prec) const {
  if (undecided) *undecided = false;
  if (logs_.empty()) return rational_ < 0 ? -1 : (rational_ > 0 ? 1 : 0);
  for (mpfr_prec_t p = start_prec; p <= max_prec; p *= 2) {
    int s = enclose(p).sign();
    if (s != 0) return s;
  }
  if (undecided) *undecided = true;
  return 0;
}

std::string LogSum::str() const {
  std::ostringstream os;
  os << rational_.get_str();
  for (const auto& [base, c] : logs_) {
    if (c >= 0) os << " + " << c.get_str();
    else os << " - " << Rat(-c).get_str();
    os << "*log(" << base.get_str() << ")";
  }
  return os.str();
}

}  // namespace ergoflow
