#pragma once

#include <map>
#include <string>
#include <vector>

#include "ergoflow/enclosure.hpp"
#include "ergoflow/logsum.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

struct CheckItem {
  std::string name;
  std::string computed;
  std::string bound;
  std::string margin;
  Verdict passed = Verdict::Undecided;
  std::string note;
};

struct VerificationReport {
  std::string title;
  std::map<std::string, std::string> constants;  // constants in effect
  std::vector<CheckItem> items;

  bool all_passed() const;
  bool any_undecided() const;

  // Exact rational margin: pass iff margin >= 0.
  void add_exact(const std::string& name, const Rat& computed, const Rat& bound,
                 const Rat& margin, const std::string& note = "");
  // Plain boolean fact.
  void add_bool(const std::string& name, bool ok, const std::string& note = "");
  // Margin decided by enclosure escalation: pass iff margin >= 0.
  void add_enclosed(const std::string& name, const LogSum& computed,
                    const LogSum& bound, const LogSum& margin,
                    mpfr_prec_t start_prec = 128, const std::string& note = "");
  // |value| <= bound, verified as the two one-sided conditions so the check
  // never depends on resolving the sign of `value` first.
  void add_abs_enclosed(const std::string& name, const LogSum& value,
                        const LogSum& bound, mpfr_prec_t start_prec = 128,
                        const std::string& note = "");
  // Informational value, not a pass/fail gate.
  void add_info(const std::string& name, const std::string& value,
                const std::string& note = "");

  std::string to_json() const;
  std::string to_csv() const;
  std::string summary() const;  // one line per item
};

}  // namespace ergoflow
