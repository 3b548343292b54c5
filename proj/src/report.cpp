#include "ergoflow/report.hpp"

#include <sstream>

#include "json.hpp"

namespace ergoflow {

namespace {
const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::True: return "pass";
    case Verdict::False: return "fail";
    default: return "undecided";
  }
}
}  // namespace

bool VerificationReport::all_passed() const {
  for (const auto& it : items)
    if (it.passed != Verdict::True) return false;
  return true;
}

bool VerificationReport::any_undecided() const {
  for (const auto& it : items)
    if (it.passed == Verdict::Undecided) return true;
  return false;
}

void VerificationReport::add_exact(const std::string& name, const Rat& computed,
                                   const Rat& bound, const Rat& margin,
                                   const std::string& note) {
  CheckItem it;
  it.name = name;
  it.computed = computed.get_str();
  it.bound = bound.get_str();
  it.margin = margin.get_str();
  it.passed = margin >= 0 ? Verdict::True : Verdict::False;
  it.note = note;
  items.push_back(std::move(it));
}

void VerificationReport::add_bool(const std::string& name, bool ok,
                                  const std::string& note) {
  CheckItem it;
  it.name = name;
  it.computed = ok ? "true" : "false";
  it.bound = "true";
  it.margin = ok ? "0" : "-1";
  it.passed = ok ? Verdict::True : Verdict::False;
  it.note = note;
  items.push_back(std::move(it));
}

void VerificationReport::add_enclosed(const std::string& name, const LogSum& computed,
                                      const LogSum& bound, const LogSum& margin,
                                      mpfr_prec_t start_prec, const std::string& note) {
  CheckItem it;
  it.name = name;
  it.computed = computed.numeric_str();
  it.bound = bound.numeric_str();
  it.margin = margin.numeric_str();
  it.passed = margin.ge_zero(start_prec);
  it.note = note;
  items.push_back(std::move(it));
}

void VerificationReport::add_abs_enclosed(const std::string& name, const LogSum& value,
                                          const LogSum& bound, mpfr_prec_t start_prec,
                                          const std::string& note) {
  LogSum up = bound - value;    // >= 0 iff value <= bound
  LogSum down = bound + value;  // >= 0 iff -value <= bound
  Verdict vu = up.ge_zero(start_prec);
  Verdict vd = down.ge_zero(start_prec);
  CheckItem it;
  it.name = name;
  it.computed = value.numeric_str();
  it.bound = bound.numeric_str();
  // report the tighter of the two one-sided margins
  bool und = false;
  int s = value.sign(&und, start_prec);
  const LogSum& tight = (!und && s < 0) ? down : up;
  it.margin = tight.numeric_str();
  if (vu == Verdict::False || vd == Verdict::False)
    it.passed = Verdict::False;
  else if (vu == Verdict::True && vd == Verdict::True)
    it.passed = Verdict::True;
  else
    it.passed = Verdict::Undecided;
  it.note = note;
  items.push_back(std::move(it));
}

void VerificationReport::add_info(const std::string& name, const std::string& value,
                                  const std::string& note) {
  CheckItem it;
  it.name = name;
  it.computed = value;
  it.passed = Verdict::True;
  it.margin = "0";
  it.note = note;
  items.push_back(std::move(it));
}

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["title"] = title;
  j["constants"] = constants;
  j["all_passed"] = all_passed();
  auto arr = nlohmann::json::array();
  for (const auto& it : items) {
    nlohmann::json e;
    e["name"] = it.name;
    e["computed"] = it.computed;
    e["bound"] = it.bound;
    e["margin"] = it.margin;
    e["passed"] = verdict_str(it.passed);
    if (!it.note.empty()) e["note"] = it.note;
    arr.push_back(e);
  }
  j["items"] = arr;
  return j.dump(2);
}

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "name,computed,bound,margin,passed,note\n";
  for (const auto& it : items) {
    os << '"' << it.name << "\"," << it.computed << ',' << it.bound << ','
       << it.margin << ',' << verdict_str(it.passed) << ",\"" << it.note << "\"\n";
  }
  return os.str();
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  for (const auto& it : items)
    os << "[" << verdict_str(it.passed) << "] " << it.name
       << (it.note.empty() ? "" : "  (" + it.note + ")") << "\n";
  return os.str();
}

}  // namespace ergoflow
