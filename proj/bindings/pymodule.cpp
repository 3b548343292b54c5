#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ergoflow/birkhoff.hpp"
#include "ergoflow/construction.hpp"
#include "ergoflow/flow.hpp"
#include "ergoflow/roof.hpp"

namespace py = pybind11;
using namespace ergoflow;

namespace {

Rat rat_arg(const std::string& s) { return rat_from_str(s); }

DigitSchedule schedule_from(const std::vector<long>& digits,
                            const std::vector<size_t>& even_checkpoints,
                            const std::vector<size_t>& odd_checkpoints, long cap) {
  DigitSchedule s;
  for (long d : digits) s.digits.emplace_back(d);
  s.even_checkpoints = even_checkpoints;
  s.odd_checkpoints = odd_checkpoints;
  s.digit_cap_m = cap;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_ergoflow, m) {
  m.doc() = "exact skew-product and suspension-flow verification core";

  py::register_exception<Error>(m, "ErgoflowError");

  m.def("convergents",
        [](const std::vector<long>& digits, size_t upto) {
          DigitSchedule s;
          for (long d : digits) s.digits.emplace_back(d);
          std::vector<std::pair<std::string, std::string>> out;
          for (const Convergent& c : convergents(s, upto))
            out.emplace_back(c.p.get_str(), c.q.get_str());
          return out;
        },
        py::arg("digits"), py::arg("upto"));

  m.def("cf_digits", [](const std::string& value) {
    std::vector<std::string> out;
    for (const Int& d : cf_digits(rat_arg(value))) out.push_back(d.get_str());
    return out;
  });

  m.def("dist_to_int", [](long k, const std::string& alpha) {
    return dist_to_int(Int(k), AngleRep{rat_arg(alpha), 0}).get_str();
  });

  m.def("circle_dist", [](const std::string& x, const std::string& y) {
    return circle_dist(rat_arg(x), rat_arg(y)).get_str();
  });

  m.def("product_dist",
        [](const std::string& x, int i, const std::string& y, int j) {
          return product_dist(TorusPoint(rat_arg(x), i), TorusPoint(rat_arg(y), j))
              .get_str();
        });

  m.def("tower_measures",
        [](const std::vector<long>& digits, const std::vector<size_t>& evens,
           size_t m) {
          SkewConfig cfg = SkewConfig::make(schedule_from(digits, evens, {}, 3));
          auto levels = build_tower_levels(cfg, m);
          std::vector<std::pair<std::string, std::string>> out;
          for (const TowerLevel& t : levels)
            out.emplace_back(t.u.measure().get_str(), t.v.measure().get_str());
          return out;
        },
        py::arg("digits"), py::arg("even_checkpoints"), py::arg("m"));

  m.def("tower_structure_ok",
        [](const std::vector<long>& digits, const std::vector<size_t>& evens,
           size_t m) {
          SkewConfig cfg = SkewConfig::make(schedule_from(digits, evens, {}, 3));
          auto levels = build_tower_levels(cfg, m);
          return structure_report(levels, cfg).all_passed();
        });

  m.def("skew_orbit",
        [](const std::vector<long>& digits, const std::vector<size_t>& evens,
           const std::string& x, int level, long steps,
           const std::string& alpha) {
          std::optional<AngleRep> rep;
          if (!alpha.empty()) rep = AngleRep{rat_arg(alpha), 0};
          SkewConfig cfg =
              SkewConfig::make(schedule_from(digits, evens, {}, 3), {}, rep);
          TorusPoint z(rat_arg(x), level);
          std::vector<std::pair<std::string, int>> out;
          for (long i = 0; i < steps; ++i) {
            out.emplace_back(z.x.get_str(), z.level);
            z = skew_apply(cfg, z, Int(1));
          }
          return out;
        },
        py::arg("digits"), py::arg("even_checkpoints"), py::arg("x"),
        py::arg("level"), py::arg("steps"), py::arg("alpha") = "");

  m.def("denjoy_koksma_ok",
        [](const std::vector<long>& digits, size_t n,
           const std::vector<std::tuple<std::string, std::string, long>>& steps,
           const std::vector<std::string>& samples) {
          DigitSchedule s;
          for (long d : digits) s.digits.emplace_back(d);
          AngleRep alpha = angle_from_schedule(s, s.digits.size());
          std::vector<PiecewiseFunction::Step> st;
          for (const auto& [l, r, v] : steps)
            st.push_back({rat_arg(l), rat_arg(r), Rat(v)});
          PiecewiseFunction f = PiecewiseFunction::step_function(st);
          std::vector<TorusPoint> pts;
          for (const std::string& x : samples) pts.emplace_back(rat_arg(x), 0);
          return dk_check(f, alpha, n, pts).all_passed();
        });

  m.def("roof_value",
        [](const std::vector<long>& digits, const std::vector<size_t>& evens,
           const std::string& a, const std::string& x, int level) {
          SkewConfig cfg = SkewConfig::make(schedule_from(digits, evens, {}, 3));
          RoofSpec spec = RoofSpec::from_config(cfg, rat_arg(a));
          return eval_roof(spec, TorusPoint(rat_arg(x), level), RoofPart::F)
              .numeric_str();
        });

  m.def("construct_stage1", [](const std::string& tau, const std::string& theta,
                               const std::string& kappa) {
    ConstructionParams p;
    p.faithful = false;
    p.tau = rat_arg(tau);
    p.lower_c18 = Rat(18) / rat_arg(theta);
    p.kappa = rat_arg(kappa);
    ConstructionState st = base_stage(p);
    return st.to_json();
  });
}
