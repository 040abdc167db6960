#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "peaksharp/error.hpp"
#include "peaksharp/oracle.hpp"
#include "peaksharp/parser.hpp"
#include "peaksharp/sharpness.hpp"
#include "peaksharp/ssa.hpp"

namespace py = pybind11;
using namespace peaksharp;

namespace {

Convention conv(const std::string& name) { return convention_from_string(name); }

py::dict structure_dict(const PeakStructure& ps) {
  py::list regions;
  for (const Interval& r : ps.regions) regions.append(py::make_tuple(r.lo, r.hi));
  py::dict d;
  d["peaks"] = ps.peaks;
  d["valleys"] = ps.valleys;
  d["regions"] = regions;
  d["modality"] = ps.modality;
  d["boundary_peak"] = ps.boundary_peak;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Peak-sharpness analysis of univariate stochastic reaction networks";

  static py::exception<Error> analysis_error(m, "AnalysisError");
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const Error& e) {
      analysis_error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<RateExpr>(m, "RateExpr")
      .def(py::init<double, double>(), py::arg("base") = 0.0, py::arg("slope") = 0.0)
      .def_readwrite("base", &RateExpr::base)
      .def_readwrite("slope", &RateExpr::slope)
      .def("at", &RateExpr::at);

  py::class_<Reaction>(m, "Reaction")
      .def(py::init([](int s, int r, RateExpr rate) { return Reaction{s, r, rate}; }), py::arg("s"), py::arg("r"),
           py::arg("rate"))
      .def_readwrite("s", &Reaction::s)
      .def_readwrite("r", &Reaction::r)
      .def_readwrite("rate", &Reaction::rate);

  py::class_<ReactionNetwork>(m, "ReactionNetwork")
      .def_readonly("name", &ReactionNetwork::name)
      .def_readonly("reactions", &ReactionNetwork::reactions)
      .def_property_readonly("k_range", [](const ReactionNetwork& n) { return py::make_tuple(n.k_range.lo, n.k_range.hi); })
      .def_readonly("k_default", &ReactionNetwork::k_default)
      .def_readonly("params", &ReactionNetwork::params)
      .def("__eq__", [](const ReactionNetwork& a, const ReactionNetwork& b) { return a == b; });

  m.def("parse_network", [](const std::string& src) { return parse_network(src); }, py::arg("source"));
  m.def("serialize_network", &serialize_network, py::arg("net"));

  m.def(
      "drift_coeffs",
      [](const ReactionNetwork& net, double k, const std::string& c) { return build_drift(net, conv(c)).at(k).coeffs(); },
      py::arg("net"), py::arg("K"), py::arg("convention") = "continuous");
  m.def(
      "diffusion_coeffs",
      [](const ReactionNetwork& net, double k, const std::string& c) {
        return build_diffusion(net, conv(c)).at(k).coeffs();
      },
      py::arg("net"), py::arg("K"), py::arg("convention") = "continuous");

  m.def(
      "find_extrema",
      [](const ReactionNetwork& net, double k, const std::string& c, double h) {
        return structure_dict(find_extrema(net, k, conv(c), GridSpec{h, {}}));
      },
      py::arg("net"), py::arg("K"), py::arg("convention") = "continuous", py::arg("h") = 0.1);

  m.def(
      "stationary_density",
      [](const ReactionNetwork& net, double k, double h, std::optional<double> x_max, const std::string& c) {
        const DensityGrid d = stationary_density(net, k, GridSpec{h, x_max}, conv(c));
        std::vector<double> xs(d.size());
        for (std::size_t j = 0; j < d.size(); ++j) xs[j] = d.x(j);
        py::dict out;
        out["x"] = xs;
        out["density"] = d.values;
        out["norm_const"] = d.norm_const;
        out["x_max"] = d.x_max;
        out["h"] = d.h;
        out["mass"] = d.mass();
        return out;
      },
      py::arg("net"), py::arg("K"), py::arg("h") = 0.1, py::arg("x_max") = py::none(),
      py::arg("convention") = "continuous");

  m.def(
      "check_theorem1",
      [](const ReactionNetwork& net, const std::string& c) {
        const ConditionReport rep = check_theorem1(net, conv(c));
        py::list regions;
        for (const RegionVerdict& v : rep.regions) {
          py::dict r;
          r["region"] = py::make_tuple(v.region.lo, v.region.hi);
          r["dkb_sign"] = to_string(v.dkb_sign);
          r["direction"] = to_string(v.direction);
          regions.append(r);
        }
        py::dict out;
        out["lemma1"] = rep.lemma1_holds;
        out["dkb"] = rep.dkb.coeffs();
        out["regions"] = regions;
        return out;
      },
      py::arg("net"), py::arg("convention") = "continuous");

  m.def(
      "verify_monotonicity",
      [](const ReactionNetwork& net, const std::vector<double>& ks, const std::string& c) {
        const MonotonicityReport rep = verify_monotonicity(net, ks, conv(c));
        py::dict out;
        out["pass"] = rep.pass();
        out["max_violation"] = rep.max_violation;
        return out;
      },
      py::arg("net"), py::arg("ks"), py::arg("convention") = "continuous");

  m.def(
      "ensemble_histogram",
      [](const ReactionNetwork& net, double k, std::int64_t x0, double t_end, std::int64_t n_cells,
         std::uint64_t seed, unsigned threads) {
        EnsembleHistogram h;
        {
          py::gil_scoped_release release;
          h = ensemble_histogram(net, k, x0, t_end, n_cells, seed, EnsembleOptions{threads});
        }
        return h.counts;
      },
      py::arg("net"), py::arg("K"), py::arg("x0"), py::arg("t_end"), py::arg("n_cells"), py::arg("seed"),
      py::arg("threads") = 0);

  m.def(
      "cme_stationary",
      [](const ReactionNetwork& net, double k, std::int64_t n) {
        const StationaryVector sv = cme_stationary(net, k, n);
        py::dict out;
        out["probs"] = sv.probs;
        out["residual"] = sv.residual;
        out["truncation_warning"] = sv.truncation_warning;
        return out;
      },
      py::arg("net"), py::arg("K"), py::arg("x_max_trunc"));

  m.def(
      "discrete_extrema", [](const std::vector<double>& p) { return structure_dict(discrete_extrema(p)); },
      py::arg("probs"));
  m.def(
      "total_variation",
      [](const std::vector<double>& p, const std::vector<double>& q) { return total_variation(p, q); }, py::arg("p"),
      py::arg("q"));

  m.def(
      "perturb_analysis",
      [](const ReactionNetwork& net, double k, const std::map<std::size_t, double>& changes, const std::string& c) {
        const PerturbationReport rep = perturb_analysis(net, k, changes, conv(c));
        py::list ineq;
        for (const InequalityCheck& q : rep.inequalities) {
          py::dict d;
          d["label"] = q.label;
          d["lhs"] = q.lhs;
          d["rhs"] = q.rhs;
          d["ratio"] = q.ratio;
          d["negligible"] = q.negligible;
          ineq.append(d);
        }
        py::dict out;
        out["peak_shift_max"] = rep.peak_shift_max;
        out["modality_changed"] = rep.modality_changed;
        out["perturbed_peaks"] = rep.perturbed_peaks;
        out["inequalities"] = ineq;
        return out;
      },
      py::arg("net"), py::arg("K"), py::arg("perturbations"), py::arg("convention") = "continuous");
}
