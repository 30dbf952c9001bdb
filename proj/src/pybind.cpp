// Python bindings for the main operations: spec validation, resonance
// conditions, numeric Puiseux series, auxiliary-function solve, continuation,
// landing, and singularity hunting (double precision).

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "hamsing/auxw.hpp"
#include "hamsing/flow.hpp"
#include "hamsing/model.hpp"
#include "hamsing/series.hpp"

namespace py = pybind11;
using namespace hamsing;
using C = std::complex<double>;

namespace {

HamiltonianSpec load(const std::string& text) { return spec_from_json(text); }

py::dict event_dict(const SingularityEvent<C>& ev) {
  py::dict d;
  d["z_inf"] = ev.z_inf;
  d["branch_class"] = ev.branch_class;
  d["sheets"] = ev.sheets;
  d["sheets_expected"] = ev.sheets_expected;
  d["leading"] = ev.leading;
  d["exponent1"] = ev.exponent1;
  d["exponent2"] = ev.exponent2;
  d["fit_residual"] = ev.fit_residual;
  d["chart_defect"] = ev.chart_defect;
  d["closure_defects"] = ev.closure_defects;
  return d;
}

FlowOptions make_opts(double tol, double r_switch) {
  FlowOptions o;
  o.rtol = tol;
  o.atol = tol * 1e-2;
  o.r_switch = r_switch;
  return o;
}

}  // namespace

PYBIND11_MODULE(_hamsing, m) {
  m.doc() =
      "Movable singularities of polynomial Hamiltonian systems: resonance "
      "conditions, Puiseux data, continuation and monodromy";

  py::register_exception<Error>(m, "HamsingError");

  m.def("canonical_spec", [](const std::string& text) { return spec_to_json(load(text)); },
        "Parse, validate and re-serialize a spec (raises HamsingError on bad input)");

  m.def("structural_constants", [](int M, int N) {
    auto sc = structural_constants(M, N);
    py::dict d;
    d["p"] = py::make_tuple(sc.p.get_num().get_si(), sc.p.get_den().get_si());
    d["q"] = py::make_tuple(sc.q.get_num().get_si(), sc.q.get_den().get_si());
    d["d"] = sc.d;
    d["ramification"] = sc.ramification;
    return d;
  });

  m.def("index_set", [](int M, int N) {
    std::vector<std::pair<int, int>> out;
    for (auto& ij : build_index_set(M, N)) out.push_back(ij);
    return out;
  });

  m.def("resonance_conditions", [](int M, int N) {
    std::vector<std::pair<long, std::string>> out;
    for (const auto& c : resonance_conditions(M, N)) out.push_back({c.order, c.text()});
    return out;
  });

  m.def("violated_conditions", [](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& c : violated_conditions(load(text))) out.push_back(c.text());
    return out;
  });

  m.def(
      "series",
      [](const std::string& text, C z0, int branch_class, long K, C free_value) {
        auto spec = load(text);
        auto s = instantiate_numeric<C>(spec, z0, branch_class, K, free_value);
        py::dict d;
        d["ramification"] = s.ramification;
        d["k1"] = s.k1;
        d["k2"] = s.k2;
        d["coeffs1"] = s.coeffs1;
        d["coeffs2"] = s.coeffs2;
        return d;
      },
      py::arg("spec"), py::arg("z0"), py::arg("branch_class") = 0, py::arg("K") = 10,
      py::arg("free_value") = C(0));

  m.def(
      "continue_line",
      [](const std::string& text, C z0, C y1, C y2, C target, double tol,
         double r_switch) {
        auto spec = load(text);
        Path<C> path{PathSeg<C>::line(z0, target)};
        auto tr = continue_along_path(spec, z0, y1, y2, path, make_opts(tol, r_switch));
        py::dict d;
        d["blew_up"] = tr.blew_up;
        std::vector<py::tuple> samples;
        for (const auto& s : tr.samples)
          samples.push_back(py::make_tuple(s.s, s.z, s.y1, s.y2));
        d["samples"] = samples;
        return d;
      },
      py::arg("spec"), py::arg("z0"), py::arg("y1"), py::arg("y2"), py::arg("target"),
      py::arg("tol") = 1e-10, py::arg("r_switch") = 1e3);

  m.def(
      "locate_singularity",
      [](const std::string& text, C z0, C y1, C y2, C target, double tol,
         double r_switch) {
        auto spec = load(text);
        auto aux = solve_betas(spec);
        Path<C> path{PathSeg<C>::line(z0, target)};
        auto [trace, land] =
            locate_singularity(spec, aux, z0, y1, y2, path, make_opts(tol, r_switch));
        (void)trace;
        py::dict d;
        d["z_inf"] = land.z_inf;
        d["branch_class"] = land.branch_class;
        d["leading"] = land.leading;
        d["exponent1"] = land.fit.exponent1;
        d["exponent2"] = land.fit.exponent2;
        d["chart_defect"] = land.chart_defect;
        return d;
      },
      py::arg("spec"), py::arg("z0"), py::arg("y1"), py::arg("y2"), py::arg("target"),
      py::arg("tol") = 1e-10, py::arg("r_switch") = 1e3);

  m.def(
      "hunt",
      [](const std::string& text, C z0, C y1, C y2, C center, double radius, int rays,
         double tol, double r_switch) {
        auto spec = load(text);
        auto aux = solve_betas(spec);
        auto res = hunt_singularities(spec, aux, z0, y1, y2, center, radius, rays,
                                      make_opts(tol, r_switch));
        py::list events;
        for (const auto& ev : res.events) events.append(event_dict(ev));
        py::dict d;
        d["events"] = events;
        d["ray_log"] = res.ray_log;
        return d;
      },
      py::arg("spec"), py::arg("z0"), py::arg("y1"), py::arg("y2"), py::arg("center"),
      py::arg("radius") = 1.0, py::arg("rays") = 16, py::arg("tol") = 1e-10,
      py::arg("r_switch") = 1e3);

  m.def(
      "eval_w",
      [](const std::string& text, C z, C y1, C y2, bool allow_nonzero_gamma) {
        auto spec = load(text);
        auto aux = solve_betas(spec, allow_nonzero_gamma);
        return eval_W(aux, spec, z, y1, y2);
      },
      py::arg("spec"), py::arg("z"), py::arg("y1"), py::arg("y2"),
      py::arg("allow_nonzero_gamma") = false);
}
