#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "gaslie/catalog.hpp"
#include "gaslie/classify.hpp"
#include "gaslie/expr.hpp"
#include "gaslie/liealg.hpp"
#include "gaslie/numerics.hpp"
#include "gaslie/report.hpp"
#include "gaslie/submodel.hpp"

namespace py = pybind11;
using namespace gaslie;

namespace {

SymbolTable symbols(const std::vector<std::string>& variables, const std::vector<std::string>& parameters,
                    const std::vector<std::string>& functions) {
  SymbolTable t;
  t.variables.insert(variables.begin(), variables.end());
  t.parameters.insert(parameters.begin(), parameters.end());
  t.functions.insert(functions.begin(), functions.end());
  return t;
}

std::vector<std::string> resolve_ids(const Catalog& cat, const std::vector<std::string>& requested) {
  std::vector<std::string> ids;
  for (const auto& r : requested.empty() ? std::vector<std::string>{"all"} : requested) {
    for (const auto& id : cat.resolve(r)) {
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  return ids;
}

std::string dump(const Section& s) { return s.body.dump(); }

}  // namespace

PYBIND11_MODULE(_gaslie, m) {
  m.attr("__version__") = kVersion;
  m.attr("DEFAULT_SEED") = kDefaultSeed;

  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UnknownEntry>(m, "UnknownEntry", PyExc_KeyError);
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation", PyExc_ValueError);

  m.def(
      "simplify",
      [](const std::string& text, const std::vector<std::string>& variables, const std::vector<std::string>& parameters,
         const std::vector<std::string>& functions) {
        return to_infix(canonicalize(parse(text, symbols(variables, parameters, functions))));
      },
      py::arg("text"), py::arg("variables") = std::vector<std::string>{},
      py::arg("parameters") = std::vector<std::string>{}, py::arg("functions") = std::vector<std::string>{});
  m.def(
      "differentiate",
      [](const std::string& text, const std::string& var, const std::vector<std::string>& variables,
         const std::vector<std::string>& parameters, const std::vector<std::string>& functions) {
        return to_infix(differentiate(parse(text, symbols(variables, parameters, functions)), var));
      },
      py::arg("text"), py::arg("var"), py::arg("variables") = std::vector<std::string>{},
      py::arg("parameters") = std::vector<std::string>{}, py::arg("functions") = std::vector<std::string>{});
  m.def(
      "evaluate",
      [](const std::string& text, const std::map<std::string, double>& values, const std::vector<std::string>& parameters) {
        std::vector<std::string> vars;
        for (const auto& [k, v] : values) {
          if (std::find(parameters.begin(), parameters.end(), k) == parameters.end()) vars.push_back(k);
        }
        Assignment a;
        a.values = values;
        return eval(parse(text, symbols(vars, parameters, {})), a);
      },
      py::arg("text"), py::arg("values"), py::arg("parameters") = std::vector<std::string>{});

  m.def("catalog_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : Catalog::builtin().entries()) ids.push_back(e.id);
    return ids;
  });
  m.def(
      "verify_algebra",
      [](std::uint64_t seed, bool brackets) {
        Section a = algebra_section(l12_table(), brackets);
        Section m = automorphism_section(seed);
        a.body["automorphisms"] = m.body;
        a.body["passed"] = a.passed && m.passed;
        return a.body.dump();
      },
      py::arg("seed") = kDefaultSeed, py::arg("brackets") = false);
  m.def(
      "verify_invariants",
      [](const std::vector<std::string>& ids, std::uint64_t seed, int jobs) {
        const Catalog& cat = Catalog::builtin();
        VerifyOptions o;
        o.seed = seed;
        o.zero.seed = seed;
        py::gil_scoped_release release;
        return dump(catalog_section(cat, resolve_ids(cat, ids), o, jobs));
      },
      py::arg("ids") = std::vector<std::string>{}, py::arg("seed") = kDefaultSeed, py::arg("jobs") = 1);
  m.def(
      "classify",
      [](const std::vector<std::string>& ids, int jobs) {
        const Catalog& cat = Catalog::builtin();
        py::gil_scoped_release release;
        return dump(classes_section(cat, builtin_classes(), resolve_ids(cat, ids), jobs));
      },
      py::arg("ids") = std::vector<std::string>{}, py::arg("jobs") = 1);
  m.def(
      "verify_solution",
      [](const std::vector<std::string>& kinds) {
        std::vector<SolutionKind> ks;
        for (const auto& k : kinds) ks.push_back(solution_kind_from_string(k));
        if (ks.empty()) {
          ks = {SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced, SolutionKind::NonisochoricGeneral,
                SolutionKind::NonisochoricReduced};
        }
        return dump(solutions_section(ks));
      },
      py::arg("kinds") = std::vector<std::string>{});
  m.def(
      "trace",
      [](const std::string& kind, const std::map<std::string, double>& labels, double t0, double t1, double step,
         const std::map<std::string, double>& constants) {
        SolutionKind k = solution_kind_from_string(kind);
        if (!is_reduced(k)) throw std::invalid_argument("trace needs a reduced family");
        if (!(t1 > t0)) throw std::invalid_argument("empty time range");
        if (!(step > 0)) throw std::invalid_argument("step must be positive");
        Solution s = solution(k);
        FlowMap fm = flow_map(s);
        Assignment at;
        at.values = constants;
        for (const auto& l : fm.labels) {
          auto it = labels.find(l);
          if (it == labels.end()) throw std::invalid_argument("missing label " + l);
          at.set(l, it->second);
        }
        Assignment start = at;
        start.set("t", t0);
        std::array<double, 3> x0{eval(fm.position[0], start), eval(fm.position[1], start),
                                 eval(fm.position[2], start)};
        Trajectory tr = integrate({s.u, s.v, s.w}, x0, t0, t1, step, at);
        return py::make_tuple(tr.samples, max_component_error(tr, fm, at));
      },
      py::arg("kind"), py::arg("labels"), py::arg("t0"), py::arg("t1"), py::arg("step") = 1e-3,
      py::arg("constants") = std::map<std::string, double>{{"rho0", 1.0}, {"k0", 1.0}, {"m0", 1.0}});
}
