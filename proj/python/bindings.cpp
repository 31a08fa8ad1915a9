#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowloc/cfg.hpp"
#include "flowloc/mcs.hpp"
#include "flowloc/pipeline.hpp"
#include "flowloc/report.hpp"
#include "flowloc/solver.hpp"

namespace py = pybind11;
using namespace flowloc;

namespace {

DomainConfig domain(int64_t lo, int64_t hi) {
  DomainConfig d{lo, hi};
  d.validate();
  return d;
}

std::string localize_json(const std::string& source, const Inputs& inputs, int b_cond, int b_mcs, int k_max,
                          int64_t lo, int64_t hi, bool incremental, const std::string& format) {
  if (format != "json" && format != "text") throw Error("format must be 'json' or 'text'");
  ExplorerConfig cfg;
  cfg.b_cond = b_cond;
  cfg.mcs = McsConfig{b_mcs, k_max};
  cfg.dom = domain(lo, hi);
  cfg.incremental = incremental;
  cfg.validate();
  Program p = load_program(source);
  Report r;
  {
    py::gil_scoped_release release;
    r = localize(p, Counterexample{inputs}, cfg);
  }
  return format == "json" ? render_json(r) : render_text(r);
}

py::dict check(const std::vector<std::string>& formulas, int64_t lo, int64_t hi) {
  Solver s(domain(lo, hi));
  for (const std::string& f : formulas) s.assert_hard(parse_formula(f));
  CheckResult r = s.check();
  py::dict model;
  for (const auto& [name, value] : r.model) model[py::str(name.str())] = value;
  py::dict out;
  out["sat"] = r.sat;
  out["model"] = model;
  return out;
}

py::dict mcs(const std::vector<std::string>& hard, const std::vector<std::string>& soft, int b_mcs, int k_max,
             int64_t lo, int64_t hi) {
  ConstraintSet cs;
  int id = 0;
  for (const std::string& f : soft) {
    Constraint c;
    c.id = c.path_index = ++id;
    c.kind = ConstraintKind::Assignment;
    c.formula = parse_formula(f);
    cs.add(c);
  }
  for (const std::string& f : hard) {
    Constraint c;
    c.id = ++id;
    c.kind = ConstraintKind::Input;
    c.formula = parse_formula(f);
    cs.add(c);
  }
  McsConfig config{b_mcs, k_max};
  config.validate();
  McsResult r = enumerate_mcs(cs, config, domain(lo, hi));
  py::list sets;
  for (const Mcs& m : r.mcs) {
    py::list members;
    for (int member : m.members) members.append(member - 1);  // index into `soft`
    sets.append(members);
  }
  py::dict out;
  out["status"] = std::string(to_string(r.status));
  out["mcs"] = sets;
  out["checks"] = r.checks;
  return out;
}

std::vector<py::tuple> check_program(const std::string& source) {
  std::vector<py::tuple> out;
  for (const Diagnostic& d : typecheck(parse_program(source)))
    out.push_back(py::make_tuple(d.loc.line, d.loc.column, d.message));
  return out;
}

std::string dot(const std::string& source) { return to_dot(load_program(source).cfg); }

int64_t run(const std::string& source, const Inputs& inputs) {
  Function f = parse_program(source);
  return interpret(f, inputs);
}

}  // namespace

PYBIND11_MODULE(_flowloc, m) {
  m.doc() = "Fault localization for small annotated integer programs";

  auto base = py::register_exception<Error>(m, "FlowlocError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<TypecheckError>(m, "TypecheckError", base.ptr());
  py::register_exception<CounterexampleError>(m, "CounterexampleError", base.ptr());
  py::register_exception<NothingToLocalize>(m, "NothingToLocalize", base.ptr());

  const DomainConfig d;
  const ExplorerConfig e;
  m.def("localize", &localize_json, py::arg("source"), py::arg("counterexample"), py::arg("b_cond") = e.b_cond,
        py::arg("b_mcs") = e.mcs.b_mcs, py::arg("k_max") = e.mcs.k_max, py::arg("lo") = d.lo, py::arg("hi") = d.hi,
        py::arg("incremental") = true, py::arg("format") = "json",
        "Runs the localization and returns the report as JSON or text.");
  m.def("check", &check, py::arg("formulas"), py::arg("lo") = d.lo, py::arg("hi") = d.hi,
        "Satisfiability of a conjunction of formulas such as 'x + y = 3'.");
  m.def("enumerate_mcs", &mcs, py::arg("hard"), py::arg("soft"), py::arg("b_mcs") = e.mcs.b_mcs,
        py::arg("k_max") = e.mcs.k_max, py::arg("lo") = d.lo, py::arg("hi") = d.hi,
        "Correction sets of `soft`, as lists of indices, latest first within a size.");
  m.def("typecheck", &check_program, py::arg("source"), "Diagnostics as (line, column, message).");
  m.def("to_dot", &dot, py::arg("source"), "Graphviz text of the single-assignment CFG.");
  m.def("interpret", &run, py::arg("source"), py::arg("inputs"), "Return value on concrete inputs.");
  m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;
  m.attr("UNBOUNDED") = McsConfig::kUnbounded;
}
