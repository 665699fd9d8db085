#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "mel/errors.hpp"
#include "mel/ilp.hpp"
#include "mel/report.hpp"
#include "mel/text_format.hpp"

namespace py = pybind11;

namespace {

mel::EvalDomain parse_domain(const std::string& name) {
  if (name == "real") return mel::EvalDomain::Real;
  if (name == "integer") return mel::EvalDomain::Integer;
  throw py::value_error("domain must be 'real' or 'integer', got '" + name + "'");
}

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string solve(const std::string& kb_text, const std::string& domain, bool explain,
                  const std::map<std::size_t, bool>& forced) {
  mel::MapOptions options;
  options.domain = parse_domain(domain);
  options.forced = forced;
  mel::Reasoner reasoner(mel::parse_kb(kb_text), options.domain);
  return mel::to_json(mel::solve_report(reasoner, options, explain)).dump();
}

std::string classify(const std::string& kb_text, const std::string& domain) {
  mel::Reasoner reasoner(mel::parse_kb(kb_text), parse_domain(domain));
  return mel::to_json(mel::classify_report(reasoner)).dump();
}

std::string oracle(const std::string& kb_text, std::size_t max_worlds, const std::string& domain) {
  mel::Reasoner reasoner(mel::parse_kb(kb_text), parse_domain(domain));
  return mel::to_json(mel::oracle_report(reasoner, max_worlds)).dump();
}

std::string probability(const std::string& kb_text, const std::string& query_text, std::size_t max_worlds,
                        const std::string& domain) {
  mel::Reasoner reasoner(mel::parse_kb(kb_text), parse_domain(domain));
  auto query = mel::parse_query(query_text);
  return mel::to_json(mel::probability_report(reasoner, query, max_worlds)).dump();
}

std::string dump_ilp(const std::string& kb_text, const std::string& domain) {
  mel::Reasoner reasoner(mel::parse_kb(kb_text), parse_domain(domain));
  return mel::to_lp_text(mel::first_iteration_program(reasoner));
}

py::tuple normalize(const std::string& kb_text) {
  mel::Normalization n = mel::parse_and_normalize(kb_text);
  return py::make_tuple(mel::serialize_kb(n.kb), n.fresh_names);
}

std::vector<std::string> validate(const std::string& kb_text) {
  std::vector<std::string> out;
  for (const auto& d : mel::validate(mel::parse_kb(kb_text))) out.push_back(d.reason);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Probabilistic EL++ reasoner core";

  static py::exception<mel::Error> error(m, "MelError");
  static py::exception<mel::ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<mel::ValidationError> validation_error(m, "ValidationError", error.ptr());
  static py::exception<mel::IncoherentError> incoherent_error(m, "IncoherentError", error.ptr());
  static py::exception<mel::CapExceededError> cap_error(m, "CapExceededError", error.ptr());

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const mel::IncoherentError& e) {
      py::object exc = py::handle(incoherent_error.ptr())(e.what());
      exc.attr("conflict") = py::cast(e.conflict());
      py::set_error(incoherent_error, exc);
    } catch (const mel::ParseError& e) {
      py::object exc = py::handle(parse_error.ptr())(e.what());
      exc.attr("line") = e.line();
      exc.attr("column") = e.column();
      py::set_error(parse_error, exc);
    } catch (const mel::ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const mel::CapExceededError& e) {
      py::set_error(cap_error, e.what());
    } catch (const mel::Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.attr("DEFAULT_MAX_WORLDS") = mel::kDefaultMaxWorlds;

  m.def("solve", &solve, py::arg("kb_text"), py::arg("domain") = "real", py::arg("explain") = false,
        py::arg("forced") = std::map<std::size_t, bool>{}, "MAP inference; returns the report as JSON text.");
  m.def("classify", &classify, py::arg("kb_text"), py::arg("domain") = "real",
        "Saturates the deterministic part; returns JSON text.");
  m.def("oracle", &oracle, py::arg("kb_text"), py::arg("max_worlds") = mel::kDefaultMaxWorlds,
        py::arg("domain") = "real", "Enumerates every coherent world; returns JSON text.");
  m.def("probability", &probability, py::arg("kb_text"), py::arg("query_text"),
        py::arg("max_worlds") = mel::kDefaultMaxWorlds, py::arg("domain") = "real",
        "Exact probability of a conjunction of normal statements; returns JSON text.");
  m.def("dump_ilp", &dump_ilp, py::arg("kb_text"), py::arg("domain") = "real");
  m.def("normalize", &normalize, py::arg("kb_text"),
        "Returns (normalized knowledge base text, {fresh name: meaning}).");
  m.def("validate", &validate, py::arg("kb_text"));
}
