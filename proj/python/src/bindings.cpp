// Documents cross the boundary as JSON text; the Python package parses them.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roster/bnb.hpp"
#include "roster/extensions.hpp"
#include "roster/generator.hpp"
#include "roster/io.hpp"
#include "roster/milp.hpp"

namespace py = pybind11;
using namespace roster;

namespace {

RosterInstance load(const std::string& instance_json) {
  RosterInstance in = read_instance(instance_json);
  const ValidationReport report = validate_instance(in);
  if (!report.ok()) throw InvalidInputError(report.issues.front());
  return in;
}

// Runs the solver without the GIL; progress callbacks re-acquire it.
ProgressSink python_sink(const std::function<void(const std::string&)>& callback) {
  if (!callback) return {};
  return [callback](const ProgressEvent& ev) {
    py::gil_scoped_acquire gil;
    callback(progress_to_json(ev).dump());
  };
}

std::string generate(int employees, int weeks, int shift_types, std::uint64_t seed, double preference_density) {
  GeneratorConfig cfg;
  cfg.employees = employees;
  cfg.weeks = weeks;
  cfg.shift_types = shift_types;
  cfg.preference_density = preference_density;
  return write_instance(generate_instance(cfg, seed));
}

std::string solve(const std::string& instance_json, const std::string& config_json, const std::string& weights_json,
                  const std::function<void(const std::string&)>& progress) {
  const RosterInstance in = load(instance_json);
  const HybridConfig cfg = config_from_json(parse_json(config_json));
  const ObjectiveWeights w = weights_from_json(parse_json(weights_json));
  const ProgressSink sink = python_sink(progress);
  OptimizationResult r;
  {
    py::gil_scoped_release release;
    r = optimize(in, w, cfg, sink);
  }
  return result_to_json(in, r).dump();
}

std::string reoptimize(const std::string& instance_json, const std::string& roster_json,
                       const std::string& changes_json, const std::string& config_json,
                       const std::string& weights_json) {
  const RosterInstance in = load(instance_json);
  const Roster original = roster_from_json(parse_json(roster_json), in);
  const std::vector<ChangeRequest> changes = changes_from_json(parse_json(changes_json));
  const HybridConfig cfg = config_from_json(parse_json(config_json));
  const ObjectiveWeights w = weights_from_json(parse_json(weights_json));
  EventResult ev;
  {
    py::gil_scoped_release release;
    ev = reoptimize_event(in, original, changes, w, cfg);
  }
  Json out = result_to_json(ev.updated, ev.result);
  out["deviation"] = ev.deviation;
  out["lock_until"] = ev.lock_until;
  out["instance"] = instance_to_json(ev.updated);
  return out.dump();
}

std::string check(const std::string& instance_json, const std::string& roster_json) {
  const RosterInstance in = load(instance_json);
  const Roster x = roster_from_json(parse_json(roster_json), in);
  Json violations = Json::array();
  for (const Violation& v : check_feasibility(in, x).violations) {
    violations.push_back({{"constraint", to_string(v.constraint)},
                          {"employee", v.employee},
                          {"block", v.block},
                          {"shift", v.shift},
                          {"description", v.description}});
  }
  return Json{{"feasible", violations.empty()}, {"violations", violations}}.dump();
}

py::tuple model_size(const std::string& instance_json, const std::string& weights_json) {
  const BuiltModel built = build_milp(load(instance_json), weights_from_json(parse_json(weights_json)));
  return py::make_tuple(built.model.num_cols(), built.model.num_rows(), built.model.nonzeros());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  // Translators are tried newest first, so the base class goes first.
  py::register_exception<RosterError>(m, "RosterError", PyExc_RuntimeError);
  py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);

  m.def("generate_instance", &generate, py::arg("employees") = 12, py::arg("weeks") = 8, py::arg("shift_types") = 3,
        py::arg("seed") = 1, py::arg("preference_density") = 0.2);
  m.def("validate_instance", [](const std::string& text) { return validate_instance(read_instance(text)).issues; });
  m.def("optimize", &solve, py::arg("instance"), py::arg("config") = "{}", py::arg("weights") = "{}",
        py::arg("progress") = nullptr);
  m.def("reoptimize", &reoptimize, py::arg("instance"), py::arg("roster"), py::arg("changes"),
        py::arg("config") = "{}", py::arg("weights") = "{}");
  m.def("check", &check, py::arg("instance"), py::arg("roster"));
  m.def("roster_to_csv", [](const std::string& instance, const std::string& roster) {
    const RosterInstance in = load(instance);
    return write_roster_csv(in, roster_from_json(parse_json(roster), in));
  });
  m.def("roster_from_csv", [](const std::string& instance, const std::string& csv) {
    const RosterInstance in = load(instance);
    return roster_to_json(in, read_roster_csv(csv, in)).dump();
  });
  m.def("model_size", &model_size, py::arg("instance"), py::arg("weights") = "{}");
  m.def("compute_gap", &compute_gap, py::arg("incumbent"), py::arg("bound"));
}
