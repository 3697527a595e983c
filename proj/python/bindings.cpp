#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "momab/attack.hpp"
#include "momab/bounds.hpp"
#include "momab/config.hpp"
#include "momab/harness.hpp"
#include "momab/oracle.hpp"
#include "momab/pareto.hpp"

namespace py = pybind11;
using namespace momab;

namespace {

std::vector<RewardVector> to_vectors(const std::vector<std::vector<double>>& rows) {
  std::vector<RewardVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r);
  return out;
}

ParetoFront front_of(const std::vector<std::vector<double>>& rows) {
  const auto v = to_vectors(rows);
  return ParetoFront::from_vectors(v);
}

py::dict checkpoint_dict(const Checkpoint& cp) {
  py::dict d;
  d["t"] = cp.t;
  d["regret_general"] = cp.regret_general;
  d["regret_stochastic"] = cp.regret_stochastic ? py::cast(*cp.regret_stochastic) : py::none();
  d["regret_dim"] = cp.regret_dim;
  d["attack_cost_cum"] = cp.attack_cost_cum;
  d["pulls"] = cp.pulls;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-objective bandit regret, policies and attacks";

  m.def("compare", [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::string(to_string(compare(RewardVector(a), RewardVector(b))));
  });
  m.def("pareto_front", [](const std::vector<std::vector<double>>& v) { return pareto_front(to_vectors(v)).indices(); },
        "Indices of the vectors not strictly dominated by any other.");
  m.def("dist", [](const std::vector<double>& a, const std::vector<std::vector<double>>& front) {
    return dist(RewardVector(a), front_of(front));
  }, py::arg("a"), py::arg("front"));
  m.def("minimax_gap", [](const std::vector<double>& a, const std::vector<std::vector<double>>& front) {
    return minimax_gap(RewardVector(a).view(), front_of(front));
  }, py::arg("a"), py::arg("front"));
  m.def("dist_oracle", [](const std::vector<double>& a, const std::vector<std::vector<double>>& front, double step) {
    return dist_oracle(RewardVector(a).view(), front_of(front), step);
  }, py::arg("a"), py::arg("front"), py::arg("grid_step") = 1e-4);
  m.def("beta", &beta, py::arg("n"), py::arg("sigma"), py::arg("arms"), py::arg("delta"));

  py::class_<OracleSummary>(m, "OracleSummary")
      .def_readonly("dist_pairs", &OracleSummary::dist_pairs)
      .def_readonly("dist_max_error", &OracleSummary::dist_max_error)
      .def_readonly("dist_seconds", &OracleSummary::dist_seconds)
      .def_readonly("front_sets", &OracleSummary::front_sets)
      .def_readonly("front_mismatches", &OracleSummary::front_mismatches)
      .def("passed", &OracleSummary::passed, py::arg("tolerance") = 1e-4);
  m.def("run_oracle_suite", &run_oracle_suite, py::arg("seed"), py::arg("pairs") = 1000, py::arg("sets") = 1000,
        py::arg("grid_step") = 1e-4, py::call_guard<py::gil_scoped_release>());

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("scenario", &ExperimentConfig::scenario)
      .def_readwrite("horizon", &ExperimentConfig::horizon)
      .def_readwrite("replications", &ExperimentConfig::replications)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("checkpoints", &ExperimentConfig::checkpoints)
      .def("describe", [](const ExperimentConfig& c) { return describe(c); });
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("base_dir") = std::filesystem::path{});
  m.def("load_config", &load_config, py::arg("path"));
  m.def("validate", py::overload_cast<const ExperimentConfig&>(&validate));

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("run_id", &RunRecord::run_id)
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("action_digest", &RunRecord::action_digest)
      .def_property_readonly("checkpoints", [](const RunRecord& r) {
        py::list out;
        for (const auto& cp : r.checkpoints) out.append(checkpoint_dict(cp));
        return out;
      })
      .def_property_readonly("final", [](const RunRecord& r) { return checkpoint_dict(r.final()); })
      .def_property_readonly("total_attack_cost", [](const RunRecord& r) -> py::object {
        if (!r.attack) return py::none();
        return py::cast(r.attack->total_cost);
      });
  m.def("run_experiment", [](const ExperimentConfig& c, std::size_t workers) { return run_experiment(c, workers); },
        py::arg("config"), py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("csv_text", &csv_text, py::arg("records"));
  m.def("write_csv", &write_csv, py::arg("records"), py::arg("path"));

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("passed", &CriterionResult::pass)
      .def_readonly("measured", &CriterionResult::measured)
      .def_readonly("threshold", &CriterionResult::threshold)
      .def_readonly("detail", &CriterionResult::detail)
      .def("__repr__", [](const CriterionResult& r) {
        return std::string(r.pass ? "PASS " : "FAIL ") + r.name;
      });
  m.def("check_bounds", [](const std::vector<RunRecord>& records, const ExperimentConfig& c) {
    return check_bounds(records, c).results;
  }, py::arg("records"), py::arg("config"));
}
