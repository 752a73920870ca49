#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "g2lab/cobordism_flow.hpp"
#include "g2lab/homogeneous.hpp"
#include "g2lab/stable_forms.hpp"

namespace g2lab {

/// Schema violation; the message carries the offending field path.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct Scenario {
  std::string command;  // flow | lift | theorem3 | check-form | decompose | reduced-check
  std::string name = "scenario";

  // Flow-family inputs.
  std::optional<ModelAlgebra> model;
  Eigen::Matrix3d E0 = Eigen::Matrix3d::Identity();
  double f0 = 1.0;
  std::vector<Eigen::Matrix3d> k_poly;  // K(t) = sum_i k_poly[i] * t^i
  double t1 = 0.0;
  double t2 = 1.0;
  int steps = 100;
  double kappa_min = 1e-3;

  // Form inputs (check-form / decompose).
  std::vector<double> form;      // 20 (dim 6) or 35 (dim 7) coefficients
  std::vector<double> omega_in;  // 15 coefficients, optional
  double volcoef = 1.0;
  bool sampled = false;
  int samples = 64;

  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;  // overrides, module defaults else
  nlohmann::json expect;                     // optional expected-value block
};

/// Parses a scenario JSON document; throws ScenarioError with a field path.
Scenario parse_scenario(const std::string& json_text,
                        const std::string& name = "scenario");

/// Reads and parses a scenario file (name = file stem).
Scenario load_scenario(const std::string& path);

struct RunOptions {
  bool paper_literal = false;  // evaluate the literal scale-velocity reading
};

struct RunResult {
  int exit_code = 0;        // 0 pass, 1 fail, 2 error
  nlohmann::json report;    // report.json payload
  std::string trace_csv;    // empty when the command emits no trace
  std::string lift_csv;     // empty when the command emits no lift
  std::string reduced_csv;  // empty when the command emits no reduced path
};

/// Executes one scenario; never throws (errors become exit code 2 reports).
RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

/// Writes report.json plus whichever CSV artifacts the run produced.
void write_artifacts(const RunResult& result, const std::string& out_dir);

/// Serializes a flow trace with per-record closedness/evolution residuals;
/// header: t,E11..E33,f,K11..K33,detE,trK,r_closed,r_evolution.
std::string trace_to_csv(const FlowTrace& trace, const ModelAlgebra& alg);

const char* verdict_name(Definiteness v);

}  // namespace g2lab
