#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxrk/euler/physics.hpp"
#include "relaxrk/integrator.hpp"
#include "relaxrk/problems.hpp"
#include "relaxrk/relaxation.hpp"
#include "relaxrk/tableau.hpp"

namespace relaxrk::cli {

/// User-facing run description; unset fields take the problem defaults.
/// At most one of dt, courant and tol may be given (tol selects adaptive
/// stepping, courant sets dt = courant * dx / u_ref).
struct RunConfig {
  std::string problem = "density_wave";
  ParamMap params;
  std::optional<int> p;
  std::optional<std::size_t> N;
  std::optional<std::string> tableau;
  RelaxationConfig relaxation;
  std::optional<double> dt;
  std::optional<double> courant;
  std::optional<double> tol;
  std::optional<double> t_end;
  std::optional<std::string> interface;
  std::string output_dir = ".";
  std::optional<int> threads;
  std::size_t max_steps = 10'000'000;
  std::vector<std::size_t> N_list;
  bool all_variables = false;
};

RunConfig run_config_from_json(const nlohmann::json& doc);
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Applies one "dotted.key=value" override; the value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads an optional JSON file and applies the overrides in order.
RunConfig load_run_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides);

/// A RunConfig with every default resolved against its problem.
struct ResolvedRun {
  ProblemSpec spec;
  int p = 0;
  std::size_t N = 0;
  std::string tableau;
  RelaxationConfig relaxation;
  StepMode step_mode = StepMode::fixed;
  double dt = 0.0;  // fixed step, or initial step in adaptive mode
  std::optional<double> tol;
  double t_end = 0.0;
  euler::InterfaceMode interface = euler::InterfaceMode::es_rusanov;
  std::size_t max_steps = 0;
  bool all_variables = false;

  /// u_ref dt / dx for Euler problems.
  double courant() const;
  /// Same run on N elements per direction at constant Courant number.
  ResolvedRun refined(std::size_t N_new) const;
};

ResolvedRun resolve(const RunConfig& cfg);

}  // namespace relaxrk::cli
