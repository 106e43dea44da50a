#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "relaxrk/cli/csv.hpp"
#include "relaxrk/cli/run_config.hpp"
#include "relaxrk/euler/semidiscretization.hpp"
#include "relaxrk/integrator.hpp"

namespace relaxrk::cli {

struct ErrorNorms {
  double L1 = 0.0;
  double L2 = 0.0;
  double Linf = 0.0;
};

/// Quadrature norms of the error in primitive variable `var` (0 = density),
/// normalized by the total quadrature volume.
ErrorNorms error_norms(const euler::EulerSystemBase& sys, std::span<const double> u, const ProblemSpec& spec,
                       double t, std::size_t var = 0);

/// log(e_prev / e) / log(N / N_prev); undefined when either error is zero.
std::optional<double> convergence_rate(double e_prev, double e, std::size_t N_prev, std::size_t N);

/// Quantiles (min, q25, median, q75, max) by linear interpolation.
std::array<double, 5> quantiles(std::vector<double> values);

struct HistoryRow {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double gamma = 1.0;
  std::optional<double> gamma_global_equivalent;
  std::optional<double> min_gamma_local;
  std::optional<std::size_t> argmin_k;
  std::optional<std::array<double, 5>> gamma_local_quantiles;
  double eta_total = 0.0;
  std::vector<double> invariants;
  bool inequality_verified = true;
  double max_scaled_excess = 0.0;
};

/// A finished trajectory together with its system.
struct RunResult {
  ResolvedRun run;
  std::unique_ptr<euler::EulerSystemBase> euler;  // set for Euler problems
  std::unique_ptr<OdeSystem> ode;                 // set for ODE problems
  std::vector<double> u0;
  TrajectorySummary summary;
  std::vector<HistoryRow> history;
  std::vector<double> final_gamma_local;  // last accepted step, local mode only
  std::vector<double> final_eta_local;

  const OdeSystem& system() const { return euler ? static_cast<const OdeSystem&>(*euler) : *ode; }
};

/// Integrates a resolved run; numerical failures are rethrown as
/// NumericalError annotated with the step index and time.
RunResult execute(const ResolvedRun& run, std::span<const StepObserver> extra_observers = {});

CsvTable solution_table(const RunResult& result);
CsvTable history_table(const RunResult& result);
CsvTable elements_table(const RunResult& result);
CsvTable gamma_history_table(const RunResult& result);
CsvTable gamma_profile_table(const RunResult& result);

struct ConvergenceRow {
  std::size_t N = 0;
  double dt = 0.0;
  std::vector<ErrorNorms> errors;  // one entry per reported variable
  std::vector<std::array<std::optional<double>, 3>> rates;
};

std::vector<ConvergenceRow> convergence_study(const ResolvedRun& base, const std::vector<std::size_t>& N_list);
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows, const ProblemSpec& spec, bool all_variables);

/// Subcommands. Each writes its CSV files into cfg.output_dir and returns 0;
/// errors propagate as exceptions.
int cmd_run(const RunConfig& cfg, std::ostream& log);
int cmd_convergence(const RunConfig& cfg, std::ostream& out);
int cmd_gamma_history(const RunConfig& cfg, std::ostream& log);

}  // namespace relaxrk::cli
