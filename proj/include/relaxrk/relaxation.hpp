#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relaxrk/ode_system.hpp"
#include "relaxrk/rk_step.hpp"

namespace relaxrk {

enum class RelaxationMode { none, global, local };
enum class RootSolver { brent, bisection };

RelaxationMode parse_relaxation_mode(const std::string& name);
std::string to_string(RelaxationMode mode);
RootSolver parse_root_solver(const std::string& name);
std::string to_string(RootSolver solver);

/// Tolerances for the relaxation root solves. `residual_tol` and
/// `curvature_tol` are multiplied by the entropy scale max(1, |eta_old|).
struct RelaxationConfig {
  RelaxationMode mode = RelaxationMode::local;
  double root_tol = 1e-13;
  double residual_tol = 1e-13;
  double bracket_halfwidth = 0.1;
  int max_expansions = 8;
  double gamma_floor = 0.1;
  double curvature_tol = 1e-12;
  RootSolver solver = RootSolver::brent;
  // In local mode, additionally solve the global equation for diagnostics.
  bool diagnose_global = false;

  void validate() const;
};

struct RelaxationReport {
  double gamma = 1.0;
  std::vector<double> gamma_local;
  std::vector<double> residual_at_root;
  std::vector<int> iterations;
  std::vector<bool> fallback;
  bool inequality_verified = true;
  // Data of the verified inequality eta_k(u_gamma) <= eta_old + gamma (e - eta_old).
  std::vector<double> eta_old;
  std::vector<double> estimate;
  std::vector<double> eta_relaxed;
  double max_scaled_excess = 0.0;  // max_k (lhs - rhs) / scale_k
  std::optional<double> gamma_global_equivalent;
};

struct GammaSolve {
  double gamma = 1.0;
  int iterations = 0;
  bool fallback = false;
  double residual = 0.0;
};

inline double entropy_scale(double eta_old) { return std::max(1.0, std::abs(eta_old)); }

/// r(gamma) = eta_k(u_old + gamma d) - [eta_old_k + gamma (e_k - eta_old_k)],
/// with the first term taken relative to eta_k(u_old) = eta_old_k.
/// Throws NumericalError when the entropy is not finite.
double gamma_residual(const OdeSystem& sys, std::size_t k, std::span<const double> u_old,
                      std::span<const double> d, double eta_old_k, double e_k, double gamma);

/// Root of r near 1 for partition k (bracket expansion + Brent/bisection), or
/// the gamma = 1 fallback when both first-order changes are below curvature_tol.
GammaSolve solve_gamma(const OdeSystem& sys, std::size_t k, std::span<const double> u_old,
                       std::span<const double> d, double eta_old_k, double e_k, const RelaxationConfig& cfg);

/// Same as solve_gamma for the total entropy sum_k eta_k.
GammaSolve solve_gamma_global(const OdeSystem& sys, std::span<const double> u_old, std::span<const double> d,
                              double eta_old, double e, const RelaxationConfig& cfg);

/// (u_old + gamma (u_new - u_old), t_old + gamma (t_new - t_old)).
std::pair<std::vector<double>, double> relax_update(std::span<const double> u_old,
                                                    std::span<const double> u_new, double t_old, double t_new,
                                                    double gamma);

struct RelaxedStep {
  std::vector<double> u;
  double t = 0.0;
  RelaxationReport report;
};

/// Relaxes an RK step. Local mode uses gamma = min_k gamma_k over all
/// partitions and verifies every local inequality a posteriori (throws
/// EntropyViolationError on failure); global mode solves once for the total
/// entropy and reports a single partition.
RelaxedStep local_relax_step(const OdeSystem& sys, std::span<const double> u_old, const StepResult& step,
                             const RelaxationConfig& cfg);

}  // namespace relaxrk
