#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relaxrk/euler/semidiscretization.hpp"
#include "relaxrk/ode_system.hpp"

namespace relaxrk {

using ParamMap = std::map<std::string, double>;

enum class ProblemKind { euler, ode };

/// Recommended run settings of a problem.
struct ProblemDefaults {
  int p = 3;
  std::size_t N = 16;
  double dt = 1e-3;  // at N elements per direction
  double t_end = 1.0;
  std::string tableau = "RK44";
  euler::InterfaceMode interface = euler::InterfaceMode::es_rusanov;
};

struct ProblemSpec {
  std::string name;
  ProblemKind kind = ProblemKind::euler;
  ParamMap params;  // effective parameter values after overrides
  ProblemDefaults defaults;

  // Euler problems
  int dim = 1;
  euler::GasModel gas;
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  euler::Boundary bc = euler::Boundary::periodic;
  euler::PrimitiveFunction initial;   // primitive state at t = 0 (the time argument is ignored)
  euler::PrimitiveFunction exterior;  // Dirichlet exterior state, empty for periodic problems
  std::optional<euler::PrimitiveFunction> exact;
  bool discontinuous = false;  // initial data jumps on element faces
  double u_ref = 1.0;          // speed in the Courant number u_ref dt / dx

  // ODE problems
  std::vector<double> ode_initial;
  std::function<std::vector<double>(double t)> ode_exact;

  bool has_exact() const noexcept { return kind == ProblemKind::euler ? exact.has_value() : bool(ode_exact); }
};

/// Builds a named problem. Unknown names and parameters, and parameter values
/// that violate the problem's invariants, raise ConfigError.
ProblemSpec make_problem(const std::string& name, const ParamMap& overrides = {});
std::vector<std::string> problem_names();

/// Exact primitive state (rho, u_1[, u_2], P) at (x, t).
std::vector<double> evaluate_exact(const ProblemSpec& spec, std::array<double, 2> x, double t);

euler::Mesh make_mesh(const ProblemSpec& spec, std::size_t N);

std::unique_ptr<euler::EulerSystemBase> make_euler_system(const ProblemSpec& spec, int p, std::size_t N,
                                                          euler::InterfaceMode mode);

/// ODE system of a toy problem.
std::unique_ptr<OdeSystem> make_ode_system(const ProblemSpec& spec);

/// Nodal initial state of an Euler problem on `sys`.
std::vector<double> initial_state(const ProblemSpec& spec, const euler::EulerSystemBase& sys);

}  // namespace relaxrk
