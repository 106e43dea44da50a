#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relaxrk/ode_system.hpp"
#include "relaxrk/relaxation.hpp"
#include "relaxrk/rk_step.hpp"
#include "relaxrk/tableau.hpp"

namespace relaxrk {

enum class StepMode { fixed, adaptive };

struct AdvanceOptions {
  double t0 = 0.0;
  double t_end = 1.0;
  double dt0 = 1e-2;
  StepMode mode = StepMode::fixed;
  std::optional<double> tol;  // required in adaptive mode
  std::size_t max_steps = 10'000'000;
  std::size_t max_consecutive_rejections = 64;
};

/// Data handed to observers after every accepted step. All views are
/// read-only and valid only for the duration of the callback.
struct StepObservation {
  std::size_t step = 0;  // 1-based index of the accepted step
  double t = 0.0;        // relaxed time t_gamma
  double dt = 0.0;       // RK step size before relaxation
  double gamma = 1.0;
  std::span<const double> gamma_local;
  std::span<const double> eta;         // eta_k at the accepted state
  std::span<const double> invariants;  // linear invariants at the accepted state
  std::span<const double> state;
  const RelaxationReport* report = nullptr;  // null when relaxation is off
};

using StepObserver = std::function<void(const StepObservation&)>;

struct TrajectorySummary {
  double t_final = 0.0;
  std::vector<double> u_final;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  double min_gamma = 1.0;
  double max_gamma = 1.0;
  bool all_inequalities_verified = true;
  std::vector<double> eta_initial;
  std::vector<double> eta_final;
  std::vector<double> invariants_initial;
  std::vector<double> invariants_final;
};

/// Integrates from t0 to t_end. Each accepted step advances time by
/// gamma * dt. A step ending within 1% of t_end is stretched to reach it, and a
/// relaxed final step that falls short is recomputed with a rescaled dt, so the
/// final time matches t_end to 1e-12 (t_end - t0). Rejected adaptive steps are
/// retried without relaxation.
TrajectorySummary advance(const OdeSystem& sys, const ButcherTableau& tab, const RelaxationConfig& relax,
                          std::span<const double> u0, const AdvanceOptions& opts,
                          std::span<const StepObserver> observers = {});

}  // namespace relaxrk
