#pragma once

#include <optional>
#include <span>
#include <vector>

#include "relaxrk/ode_system.hpp"
#include "relaxrk/tableau.hpp"

namespace relaxrk {

/// One explicit RK step from (t_old, u_old) with step size dt.
struct StepResult {
  std::vector<double> u_new;
  std::vector<double> increment;  // dt sum_i b_i k_i, so u_new = u_old + increment
  double t_old = 0.0;
  double t_new = 0.0;  // t_old + dt
  double dt = 0.0;
  std::vector<double> eta_old;   // eta_k(u_old)
  std::vector<double> estimate;  // eta_k(u_old) + dt sum_i b_i (eta_k' f)(y^i)
  std::vector<double> entropy_change;  // dt sum_i b_i (eta_k' f)(y^i), without the rounding of estimate - eta_old
  std::optional<double> err_embedded;
  int stage_rhs_evals = 0;
};

/// Advances u by one step of `tab`. Each stage right-hand side is evaluated
/// once and reused for the update, the entropy estimate and the embedded
/// error. Throws BlowupError on non-finite stage data.
StepResult rk_step(const OdeSystem& sys, const ButcherTableau& tab, double t, std::span<const double> u,
                   double dt, bool entropy_estimate = true);

/// Weighted RMS of (u_new - u_embedded) scaled by 1 + max(|u|, |u_new|).
/// Comparing it with `tol` is the absolute+relative test with atol = rtol = tol.
double embedded_error_norm(std::span<const double> u, std::span<const double> u_new,
                           std::span<const double> u_embedded);

/// I-controller: dt * clamp(0.9 (tol/err)^(1/(p_embedded+1)), 0.2, 5).
double adapt_dt(double err, double tol, int p_embedded, double dt);

}  // namespace relaxrk
