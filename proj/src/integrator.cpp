#include "relaxrk/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaxrk/errors.hpp"

namespace relaxrk {

namespace {

void require_finite(const OdeSystem& sys, std::span<const double> v, double t, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      const std::size_t k = sys.partition_of(i);
      std::ostringstream msg;
      msg << "non-finite " << what << " at t = " << t << " in partition " << k << " (entry " << i << ")";
      throw BlowupError(msg.str(), t, k);
    }
  }
}

}  // namespace

StepResult rk_step(const OdeSystem& sys, const ButcherTableau& tab, double t, std::span<const double> u,
                   double dt, bool entropy_estimate) {
  if (!(dt > 0.0)) throw ConfigError("rk_step requires dt > 0");
  const std::size_t n = sys.dim();
  const std::size_t K = sys.num_partitions();
  const int s = tab.stages();

  StepResult out;
  out.t_old = t;
  out.t_new = t + dt;
  out.dt = dt;

  std::vector<std::vector<double>> k(s, std::vector<double>(n));
  std::vector<double> y(n);
  std::vector<double> rate(K);
  if (entropy_estimate) {
    out.eta_old.assign(K, 0.0);
    sys.entropy(u, out.eta_old);
  }
  std::vector<double> weighted_rate(K, 0.0);

  for (int i = 0; i < s; ++i) {
    std::copy(u.begin(), u.end(), y.begin());
    for (int j = 0; j < i; ++j) {
      const double a = tab.a(i, j);
      if (a == 0.0) continue;
      const double da = dt * a;
      for (std::size_t m = 0; m < n; ++m) y[m] += da * k[j][m];
    }
    const double ti = t + tab.c()[i] * dt;
    require_finite(sys, y, ti, "stage value");
    sys.rhs(ti, y, k[i]);
    ++out.stage_rhs_evals;
    require_finite(sys, k[i], ti, "right-hand side");
    if (entropy_estimate && tab.b()[i] != 0.0) {
      sys.entropy_rate(ti, y, k[i], rate);
      for (std::size_t q = 0; q < K; ++q) weighted_rate[q] += tab.b()[i] * rate[q];
    }
  }

  // The increment is kept separately: recovering it as u_new - u loses the
  // low bits that the relaxation residual depends on.
  out.increment.assign(n, 0.0);
  for (int i = 0; i < s; ++i) {
    const double db = dt * tab.b()[i];
    if (db == 0.0) continue;
    for (std::size_t m = 0; m < n; ++m) out.increment[m] += db * k[i][m];
  }
  out.u_new.resize(n);
  for (std::size_t m = 0; m < n; ++m) out.u_new[m] = u[m] + out.increment[m];
  require_finite(sys, out.u_new, out.t_new, "updated state");

  if (entropy_estimate) {
    out.estimate.resize(K);
    out.entropy_change.resize(K);
    for (std::size_t q = 0; q < K; ++q) {
      out.entropy_change[q] = dt * weighted_rate[q];
      out.estimate[q] = out.eta_old[q] + out.entropy_change[q];
    }
  }

  if (tab.has_embedded()) {
    std::vector<double> u_hat(u.begin(), u.end());
    const auto& bh = *tab.b_embedded();
    for (int i = 0; i < s; ++i) {
      const double db = dt * bh[i];
      if (db == 0.0) continue;
      for (std::size_t m = 0; m < n; ++m) u_hat[m] += db * k[i][m];
    }
    out.err_embedded = embedded_error_norm(u, out.u_new, u_hat);
  }
  return out;
}

double embedded_error_norm(std::span<const double> u, std::span<const double> u_new,
                           std::span<const double> u_embedded) {
  if (u.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double scale = 1.0 + std::max(std::abs(u[i]), std::abs(u_new[i]));
    const double e = (u_new[i] - u_embedded[i]) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(u.size()));
}

double adapt_dt(double err, double tol, int p_embedded, double dt) {
  constexpr double safety = 0.9;
  constexpr double growth_min = 0.2;
  constexpr double growth_max = 5.0;
  if (err <= 0.0) return dt * growth_max;
  const double factor = safety * std::pow(tol / err, 1.0 / (p_embedded + 1));
  return dt * std::clamp(factor, growth_min, growth_max);
}

TrajectorySummary advance(const OdeSystem& sys, const ButcherTableau& tab, const RelaxationConfig& relax,
                          std::span<const double> u0, const AdvanceOptions& opts,
                          std::span<const StepObserver> observers) {
  if (!(opts.t_end > opts.t0)) throw ConfigError("advance requires t_end > t0");
  if (!(opts.dt0 > 0.0)) throw ConfigError("advance requires dt0 > 0");
  if (u0.size() != sys.dim()) throw ConfigError("initial state has the wrong dimension");
  const bool adaptive = opts.mode == StepMode::adaptive;
  if (adaptive) {
    if (!tab.has_embedded()) throw ConfigError("adaptive stepping needs a tableau with embedded weights");
    if (!opts.tol || !(*opts.tol > 0.0)) throw ConfigError("adaptive stepping needs tol > 0");
  }
  relax.validate();
  const bool relaxing = relax.mode != RelaxationMode::none;
  if (relaxing && !tab.nonnegative_weights()) {
    throw ConfigError("relaxation needs non-negative weights; tableau " + tab.name() + " has negative ones");
  }

  const double span = opts.t_end - opts.t0;
  const double t_eps = 1e-12 * span;
  constexpr double final_slack = 1e-2;
  constexpr int final_retries = 4;

  TrajectorySummary summary;
  summary.eta_initial = sys.entropies(u0);
  summary.invariants_initial = sys.linear_invariants(u0);

  std::vector<double> u(u0.begin(), u0.end());
  double t = opts.t0;
  double dt = opts.dt0;
  std::size_t consecutive_rejections = 0;
  std::vector<double> eta;
  std::vector<double> invariants;
  const std::vector<double> unit_gamma{1.0};

  while (opts.t_end - t > t_eps) {
    if (summary.accepted_steps >= opts.max_steps) {
      throw StepLimitError("step limit of " + std::to_string(opts.max_steps) + " reached at t = " +
                           std::to_string(t));
    }
    double h = dt;
    // Within 1% of the end the step is stretched to reach t_end; relaxation
    // may then fall short, which the retries below correct.
    const bool final_step = t + h * (1.0 + final_slack) >= opts.t_end - t_eps;
    if (final_step) h = opts.t_end - t;

    StepResult step = rk_step(sys, tab, t, u, h, relaxing);
    summary.rhs_evaluations += static_cast<std::size_t>(step.stage_rhs_evals);

    if (adaptive && *step.err_embedded > *opts.tol) {
      ++summary.rejected_steps;
      if (++consecutive_rejections > opts.max_consecutive_rejections) {
        throw StepLimitError("too many consecutive step rejections at t = " + std::to_string(t));
      }
      dt = adapt_dt(*step.err_embedded, *opts.tol, *tab.order_embedded(), h);
      continue;
    }
    consecutive_rejections = 0;

    double gamma = 1.0;
    std::optional<RelaxedStep> relaxed;
    if (relaxing) {
      relaxed = local_relax_step(sys, u, step, relax);
      // A relaxed final step lands at t + gamma h. Rescale h so that it hits
      // t_end; gamma barely depends on h, so a few retries suffice. Any retry
      // failing (tolerance, root solve) keeps the best attempt so far.
      for (int retry = 0; final_step && retry < final_retries && opts.t_end - relaxed->t > t_eps; ++retry) {
        const double h_try = step.dt * (opts.t_end - t) / (relaxed->t - t);
        try {
          StepResult s2 = rk_step(sys, tab, t, u, h_try, relaxing);
          summary.rhs_evaluations += static_cast<std::size_t>(s2.stage_rhs_evals);
          if (adaptive && *s2.err_embedded > *opts.tol) break;
          RelaxedStep r2 = local_relax_step(sys, u, s2, relax);
          if (std::abs(opts.t_end - r2.t) >= std::abs(opts.t_end - relaxed->t)) break;
          step = std::move(s2);
          relaxed = std::move(r2);
          h = h_try;
        } catch (const NumericalError&) {
          break;
        }
      }
      gamma = relaxed->report.gamma;
      u = std::move(relaxed->u);
      // Overshoot (or a shortfall below t_eps) pins the time to t_end; the
      // state keeps its relaxed value.
      t = final_step && opts.t_end - relaxed->t <= t_eps ? opts.t_end : relaxed->t;
      summary.all_inequalities_verified = summary.all_inequalities_verified && relaxed->report.inequality_verified;
    } else {
      u = std::move(step.u_new);
      t = step.t_new;
    }
    ++summary.accepted_steps;
    summary.min_gamma = std::min(summary.min_gamma, gamma);
    summary.max_gamma = std::max(summary.max_gamma, gamma);
    dt = adaptive ? adapt_dt(*step.err_embedded, *opts.tol, *tab.order_embedded(), h) : opts.dt0;

    if (!observers.empty()) {
      eta = sys.entropies(u);
      invariants = sys.linear_invariants(u);
      StepObservation obs;
      obs.step = summary.accepted_steps;
      obs.t = t;
      obs.dt = h;
      obs.gamma = gamma;
      obs.gamma_local = relaxed ? std::span<const double>(relaxed->report.gamma_local)
                                : std::span<const double>(unit_gamma);
      obs.eta = eta;
      obs.invariants = invariants;
      obs.state = u;
      obs.report = relaxed ? &relaxed->report : nullptr;
      for (const auto& observer : observers) observer(obs);
    }
  }

  summary.t_final = t;
  summary.eta_final = sys.entropies(u);
  summary.invariants_final = sys.linear_invariants(u);
  summary.u_final = std::move(u);
  return summary;
}

}  // namespace relaxrk
